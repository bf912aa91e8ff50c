#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "gogbench/gog.hpp"
#include "gogbench/report.hpp"

namespace gogbench {

using Vec = std::vector<mpz_class>;

/// Dense integer matrix with arbitrary-precision entries, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}
  static IntMatrix identity(int n);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows, int cols = -1);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  mpz_class& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  const mpz_class& at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  Vec row(int r) const;
  void swap_rows(int a, int b);
  void swap_cols(int a, int b);
  /// row a += k * row b
  void add_row(int a, int b, const mpz_class& k);
  /// col a += k * col b
  void add_col(int a, int b, const mpz_class& k);
  void negate_row(int r);
  void negate_col(int c);

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;
  std::string str() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<mpz_class> data_;
};

/// Bareiss fraction-free determinant of a square matrix.
mpz_class determinant(const IntMatrix& a);

struct SmithForm {
  IntMatrix U, D, V;
  IntMatrix V_inverse;
  int rank = 0;
  Vec diagonal;  // first `rank` entries of D, positive, each dividing the next
};

/// U * A * V = D. Pivot: smallest nonzero absolute value, ties row-major.
SmithForm snf(const IntMatrix& a);

/// Z^betti + sum Z/d_i. Normalized coordinates list the torsion coordinates
/// (reduced mod d_i) first, then the free ones.
struct AbelianGroup {
  int betti = 0;
  Vec divisors;
  /// Row g: image of original generator g in normalized coordinates.
  IntMatrix basis_map;

  int num_coords() const { return static_cast<int>(divisors.size()) + betti; }
  int num_generators() const { return basis_map.rows(); }
  bool is_trivial() const { return betti == 0 && divisors.empty(); }
  /// Reduces torsion coordinates into [0, d_i).
  Vec normalize(Vec coords) const;
  /// Image of an integer combination of the original generators.
  Vec image(const Vec& generator_vector) const;
  bool is_zero(const Vec& coords) const;
  std::string str() const;
};

bool isomorphic(const AbelianGroup& a, const AbelianGroup& b);

/// Z^cols / rowspace(relations).
AbelianGroup cokernel(const IntMatrix& relations);
/// Invariants only (basis_map left empty); uses sparse unit-pivot
/// elimination before the dense Smith form.
AbelianGroup cokernel_invariants(const IntMatrix& relations);

AbelianGroup h1(const GraphOfGroups& g);
AbelianGroup h1_invariants(const GraphOfGroups& g);

/// Image in h1(g) coordinates of the word w in the group of vertex v.
Vec class_image(const GraphOfGroups& g, const AbelianGroup& h, int v, const Word& w);
/// Image of the generator of a cyclic vertex.
Vec class_image(const GraphOfGroups& g, const AbelianGroup& h, int v);

struct Quotient {
  AbelianGroup group;
  IntMatrix map;  // row i: image of the i-th coordinate of the source group
};

/// A / <xs>; xs are in A's normalized coordinates. The resulting basis_map
/// composes A's basis_map with the quotient map.
Quotient quotient_with_map(const AbelianGroup& a, const std::vector<Vec>& xs);
AbelianGroup quotient_by(const AbelianGroup& a, const std::vector<Vec>& xs);

bool is_prime(long p);
int p_rank(const AbelianGroup& a, long p);
int betti(const AbelianGroup& a);
/// Sum of p-adic valuations of the divisors: |Tor_p| = p^e.
long torsion_exponent(const AbelianGroup& a, long p);
/// dim over F_p of the cokernel, from a rank computation mod p.
int dim_mod_p(const IntMatrix& relations, long p);

/// Order of an element given in normalized coordinates; 0 when infinite.
mpz_class element_order(const AbelianGroup& a, const Vec& coords);

struct LedgerRow {
  int step = 0;
  long prime = 0;  // prime introduced at this step (0 for the base row)
  mpz_class degree;
  std::vector<long> exponent;     // per tracked prime
  std::vector<mpq_class> ratio;   // exponent / degree, per tracked prime
  std::string status;
};

/// Per-step record of cover degree and per-prime torsion exponents.
/// ratio_p = log_p |Tor_p| / degree, kept as an exact rational.
struct TowerLedger {
  std::vector<long> primes;
  std::vector<LedgerRow> rows;
  std::vector<int> introduced;           // step introducing each prime, -1 if none
  std::vector<mpz_class> piece_predegree;  // [G_0 : H_p] for each introduced prime
};

TowerLedger make_ledger(const std::vector<long>& primes);
void ledger_update(TowerLedger& ledger, int step, long prime, const mpz_class& degree,
                   const AbelianGroup& h, const mpz_class& piece_predegree, std::string status);
/// The exact lower bound prod_{j=i+1}^{k} (1 - 2^-j) / (2^(i+1) P_i).
mpq_class ledger_bound(int introduced_step, int step, const mpz_class& piece_predegree);
Report ledger_check(const TowerLedger& ledger);
std::string ledger_csv(const TowerLedger& ledger);

}  // namespace gogbench
