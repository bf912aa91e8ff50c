#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gogbench/report.hpp"
#include "gogbench/words.hpp"

namespace gogbench {

/// A finite-index subgroup H of F_rank, given by the right action of F on the
/// right cosets H\F. Coset 0 is H itself; action(i)[c] is c * x_i.
///
/// The constructor does not validate; use validate_table or make().
class CosetTable {
 public:
  CosetTable() = default;
  CosetTable(int rank, std::vector<std::vector<int>> action);

  /// Validating constructor; throws InvalidInput with the report text.
  static CosetTable make(int rank, std::vector<std::vector<int>> action);
  /// The index-1 table (H = F).
  static CosetTable trivial(int rank);
  /// The unique index-n subgroup of F_1 = Z, cosets labelled by residues.
  static CosetTable cyclic(int n);

  int rank() const { return rank_; }
  int size() const { return size_; }
  const std::vector<std::vector<int>>& action() const { return action_; }

  int act(int coset, Letter l) const;
  int walk(int coset, const Word& w) const;

  friend bool operator==(const CosetTable& a, const CosetTable& b) {
    return a.rank_ == b.rank_ && a.action_ == b.action_;
  }

 private:
  int rank_ = 0;
  int size_ = 0;
  std::vector<std::vector<int>> action_;
  std::vector<std::vector<int>> inverse_;  // empty when some column is not a bijection
};

Report validate_table(const CosetTable& t);

inline int index(const CosetTable& t) { return t.size(); }
/// Nielsen-Schreier: n(r - 1) + 1.
inline int subgroup_rank(const CosetTable& t) { return t.size() * (t.rank() - 1) + 1; }

bool contains(const CosetTable& t, const Word& w);

/// Schreier transversal from a breadth-first spanning tree rooted at coset 0
/// (neighbours explored in letter order x1, x1^-1, x2, x2^-1, ...), with one
/// free basis element per non-tree edge.
class SchreierBasis {
 public:
  explicit SchreierBasis(const CosetTable& t);

  const std::vector<Word>& representatives() const { return reps_; }
  const std::vector<Word>& basis() const { return basis_; }
  int subgroup_rank() const { return static_cast<int>(basis_.size()); }

  /// Rewrites a subgroup element as a word in the Schreier basis (a Word of
  /// rank subgroup_rank()). Throws InvalidInput for non-members.
  Word rewrite(const Word& w) const;
  /// Evaluates a basis word back into the ambient free group.
  Word evaluate(const Word& basis_word) const;
  /// Basis letter carried by the edge c --x_i--> c*x_i (0 for tree edges).
  int edge_label(int coset, int generator) const { return label_[generator - 1][coset]; }

 private:
  CosetTable table_;
  std::vector<Word> reps_;
  std::vector<Word> basis_;
  std::vector<std::vector<int>> label_;
};

/// Elevation of a conjugacy class of F to H.
struct Elevation {
  ConjClass base_class;
  int degree = 0;
  Word representative;            // g w^degree g^-1 in the ambient basis
  std::vector<int> cycle_cosets;  // sorted
  int anchor() const { return cycle_cosets.front(); }
};

/// One elevation per cycle of the permutation induced by the class's
/// canonical word on cosets, in order of least coset.
std::vector<Elevation> elevations(const CosetTable& t, const ConjClass& c);
std::vector<Elevation> elevations(const CosetTable& t, const SchreierBasis& s, const ConjClass& c);

/// The cycle of coset `c` under right multiplication by `w`, starting at c.
std::vector<int> coset_cycle(const CosetTable& t, const Word& w, int c);

/// A free group with a list of distinct non-trivial conjugacy classes.
struct Pair {
  int rank = 1;
  std::vector<ConjClass> peripheral;
};

Report validate_pair(const Pair& p);

/// Peripheral words primitive, with pairwise non-conjugate roots (classes and
/// their inverses both considered).
Report check_malnormal(const Pair& p);
inline bool is_malnormal(const Pair& p) { return check_malnormal(p).ok(); }

struct PulledBackPair {
  Pair pair;                        // over the Schreier basis of the subgroup
  std::vector<int> source_class;    // index into the original peripheral list
  std::vector<int> degree;          // elevation degree over the source class
  std::vector<Word> ambient_words;  // elevation representatives in F
};

class ElevationCollision : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

PulledBackPair pullback(const Pair& p, const CosetTable& t);

/// One transitive action per conjugacy class of subgroups, sizes 1..max_index
/// in increasing order; within a size, in increasing order of the flattened
/// canonical table. The callback returns false to stop early.
/// Returns the number of tables delivered.
long for_each_subgroup(int rank, int max_index, const std::function<bool(const CosetTable&)>& fn);
/// Materialises the stream; throws SearchLimit when more than `cap` tables.
std::vector<CosetTable> enumerate_subgroups(int rank, int max_index, long cap = 1'000'000);

/// All transitive actions of exact size n, one per subgroup (base coset 0).
std::vector<CosetTable> enumerate_based_subgroups(int rank, int n);

/// Canonical relabelling of a transitive table from a chosen base coset.
CosetTable restandardize(const CosetTable& t, int base);

/// Whether the subgroup of `small` is contained in the subgroup of `big`.
bool is_subgroup_of(const CosetTable& small, const CosetTable& big);

class SearchLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PrescribeOptions {
  long search_bound = 200'000;
  /// Accept only K == 1 (the degrees are then exactly the targets).
  bool require_unit_constant = false;
  /// Prefer a result contained in this subgroup (nested-quotient clause).
  std::optional<CosetTable> within;
};

struct PrescribeResult {
  CosetTable table;
  int constant = 1;  // K
  std::string family;
  bool containment_verified = false;  // only meaningful when `within` was given
};

/// Bounded search for a normal finite-index subgroup in which every elevation
/// of class i has degree K * targets[i] (unset targets are unconstrained).
/// Candidates: kernels onto Z/m (m = 1..60), then onto Z/m1 x Z/m2 (m1 | m2),
/// then normal cores of small transitive actions. Results are re-verified with
/// elevations(). Returns nullopt when the bound is exhausted.
std::optional<PrescribeResult> prescribe_degrees(const Pair& p,
                                                 const std::vector<std::optional<int>>& targets,
                                                 const PrescribeOptions& options = {});
std::optional<PrescribeResult> prescribe_degrees(const Pair& p, const std::vector<int>& targets,
                                                 const PrescribeOptions& options = {});

/// Regular action of the finite group generated by the given permutations.
CosetTable regular_table(const std::vector<std::vector<int>>& generator_perms);

}  // namespace gogbench
