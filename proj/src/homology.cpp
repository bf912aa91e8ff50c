#include "gogbench/homology.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace gogbench {

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows, int cols) {
  if (cols < 0) cols = rows.empty() ? 0 : static_cast<int>(rows.front().size());
  IntMatrix m(static_cast<int>(rows.size()), cols);
  for (int r = 0; r < m.rows(); ++r) {
    if (static_cast<int>(rows[r].size()) != cols) throw InvalidInput("ragged matrix rows");
    for (int c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
  }
  return m;
}

Vec IntMatrix::row(int r) const {
  return Vec(data_.begin() + static_cast<std::ptrdiff_t>(r) * cols_,
             data_.begin() + static_cast<std::ptrdiff_t>(r + 1) * cols_);
}

void IntMatrix::swap_rows(int a, int b) {
  if (a == b) return;
  for (int c = 0; c < cols_; ++c) std::swap(at(a, c), at(b, c));
}

void IntMatrix::swap_cols(int a, int b) {
  if (a == b) return;
  for (int r = 0; r < rows_; ++r) std::swap(at(r, a), at(r, b));
}

void IntMatrix::add_row(int a, int b, const mpz_class& k) {
  for (int c = 0; c < cols_; ++c)
    if (sgn(at(b, c))) at(a, c) += k * at(b, c);
}

void IntMatrix::add_col(int a, int b, const mpz_class& k) {
  for (int r = 0; r < rows_; ++r)
    if (sgn(at(r, b))) at(r, a) += k * at(r, b);
}

void IntMatrix::negate_row(int r) {
  for (int c = 0; c < cols_; ++c) at(r, c) = -at(r, c);
}

void IntMatrix::negate_col(int c) {
  for (int r = 0; r < rows_; ++r) at(r, c) = -at(r, c);
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw InvalidInput("matrix product dimension mismatch");
  IntMatrix m(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      if (!sgn(a.at(i, k))) continue;
      for (int j = 0; j < b.cols_; ++j) m.at(i, j) += a.at(i, k) * b.at(k, j);
    }
  return m;
}

std::string IntMatrix::str() const {
  std::ostringstream os;
  os << '[';
  for (int r = 0; r < rows_; ++r) {
    os << (r ? "," : "") << '[';
    for (int c = 0; c < cols_; ++c) os << (c ? "," : "") << at(r, c).get_str();
    os << ']';
  }
  os << ']';
  return os.str();
}

mpz_class determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("determinant of a non-square matrix");
  const int n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  mpz_class prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (!sgn(m.at(k, k))) {
      int s = k + 1;
      while (s < n && !sgn(m.at(s, k))) ++s;
      if (s == n) return 0;
      m.swap_rows(k, s);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        mpz_class t = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m.at(i, j) = t;
      }
    prev = m.at(k, k);
  }
  return sign * m.at(n - 1, n - 1);
}

namespace {

// Smith form of `d` in place; U, V, Vinv are updated when non-null. Returns the rank.
int smith_in_place(IntMatrix& d, IntMatrix* U, IntMatrix* V, IntMatrix* Vinv) {
  const int rows = d.rows(), cols = d.cols();
  auto row_add = [&](int a, int b, const mpz_class& k) {
    d.add_row(a, b, k);
    if (U) U->add_row(a, b, k);
  };
  auto row_swap = [&](int a, int b) {
    d.swap_rows(a, b);
    if (U) U->swap_rows(a, b);
  };
  auto col_add = [&](int a, int b, const mpz_class& k) {
    d.add_col(a, b, k);
    if (V) {
      V->add_col(a, b, k);
      Vinv->add_row(b, a, -k);
    }
  };
  auto col_swap = [&](int a, int b) {
    d.swap_cols(a, b);
    if (V) {
      V->swap_cols(a, b);
      Vinv->swap_rows(a, b);
    }
  };

  int t = 0;
  for (; t < std::min(rows, cols); ++t) {
    while (true) {
      int pr = -1, pc = -1;
      for (int i = t; i < rows; ++i)
        for (int j = t; j < cols; ++j) {
          const auto& x = d.at(i, j);
          if (!sgn(x)) continue;
          if (pr < 0 || mpz_cmpabs(x.get_mpz_t(), d.at(pr, pc).get_mpz_t()) < 0) {
            pr = i;
            pc = j;
          }
        }
      if (pr < 0) return t;
      row_swap(t, pr);
      col_swap(t, pc);
      bool clean = true;
      for (int i = t + 1; i < rows; ++i) {
        if (!sgn(d.at(i, t))) continue;
        mpz_class q = d.at(i, t) / d.at(t, t);
        if (sgn(q)) row_add(i, t, -q);
        if (sgn(d.at(i, t))) clean = false;
      }
      for (int j = t + 1; j < cols; ++j) {
        if (!sgn(d.at(t, j))) continue;
        mpz_class q = d.at(t, j) / d.at(t, t);
        if (sgn(q)) col_add(j, t, -q);
        if (sgn(d.at(t, j))) clean = false;
      }
      if (!clean) continue;
      int bad = -1;
      for (int i = t + 1; i < rows && bad < 0; ++i)
        for (int j = t + 1; j < cols; ++j)
          if (!mpz_divisible_p(d.at(i, j).get_mpz_t(), d.at(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad >= 0) {
        row_add(t, bad, 1);
        continue;
      }
      if (sgn(d.at(t, t)) < 0) {
        d.negate_row(t);
        if (U) U->negate_row(t);
      }
      break;
    }
  }
  return t;
}

}  // namespace

SmithForm snf(const IntMatrix& a) {
  SmithForm s;
  s.D = a;
  s.U = IntMatrix::identity(a.rows());
  s.V = IntMatrix::identity(a.cols());
  s.V_inverse = IntMatrix::identity(a.cols());
  s.rank = smith_in_place(s.D, &s.U, &s.V, &s.V_inverse);
  for (int i = 0; i < s.rank; ++i) s.diagonal.push_back(s.D.at(i, i));
  return s;
}

Vec AbelianGroup::normalize(Vec coords) const {
  for (std::size_t i = 0; i < divisors.size() && i < coords.size(); ++i) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), coords[i].get_mpz_t(), divisors[i].get_mpz_t());
    coords[i] = r;
  }
  return coords;
}

Vec AbelianGroup::image(const Vec& g) const {
  if (static_cast<int>(g.size()) != basis_map.rows())
    throw InvalidInput("generator vector has the wrong length");
  Vec out(num_coords());
  for (int i = 0; i < basis_map.rows(); ++i) {
    if (!sgn(g[i])) continue;
    for (int j = 0; j < num_coords(); ++j) out[j] += g[i] * basis_map.at(i, j);
  }
  return normalize(std::move(out));
}

bool AbelianGroup::is_zero(const Vec& coords) const {
  auto n = normalize(coords);
  return std::all_of(n.begin(), n.end(), [](const mpz_class& x) { return sgn(x) == 0; });
}

std::string AbelianGroup::str() const {
  std::vector<std::string> parts;
  if (betti == 1) parts.push_back("Z");
  if (betti > 1) parts.push_back("Z^" + std::to_string(betti));
  for (const auto& d : divisors) parts.push_back("Z/" + d.get_str());
  if (parts.empty()) return "0";
  std::string out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out += " ⊕ " + parts[i];
  return out;
}

bool isomorphic(const AbelianGroup& a, const AbelianGroup& b) {
  return a.betti == b.betti && a.divisors == b.divisors;
}

AbelianGroup cokernel(const IntMatrix& relations) {
  const int n = relations.cols();
  SmithForm s = snf(relations);
  AbelianGroup g;
  std::vector<int> torsion_cols;
  for (int j = 0; j < s.rank; ++j)
    if (s.diagonal[j] != 1) {
      torsion_cols.push_back(j);
      g.divisors.push_back(s.diagonal[j]);
    }
  g.betti = n - s.rank;
  g.basis_map = IntMatrix(n, g.num_coords());
  for (int i = 0; i < n; ++i) {
    Vec row(g.num_coords());
    for (std::size_t k = 0; k < torsion_cols.size(); ++k) row[k] = s.V.at(i, torsion_cols[k]);
    for (int k = 0; k < g.betti; ++k) row[torsion_cols.size() + k] = s.V.at(i, s.rank + k);
    row = g.normalize(std::move(row));
    for (int k = 0; k < g.num_coords(); ++k) g.basis_map.at(i, k) = row[k];
  }
  return g;
}

AbelianGroup cokernel_invariants(const IntMatrix& relations) {
  // Sparse elimination of unit pivots: each removes one generator and one relation.
  const int ncols = relations.cols();
  std::vector<std::map<int, mpz_class>> rows;
  for (int r = 0; r < relations.rows(); ++r) {
    std::map<int, mpz_class> row;
    for (int c = 0; c < ncols; ++c)
      if (sgn(relations.at(r, c))) row.emplace(c, relations.at(r, c));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  std::vector<std::set<int>> col_rows(ncols);
  for (int r = 0; r < static_cast<int>(rows.size()); ++r)
    for (const auto& [c, x] : rows[r]) col_rows[c].insert(r);
  std::vector<bool> row_alive(rows.size(), true), col_alive(ncols, true);
  while (true) {
    int pr = -1, pc = -1;
    std::size_t best = 0;
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (!row_alive[r]) continue;
      for (const auto& [c, x] : rows[r])
        if (mpz_cmpabs_ui(x.get_mpz_t(), 1) == 0 && (pr < 0 || col_rows[c].size() < best)) {
          pr = r;
          pc = c;
          best = col_rows[c].size();
        }
    }
    if (pr < 0) break;
    const mpz_class u = rows[pr].at(pc);
    std::vector<int> others(col_rows[pc].begin(), col_rows[pc].end());
    for (int r : others) {
      if (r == pr) continue;
      mpz_class k = -rows[r].at(pc) * u;  // u = +-1 so u^-1 = u
      for (const auto& [c, x] : rows[pr]) {
        auto& slot = rows[r][c];
        slot += k * x;
        if (!sgn(slot)) {
          rows[r].erase(c);
          col_rows[c].erase(r);
        } else {
          col_rows[c].insert(r);
        }
      }
      if (rows[r].empty()) row_alive[r] = false;
    }
    for (const auto& [c, x] : rows[pr]) col_rows[c].erase(pr);
    row_alive[pr] = false;
    col_alive[pc] = false;
  }
  std::vector<int> col_id(ncols, -1);
  int kept_cols = 0;
  for (int c = 0; c < ncols; ++c)
    if (col_alive[c]) col_id[c] = kept_cols++;
  std::vector<int> kept_rows;
  for (int r = 0; r < static_cast<int>(rows.size()); ++r)
    if (row_alive[r]) kept_rows.push_back(r);
  IntMatrix d(static_cast<int>(kept_rows.size()), kept_cols);
  for (int i = 0; i < d.rows(); ++i)
    for (const auto& [c, x] : rows[kept_rows[i]]) d.at(i, col_id[c]) = x;
  int rank = smith_in_place(d, nullptr, nullptr, nullptr);
  AbelianGroup g;
  for (int j = 0; j < rank; ++j)
    if (d.at(j, j) != 1) g.divisors.push_back(d.at(j, j));
  g.betti = kept_cols - rank;
  return g;
}

namespace {

IntMatrix presentation_matrix(const GraphOfGroups& g) {
  auto r = validate(g);
  if (!r.ok()) throw InvalidInput("h1: " + r.str());
  auto pres = abelianized_presentation(g);
  return IntMatrix::from_rows(pres.relations, static_cast<int>(pres.roster.size()));
}

}  // namespace

AbelianGroup h1(const GraphOfGroups& g) { return cokernel(presentation_matrix(g)); }

AbelianGroup h1_invariants(const GraphOfGroups& g) {
  return cokernel_invariants(presentation_matrix(g));
}

Vec class_image(const GraphOfGroups& g, const AbelianGroup& h, int v, const Word& w) {
  if (v < 0 || v >= g.num_vertices()) throw InvalidInput("class at absent vertex");
  if (w.rank() != g.vertex(v).rank) throw InvalidInput("class word rank does not match vertex");
  int offset = 0;
  for (int u = 0; u < v; ++u) offset += g.vertex(u).rank;
  Vec gen(h.num_generators());
  auto ab = abelianize_word(w);
  for (std::size_t i = 0; i < ab.size(); ++i) gen[offset + i] = ab[i];
  return h.image(gen);
}

Vec class_image(const GraphOfGroups& g, const AbelianGroup& h, int v) {
  if (v < 0 || v >= g.num_vertices()) throw InvalidInput("class at absent vertex");
  if (g.vertex(v).kind != VertexKind::Cyclic) throw InvalidInput("vertex is not cyclic");
  return class_image(g, h, v, free_reduce({1}, 1));
}

Quotient quotient_with_map(const AbelianGroup& a, const std::vector<Vec>& xs) {
  const int n = a.num_coords();
  IntMatrix m(static_cast<int>(a.divisors.size() + xs.size()), n);
  for (std::size_t i = 0; i < a.divisors.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = a.divisors[i];
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (static_cast<int>(xs[k].size()) != n) throw InvalidInput("quotient_by: dimension mismatch");
    for (int j = 0; j < n; ++j) m.at(static_cast<int>(a.divisors.size() + k), j) = xs[k][j];
  }
  AbelianGroup q = cokernel(m);
  Quotient out{q, q.basis_map};
  if (a.basis_map.rows() > 0) {
    IntMatrix composed = a.basis_map * q.basis_map;
    for (int i = 0; i < composed.rows(); ++i) {
      Vec row = q.normalize(composed.row(i));
      for (int j = 0; j < composed.cols(); ++j) composed.at(i, j) = row[j];
    }
    out.group.basis_map = std::move(composed);
  } else {
    out.group.basis_map = IntMatrix();
  }
  return out;
}

AbelianGroup quotient_by(const AbelianGroup& a, const std::vector<Vec>& xs) {
  return quotient_with_map(a, xs).group;
}

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

namespace {

void require_prime(long p) {
  if (!is_prime(p)) throw InvalidInput(std::to_string(p) + " is not prime");
}

}  // namespace

int p_rank(const AbelianGroup& a, long p) {
  require_prime(p);
  int r = 0;
  for (const auto& d : a.divisors)
    if (mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(p))) ++r;
  return r;
}

int betti(const AbelianGroup& a) { return a.betti; }

long torsion_exponent(const AbelianGroup& a, long p) {
  require_prime(p);
  long e = 0;
  for (const auto& d : a.divisors) {
    mpz_class x = d;
    while (mpz_divisible_ui_p(x.get_mpz_t(), static_cast<unsigned long>(p))) {
      x /= p;
      ++e;
    }
  }
  return e;
}

int dim_mod_p(const IntMatrix& relations, long p) {
  require_prime(p);
  const int rows = relations.rows(), cols = relations.cols();
  std::vector<std::vector<long>> m(rows, std::vector<long>(cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      mpz_class r;
      mpz_fdiv_r_ui(r.get_mpz_t(), relations.at(i, j).get_mpz_t(), static_cast<unsigned long>(p));
      m[i][j] = r.get_si();
    }
  auto inv = [p](long x) {
    long r = 1, b = x % p, e = p - 2;
    while (e > 0) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  };
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int i = rank; i < rows; ++i)
      if (m[i][c]) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[rank], m[piv]);
    long iv = inv(m[rank][c]);
    for (int i = 0; i < rows; ++i) {
      if (i == rank || !m[i][c]) continue;
      long k = m[i][c] * iv % p;
      for (int j = c; j < cols; ++j) m[i][j] = ((m[i][j] - k * m[rank][j]) % p + p) % p;
    }
    ++rank;
  }
  return cols - rank;
}

mpz_class element_order(const AbelianGroup& a, const Vec& coords) {
  auto c = a.normalize(coords);
  for (int k = 0; k < a.betti; ++k)
    if (sgn(c[a.divisors.size() + k])) return 0;
  mpz_class order = 1;
  for (std::size_t i = 0; i < a.divisors.size(); ++i) {
    mpz_class g = gcd(c[i], a.divisors[i]);
    order = lcm(order, mpz_class(a.divisors[i] / g));
  }
  return order;
}

TowerLedger make_ledger(const std::vector<long>& primes) {
  for (long p : primes) require_prime(p);
  TowerLedger l;
  l.primes = primes;
  l.introduced.assign(primes.size(), -1);
  l.piece_predegree.assign(primes.size(), 0);
  return l;
}

void ledger_update(TowerLedger& ledger, int step, long prime, const mpz_class& degree,
                   const AbelianGroup& h, const mpz_class& piece_predegree, std::string status) {
  LedgerRow row;
  row.step = step;
  row.prime = prime;
  row.degree = degree;
  row.status = std::move(status);
  for (long p : ledger.primes) {
    long e = torsion_exponent(h, p);
    row.exponent.push_back(e);
    mpq_class r(mpz_class(e), degree);
    r.canonicalize();
    row.ratio.push_back(r);
  }
  if (prime != 0) {
    auto it = std::find(ledger.primes.begin(), ledger.primes.end(), prime);
    if (it == ledger.primes.end()) throw InvalidInput("prime " + std::to_string(prime) + " is not tracked");
    auto k = it - ledger.primes.begin();
    if (ledger.introduced[k] < 0) {
      ledger.introduced[k] = step;
      ledger.piece_predegree[k] = piece_predegree;
    }
  }
  ledger.rows.push_back(std::move(row));
}

mpq_class ledger_bound(int introduced_step, int step, const mpz_class& piece_predegree) {
  mpq_class b(1);
  for (int j = introduced_step + 1; j <= step; ++j) {
    mpz_class two_j;
    mpz_ui_pow_ui(two_j.get_mpz_t(), 2, static_cast<unsigned long>(j));
    b *= mpq_class(two_j - 1, two_j);
  }
  mpz_class denom;
  mpz_ui_pow_ui(denom.get_mpz_t(), 2, static_cast<unsigned long>(introduced_step + 1));
  b /= mpq_class(denom * piece_predegree);
  b.canonicalize();
  return b;
}

Report ledger_check(const TowerLedger& ledger) {
  Report r;
  for (std::size_t k = 1; k < ledger.rows.size(); ++k) {
    const auto& prev = ledger.rows[k - 1];
    const auto& row = ledger.rows[k];
    if (row.degree <= prev.degree || !mpz_divisible_p(row.degree.get_mpz_t(), prev.degree.get_mpz_t()))
      r.add("step " + std::to_string(row.step) + ": degree " + row.degree.get_str() +
            " is not a proper multiple of " + prev.degree.get_str());
  }
  for (std::size_t i = 0; i < ledger.primes.size(); ++i) {
    if (ledger.introduced[i] < 0) continue;
    for (const auto& row : ledger.rows) {
      if (row.step < ledger.introduced[i]) continue;
      mpq_class bound = ledger_bound(ledger.introduced[i], row.step, ledger.piece_predegree[i]);
      if (row.ratio[i] < bound)
        r.add("step " + std::to_string(row.step) + ", prime " + std::to_string(ledger.primes[i]) +
              ": ratio " + row.ratio[i].get_str() + " below bound " + bound.get_str());
    }
  }
  return r;
}

std::string ledger_csv(const TowerLedger& ledger) {
  std::ostringstream os;
  os << "step,prime,degree";
  for (long p : ledger.primes) os << ",log_p_torsion_" << p;
  for (long p : ledger.primes) os << ",ratio_" << p;
  os << ",status\n";
  for (const auto& row : ledger.rows) {
    os << row.step << ',';
    if (row.prime) os << row.prime;
    os << ',' << row.degree.get_str();
    for (long e : row.exponent) os << ',' << e;
    for (const auto& q : row.ratio) os << ',' << q.get_str();
    os << ',' << row.status << '\n';
  }
  return os.str();
}

}  // namespace gogbench
