#pragma once

// Brute-force reference computations shared by the unit tests and the
// acceptance binary.

#include <algorithm>
#include <numeric>
#include <set>

#include "gogbench/covers.hpp"
#include "gogbench/homology.hpp"
#include "support.hpp"

namespace gbtest {

inline IntMatrix random_matrix(std::mt19937& rng, int rows, int cols, int bound) {
  std::uniform_int_distribution<int> entry(-bound, bound);
  IntMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m.at(r, c) = entry(rng);
  return m;
}

inline void subsets(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// gcd of all k x k minors.
inline mpz_class minors_gcd(const IntMatrix& a, int k) {
  std::vector<std::vector<int>> rs, cs;
  std::vector<int> cur;
  subsets(a.rows(), k, 0, cur, rs);
  subsets(a.cols(), k, 0, cur, cs);
  mpz_class g = 0;
  for (const auto& r : rs)
    for (const auto& c : cs) {
      IntMatrix m(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) m.at(i, j) = a.at(r[i], c[j]);
      mpz_class d = determinant(m);
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
    }
  return g;
}

// Empty string when snf(a) passes every check against the minors oracle.
inline std::string snf_defect(const IntMatrix& a) {
  SmithForm s = snf(a);
  const int rows = a.rows(), cols = a.cols();
  if (!(s.U * a * s.V == s.D)) return "U*A*V != D";
  if (abs(determinant(s.U)) != 1 || abs(determinant(s.V)) != 1) return "U or V not unimodular";
  if (!(s.V * s.V_inverse == IntMatrix::identity(cols))) return "V_inverse wrong";
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (r != c && s.D.at(r, c) != 0) return "off-diagonal entry";
  mpz_class prod = 1;
  for (int k = 0; k < std::min(rows, cols); ++k) {
    const mpz_class& d = s.D.at(k, k);
    if (k < s.rank) {
      if (d <= 0) return "non-positive divisor";
      if (k + 1 < s.rank && !mpz_divisible_p(s.D.at(k + 1, k + 1).get_mpz_t(), d.get_mpz_t()))
        return "divisibility chain broken";
      prod *= d;
      if (minors_gcd(a, k + 1) != prod) return "divisor disagrees with minors";
    } else if (d != 0 || minors_gcd(a, k + 1) != 0) {
      return "rank disagrees with minors";
    }
  }
  return "";
}

inline AbelianGroup group(const std::vector<long>& divisors, int free_rank = 0) {
  int n = static_cast<int>(divisors.size());
  std::vector<std::vector<long>> rows;
  for (int i = 0; i < n; ++i) {
    std::vector<long> row(n + free_rank, 0);
    row[i] = divisors[i];
    rows.push_back(row);
  }
  return cokernel(IntMatrix::from_rows(rows, n + free_rank));
}

// Elements of a finite group Z/d_1 + ... as coordinate vectors.
inline std::vector<std::vector<long>> elements(const std::vector<long>& d) {
  std::vector<std::vector<long>> out{{}};
  for (long m : d) {
    std::vector<std::vector<long>> next;
    for (const auto& e : out)
      for (long v = 0; v < m; ++v) {
        auto x = e;
        x.push_back(v);
        next.push_back(x);
      }
    out = std::move(next);
  }
  return out;
}

using Perm = std::vector<int>;

inline std::vector<Perm> all_perms(int n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Perm> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline bool transitive(const std::vector<Perm>& gens, int n) {
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    for (const auto& g : gens)
      if (!seen[g[c]]) seen[g[c]] = true, stack.push_back(g[c]);
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

struct PairCounts {
  long transitive_pairs = 0;
  long classes = 0;
};

// Transitive pairs of permutations on n points, and their orbits under
// simultaneous relabelling.
inline PairCounts count_pairs(int n) {
  auto perms = all_perms(n);
  std::set<std::pair<Perm, Perm>> canon;
  PairCounts out;
  for (const auto& a : perms)
    for (const auto& b : perms) {
      if (!transitive({a, b}, n)) continue;
      ++out.transitive_pairs;
      std::pair<Perm, Perm> best{a, b};
      for (const auto& s : perms) {
        Perm ca(n), cb(n);
        for (int i = 0; i < n; ++i) {
          ca[s[i]] = s[a[i]];
          cb[s[i]] = s[b[i]];
        }
        best = std::min(best, std::make_pair(ca, cb));
      }
      canon.insert(best);
    }
  out.classes = static_cast<long>(canon.size());
  return out;
}

inline long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

// Non-trivial classes of F_rank with canonical word length <= n.
inline std::vector<ConjClass> short_classes(int rank, int n) {
  std::set<ConjClass> out;
  std::vector<std::vector<Letter>> layer{{}};
  for (int len = 1; len <= n; ++len) {
    std::vector<std::vector<Letter>> next;
    for (const auto& w : layer)
      for (int a = -rank; a <= rank; ++a) {
        if (a == 0 || (!w.empty() && w.back() == -a)) continue;
        auto v = w;
        v.push_back(a);
        next.push_back(v);
        out.insert(conj_canonical(free_reduce(std::span<const Letter>(v), rank)));
      }
    layer = std::move(next);
  }
  return {out.begin(), out.end()};
}

// Empty string when the elevations of c partition the index with minimal degrees.
inline std::string elevation_defect(const CosetTable& t, const SchreierBasis& s, const ConjClass& c) {
  int sum = 0;
  for (const auto& e : elevations(t, s, c)) {
    sum += e.degree;
    if (static_cast<int>(e.cycle_cosets.size()) != e.degree) return "cycle length differs from degree";
    Word g = s.representatives()[e.anchor()];
    if (e.representative != g * c.canonical.pow(e.degree) * g.inverse()) return "representative mismatch";
    if (!contains(t, e.representative)) return "representative not in subgroup";
    for (int j = 1; j < e.degree; ++j)
      if (contains(t, g * c.canonical.pow(j) * g.inverse())) return "degree not minimal";
  }
  return sum == t.size() ? "" : "degrees do not sum to the index";
}

// Cyclic vertices with at least two incident edges, as split candidates.
inline std::vector<int> splittable(const PrecoverMorphism& m) {
  std::vector<int> out;
  for (int v = 0; v < m.num_vertices(); ++v)
    if (m.is_cyclic(v) && m.incoming(v).size() >= 2) out.push_back(v);
  return out;
}

inline std::vector<int> detachable(const PrecoverMorphism& m) {
  std::vector<int> out;
  for (int e = 0; e < m.num_edges(); e += 2)
    if (m.is_cyclic(m.edges[e].origin) != m.is_cyclic(m.edges[e].terminus)) out.push_back(e);
  return out;
}

}  // namespace gbtest
