#include "gogbench/cosets.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <queue>

namespace gogbench {

CosetTable::CosetTable(int rank, std::vector<std::vector<int>> action)
    : rank_(rank), action_(std::move(action)) {
  size_ = action_.empty() ? 0 : static_cast<int>(action_.front().size());
  bool bijective = static_cast<int>(action_.size()) == rank_ && size_ > 0;
  std::vector<std::vector<int>> inv(action_.size(), std::vector<int>(size_, -1));
  for (std::size_t i = 0; bijective && i < action_.size(); ++i) {
    if (static_cast<int>(action_[i].size()) != size_) {
      bijective = false;
      break;
    }
    for (int c = 0; c < size_; ++c) {
      int d = action_[i][c];
      if (d < 0 || d >= size_ || inv[i][d] != -1) {
        bijective = false;
        break;
      }
      inv[i][d] = c;
    }
  }
  if (bijective) inverse_ = std::move(inv);
}

CosetTable CosetTable::make(int rank, std::vector<std::vector<int>> action) {
  CosetTable t(rank, std::move(action));
  auto r = validate_table(t);
  if (!r.ok()) throw InvalidInput("invalid coset table: " + r.str());
  return t;
}

CosetTable CosetTable::trivial(int rank) {
  return CosetTable(rank, std::vector<std::vector<int>>(rank, std::vector<int>{0}));
}

CosetTable CosetTable::cyclic(int n) {
  if (n < 1) throw InvalidInput("cyclic index must be positive");
  std::vector<int> col(n);
  for (int c = 0; c < n; ++c) col[c] = (c + 1) % n;
  return CosetTable(1, {col});
}

int CosetTable::act(int coset, Letter l) const {
  if (inverse_.empty()) throw InvalidInput("coset table is not a permutation action");
  return l > 0 ? action_[l - 1][coset] : inverse_[-l - 1][coset];
}

int CosetTable::walk(int coset, const Word& w) const {
  if (w.rank() != rank_) throw InvalidInput("word rank does not match coset table rank");
  for (Letter l : w.letters()) coset = act(coset, l);
  return coset;
}

Report validate_table(const CosetTable& t) {
  Report r;
  if (t.rank() < 1) r.add("rank must be >= 1");
  if (static_cast<int>(t.action().size()) != t.rank())
    r.add("expected " + std::to_string(t.rank()) + " action columns, got " +
          std::to_string(t.action().size()));
  if (t.size() < 1) r.add("table has no cosets");
  if (!r.ok()) return r;
  const int n = t.size();
  for (int i = 0; i < t.rank(); ++i) {
    const auto& col = t.action()[i];
    if (static_cast<int>(col.size()) != n) {
      r.add("generator " + std::to_string(i + 1) + " column has wrong length");
      continue;
    }
    std::vector<int> seen(n, 0);
    for (int c = 0; c < n; ++c) {
      if (col[c] < 0 || col[c] >= n) {
        r.add("generator " + std::to_string(i + 1) + " maps coset " + std::to_string(c) +
              " out of range");
      } else if (seen[col[c]]++) {
        r.add("generator " + std::to_string(i + 1) + " is not a bijection (coset " +
              std::to_string(col[c]) + " hit twice)");
      }
    }
  }
  if (!r.ok()) return r;
  // Orbit decomposition under the generated group.
  std::vector<int> orbit(n, -1);
  int orbits = 0;
  for (int s = 0; s < n; ++s) {
    if (orbit[s] != -1) continue;
    std::vector<int> stack{s};
    orbit[s] = orbits;
    while (!stack.empty()) {
      int c = stack.back();
      stack.pop_back();
      for (int i = 1; i <= t.rank(); ++i)
        for (int l : {i, -i}) {
          int d = t.act(c, l);
          if (orbit[d] == -1) {
            orbit[d] = orbits;
            stack.push_back(d);
          }
        }
    }
    ++orbits;
  }
  if (orbits > 1) {
    std::string desc = "intransitive action: " + std::to_string(orbits) + " orbits {";
    for (int o = 0; o < orbits; ++o) {
      desc += o ? "} {" : "";
      bool first = true;
      for (int c = 0; c < n; ++c)
        if (orbit[c] == o) {
          desc += (first ? "" : ",") + std::to_string(c);
          first = false;
        }
    }
    r.add(desc + "}");
  }
  return r;
}

bool contains(const CosetTable& t, const Word& w) { return t.walk(0, w) == 0; }

SchreierBasis::SchreierBasis(const CosetTable& t) : table_(t) {
  const int n = t.size(), r = t.rank();
  reps_.assign(n, Word(r));
  std::vector<bool> seen(n, false);
  // tree[i][c]: edge c --x_i--> c*x_i belongs to the spanning tree
  std::vector<std::vector<bool>> tree(r, std::vector<bool>(n, false));
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  while (!q.empty()) {
    int c = q.front();
    q.pop();
    for (int i = 1; i <= r; ++i) {
      int fwd = t.act(c, i);
      if (!seen[fwd]) {
        seen[fwd] = true;
        tree[i - 1][c] = true;
        reps_[fwd] = reps_[c] * free_reduce({i}, r);
        q.push(fwd);
      }
      int back = t.act(c, -i);
      if (!seen[back]) {
        seen[back] = true;
        tree[i - 1][back] = true;
        reps_[back] = reps_[c] * free_reduce({-i}, r);
        q.push(back);
      }
    }
  }
  label_.assign(r, std::vector<int>(n, 0));
  for (int c = 0; c < n; ++c)
    for (int i = 1; i <= r; ++i) {
      if (tree[i - 1][c]) continue;
      int d = t.act(c, i);
      basis_.push_back(reps_[c] * free_reduce({i}, r) * reps_[d].inverse());
      label_[i - 1][c] = static_cast<int>(basis_.size());
    }
}

Word SchreierBasis::rewrite(const Word& w) const {
  std::vector<Letter> out;
  int c = 0;
  for (Letter l : w.letters()) {
    if (l > 0) {
      if (int lab = label_[l - 1][c]) out.push_back(lab);
      c = table_.act(c, l);
    } else {
      int prev = table_.act(c, l);
      if (int lab = label_[-l - 1][prev]) out.push_back(-lab);
      c = prev;
    }
  }
  if (c != 0) throw InvalidInput("rewrite: word " + w.str() + " is not in the subgroup");
  return free_reduce(out, std::max(1, subgroup_rank()));
}

Word SchreierBasis::evaluate(const Word& basis_word) const {
  Word out(table_.rank());
  for (Letter l : basis_word.letters()) {
    const Word& b = basis_[std::abs(l) - 1];
    out = out * (l > 0 ? b : b.inverse());
  }
  return out;
}

std::vector<int> coset_cycle(const CosetTable& t, const Word& w, int c) {
  std::vector<int> cycle{c};
  for (int d = t.walk(c, w); d != c; d = t.walk(d, w)) cycle.push_back(d);
  return cycle;
}

std::vector<Elevation> elevations(const CosetTable& t, const SchreierBasis& s,
                                  const ConjClass& c) {
  const Word& w = c.canonical;
  if (w.is_identity()) throw InvalidInput("elevations of the trivial class");
  std::vector<int> image(t.size());
  for (int k = 0; k < t.size(); ++k) image[k] = t.walk(k, w);
  std::vector<bool> done(t.size(), false);
  std::vector<Elevation> out;
  for (int k = 0; k < t.size(); ++k) {
    if (done[k]) continue;
    Elevation e{c, 0, Word(t.rank()), {}};
    for (int d = k; !done[d]; d = image[d]) {
      done[d] = true;
      e.cycle_cosets.push_back(d);
    }
    e.degree = static_cast<int>(e.cycle_cosets.size());
    std::sort(e.cycle_cosets.begin(), e.cycle_cosets.end());
    const Word& g = s.representatives()[k];
    e.representative = g * w.pow(e.degree) * g.inverse();
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<Elevation> elevations(const CosetTable& t, const ConjClass& c) {
  return elevations(t, SchreierBasis(t), c);
}

Report validate_pair(const Pair& p) {
  Report r;
  for (std::size_t i = 0; i < p.peripheral.size(); ++i) {
    if (p.peripheral[i].canonical.is_identity()) r.add("class " + std::to_string(i) + " is trivial");
    if (p.peripheral[i].rank() != p.rank) r.add("class " + std::to_string(i) + " has wrong rank");
    for (std::size_t j = 0; j < i; ++j)
      if (p.peripheral[i] == p.peripheral[j])
        r.add("classes " + std::to_string(j) + " and " + std::to_string(i) + " coincide");
  }
  return r;
}

Report check_malnormal(const Pair& p) {
  Report r = validate_pair(p);
  if (!r.ok()) return r;
  std::vector<ConjClass> roots, inv_roots;
  for (std::size_t i = 0; i < p.peripheral.size(); ++i) {
    auto pr = primitive_root(p.peripheral[i].canonical);
    if (pr.exponent != 1)
      r.add("class " + std::to_string(i) + " " + p.peripheral[i].canonical.str() +
            " is a proper power (exponent " + std::to_string(pr.exponent) + ")");
    roots.push_back(conj_canonical(pr.root));
    inv_roots.push_back(conj_canonical(pr.root.inverse()));
  }
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (roots[i] == roots[j] || roots[i] == inv_roots[j])
        r.add("classes " + std::to_string(j) + " and " + std::to_string(i) +
              " have conjugate primitive roots");
  return r;
}

PulledBackPair pullback(const Pair& p, const CosetTable& t) {
  if (t.rank() != p.rank) throw InvalidInput("pullback: table rank differs from pair rank");
  auto vr = validate_table(t);
  if (!vr.ok()) throw InvalidInput("pullback: " + vr.str());
  SchreierBasis s(t);
  PulledBackPair out;
  out.pair.rank = s.subgroup_rank();
  for (std::size_t i = 0; i < p.peripheral.size(); ++i) {
    for (const auto& e : elevations(t, s, p.peripheral[i])) {
      ConjClass cls = conj_canonical(s.rewrite(e.representative));
      for (std::size_t j = 0; j < out.pair.peripheral.size(); ++j)
        if (out.pair.peripheral[j] == cls)
          throw ElevationCollision("elevation of class " + std::to_string(i) +
                                   " (degree " + std::to_string(e.degree) +
                                   ") coincides with an elevation of class " +
                                   std::to_string(out.source_class[j]) + " (degree " +
                                   std::to_string(out.degree[j]) + ")");
      out.pair.peripheral.push_back(cls);
      out.source_class.push_back(static_cast<int>(i));
      out.degree.push_back(e.degree);
      out.ambient_words.push_back(e.representative);
    }
  }
  return out;
}

namespace {

std::vector<int> flatten(const CosetTable& t) {
  std::vector<int> key;
  key.reserve(static_cast<std::size_t>(t.size()) * t.rank());
  for (int c = 0; c < t.size(); ++c)
    for (int i = 0; i < t.rank(); ++i) key.push_back(t.action()[i][c]);
  return key;
}

struct LowIndexSearch {
  int rank, n;
  std::vector<std::vector<int>> fwd, inv;
  int defined = 1;
  std::vector<CosetTable>* out;

  void run() {
    fwd.assign(rank, std::vector<int>(n, -1));
    inv.assign(rank, std::vector<int>(n, -1));
    recurse();
  }

  void recurse() {
    // First undefined entry in scan order (coset, x1, x1^-1, x2, ...).
    for (int c = 0; c < defined; ++c)
      for (int i = 0; i < rank; ++i) {
        if (fwd[i][c] == -1) {
          for (int k = 0; k < defined; ++k) {
            if (inv[i][k] != -1) continue;
            fwd[i][c] = k;
            inv[i][k] = c;
            recurse();
            fwd[i][c] = inv[i][k] = -1;
          }
          if (defined < n) {
            int k = defined++;
            fwd[i][c] = k;
            inv[i][k] = c;
            recurse();
            fwd[i][c] = inv[i][k] = -1;
            --defined;
          }
          return;
        }
        if (inv[i][c] == -1) {
          for (int k = 0; k < defined; ++k) {
            if (fwd[i][k] != -1) continue;
            inv[i][c] = k;
            fwd[i][k] = c;
            recurse();
            inv[i][c] = fwd[i][k] = -1;
          }
          if (defined < n) {
            int k = defined++;
            inv[i][c] = k;
            fwd[i][k] = c;
            recurse();
            inv[i][c] = fwd[i][k] = -1;
            --defined;
          }
          return;
        }
      }
    if (defined == n) out->emplace_back(rank, fwd);
  }
};

}  // namespace

std::vector<CosetTable> enumerate_based_subgroups(int rank, int n) {
  if (rank < 1 || n < 1) throw InvalidInput("enumerate_based_subgroups: rank and index must be >= 1");
  std::vector<CosetTable> out;
  LowIndexSearch s{rank, n, {}, {}, 1, &out};
  s.run();
  return out;
}

CosetTable restandardize(const CosetTable& t, int base) {
  const int n = t.size();
  std::vector<int> label(n, -1), order;
  label[base] = 0;
  order.push_back(base);
  for (std::size_t q = 0; q < order.size(); ++q) {
    int c = order[q];
    for (int i = 1; i <= t.rank(); ++i)
      for (int l : {i, -i}) {
        int d = t.act(c, l);
        if (label[d] == -1) {
          label[d] = static_cast<int>(order.size());
          order.push_back(d);
        }
      }
  }
  if (static_cast<int>(order.size()) != n) throw InvalidInput("restandardize: intransitive table");
  std::vector<std::vector<int>> act(t.rank(), std::vector<int>(n));
  for (int i = 0; i < t.rank(); ++i)
    for (int c = 0; c < n; ++c) act[i][label[c]] = label[t.action()[i][c]];
  return CosetTable(t.rank(), std::move(act));
}

long for_each_subgroup(int rank, int max_index,
                       const std::function<bool(const CosetTable&)>& fn) {
  if (max_index < 1) throw InvalidInput("max_index must be >= 1");
  long delivered = 0;
  for (int n = 1; n <= max_index; ++n) {
    auto based = enumerate_based_subgroups(rank, n);
    std::vector<std::pair<std::vector<int>, CosetTable*>> reps;
    for (auto& t : based) {
      auto key = flatten(t);
      bool minimal = true;
      for (int b = 1; b < n && minimal; ++b) minimal = !(flatten(restandardize(t, b)) < key);
      if (minimal) reps.emplace_back(std::move(key), &t);
    }
    std::sort(reps.begin(), reps.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [key, t] : reps) {
      ++delivered;
      if (!fn(*t)) return delivered;
    }
  }
  return delivered;
}

std::vector<CosetTable> enumerate_subgroups(int rank, int max_index, long cap) {
  std::vector<CosetTable> out;
  for_each_subgroup(rank, max_index, [&](const CosetTable& t) {
    if (static_cast<long>(out.size()) >= cap)
      throw SearchLimit("enumerate_subgroups: more than " + std::to_string(cap) + " subgroups");
    out.push_back(t);
    return true;
  });
  return out;
}

bool is_subgroup_of(const CosetTable& small, const CosetTable& big) {
  if (small.rank() != big.rank()) return false;
  SchreierBasis s(small);
  for (const auto& b : s.basis())
    if (!contains(big, b)) return false;
  return true;
}

CosetTable regular_table(const std::vector<std::vector<int>>& generator_perms) {
  if (generator_perms.empty()) throw InvalidInput("regular_table: no generators");
  const std::size_t deg = generator_perms.front().size();
  std::vector<int> id(deg);
  std::iota(id.begin(), id.end(), 0);
  std::map<std::vector<int>, int> index_of{{id, 0}};
  std::vector<std::vector<int>> elements{id};
  std::vector<std::vector<int>> act(generator_perms.size());
  for (std::size_t q = 0; q < elements.size(); ++q) {
    for (std::size_t i = 0; i < generator_perms.size(); ++i) {
      std::vector<int> prod(deg);
      for (std::size_t p = 0; p < deg; ++p) prod[p] = generator_perms[i][elements[q][p]];
      auto [it, inserted] = index_of.emplace(prod, static_cast<int>(elements.size()));
      if (inserted) elements.push_back(prod);
      act[i].push_back(it->second);
    }
  }
  return CosetTable(static_cast<int>(generator_perms.size()), std::move(act));
}

namespace {

long gcdl(long a, long b) { return std::gcd(a, b); }

long mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

// Order of x in Z/m.
long cyclic_order(long x, long m) {
  x = mod(x, m);
  return m / gcdl(x, m);
}

struct Checker {
  const Pair& pair;
  const std::vector<std::optional<int>>& targets;
  const PrescribeOptions& options;

  // Returns K when the orders match the targets up to a common constant.
  std::optional<int> constant(const std::vector<long>& orders) const {
    std::optional<long> k;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (!targets[i]) continue;
      if (orders[i] % *targets[i]) return std::nullopt;
      long ki = orders[i] / *targets[i];
      if (k && *k != ki) return std::nullopt;
      k = ki;
    }
    long kk = k.value_or(1);
    if (options.require_unit_constant && kk != 1) return std::nullopt;
    return static_cast<int>(kk);
  }

  bool verify(const CosetTable& t, int k) const {
    SchreierBasis s(t);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (!targets[i]) continue;
      for (const auto& e : elevations(t, s, pair.peripheral[i]))
        if (e.degree != k * *targets[i]) return false;
    }
    return true;
  }
};

// Iterates tuples in (Z/m)^r lexicographically.
bool next_tuple(std::vector<long>& v, long m) {
  for (std::size_t i = v.size(); i-- > 0;) {
    if (++v[i] < m) return true;
    v[i] = 0;
  }
  return false;
}

}  // namespace

std::optional<PrescribeResult> prescribe_degrees(const Pair& p,
                                                 const std::vector<std::optional<int>>& targets,
                                                 const PrescribeOptions& options) {
  if (targets.size() != p.peripheral.size())
    throw InvalidInput("prescribe_degrees: one target per peripheral class required");
  for (const auto& t : targets)
    if (t && *t < 1) throw InvalidInput("prescribe_degrees: targets must be positive");
  if (auto m = check_malnormal(p); !m.ok())
    throw InvalidInput("prescribe_degrees: pair is not malnormal: " + m.str());

  const int r = p.rank;
  std::vector<std::vector<long>> ab;
  for (const auto& c : p.peripheral) ab.push_back(abelianize_word(c.canonical));
  Checker check{p, targets, options};
  long budget = options.search_bound;
  std::optional<PrescribeResult> fallback;

  // Returns true when the search should stop with `best`.
  auto offer = [&](CosetTable t, int k, std::string family) -> bool {
    if (!check.verify(t, k)) return false;
    PrescribeResult res{std::move(t), k, std::move(family), false};
    if (!options.within) {
      fallback = std::move(res);
      return true;
    }
    if (is_subgroup_of(res.table, *options.within)) {
      res.containment_verified = true;
      fallback = std::move(res);
      return true;
    }
    if (!fallback) fallback = std::move(res);
    return false;
  };

  // Cyclic quotients Z/m.
  for (long m = 1; m <= 60; ++m) {
    std::vector<long> v(r, 0);
    do {
      long g = m;
      for (long x : v) g = gcdl(g, x);
      if (g != 1 && m != 1) continue;
      if (budget-- <= 0) return fallback;
      std::vector<long> orders;
      for (const auto& a : ab) {
        long x = 0;
        for (int j = 0; j < r; ++j) x += a[j] * v[j];
        orders.push_back(cyclic_order(x, m));
      }
      if (auto k = check.constant(orders)) {
        std::vector<std::vector<int>> act(r, std::vector<int>(m));
        for (int j = 0; j < r; ++j)
          for (long c = 0; c < m; ++c) act[j][c] = static_cast<int>(mod(c + v[j], m));
        if (offer(CosetTable(r, std::move(act)), *k, "Z/" + std::to_string(m))) return fallback;
      }
    } while (next_tuple(v, m));
  }

  // Products Z/m1 x Z/m2 with m1 | m2.
  for (long m1 = 2; m1 <= 60; ++m1)
    for (long m2 = m1; m2 <= 60; m2 += m1) {
      std::vector<long> v(2 * r, 0);  // (a_1..a_r) mod m1, (b_1..b_r) mod m2
      auto next = [&] {
        for (std::size_t i = v.size(); i-- > 0;) {
          long lim = i < static_cast<std::size_t>(r) ? m1 : m2;
          if (++v[i] < lim) return true;
          v[i] = 0;
        }
        return false;
      };
      do {
        if (budget-- <= 0) return fallback;
        std::vector<long> orders;
        for (const auto& a : ab) {
          long x = 0, y = 0;
          for (int j = 0; j < r; ++j) {
            x += a[j] * v[j];
            y += a[j] * v[r + j];
          }
          orders.push_back(std::lcm(cyclic_order(x, m1), cyclic_order(y, m2)));
        }
        auto k = check.constant(orders);
        if (!k) continue;
        std::vector<std::vector<int>> perms(r, std::vector<int>(m1 * m2));
        for (int j = 0; j < r; ++j)
          for (long x = 0; x < m1; ++x)
            for (long y = 0; y < m2; ++y)
              perms[j][x * m2 + y] = static_cast<int>(mod(x + v[j], m1) * m2 + mod(y + v[r + j], m2));
        CosetTable t = regular_table(perms);
        if (t.size() != m1 * m2) continue;  // not surjective
        if (offer(std::move(t), *k, "Z/" + std::to_string(m1) + "xZ/" + std::to_string(m2)))
          return fallback;
      } while (next());
    }

  // Normal cores of small transitive actions.
  bool stop = false;
  for_each_subgroup(r, 5, [&](const CosetTable& perm) {
    if (budget-- <= 0) {
      stop = true;
      return false;
    }
    CosetTable t = regular_table(perm.action());
    std::vector<long> orders;
    for (const auto& c : p.peripheral) orders.push_back(coset_cycle(t, c.canonical, 0).size());
    if (auto k = check.constant(orders))
      if (offer(std::move(t), *k, "core of index-" + std::to_string(perm.size()) + " action")) {
        stop = true;
        return false;
      }
    return true;
  });
  return fallback;
}

std::optional<PrescribeResult> prescribe_degrees(const Pair& p, const std::vector<int>& targets,
                                                 const PrescribeOptions& options) {
  std::vector<std::optional<int>> t(targets.begin(), targets.end());
  return prescribe_degrees(p, t, options);
}

}  // namespace gogbench
