#include <algorithm>
#include <map>
#include <set>

#include "gogbench/covers.hpp"

namespace gogbench {

namespace {

// Conjugacy-class tables of F_rank, indexed by size.
class TableCache {
 public:
  const std::vector<CosetTable>& of(int rank, int n) {
    auto key = std::make_pair(rank, n);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::map<int, std::vector<CosetTable>> by_size;
    for (int k = 1; k <= n; ++k) by_size[k];
    for_each_subgroup(rank, n, [&](const CosetTable& t) {
      by_size[t.size()].push_back(t);
      return true;
    });
    for (auto& [k, tabs] : by_size) cache_.try_emplace({rank, k}, std::move(tabs));
    return cache_.at(key);
  }

 private:
  // std::map keeps references stable across insertions.
  std::map<std::pair<int, int>, std::vector<CosetTable>> cache_;
};

// Multisets of tables with indices summing to d, as nondecreasing lists of
// (size, position) pairs.
void multisets(TableCache& cache, int rank, int d, std::pair<int, int> min_id,
               std::vector<const CosetTable*>& cur, std::vector<std::vector<const CosetTable*>>& out) {
  if (d == 0) {
    out.push_back(cur);
    return;
  }
  for (int n = min_id.first; n <= d; ++n) {
    const auto& tabs = cache.of(rank, n);
    for (int i = n == min_id.first ? min_id.second : 0; i < static_cast<int>(tabs.size()); ++i) {
      cur.push_back(&tabs[i]);
      multisets(cache, rank, d - n, {n, i}, cur, out);
      cur.pop_back();
    }
  }
}

struct CycleRef {
  int vertex, coset, length;
};

std::vector<CycleRef> cycles_at(const PrecoverMorphism& m, int base_vertex, const Word& w) {
  std::vector<CycleRef> out;
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (m.vertices[v].over != base_vertex) continue;
    const auto& t = m.vertices[v].table;
    std::vector<bool> done(t.size(), false);
    for (int c = 0; c < t.size(); ++c) {
      if (done[c]) continue;
      auto cyc = coset_cycle(t, w, c);
      for (int x : cyc) done[x] = true;
      out.push_back({v, c, static_cast<int>(cyc.size())});
    }
  }
  return out;
}

struct MatchingSearch {
  const GraphOfGroups& g;
  PrecoverMorphism m;
  const std::function<bool(const PrecoverMorphism&)>& fn;
  long yielded = 0;
  bool stop = false;

  void edge_pair(int k) {
    if (stop) return;
    if (k == g.num_edge_pairs()) {
      if (!total_connected(m)) return;
      ++yielded;
      if (!fn(m)) stop = true;
      return;
    }
    const auto& e = g.edge(2 * k);
    auto s = cycles_at(m, e.terminus, e.word);
    auto r = cycles_at(m, e.origin, g.edge(2 * k + 1).word);
    if (s.size() != r.size()) return;
    std::vector<bool> taken(r.size(), false);
    match(k, s, r, taken, 0);
  }

  void match(int k, const std::vector<CycleRef>& s, const std::vector<CycleRef>& r,
             std::vector<bool>& taken, std::size_t i) {
    if (stop) return;
    if (i == s.size()) {
      edge_pair(k + 1);
      return;
    }
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (taken[j] || r[j].length != s[i].length) continue;
      taken[j] = true;
      m.add_edge_pair(2 * k, r[j].vertex, s[i].vertex, s[i].coset, r[j].coset);
      match(k, s, r, taken, i + 1);
      m.edges.resize(m.edges.size() - 2);
      taken[j] = false;
      if (stop) return;
    }
  }
};

}  // namespace

long for_each_cover(std::shared_ptr<const GraphOfGroups> base, int max_index,
                    const std::function<bool(const PrecoverMorphism&)>& fn) {
  auto r = validate(*base);
  if (!r.ok()) throw InvalidInput("enumerate_covers: " + r.str());
  if (max_index < 1) throw InvalidInput("enumerate_covers: max_index must be >= 1");
  TableCache cache;
  long total = 0;
  const int nv = base->num_vertices();
  for (int d = 1; d <= max_index; ++d) {
    std::vector<std::vector<std::vector<const CosetTable*>>> options(nv);
    for (int v = 0; v < nv; ++v) {
      std::vector<const CosetTable*> cur;
      multisets(cache, base->vertex(v).rank, d, {1, 0}, cur, options[v]);
    }
    std::vector<std::size_t> pick(nv, 0);
    while (true) {
      MatchingSearch s{*base, PrecoverMorphism{}, fn};
      s.m.base = base;
      for (int v = 0; v < nv; ++v)
        for (const auto* t : options[v][pick[v]]) s.m.add_vertex(v, *t);
      // Put the total base vertex first among the lifts of the base vertex.
      for (int v = 0; v < s.m.num_vertices(); ++v)
        if (s.m.vertices[v].over == base->base()) {
          s.m.base_vertex = v;
          break;
        }
      s.edge_pair(0);
      total += s.yielded;
      if (s.stop) return total;
      int v = nv - 1;
      while (v >= 0 && ++pick[v] == options[v].size()) pick[v--] = 0;
      if (v < 0) break;
    }
  }
  return total;
}

std::vector<PrecoverMorphism> enumerate_covers(std::shared_ptr<const GraphOfGroups> base, int max_index,
                                               long cap) {
  std::vector<PrecoverMorphism> out;
  for_each_cover(base, max_index, [&](const PrecoverMorphism& m) {
    if (static_cast<long>(out.size()) >= cap)
      throw SearchLimit("enumerate_covers: more than " + std::to_string(cap) + " covers");
    out.push_back(m);
    return true;
  });
  return out;
}

namespace {

struct Completion {
  const CompleteOptions& options;
  long limit;  // per-base-vertex index sum
  long budget;
  TableCache cache;
  std::optional<PrecoverMorphism> found;

  bool recurse(const PrecoverMorphism& p) {
    if (budget-- <= 0) return false;
    if (options.deadline && (budget & 255) == 0 && std::chrono::steady_clock::now() > *options.deadline) {
      budget = 0;
      return false;
    }
    auto slots = hanging_slots(p);
    if (slots.empty()) {
      if (!total_connected(p)) return false;
      auto sums = index_sums(p);
      if (std::adjacent_find(sums.begin(), sums.end(), std::not_equal_to<>()) != sums.end()) return false;
      found = p;
      return true;
    }
    const auto& g = *p.base;
    const HangingSlot s = slots.front();
    const int eb = g.edge(s.base_edge).reverse;
    const int u = g.edge(eb).terminus;
    for (const auto& t : slots) {
      if (t.base_edge != eb || t.degree != s.degree || t == s) continue;
      if (recurse(splice_slots(p, {{s, t}}))) return true;
      if (budget <= 0) return false;
    }
    auto sums = index_sums(p);
    const int rank = g.vertex(u).rank;
    // Table inventories grow quickly with the rank.
    const int rank_cap = rank == 1 ? static_cast<int>(limit) : rank == 2 ? 5 : rank == 3 ? 3 : 2;
    const int cap_index = std::min<int>(static_cast<int>(limit), rank_cap);
    for (int n = 1; n <= cap_index && sums[u] + n <= limit; ++n) {
      for (const auto& tab : cache.of(rank, n)) {
        std::set<int> tried;
        for (int c = 0; c < tab.size(); ++c) {
          auto cyc = coset_cycle(tab, g.edge(eb).word, c);
          int lo = *std::min_element(cyc.begin(), cyc.end());
          if (static_cast<int>(cyc.size()) != s.degree || !tried.insert(lo).second) continue;
          PrecoverMorphism q = p;
          int nv = q.add_vertex(u, tab);
          HangingSlot fresh{nv, eb, lo, s.degree, q.is_cyclic(nv)};
          if (recurse(splice_slots(q, {{s, fresh}}))) return true;
          if (budget <= 0) return false;
        }
      }
    }
    return false;
  }
};

}  // namespace

std::optional<PrecoverMorphism> complete(const PrecoverMorphism& m, const CompleteOptions& options) {
  auto r = validate_precover(m);
  if (!r.ok()) throw InvalidInput("complete: " + r.str());
  Completion c{options, predegree(m) + options.bound, options.node_budget, {}, std::nullopt};
  if (!c.recurse(m)) return std::nullopt;
  if (degree(*c.found) < predegree(m)) throw std::logic_error("complete: degree below predegree");
  return c.found;
}

std::optional<TorsionCertificate> torsion_certificate(const AbelianGroup& a, const Vec& c1, const Vec& c2,
                                                      long p, long cap) {
  if (!is_prime(p)) throw InvalidInput(std::to_string(p) + " is not prime");
  const int nt = static_cast<int>(a.divisors.size());
  std::vector<mpz_class> scale(nt), range(nt);
  for (int i = 0; i < nt; ++i) {
    mpz_class d = a.divisors[i], pk = 1;
    while (mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(p))) {
      d /= p;
      pk *= p;
    }
    scale[i] = d;
    range[i] = pk;
  }
  std::map<int, Quotient> reduced;
  auto reduced_for = [&](int k) -> const Quotient& {
    auto it = reduced.find(k);
    if (it != reduced.end()) return it->second;
    std::vector<Vec> xs{c1, c2};
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    for (int j = 0; j < a.num_coords(); ++j) {
      Vec x(a.num_coords());
      x[j] = pk;
      xs.push_back(std::move(x));
    }
    return reduced.emplace(k, quotient_with_map(a, xs)).first->second;
  };
  std::vector<mpz_class> t(nt, 0);
  long seen = 0;
  while (seen < cap) {
    int i = nt - 1;
    while (i >= 0) {
      if (++t[i] < range[i]) break;
      t[i--] = 0;
    }
    if (i < 0) break;
    ++seen;
    Vec x(a.num_coords());
    for (int j = 0; j < nt; ++j) x[j] = t[j] * scale[j];
    mpz_class order = element_order(a, x);
    int k = 0;
    for (mpz_class o = order; o > 1; o /= p) ++k;
    const Quotient& q = reduced_for(k);
    Vec img(q.group.num_coords());
    for (int j = 0; j < a.num_coords(); ++j)
      for (int l = 0; l < q.group.num_coords(); ++l) img[l] += x[j] * q.map.at(j, l);
    if (element_order(q.group, img) == order) {
      TorsionCertificate cert;
      cert.h1 = a;
      cert.c1 = c1;
      cert.c2 = c2;
      cert.quotient = quotient_by(a, {c1, c2});
      cert.witness = x;
      cert.k = k;
      cert.reduced = q.group;
      return cert;
    }
  }
  return std::nullopt;
}

std::optional<TorsionPiece> find_torsion_piece(std::shared_ptr<const GraphOfGroups> base,
                                               const TorsionSearch& search) {
  if (!is_prime(search.prime)) throw InvalidInput(std::to_string(search.prime) + " is not prime");
  std::optional<TorsionPiece> found;
  long scanned = 0;
  for_each_cover(base, search.max_index, [&](const PrecoverMorphism& m) {
    if (++scanned > search.cap) return false;
    if (search.deadline && std::chrono::steady_clock::now() > *search.deadline) return false;
    GraphOfGroups t = total_graph(m);
    for (int c = 0; c < m.num_vertices(); ++c) {
      if (!m.is_cyclic(c)) continue;
      if (search.base_cyclic_vertex && m.vertices[c].over != *search.base_cyclic_vertex) continue;
      auto inc = m.incoming(c);
      if (inc.size() < 2 || disconnects(t, {c})) continue;
      for (int f : inc) {
        if (search.single_base_edge) {
          int over = m.edges[f].over;
          if (over != *search.single_base_edge && over != (*search.single_base_edge ^ 1)) continue;
        }
        PrecoverMorphism piece = split_cyclic(m, c, {f});
        if (!total_connected(piece)) continue;
        int c2 = piece.num_vertices() - 1;
        GraphOfGroups pt = total_graph(piece);
        AbelianGroup a = h1(pt);
        auto cert = torsion_certificate(a, class_image(pt, a, c), class_image(pt, a, c2), search.prime);
        if (cert) {
          found = TorsionPiece{std::move(piece), search.prime, c, c2, c, f, std::move(*cert)};
          return false;
        }
      }
    }
    return true;
  });
  return found;
}

Report check_torsion_piece(const TorsionPiece& tp) {
  Report r = validate_precover(tp.piece);
  if (!r.ok()) return r;
  const auto& m = tp.piece;
  if (!m.is_cyclic(tp.c1) || !m.is_cyclic(tp.c2)) r.add("boundary vertices must be cyclic");
  if (m.vertices[tp.c1].over != m.vertices[tp.c2].over) r.add("boundary vertices lie over distinct base vertices");
  if (m.vertices[tp.c1].index() != m.vertices[tp.c2].index()) r.add("boundary vertices have different indices");
  bool at1 = false, at2 = false;
  for (const auto& s : hanging_slots(m)) {
    if (s.vertex == tp.c1)
      at1 = true;
    else if (s.vertex == tp.c2)
      at2 = true;
    else
      r.add("hanging slot away from the boundary at vertex " + std::to_string(s.vertex));
  }
  if (!at1 || !at2) r.add("each boundary vertex must carry a hanging slot");
  if (!total_connected(m)) r.add("piece is disconnected");
  if (!r.ok()) return r;
  GraphOfGroups t = total_graph(m);
  AbelianGroup a = h1(t);
  if (!isomorphic(a, tp.certificate.h1)) r.add("certificate H_1 does not match the piece");
  auto cert = torsion_certificate(a, class_image(t, a, tp.c1), class_image(t, a, tp.c2), tp.prime);
  if (!cert) r.add("no complemented p-torsion factor");
  else if (p_rank(cert->quotient, tp.prime) < 1) r.add("quotient has no p-torsion");
  return r;
}

Chain chain(const TorsionPiece& piece, int copies) {
  if (copies < 1) throw InvalidInput("chain: copies must be >= 1");
  std::vector<PrecoverMorphism> parts(copies, piece.piece);
  Chain out;
  out.morphism = disjoint_union(parts);
  const int n = piece.piece.num_vertices();
  for (int i = 0; i < copies; ++i) out.copy_offset.push_back(i * n);
  std::vector<int> where(copies * n);
  for (int i = 0; i < copies * n; ++i) where[i] = i;
  for (int i = 0; i + 1 < copies; ++i) {
    int a = where[i * n + piece.c1], b = where[(i + 1) * n + piece.c2];
    out.morphism = merge_cyclic(out.morphism, a, b);
    for (int& x : where) {
      if (x == b) x = a;
      else if (x > b) --x;
    }
  }
  out.first_c2 = where[piece.c2];
  out.last_c1 = where[(copies - 1) * n + piece.c1];
  return out;
}

LiftResult lift_word(const PrecoverMorphism& m, const GogWord& w) {
  const auto& g = *m.base;
  auto vr = validate_word(g, w);
  if (!vr.ok()) throw InvalidInput("malformed word: " + vr.str());
  if (m.vertices.at(m.base_vertex).over != w.base)
    throw InvalidInput("lift_word: word is not based under the total base vertex");
  std::map<int, SchreierBasis> bases;
  auto basis = [&](int v) -> const SchreierBasis& {
    auto it = bases.find(v);
    if (it == bases.end()) it = bases.emplace(v, SchreierBasis(m.vertices[v].table)).first;
    return it->second;
  };
  LiftResult res;
  GogWord lifted{m.base_vertex, {}, {}};
  int at = m.base_vertex;
  Word y(g.vertex(w.base).rank);
  int c = 0;
  const int k = static_cast<int>(w.edges.size());
  for (int i = 0;; ++i) {
    const auto& t = m.vertices[at].table;
    y = y * w.vertex_words[i];
    c = t.walk(c, w.vertex_words[i]);
    if (i == k) break;
    const int e = w.edges[i];
    const int eb = g.edge(e).reverse;
    const Word& wb = g.edge(eb).word;
    int found = -1, j = 0;
    for (int f : m.incoming(at)) {
      if (m.edges[f].over != eb) continue;
      auto cyc = coset_cycle(t, wb, m.edges[f].anchor);
      auto pos = std::find(cyc.begin(), cyc.end(), c);
      if (pos != cyc.end()) {
        found = f;
        j = static_cast<int>(pos - cyc.begin());
        break;
      }
    }
    if (found < 0) {
      res.exit_step = i;
      res.end_vertex = at;
      res.end_coset = c;
      return res;
    }
    const auto& sb = basis(at);
    Word h = y * wb.pow(-j) * sb.representatives()[m.edges[found].anchor].inverse();
    lifted.vertex_words.push_back(sb.rewrite(h));
    const int forward = found ^ 1;
    lifted.edges.push_back(forward);
    at = m.edges[forward].terminus;
    const int a = m.edges[forward].anchor;
    const Word& we = g.edge(e).word;
    y = basis(at).representatives()[a] * we.pow(j);
    c = m.vertices[at].table.walk(a, we.pow(j));
  }
  res.end_vertex = at;
  res.end_coset = c;
  res.in_subgroup = at == m.base_vertex && c == 0;
  if (res.in_subgroup) {
    lifted.vertex_words.push_back(basis(at).rewrite(y));
    res.lifted = std::move(lifted);
  } else {
    res.exit_step = k;
  }
  return res;
}

}  // namespace gogbench
