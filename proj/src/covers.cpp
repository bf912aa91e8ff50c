#include "gogbench/covers.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>

namespace gogbench {

int PrecoverMorphism::add_vertex(int over, CosetTable table, std::string name) {
  vertices.push_back({over, std::move(table), std::move(name)});
  return num_vertices() - 1;
}

int PrecoverMorphism::add_edge_pair(int over, int origin, int terminus, int anchor_fwd, int anchor_bwd) {
  if (over % 2) {
    // Normalize so the forward edge of the pair lies over a forward base edge.
    over ^= 1;
    std::swap(origin, terminus);
    std::swap(anchor_fwd, anchor_bwd);
  }
  int e = num_edges();
  edges.push_back({over, origin, terminus, e + 1, anchor_fwd});
  edges.push_back({over + 1, terminus, origin, e, anchor_bwd});
  return e;
}

std::vector<int> PrecoverMorphism::incoming(int v) const {
  std::vector<int> out;
  for (int e = 0; e < num_edges(); ++e)
    if (edges[e].terminus == v) out.push_back(e);
  return out;
}

int PrecoverMorphism::edge_degree(int e) const {
  const auto& x = edges.at(e);
  return static_cast<int>(coset_cycle(vertices.at(x.terminus).table, edge_word(e), x.anchor).size());
}

std::string vertex_label(const PrecoverMorphism& m, int v) {
  const auto& x = m.vertices.at(v);
  return x.name.empty() ? m.base->vertex(x.over).name + "." + std::to_string(v) : x.name;
}

PrecoverMorphism identity_morphism(std::shared_ptr<const GraphOfGroups> base) {
  PrecoverMorphism m;
  m.base = base;
  for (int v = 0; v < base->num_vertices(); ++v)
    m.add_vertex(v, CosetTable::trivial(base->vertex(v).rank));
  for (int k = 0; k < base->num_edge_pairs(); ++k) {
    const auto& e = base->edge(2 * k);
    m.add_edge_pair(2 * k, e.origin, e.terminus, 0, 0);
  }
  m.base_vertex = base->base();
  return m;
}

namespace {

int cycle_min(const CosetTable& t, const Word& w, int c) {
  auto cyc = coset_cycle(t, w, c);
  return *std::min_element(cyc.begin(), cyc.end());
}

std::string ename(const PrecoverMorphism& m, int e) {
  return m.base->edge(m.edges[e].over).name + "." + std::to_string(e / 2);
}

Report structural(const PrecoverMorphism& m) {
  Report r;
  if (!m.base) {
    r.add("morphism has no base");
    return r;
  }
  r.merge(validate(*m.base), "base: ");
  if (!r.ok()) return r;
  const auto& g = *m.base;
  if (m.num_vertices() > 0 && (m.base_vertex < 0 || m.base_vertex >= m.num_vertices()))
    r.add("total base vertex out of range");
  for (int v = 0; v < m.num_vertices(); ++v) {
    const auto& x = m.vertices[v];
    if (x.over < 0 || x.over >= g.num_vertices()) {
      r.add("vertex " + std::to_string(v) + ": maps to no base vertex");
      continue;
    }
    if (x.table.rank() != g.vertex(x.over).rank)
      r.add("vertex " + vertex_label(m, v) + ": table rank differs from base vertex rank");
    else
      r.merge(validate_table(x.table), "vertex " + vertex_label(m, v) + ": ");
  }
  if (!r.ok()) return r;
  if (m.num_edges() % 2) r.add("odd number of total edges");
  for (int e = 0; e < m.num_edges(); ++e) {
    const auto& x = m.edges[e];
    if (x.over < 0 || x.over >= g.num_edges() || x.origin < 0 || x.origin >= m.num_vertices() ||
        x.terminus < 0 || x.terminus >= m.num_vertices() || x.reverse != (e ^ 1) ||
        x.reverse >= m.num_edges()) {
      r.add("edge " + std::to_string(e) + ": index out of range or broken pairing");
      continue;
    }
    const auto& y = m.edges[x.reverse];
    const auto& b = g.edge(x.over);
    if (y.over != b.reverse) r.add("edge " + ename(m, e) + ": reverse lies over the wrong base edge");
    if (y.origin != x.terminus || y.terminus != x.origin)
      r.add("edge " + ename(m, e) + ": endpoints do not match its reverse");
    if (m.vertices[x.terminus].over != b.terminus || m.vertices[x.origin].over != b.origin)
      r.add("edge " + ename(m, e) + ": graph map does not respect endpoints");
    if (x.anchor < 0 || x.anchor >= m.vertices[x.terminus].index())
      r.add("edge " + ename(m, e) + ": anchor out of range");
  }
  return r;
}

}  // namespace

Report validate_precover(const PrecoverMorphism& m) {
  Report r = structural(m);
  if (!r.ok()) return r;
  for (int e = 0; e < m.num_edges(); e += 2) {
    int a = m.edge_degree(e), b = m.edge_degree(e + 1);
    if (a != b)
      r.add("degree mismatch at edge " + ename(m, e) + ": " + std::to_string(a) + " vs " +
            std::to_string(b));
  }
  for (int v = 0; v < m.num_vertices(); ++v) {
    std::map<std::pair<int, int>, int> seen;
    for (int e : m.incoming(v)) {
      int c = cycle_min(m.vertices[v].table, m.edge_word(e), m.edges[e].anchor);
      auto [it, fresh] = seen.emplace(std::make_pair(m.edges[e].over, c), e);
      if (!fresh)
        r.add("vertex " + vertex_label(m, v) + ": edges " + ename(m, it->second) + " and " + ename(m, e) +
              " realize the same elevation");
    }
  }
  return r;
}

std::vector<HangingSlot> hanging_slots(const PrecoverMorphism& m) {
  std::vector<HangingSlot> out;
  const auto& g = *m.base;
  for (int v = 0; v < m.num_vertices(); ++v) {
    const auto& t = m.vertices[v].table;
    std::set<std::pair<int, int>> realized;
    for (int e : m.incoming(v))
      realized.emplace(m.edges[e].over, cycle_min(t, m.edge_word(e), m.edges[e].anchor));
    for (int be : g.incoming(m.vertices[v].over)) {
      const Word& w = g.edge(be).word;
      std::vector<bool> done(t.size(), false);
      for (int c = 0; c < t.size(); ++c) {
        if (done[c]) continue;
        auto cyc = coset_cycle(t, w, c);
        for (int x : cyc) done[x] = true;
        if (!realized.count({be, c}))
          out.push_back({v, be, c, static_cast<int>(cyc.size()), m.is_cyclic(v)});
      }
    }
  }
  return out;
}

Report validate_cover(const PrecoverMorphism& m) {
  Report r = validate_precover(m);
  if (!r.ok()) return r;
  for (const auto& s : hanging_slots(m))
    r.add("missing elevation at vertex " + vertex_label(m, s.vertex) + " over edge " +
          m.base->edge(s.base_edge).name + " (coset " + std::to_string(s.coset) + ", degree " +
          std::to_string(s.degree) + "): hanging slot present");
  return r;
}

std::vector<long> index_sums(const PrecoverMorphism& m) {
  std::vector<long> sums(m.base->num_vertices(), 0);
  for (const auto& v : m.vertices) sums[v.over] += v.index();
  return sums;
}

bool total_connected(const PrecoverMorphism& m) {
  if (m.num_vertices() == 0) return true;
  std::vector<bool> seen(m.num_vertices(), false);
  std::vector<std::vector<int>> adj(m.num_vertices());
  for (const auto& e : m.edges) adj[e.origin].push_back(e.terminus);
  std::vector<int> stack{0};
  seen[0] = true;
  int reached = 1;
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    for (int d : adj[c])
      if (!seen[d]) {
        seen[d] = true;
        ++reached;
        stack.push_back(d);
      }
  }
  return reached == m.num_vertices();
}

long degree(const PrecoverMorphism& m) {
  if (!total_connected(m)) throw InvalidInput("degree: disconnected total graph");
  auto sums = index_sums(m);
  for (long s : sums)
    if (s != sums.front()) throw InvalidInput("degree: inconsistent index sums");
  return sums.front();
}

long predegree(const PrecoverMorphism& m) {
  auto sums = index_sums(m);
  return sums.empty() ? 0 : *std::max_element(sums.begin(), sums.end());
}

GraphOfGroups total_graph(const PrecoverMorphism& m) {
  GraphOfGroups t;
  std::vector<SchreierBasis> bases;
  bases.reserve(m.vertices.size());
  for (int v = 0; v < m.num_vertices(); ++v) {
    const auto& x = m.vertices[v];
    bases.emplace_back(x.table);
    t.add_vertex(vertex_label(m, v), bases.back().subgroup_rank(), m.base->vertex(x.over).kind);
  }
  auto word_of = [&](int e) {
    const auto& x = m.edges[e];
    const auto& s = bases[x.terminus];
    const Word& w = m.edge_word(e);
    int d = m.edge_degree(e);
    const Word& g = s.representatives()[x.anchor];
    return s.rewrite(g * w.pow(d) * g.inverse());
  };
  for (int e = 0; e < m.num_edges(); e += 2)
    t.add_edge_pair(ename(m, e), m.edges[e].origin, m.edges[e].terminus, word_of(e), word_of(e + 1));
  t.set_base(m.base_vertex);
  return t;
}

PrecoverMorphism disjoint_union(const std::vector<PrecoverMorphism>& ms) {
  if (ms.empty()) throw InvalidInput("disjoint_union: no components");
  PrecoverMorphism out;
  out.base = ms.front().base;
  out.base_vertex = ms.front().base_vertex;
  for (const auto& m : ms) {
    if (m.base != out.base) throw InvalidInput("disjoint_union: components over different bases");
    int voff = out.num_vertices(), eoff = out.num_edges();
    for (const auto& v : m.vertices) out.vertices.push_back(v);
    for (const auto& e : m.edges)
      out.edges.push_back({e.over, e.origin + voff, e.terminus + voff, e.reverse + eoff, e.anchor});
  }
  // Copies of one component share names; fall back to positional labels.
  std::set<std::string> seen;
  for (int v = 0; v < out.num_vertices(); ++v)
    if (!seen.insert(vertex_label(out, v)).second) {
      for (auto& x : out.vertices) x.name.clear();
      break;
    }
  return out;
}

PrecoverMorphism splice_slots(const PrecoverMorphism& m,
                              const std::vector<std::pair<HangingSlot, HangingSlot>>& matches) {
  auto slots = hanging_slots(m);
  auto find = [&](const HangingSlot& s) -> const HangingSlot& {
    for (const auto& h : slots)
      if (h.vertex == s.vertex && h.base_edge == s.base_edge && h.coset == s.coset) return h;
    throw InvalidInput("splice: no hanging slot at vertex " + std::to_string(s.vertex) + " over edge " +
                       m.base->edge(s.base_edge).name + " coset " + std::to_string(s.coset));
  };
  std::set<std::tuple<int, int, int>> used;
  PrecoverMorphism out = m;
  for (const auto& [a0, b0] : matches) {
    const auto& a = find(a0);
    const auto& b = find(b0);
    for (const auto* s : {&a, &b})
      if (!used.emplace(s->vertex, s->base_edge, s->coset).second)
        throw InvalidInput("splice: slot reused");
    if (b.base_edge != m.base->edge(a.base_edge).reverse)
      throw InvalidInput("splice: slots lie over different edge orbits or the same side");
    if (a.degree != b.degree)
      throw InvalidInput("splice: degree mismatch (" + std::to_string(a.degree) + " vs " +
                         std::to_string(b.degree) + ")");
    out.add_edge_pair(a.base_edge, b.vertex, a.vertex, a.coset, b.coset);
  }
  return out;
}

PrecoverMorphism splice(const std::vector<PrecoverMorphism>& ms,
                        const std::vector<std::pair<SlotRef, SlotRef>>& matches) {
  PrecoverMorphism u = disjoint_union(ms);
  std::vector<int> offset;
  int acc = 0;
  for (const auto& m : ms) {
    offset.push_back(acc);
    acc += m.num_vertices();
  }
  std::vector<std::pair<HangingSlot, HangingSlot>> flat;
  auto conv = [&](const SlotRef& s) {
    if (s.component < 0 || s.component >= static_cast<int>(ms.size()))
      throw InvalidInput("splice: component out of range");
    return HangingSlot{offset[s.component] + s.vertex, s.base_edge, s.coset, 0, false};
  };
  for (const auto& [a, b] : matches) flat.emplace_back(conv(a), conv(b));
  PrecoverMorphism out = splice_slots(u, flat);
  long total = 0;
  for (const auto& m : ms) total += predegree(m);
  if (predegree(out) > total) throw std::logic_error("splice: predegree is not subadditive");
  return out;
}

PrecoverMorphism split_cyclic(const PrecoverMorphism& m, int c, const std::vector<int>& to_second) {
  if (c < 0 || c >= m.num_vertices()) throw InvalidInput("split_cyclic: vertex out of range");
  if (!m.is_cyclic(c)) throw InvalidInput("split_cyclic: vertex " + vertex_label(m, c) + " is not cyclic");
  auto inc = m.incoming(c);
  std::set<int> second(to_second.begin(), to_second.end());
  for (int e : second)
    if (std::find(inc.begin(), inc.end(), e) == inc.end())
      throw InvalidInput("split_cyclic: edge " + std::to_string(e) + " is not incident to the vertex");
  if (second.empty() || second.size() == inc.size())
    throw InvalidInput("split_cyclic: both parts must be non-empty");
  PrecoverMorphism out = m;
  int c2 = out.add_vertex(m.vertices[c].over, m.vertices[c].table);
  for (int e : second) {
    out.edges[e].terminus = c2;
    out.edges[e ^ 1].origin = c2;
  }
  return out;
}

PrecoverMorphism remove_vertices(const PrecoverMorphism& m, const std::vector<int>& vs,
                                 std::vector<int>* mapping) {
  std::vector<int> map(m.num_vertices(), 0);
  for (int v : vs) map.at(v) = -1;
  PrecoverMorphism out;
  out.base = m.base;
  for (int v = 0; v < m.num_vertices(); ++v)
    if (map[v] == 0) {
      map[v] = out.num_vertices();
      out.vertices.push_back(m.vertices[v]);
    } else {
      map[v] = -1;
    }
  for (int e = 0; e < m.num_edges(); e += 2) {
    const auto& x = m.edges[e];
    if (map[x.origin] < 0 || map[x.terminus] < 0) continue;
    int k = out.num_edges();
    out.edges.push_back({x.over, map[x.origin], map[x.terminus], k + 1, x.anchor});
    out.edges.push_back({m.edges[e + 1].over, map[x.terminus], map[x.origin], k, m.edges[e + 1].anchor});
  }
  out.base_vertex = map[m.base_vertex] >= 0 ? map[m.base_vertex] : 0;
  if (mapping) *mapping = map;
  return out;
}

PrecoverMorphism merge_cyclic(const PrecoverMorphism& m, int c1, int c2) {
  if (c1 == c2) throw InvalidInput("merge_cyclic: vertices must differ");
  if (c1 < 0 || c2 < 0 || c1 >= m.num_vertices() || c2 >= m.num_vertices())
    throw InvalidInput("merge_cyclic: vertex out of range");
  if (!m.is_cyclic(c1) || !m.is_cyclic(c2)) throw InvalidInput("merge_cyclic: vertices must be cyclic");
  if (m.vertices[c1].over != m.vertices[c2].over)
    throw InvalidInput("merge_cyclic: vertices lie over distinct base vertices");
  if (m.vertices[c1].index() != m.vertices[c2].index())
    throw InvalidInput("merge_cyclic: index mismatch (" + std::to_string(m.vertices[c1].index()) +
                       " vs " + std::to_string(m.vertices[c2].index()) + ")");
  PrecoverMorphism out = m;
  for (auto& e : out.edges) {
    if (e.terminus == c2) e.terminus = c1;
    if (e.origin == c2) e.origin = c1;
  }
  std::set<int> overs;
  for (int e : out.incoming(c1))
    if (!overs.insert(out.edges[e].over).second)
      throw InvalidInput("merge_cyclic: both vertices realize the elevation over edge " +
                         m.base->edge(out.edges[e].over).name);
  return remove_vertices(out, {c2});
}

PrecoverMorphism detach_edge(const PrecoverMorphism& m, int e) {
  if (e < 0 || e >= m.num_edges()) throw InvalidInput("detach_edge: edge out of range");
  const auto& x = m.edges[e];
  if (m.is_cyclic(x.origin) == m.is_cyclic(x.terminus))
    throw InvalidInput("detach_edge: edge does not join a cyclic and a non-cyclic vertex");
  PrecoverMorphism out = m;
  int k = e & ~1;
  out.edges.erase(out.edges.begin() + k, out.edges.begin() + k + 2);
  for (int i = 0; i < out.num_edges(); ++i) out.edges[i].reverse = i ^ 1;
  return out;
}

namespace {

// Equivariant bijection of cosets with 0 -> c, if one exists.
std::optional<std::vector<int>> coset_iso(const CosetTable& a, const CosetTable& b, int c) {
  if (a.size() != b.size() || a.rank() != b.rank()) return std::nullopt;
  std::vector<int> pi(a.size(), -1), back(b.size(), -1);
  pi[0] = c;
  back[c] = 0;
  std::vector<int> order{0};
  for (std::size_t q = 0; q < order.size(); ++q) {
    int x = order[q];
    for (int i = 1; i <= a.rank(); ++i)
      for (int l : {i, -i}) {
        int y = a.act(x, l), z = b.act(pi[x], l);
        if (pi[y] == -1) {
          if (back[z] != -1) return std::nullopt;
          pi[y] = z;
          back[z] = y;
          order.push_back(y);
        } else if (pi[y] != z) {
          return std::nullopt;
        }
      }
  }
  return pi;
}

using EdgeKey = std::tuple<int, int, int, int, int>;

EdgeKey edge_key(const PrecoverMorphism& m, int e, const std::vector<int>& sigma,
                 const std::vector<std::vector<int>>& pi) {
  const auto& x = m.edges[e];
  const auto& y = m.edges[e ^ 1];
  const auto& tt = m.vertices[x.terminus].table;
  const auto& to = m.vertices[x.origin].table;
  const Word& w = m.edge_word(e);
  const Word& wr = m.edge_word(e ^ 1);
  // Images under the relabelling live in the other morphism, but the action is
  // the same F-set, so cycles can be walked in the source and mapped.
  int a = x.anchor, b = y.anchor;
  int best_j = 0, best = pi[x.terminus][a];
  auto cyc = coset_cycle(tt, w, a);
  for (int j = 1; j < static_cast<int>(cyc.size()); ++j)
    if (pi[x.terminus][cyc[j]] < best) {
      best = pi[x.terminus][cyc[j]];
      best_j = j;
    }
  int partner = b;
  for (int j = 0; j < best_j; ++j) partner = to.walk(partner, wr);
  return {x.over, sigma[x.origin], sigma[x.terminus], best, pi[x.origin][partner]};
}

struct IsoSearch {
  const PrecoverMorphism& a;
  const PrecoverMorphism& b;
  std::vector<int> sigma;
  std::vector<std::vector<int>> pi;
  std::vector<bool> used;
  std::multiset<EdgeKey> target;

  bool partial_ok(int assigned) {
    for (int e = 0; e < a.num_edges(); ++e) {
      const auto& x = a.edges[e];
      if (x.origin >= assigned || x.terminus >= assigned) continue;
      if (!target.count(edge_key(a, e, sigma, pi))) return false;
    }
    return true;
  }

  bool recurse(int v) {
    if (v == a.num_vertices()) {
      std::multiset<EdgeKey> mine;
      for (int e = 0; e < a.num_edges(); ++e) mine.insert(edge_key(a, e, sigma, pi));
      return mine == target;
    }
    for (int j = 0; j < b.num_vertices(); ++j) {
      if (used[j] || b.vertices[j].over != a.vertices[v].over ||
          b.vertices[j].index() != a.vertices[v].index())
        continue;
      for (int c = 0; c < b.vertices[j].index(); ++c) {
        auto p = coset_iso(a.vertices[v].table, b.vertices[j].table, c);
        if (!p) continue;
        sigma[v] = j;
        pi[v] = *p;
        used[j] = true;
        if (partial_ok(v + 1) && recurse(v + 1)) return true;
        used[j] = false;
      }
    }
    return false;
  }
};

}  // namespace

bool isomorphic(const PrecoverMorphism& a, const PrecoverMorphism& b) {
  if (a.base != b.base || a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges())
    return false;
  if (index_sums(a) != index_sums(b)) return false;
  IsoSearch s{a, b, std::vector<int>(a.num_vertices(), -1), std::vector<std::vector<int>>(a.num_vertices()),
              std::vector<bool>(b.num_vertices(), false), {}};
  std::vector<int> id_sigma(b.num_vertices());
  std::iota(id_sigma.begin(), id_sigma.end(), 0);
  std::vector<std::vector<int>> id_pi;
  for (const auto& v : b.vertices) {
    std::vector<int> p(v.index());
    std::iota(p.begin(), p.end(), 0);
    id_pi.push_back(std::move(p));
  }
  for (int e = 0; e < b.num_edges(); ++e) s.target.insert(edge_key(b, e, id_sigma, id_pi));
  return s.recurse(0);
}

}  // namespace gogbench
