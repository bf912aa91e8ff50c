#include "gogbench/gog.hpp"

#include <algorithm>
#include <cstdlib>
#include <queue>
#include <sstream>

namespace gogbench {

int GraphOfGroups::add_vertex(std::string name, int rank, VertexKind kind) {
  vertices_.push_back({std::move(name), rank, kind});
  return num_vertices() - 1;
}

int GraphOfGroups::add_edge_pair(std::string name, int u, int v, Word word_fwd, Word word_bwd) {
  if (u < 0 || u >= num_vertices() || v < 0 || v >= num_vertices())
    throw InvalidInput("edge " + name + " has an endpoint out of range");
  int e = num_edges();
  edges_.push_back({name, u, v, e + 1, std::move(word_fwd)});
  edges_.push_back({name + "~", v, u, e, std::move(word_bwd)});
  return e;
}

int GraphOfGroups::vertex_index(const std::string& name) const {
  for (int v = 0; v < num_vertices(); ++v)
    if (vertices_[v].name == name) return v;
  return -1;
}

int GraphOfGroups::edge_index(const std::string& name) const {
  for (int e = 0; e < num_edges(); ++e)
    if (edges_[e].name == name) return e;
  return -1;
}

std::vector<int> GraphOfGroups::incoming(int v) const {
  std::vector<int> out;
  for (int e = 0; e < num_edges(); ++e)
    if (edges_[e].terminus == v) out.push_back(e);
  return out;
}

std::vector<int> GraphOfGroups::outgoing(int v) const {
  std::vector<int> out;
  for (int e = 0; e < num_edges(); ++e)
    if (edges_[e].origin == v) out.push_back(e);
  return out;
}

std::vector<int> distances(const GraphOfGroups& g, int from) {
  std::vector<int> dist(g.num_vertices(), -1);
  if (from < 0 || from >= g.num_vertices()) return dist;
  std::vector<std::vector<int>> adj(g.num_vertices());
  for (const auto& e : g.edges()) adj[e.origin].push_back(e.terminus);
  std::queue<int> q;
  dist[from] = 0;
  q.push(from);
  while (!q.empty()) {
    int c = q.front();
    q.pop();
    for (int d : adj[c])
      if (dist[d] == -1) {
        dist[d] = dist[c] + 1;
        q.push(d);
      }
  }
  return dist;
}

bool is_connected(const GraphOfGroups& g) {
  if (g.num_vertices() == 0) return true;
  auto d = distances(g, 0);
  return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

bool disconnects(const GraphOfGroups& g, const std::vector<int>& removed) {
  std::vector<bool> gone(g.num_vertices(), false);
  for (int v : removed) gone.at(v) = true;
  int start = -1, remaining = 0;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (!gone[v]) {
      ++remaining;
      if (start < 0) start = v;
    }
  if (remaining <= 1) return false;
  std::vector<bool> seen(g.num_vertices(), false);
  std::vector<int> stack{start};
  seen[start] = true;
  int reached = 1;
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    for (const auto& e : g.edges())
      if (e.origin == c && !gone[e.terminus] && !seen[e.terminus]) {
        seen[e.terminus] = true;
        ++reached;
        stack.push_back(e.terminus);
      }
  }
  return reached < remaining;
}

Report validate(const GraphOfGroups& g) {
  Report r;
  if (g.num_vertices() == 0) {
    r.add("graph has no vertices");
    return r;
  }
  if (g.base() < 0 || g.base() >= g.num_vertices()) r.add("base vertex out of range");
  for (int v = 0; v < g.num_vertices(); ++v) {
    const auto& x = g.vertex(v);
    if (x.rank < 1) r.add("vertex " + x.name + ": rank must be >= 1");
    if (x.kind == VertexKind::Cyclic && x.rank != 1)
      r.add("vertex " + x.name + ": cyclic vertex must have rank 1");
    for (int u = 0; u < v; ++u)
      if (g.vertex(u).name == x.name) r.add("duplicate vertex name " + x.name);
  }
  if (g.num_edges() % 2) r.add("odd number of oriented edges");
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto& x = g.edge(e);
    if (x.origin < 0 || x.origin >= g.num_vertices() || x.terminus < 0 ||
        x.terminus >= g.num_vertices()) {
      r.add("edge " + x.name + ": endpoint out of range");
      continue;
    }
    if (x.reverse < 0 || x.reverse >= g.num_edges() || x.reverse == e ||
        g.edge(x.reverse).reverse != e) {
      r.add("edge " + x.name + ": involution is not a fixed-point-free pairing");
      continue;
    }
    const auto& y = g.edge(x.reverse);
    if (y.origin != x.terminus || y.terminus != x.origin)
      r.add("edge " + x.name + ": endpoints do not match its reverse");
    if (x.word.rank() != g.vertex(x.terminus).rank)
      r.add("edge " + x.name + ": word rank " + std::to_string(x.word.rank()) +
            " does not match vertex " + g.vertex(x.terminus).name);
    if (x.word.is_identity()) r.add("edge " + x.name + ": trivial edge embedding");
    if (e % 2 == 0)
      for (int f = 0; f < e; f += 2)
        if (g.edge(f).name == x.name) r.add("duplicate edge name " + x.name);
  }
  if (r.ok() && !is_connected(g)) r.add("disconnected");
  return r;
}

Pair induced_pair(const GraphOfGroups& g, int v, Report* report) {
  const auto& x = g.vertex(v);
  if (x.kind == VertexKind::Cyclic && report)
    report->add("vertex " + x.name + " is cyclic: induced pair is degenerate");
  Pair p{x.rank, {}};
  std::vector<int> source;
  for (int e : g.incoming(v)) {
    const auto& w = g.edge(e).word;
    if (w.is_identity()) {
      if (report) report->add("edge " + g.edge(e).name + ": trivial edge embedding");
      continue;
    }
    ConjClass c = conj_canonical(w);
    for (std::size_t j = 0; j < p.peripheral.size(); ++j)
      if (p.peripheral[j] == c && report)
        report->add("vertex " + x.name + ": duplicate conjugacy class " + c.canonical.str() +
                    " (edges " + g.edge(source[j]).name + ", " + g.edge(e).name + ")");
    p.peripheral.push_back(c);
    source.push_back(e);
  }
  return p;
}

Pair induced_pair(const GraphOfGroups& g, int v) {
  Report r;
  Pair p = induced_pair(g, v, &r);
  if (!r.ok()) throw InvalidInput(r.str());
  return p;
}

Report check_normal_form(const GraphOfGroups& g) {
  Report r;
  for (int e = 0; e < g.num_edges(); e += 2) {
    const auto& x = g.edge(e);
    auto ko = g.vertex(x.origin).kind, kt = g.vertex(x.terminus).kind;
    if (ko == kt)
      r.add("edge " + x.name + " joins two " +
            (ko == VertexKind::Cyclic ? "cyclic" : "non-cyclic") + " vertices");
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto& x = g.edge(e);
    if (g.vertex(x.terminus).kind != VertexKind::Cyclic) continue;
    if (x.word.size() != 1)
      r.add("edge " + x.name + ": word " + x.word.str() + " does not generate cyclic vertex " +
            g.vertex(x.terminus).name);
  }
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (g.vertex(v).kind == VertexKind::Cyclic) continue;
    Report local;
    Pair p = induced_pair(g, v, &local);
    if (local.ok()) local.merge(check_malnormal(p));
    r.merge(local, "vertex " + g.vertex(v).name + ": ");
  }
  return r;
}

long euler_characteristic(const GraphOfGroups& g) {
  long chi = 0;
  for (const auto& v : g.vertices()) chi += 1 - v.rank;
  return chi;
}

std::vector<bool> spanning_tree(const GraphOfGroups& g) {
  const int pairs = g.num_edge_pairs();
  std::vector<int> by_name(pairs);
  for (int k = 0; k < pairs; ++k) by_name[k] = k;
  std::sort(by_name.begin(), by_name.end(),
            [&](int a, int b) { return g.edge(2 * a).name < g.edge(2 * b).name; });
  std::vector<bool> tree(pairs, false), seen(g.num_vertices(), false);
  std::queue<int> q;
  q.push(g.base());
  seen[g.base()] = true;
  while (!q.empty()) {
    int c = q.front();
    q.pop();
    for (int k : by_name) {
      const auto& e = g.edge(2 * k);
      int other = e.origin == c ? e.terminus : e.terminus == c ? e.origin : -1;
      if (other >= 0 && !seen[other]) {
        seen[other] = true;
        tree[k] = true;
        q.push(other);
      }
    }
  }
  return tree;
}

AbelianizedPresentation abelianized_presentation(const GraphOfGroups& g) {
  AbelianizedPresentation out;
  for (int v = 0; v < g.num_vertices(); ++v) {
    out.vertex_offset.push_back(static_cast<int>(out.roster.size()));
    for (int i = 1; i <= g.vertex(v).rank; ++i)
      out.roster.push_back({GeneratorOrigin::Kind::VertexBasis, v, i, -1,
                            g.vertex(v).name + "." + std::to_string(i)});
  }
  auto tree = spanning_tree(g);
  for (int k = 0; k < g.num_edge_pairs(); ++k)
    if (!tree[k])
      out.roster.push_back({GeneratorOrigin::Kind::StableLetter, -1, 0, k, "t." + g.edge(2 * k).name});
  const std::size_t cols = out.roster.size();
  for (int k = 0; k < g.num_edge_pairs(); ++k) {
    std::vector<long> row(cols, 0);
    const auto& e = g.edge(2 * k);
    const auto& rev = g.edge(2 * k + 1);
    auto a = abelianize_word(e.word);
    for (std::size_t i = 0; i < a.size(); ++i) row[out.vertex_offset[e.terminus] + i] += a[i];
    auto b = abelianize_word(rev.word);
    for (std::size_t i = 0; i < b.size(); ++i) row[out.vertex_offset[rev.terminus] + i] -= b[i];
    out.relations.push_back(std::move(row));
  }
  return out;
}

long GogWord::total_length() const {
  long n = static_cast<long>(edges.size());
  for (const auto& w : vertex_words) n += static_cast<long>(w.size());
  return n;
}

std::string GogWord::str(const GraphOfGroups& g) const {
  std::ostringstream os;
  os << g.vertex(base).name << ':' << vertex_words.front().str();
  for (std::size_t i = 0; i < edges.size(); ++i)
    os << ' ' << g.edge(edges[i]).name << ' ' << vertex_words[i + 1].str();
  return os.str();
}

Report validate_word(const GraphOfGroups& g, const GogWord& w) {
  Report r;
  if (w.base < 0 || w.base >= g.num_vertices()) {
    r.add("word base out of range");
    return r;
  }
  if (w.vertex_words.size() != w.edges.size() + 1) {
    r.add("word must have one more vertex part than edges");
    return r;
  }
  int at = w.base;
  for (std::size_t i = 0; i <= w.edges.size(); ++i) {
    if (w.vertex_words[i].rank() != g.vertex(at).rank)
      r.add("vertex part " + std::to_string(i) + " has the wrong rank for " + g.vertex(at).name);
    if (i == w.edges.size()) break;
    int e = w.edges[i];
    if (e < 0 || e >= g.num_edges()) {
      r.add("edge " + std::to_string(i) + " out of range");
      return r;
    }
    if (g.edge(e).origin != at)
      r.add("endpoint mismatch at edge " + std::to_string(i) + " (" + g.edge(e).name + ")");
    at = g.edge(e).terminus;
  }
  if (at != w.base) r.add("endpoint mismatch: path does not close at the base vertex");
  return r;
}

int word_length(const GraphOfGroups& g, const GogWord& w) {
  auto r = validate_word(g, w);
  if (!r.ok()) throw InvalidInput(r.str());
  return static_cast<int>(w.edges.size());
}

bool in_cyclic_subgroup(const Word& u, const Word& w) {
  if (u.is_identity()) return true;
  auto [core, conj] = cyclic_reduce(w);
  auto pr = primitive_root(core);
  Word root = conj * pr.root * conj.inverse();
  long rest = static_cast<long>(u.size()) - 2 * static_cast<long>(conj.size());
  long period = static_cast<long>(pr.root.size());
  if (rest <= 0 || rest % period) return false;
  long k = rest / period;
  if (k % pr.exponent) return false;
  return root.pow(k) == u || root.pow(-k) == u;
}

bool is_locally_reduced(const GraphOfGroups& g, const GogWord& w) {
  for (std::size_t i = 0; i + 1 < w.edges.size(); ++i) {
    int e = w.edges[i];
    if (w.edges[i + 1] == g.edge(e).reverse && in_cyclic_subgroup(w.vertex_words[i + 1], g.edge(e).word))
      return false;
  }
  return true;
}

namespace {

struct WordSearch {
  const GraphOfGroups& g;
  int length;
  long limit;
  std::vector<int> dist;
  std::vector<GogWord>* out;
  GogWord cur;
  std::vector<Letter> part;  // letters of the current vertex part
  int at = 0;

  bool full() const { return static_cast<long>(out->size()) >= limit; }

  void recurse(int remaining) {
    if (full()) return;
    if (dist[at] < 0 || dist[at] > remaining) return;
    if (remaining == 0) {
      GogWord w = cur;
      w.vertex_words.push_back(free_reduce(part, g.vertex(at).rank));
      if (!w.is_trivial()) out->push_back(std::move(w));
      return;
    }
    const int r = g.vertex(at).rank;
    for (Letter l = -r; l <= r; ++l) {
      if (l == 0 || (!part.empty() && part.back() == -l)) continue;
      part.push_back(l);
      recurse(remaining - 1);
      part.pop_back();
      if (full()) return;
    }
    for (int e : g.outgoing(at)) {
      Word u = free_reduce(part, r);
      if (!cur.edges.empty() && e == g.edge(cur.edges.back()).reverse &&
          in_cyclic_subgroup(u, g.edge(cur.edges.back()).word))
        continue;
      auto saved_part = part;
      int saved_at = at;
      cur.vertex_words.push_back(u);
      cur.edges.push_back(e);
      part.clear();
      at = g.edge(e).terminus;
      recurse(remaining - 1);
      at = saved_at;
      part = saved_part;
      cur.edges.pop_back();
      cur.vertex_words.pop_back();
      if (full()) return;
    }
  }
};

}  // namespace

std::vector<GogWord> enumerate_gog_words(const GraphOfGroups& g, int max_total_length, long limit) {
  std::vector<GogWord> out;
  auto dist = distances(g, g.base());
  for (int len = 1; len <= max_total_length && static_cast<long>(out.size()) < limit; ++len) {
    WordSearch s{g, len, limit, dist, &out, GogWord{g.base(), {}, {}}, {}, g.base()};
    s.recurse(len);
  }
  return out;
}

}  // namespace gogbench
