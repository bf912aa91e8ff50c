#include "gogbench/document.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gogbench {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InvalidInput(path + ": " + what);
}

const json& need(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing field");
  return *it;
}

std::string need_string(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = need(obj, key, path);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

long need_int(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = need(obj, key, path);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<long>();
}

Word parse_word(const json& v, int rank, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of letters");
  std::vector<Letter> letters;
  for (const auto& x : v) {
    if (!x.is_number_integer()) fail(path, "letters must be integers");
    letters.push_back(x.get<int>());
  }
  try {
    return free_reduce(letters, rank);
  } catch (const InvalidInput& e) {
    fail(path, e.what());
  }
}

json word_json(const Word& w) { return json(w.letters()); }

std::shared_ptr<GraphOfGroups> parse_gog(const json& obj, const std::string& path) {
  auto g = std::make_shared<GraphOfGroups>();
  const auto& vs = need(obj, "vertices", path);
  if (!vs.is_array()) fail(path + ".vertices", "expected an array");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    std::string p = path + ".vertices[" + std::to_string(i) + "]";
    std::string name = need_string(vs[i], "name", p);
    long rank = need_int(vs[i], "rank", p);
    if (rank < 1) fail(p + ".rank", "must be >= 1");
    std::string kind = need_string(vs[i], "kind", p);
    if (kind != "cyclic" && kind != "non-cyclic") fail(p + ".kind", "expected \"cyclic\" or \"non-cyclic\"");
    if (g->vertex_index(name) >= 0) fail(p + ".name", "duplicate vertex name " + name);
    g->add_vertex(name, static_cast<int>(rank), kind == "cyclic" ? VertexKind::Cyclic : VertexKind::NonCyclic);
  }
  const auto& es = need(obj, "edges", path);
  if (!es.is_array()) fail(path + ".edges", "expected an array");
  for (std::size_t i = 0; i < es.size(); ++i) {
    std::string p = path + ".edges[" + std::to_string(i) + "]";
    std::string name = need_string(es[i], "name", p);
    const auto& ends = need(es[i], "ends", p);
    if (!ends.is_array() || ends.size() != 2 || !ends[0].is_string() || !ends[1].is_string())
      fail(p + ".ends", "expected two vertex names");
    int u = g->vertex_index(ends[0].get<std::string>());
    int v = g->vertex_index(ends[1].get<std::string>());
    if (u < 0) fail(p + ".ends[0]", "unknown vertex " + ends[0].get<std::string>());
    if (v < 0) fail(p + ".ends[1]", "unknown vertex " + ends[1].get<std::string>());
    if (!es[i].contains("word_fwd") || !es[i].contains("word_bwd"))
      fail(p, "edge " + name + ": missing involution partner (word_fwd and word_bwd are both required)");
    Word fwd = parse_word(es[i]["word_fwd"], g->vertex(v).rank, p + ".word_fwd");
    Word bwd = parse_word(es[i]["word_bwd"], g->vertex(u).rank, p + ".word_bwd");
    if (g->edge_index(name) >= 0) fail(p + ".name", "duplicate edge name " + name);
    g->add_edge_pair(name, u, v, std::move(fwd), std::move(bwd));
  }
  if (g->num_vertices() == 0) fail(path + ".vertices", "at least one vertex is required");
  if (obj.contains("base_vertex")) {
    std::string b = need_string(obj, "base_vertex", path);
    int bi = g->vertex_index(b);
    if (bi < 0) fail(path + ".base_vertex", "unknown vertex " + b);
    g->set_base(bi);
  }
  return g;
}

json gog_json(const GraphOfGroups& g) {
  json out;
  out["base_vertex"] = g.vertex(g.base()).name;
  json vs = json::array();
  for (const auto& v : g.vertices())
    vs.push_back({{"name", v.name}, {"rank", v.rank}, {"kind", v.kind == VertexKind::Cyclic ? "cyclic" : "non-cyclic"}});
  out["vertices"] = vs;
  json es = json::array();
  for (int e = 0; e < g.num_edges(); e += 2) {
    const auto& x = g.edge(e);
    es.push_back({{"name", x.name},
                  {"ends", {g.vertex(x.origin).name, g.vertex(x.terminus).name}},
                  {"word_fwd", word_json(x.word)},
                  {"word_bwd", word_json(g.edge(e + 1).word)}});
  }
  out["edges"] = es;
  return out;
}

PrecoverMorphism parse_total(const json& obj, std::shared_ptr<const GraphOfGroups> g, const std::string& path) {
  PrecoverMorphism m;
  m.base = g;
  const auto& vs = need(obj, "vertices", path);
  if (!vs.is_array()) fail(path + ".vertices", "expected an array");
  std::map<std::string, int> names;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    std::string p = path + ".vertices[" + std::to_string(i) + "]";
    std::string name = need_string(vs[i], "name", p);
    std::string over = need_string(vs[i], "over", p);
    int ov = g->vertex_index(over);
    if (ov < 0) fail(p + ".over", "unknown base vertex " + over);
    CosetTable t;
    if (vs[i].contains("index")) {
      long d = need_int(vs[i], "index", p);
      if (d < 1) fail(p + ".index", "must be >= 1");
      if (g->vertex(ov).rank != 1) fail(p + ".index", "index form requires a rank-1 base vertex");
      t = CosetTable::cyclic(static_cast<int>(d));
    } else {
      const auto& tab = need(vs[i], "table", p);
      std::vector<std::vector<int>> act;
      if (!tab.is_array()) fail(p + ".table", "expected an array of permutations");
      for (const auto& col : tab) {
        if (!col.is_array()) fail(p + ".table", "expected an array of permutations");
        std::vector<int> c;
        for (const auto& x : col) {
          if (!x.is_number_integer()) fail(p + ".table", "entries must be integers");
          c.push_back(x.get<int>());
        }
        act.push_back(std::move(c));
      }
      t = CosetTable(g->vertex(ov).rank, std::move(act));
      auto r = validate_table(t);
      if (!r.ok()) fail(p + ".table", r.str());
    }
    if (!names.emplace(name, m.num_vertices()).second) fail(p + ".name", "duplicate vertex name " + name);
    m.add_vertex(ov, std::move(t), name);
  }
  auto lookup = [&](const json& v, const std::string& p) {
    if (!v.is_string()) fail(p, "expected a vertex name");
    auto it = names.find(v.get<std::string>());
    if (it == names.end()) fail(p, "unknown total vertex " + v.get<std::string>());
    return it->second;
  };
  const auto& es = need(obj, "edges", path);
  if (!es.is_array()) fail(path + ".edges", "expected an array");
  for (std::size_t i = 0; i < es.size(); ++i) {
    std::string p = path + ".edges[" + std::to_string(i) + "]";
    std::string over = need_string(es[i], "over", p);
    int oe = g->edge_index(over);
    if (oe < 0) fail(p + ".over", "unknown base edge " + over);
    const auto& ends = need(es[i], "ends", p);
    if (!ends.is_array() || ends.size() != 2) fail(p + ".ends", "expected two vertex names");
    int a = lookup(ends[0], p + ".ends[0]"), b = lookup(ends[1], p + ".ends[1]");
    if (!es[i].contains("anchor_bwd")) fail(p, "edge over " + over + ": missing involution partner (anchor_bwd)");
    long af = need_int(es[i], "anchor_fwd", p), ab = need_int(es[i], "anchor_bwd", p);
    m.add_edge_pair(oe, a, b, static_cast<int>(af), static_cast<int>(ab));
  }
  if (obj.contains("base_vertex")) m.base_vertex = lookup(obj["base_vertex"], path + ".base_vertex");
  return m;
}

json total_json(const PrecoverMorphism& m) {
  json out;
  out["base_vertex"] = vertex_label(m, m.base_vertex);
  json vs = json::array();
  for (int v = 0; v < m.num_vertices(); ++v) {
    const auto& x = m.vertices[v];
    json o{{"name", vertex_label(m, v)}, {"over", m.base->vertex(x.over).name}};
    if (m.base->vertex(x.over).rank == 1 && x.table == CosetTable::cyclic(x.index()))
      o["index"] = x.index();
    else
      o["table"] = x.table.action();
    vs.push_back(o);
  }
  out["vertices"] = vs;
  json es = json::array();
  for (int e = 0; e < m.num_edges(); e += 2) {
    const auto& x = m.edges[e];
    es.push_back({{"over", m.base->edge(x.over).name},
                  {"ends", {vertex_label(m, x.origin), vertex_label(m, x.terminus)}},
                  {"anchor_fwd", x.anchor},
                  {"anchor_bwd", m.edges[e + 1].anchor}});
  }
  out["edges"] = es;
  return out;
}

TowerBounds parse_bounds(const json& obj, const std::string& path) {
  TowerBounds b;
  if (!obj.is_object()) fail(path, "expected an object");
  auto get = [&](const char* key, auto& field) {
    if (!obj.contains(key)) return;
    const auto& v = obj[key];
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    field = v.get<std::remove_reference_t<decltype(field)>>();
  };
  get("cover_index", b.cover_index);
  get("piece_index", b.piece_index);
  get("piece_cap", b.piece_cap);
  get("complete_bound", b.complete_bound);
  get("complete_budget", b.complete_budget);
  get("word_length", b.word_length);
  get("budget_seconds", b.budget_seconds);
  return b;
}

json bounds_json(const TowerBounds& b) {
  return {{"cover_index", b.cover_index},         {"piece_index", b.piece_index},
          {"piece_cap", b.piece_cap},             {"complete_bound", b.complete_bound},
          {"complete_budget", b.complete_budget}, {"word_length", b.word_length},
          {"budget_seconds", b.budget_seconds}};
}

bool has_nested_object(const json& v) {
  if (!v.is_structured()) return false;
  for (const auto& x : v) {
    if (x.is_object()) return true;
    if (has_nested_object(x)) return true;
  }
  return false;
}

void render_inline(const json& v, std::string& out) {
  if (v.is_object()) {
    out += '{';
    bool first = true;
    for (const auto& [k, x] : v.items()) {
      if (!first) out += ", ";
      first = false;
      out += json(k).dump() + ": ";
      render_inline(x, out);
    }
    out += '}';
  } else if (v.is_array()) {
    out += '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ", ";
      render_inline(v[i], out);
    }
    out += ']';
  } else {
    out += v.dump();
  }
}

// Two-space indentation; anything without a nested object stays on one line.
void render(const json& v, int indent, std::string& out) {
  if (!has_nested_object(v) || v.empty()) {
    render_inline(v, out);
    return;
  }
  const std::string pad(indent + 2, ' ');
  out += v.is_object() ? "{\n" : "[\n";
  std::size_t i = 0;
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) {
      out += pad + json(k).dump() + ": ";
      render(x, indent + 2, out);
      out += ++i < v.size() ? ",\n" : "\n";
    }
  } else {
    for (const auto& x : v) {
      out += pad;
      render(x, indent + 2, out);
      out += ++i < v.size() ? ",\n" : "\n";
    }
  }
  out += std::string(indent, ' ') + (v.is_object() ? "}" : "]");
}

}  // namespace

Document parse_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("parse error: ") + e.what());
  }
  long version = need_int(j, "format_version", "$");
  if (version != kFormatVersion) fail("$.format_version", "unknown format version " + std::to_string(version));
  std::string kind = need_string(j, "kind", "$");
  Document d;
  if (kind == "gog") {
    d.kind = DocKind::Gog;
    d.gog = parse_gog(j, "$");
  } else if (kind == "precover" || kind == "cover") {
    d.kind = DocKind::Precover;
    d.cover = kind == "cover";
    d.gog = parse_gog(need(j, "base", "$"), "$.base");
    d.morphism = parse_total(need(j, "total", "$"), d.gog, "$.total");
  } else if (kind == "torsion_piece") {
    d.kind = DocKind::TorsionPiece;
    d.gog = parse_gog(need(j, "base", "$"), "$.base");
    TorsionPiece p;
    p.piece = parse_total(need(j, "total", "$"), d.gog, "$.total");
    p.prime = need_int(j, "prime", "$");
    auto find = [&](const char* key) {
      std::string n = need_string(j, key, "$");
      for (int v = 0; v < p.piece.num_vertices(); ++v)
        if (p.piece.vertices[v].name == n) return v;
      fail(std::string("$.") + key, "unknown total vertex " + n);
    };
    p.c1 = find("c1");
    p.c2 = find("c2");
    p.source_vertex = p.c1;
    if (validate_precover(p.piece).ok() && total_connected(p.piece)) {
      GraphOfGroups t = total_graph(p.piece);
      AbelianGroup a = h1(t);
      if (auto cert = torsion_certificate(a, class_image(t, a, p.c1), class_image(t, a, p.c2), p.prime))
        p.certificate = *cert;
      else
        p.certificate.h1 = a;
    }
    d.piece = std::move(p);
  } else if (kind == "tower") {
    d.kind = DocKind::Tower;
    d.gog = parse_gog(need(j, "base", "$"), "$.base");
    TowerConfig c;
    const auto& primes = need(j, "primes", "$");
    if (!primes.is_array()) fail("$.primes", "expected an array");
    c.primes.clear();
    for (const auto& p : primes) {
      if (!p.is_number_integer()) fail("$.primes", "expected integers");
      c.primes.push_back(p.get<long>());
    }
    c.steps = static_cast<int>(need_int(j, "steps", "$"));
    if (j.contains("bounds")) c.bounds = parse_bounds(j["bounds"], "$.bounds");
    d.tower = c;
  } else {
    fail("$.kind", "unknown kind " + kind);
  }
  return d;
}

Document load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

std::string dump_document(const Document& d) {
  json j;
  j["format_version"] = kFormatVersion;
  switch (d.kind) {
    case DocKind::Gog: {
      j["kind"] = "gog";
      json body = gog_json(*d.gog);
      for (auto& [k, v] : body.items()) j[k] = v;
      break;
    }
    case DocKind::Precover:
      j["kind"] = d.cover ? "cover" : "precover";
      j["base"] = gog_json(*d.gog);
      j["total"] = total_json(*d.morphism);
      break;
    case DocKind::TorsionPiece:
      j["kind"] = "torsion_piece";
      j["prime"] = d.piece->prime;
      j["base"] = gog_json(*d.gog);
      j["total"] = total_json(d.piece->piece);
      j["c1"] = vertex_label(d.piece->piece, d.piece->c1);
      j["c2"] = vertex_label(d.piece->piece, d.piece->c2);
      break;
    case DocKind::Tower:
      j["kind"] = "tower";
      j["base"] = gog_json(*d.gog);
      j["primes"] = d.tower->primes;
      j["steps"] = d.tower->steps;
      j["bounds"] = bounds_json(d.tower->bounds);
      break;
  }
  std::string out;
  render(j, 0, out);
  return out + "\n";
}

void save_document(const Document& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << dump_document(d);
}

Document gog_document(std::shared_ptr<const GraphOfGroups> g) {
  Document d;
  d.kind = DocKind::Gog;
  d.gog = std::move(g);
  return d;
}

Document morphism_document(const PrecoverMorphism& m, bool cover) {
  Document d;
  d.kind = DocKind::Precover;
  d.gog = m.base;
  d.morphism = m;
  d.cover = cover;
  return d;
}

Document piece_document(const TorsionPiece& p) {
  Document d;
  d.kind = DocKind::TorsionPiece;
  d.gog = p.piece.base;
  d.piece = p;
  return d;
}

}  // namespace gogbench
