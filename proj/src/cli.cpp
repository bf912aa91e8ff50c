#include "gogbench/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "gogbench/document.hpp"

namespace gogbench {

namespace {

std::string csv_word(const Word& w) {
  std::string s = w.str();
  for (auto& ch : s)
    if (ch == ',') ch = ' ';
  return s;
}

double default_budget() {
  if (const char* env = std::getenv("GOGBENCH_BUDGET")) {
    try {
      return std::stod(env);
    } catch (const std::exception&) {
      throw InvalidInput("GOGBENCH_BUDGET: expected a number of seconds");
    }
  }
  return TowerBounds{}.budget_seconds;
}

const PrecoverMorphism& need_morphism(const Document& d, const std::string& cmd) {
  if (!d.morphism) throw InvalidInput(cmd + ": expected a precover or cover document");
  return *d.morphism;
}

CosetTable parse_table(const std::string& text, int rank) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    throw InvalidInput("--table: expected a JSON array of permutations, e.g. [[1,0],[0,1]]");
  }
  if (!j.is_array()) throw InvalidInput("--table: expected an array");
  std::vector<std::vector<int>> action;
  for (const auto& col : j) {
    if (!col.is_array()) throw InvalidInput("--table: each generator needs an array");
    action.push_back(col.get<std::vector<int>>());
  }
  return CosetTable::make(rank, std::move(action));
}

void apply_bounds(TowerBounds& b, const std::string& text) {
  if (text.empty()) return;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw InvalidInput("--bounds: expected key=value, got '" + item + "'");
    std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    try {
      if (key == "cover_index") b.cover_index = std::stoi(val);
      else if (key == "piece_index") b.piece_index = std::stoi(val);
      else if (key == "piece_cap") b.piece_cap = std::stol(val);
      else if (key == "complete_bound") b.complete_bound = std::stoi(val);
      else if (key == "complete_budget") b.complete_budget = std::stol(val);
      else if (key == "word_length") b.word_length = std::stoi(val);
      else if (key == "budget_seconds") b.budget_seconds = std::stod(val);
      else throw InvalidInput("--bounds: unknown key '" + key + "'");
    } catch (const std::logic_error&) {
      throw InvalidInput("--bounds: bad value for '" + key + "'");
    }
  }
}

std::vector<long> parse_primes(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stol(item));
    } catch (const std::logic_error&) {
      throw InvalidInput("--primes: bad entry '" + item + "'");
    }
    if (!is_prime(out.back())) throw InvalidInput("--primes: " + item + " is not prime");
  }
  return out;
}

void write_or_print(const Document& d, const std::string& path, std::ostream& out) {
  if (path.empty()) out << dump_document(d) << '\n';
  else save_document(d, path);
}

int cmd_validate(const Document& d, std::ostream& out) {
  if (d.morphism) {
    Report r = d.cover ? validate_cover(*d.morphism) : validate_precover(*d.morphism);
    if (!r.ok()) {
      out << r.str() << '\n';
      return kExitInvalid;
    }
    out << (d.cover ? "cover" : "precover") << " ok\n";
    if (d.cover) out << "degree " << degree(*d.morphism) << '\n';
    else out << "predegree " << predegree(*d.morphism) << '\n';
    return kExitOk;
  }
  if (d.piece) {
    Report r = check_torsion_piece(*d.piece);
    if (!r.ok()) {
      out << r.str() << '\n';
      return kExitInvalid;
    }
    out << "torsion piece ok\n";
    return kExitOk;
  }
  Report r = validate(*d.gog);
  if (!r.ok()) {
    out << r.str() << '\n';
    return kExitInvalid;
  }
  out << "graph of groups ok\n";
  Report nf = check_normal_form(*d.gog);
  if (nf.ok()) out << "normal form ok\n";
  else out << "normal form violations:\n" << nf.str() << '\n';
  return kExitOk;
}

int cmd_h1(const Document& d, std::ostream& out) {
  if (d.morphism) out << h1(total_graph(*d.morphism)).str() << '\n';
  else if (d.piece) out << d.piece->certificate.h1.str() << '\n';
  else out << h1(*d.gog).str() << '\n';
  return kExitOk;
}

int cmd_elevations(const Document& d, const std::string& vertex, const std::string& table, std::ostream& out) {
  const GraphOfGroups& g = *d.gog;
  int v = g.vertex_index(vertex);
  Pair pair = induced_pair(g, v);
  CosetTable t = parse_table(table, g.vertex(v).rank);
  SchreierBasis s(t);
  auto inc = g.incoming(v);
  out << "edge,class,elevation,degree,anchor,representative\n";
  for (std::size_t i = 0; i < pair.peripheral.size(); ++i) {
    auto els = elevations(t, s, pair.peripheral[i]);
    for (std::size_t k = 0; k < els.size(); ++k)
      out << g.edge(inc[i]).name << ',' << csv_word(pair.peripheral[i].canonical) << ',' << k << ','
          << els[k].degree << ',' << els[k].anchor() << ',' << csv_word(els[k].representative) << '\n';
  }
  return kExitOk;
}

int cmd_enumerate(const Document& d, int max_index, long cap, std::ostream& out, std::ostream& err) {
  auto covers = enumerate_covers(d.gog, max_index, cap);
  const long chi = euler_characteristic(*d.gog);
  out << "degree,euler_characteristic,h1\n";
  for (const auto& c : covers) {
    Report r = validate_cover(c);
    if (!r.ok()) {
      err << "cover failed re-validation: " << r.str() << '\n';
      return kExitInvalid;
    }
    GraphOfGroups t = total_graph(c);
    long deg = degree(c);
    long x = euler_characteristic(t);
    if (x != deg * chi) {
      err << "euler characteristic " << x << " is not " << deg << " * " << chi << '\n';
      return kExitInvalid;
    }
    out << deg << ',' << x << ',' << h1_invariants(t).str() << '\n';
  }
  return kExitOk;
}

void print_piece(const TorsionPiece& p, std::ostream& out) {
  const auto& c = p.certificate;
  out << "prime " << p.prime << '\n'
      << "predegree " << predegree(p.piece) << '\n'
      << "boundary " << vertex_label(p.piece, p.c1) << ' ' << vertex_label(p.piece, p.c2) << '\n'
      << "h1 " << c.h1.str() << '\n'
      << "quotient " << c.quotient.str() << '\n'
      << "factor Z/" << p.prime << '^' << c.k << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Workbench for graphs of free groups with cyclic edge groups"};
  app.require_subcommand(1);
  std::string file, out_path;

  auto add = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("file", file, "workbench document")->required();
    return sub;
  };
  auto* validate_cmd = add("validate", "validate a graph of groups, morphism or torsion piece");
  auto* h1_cmd = add("h1", "first homology");
  std::string vertex, table;
  auto* elev_cmd = add("elevations", "elevations of the incident classes to a subgroup (CSV)");
  elev_cmd->add_option("--vertex", vertex, "vertex name")->required();
  elev_cmd->add_option("--table", table, "coset table as JSON permutations")->required();
  int max_index = 3;
  long cap = 100000;
  auto* enum_cmd = add("enumerate-covers", "connected covers up to a degree (CSV)");
  enum_cmd->add_option("--max-index", max_index)->check(CLI::PositiveNumber);
  enum_cmd->add_option("--cap", cap)->check(CLI::PositiveNumber);
  long prime = 2;
  auto* piece_cmd = add("torsion-piece", "search for a torsion piece");
  piece_cmd->add_option("--prime", prime);
  piece_cmd->add_option("--max-index", max_index)->check(CLI::PositiveNumber);
  piece_cmd->add_option("--cap", cap)->check(CLI::PositiveNumber);
  piece_cmd->add_option("-o,--out", out_path, "write the piece document here");
  int copies = 2;
  auto* chain_cmd = add("chain", "chain copies of a torsion piece");
  chain_cmd->add_option("--copies", copies)->check(CLI::PositiveNumber);
  chain_cmd->add_option("-o,--out", out_path);
  CompleteOptions co;
  auto* complete_cmd = add("complete", "complete a precover to a cover");
  complete_cmd->add_option("--bound", co.bound)->check(CLI::NonNegativeNumber);
  complete_cmd->add_option("--budget", co.node_budget)->check(CLI::PositiveNumber);
  complete_cmd->add_option("-o,--out", out_path);
  int steps = -1;
  std::string primes, bounds;
  auto* tower_cmd = add("tower", "build a finite prefix of the tower (ledger CSV)");
  tower_cmd->add_option("--steps", steps);
  tower_cmd->add_option("--primes", primes, "comma separated");
  tower_cmd->add_option("--bounds", bounds, "key=value,... over the TowerBounds fields");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInvalid;
  }

  try {
    Document d = load_document(file);
    if (*validate_cmd) return cmd_validate(d, out);
    if (*h1_cmd) return cmd_h1(d, out);
    if (*elev_cmd) return cmd_elevations(d, vertex, table, out);
    if (*enum_cmd) return cmd_enumerate(d, max_index, cap, out, err);
    if (*piece_cmd) {
      if (!is_prime(prime)) throw InvalidInput("--prime: " + std::to_string(prime) + " is not prime");
      TorsionSearch ts;
      ts.prime = prime;
      ts.max_index = max_index;
      ts.cap = cap;
      auto p = find_torsion_piece(d.gog, ts);
      if (!p) {
        err << "NotFound: no torsion piece for p=" << prime << " within index " << max_index << '\n';
        return kExitNotFound;
      }
      print_piece(*p, out);
      if (!out_path.empty()) save_document(piece_document(*p), out_path);
      return kExitOk;
    }
    if (*chain_cmd) {
      if (!d.piece) throw InvalidInput("chain: expected a torsion_piece document");
      Chain c = chain(*d.piece, copies);
      AbelianGroup h = h1_invariants(total_graph(c.morphism));
      out << "copies " << copies << '\n'
          << "predegree " << predegree(c.morphism) << '\n'
          << "h1 " << h.str() << '\n'
          << "torsion_exponent " << torsion_exponent(h, d.piece->prime) << '\n';
      if (!out_path.empty()) save_document(morphism_document(c.morphism, false), out_path);
      return kExitOk;
    }
    if (*complete_cmd) {
      const auto& m = need_morphism(d, "complete");
      auto c = complete(m, co);
      if (!c) {
        err << "NotFound: no completion within bound " << co.bound << '\n';
        return kExitNotFound;
      }
      write_or_print(morphism_document(*c, true), out_path, out);
      return kExitOk;
    }
    if (*tower_cmd) {
      TowerConfig cfg = d.tower ? *d.tower : TowerConfig{};
      if (!d.tower) cfg.bounds.budget_seconds = default_budget();
      if (steps >= 0) cfg.steps = steps;
      if (!primes.empty()) cfg.primes = parse_primes(primes);
      apply_bounds(cfg.bounds, bounds);
      TowerReport r = build_tower(d.gog, cfg.primes, cfg.steps, cfg.bounds);
      out << tower_csv(r);
      for (const auto& s : r.stages) {
        err << "step " << s.step << ": p=" << s.prime << " degree=" << s.degree << " alpha=" << s.alpha
            << " beta=" << s.beta << " piece_predegree=" << s.piece_predegree << " excluded("
            << s.excluded_word << ")=" << (s.excluded ? "yes" : "no") << '\n';
        for (const auto& n : s.notes) err << "  " << n << '\n';
      }
      if (!r.check.ok()) err << "ledger check failed:\n" << r.check.str() << '\n';
      if (r.status != "ok") {
        err << r.status << '\n';
        return kExitNotFound;
      }
      return r.check.ok() ? kExitOk : kExitInvalid;
    }
  } catch (const NotFound& e) {
    err << "NotFound: " << e.what() << '\n';
    return kExitNotFound;
  } catch (const SearchLimit& e) {
    err << "NotFound: " << e.what() << '\n';
    return kExitNotFound;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace gogbench
