#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gogbench/cli.hpp"
#include "gogbench/document.hpp"
#include "gogbench/homology.hpp"

namespace py = pybind11;
using namespace gogbench;

namespace {

py::object to_int(const mpz_class& x) { return py::module_::import("builtins").attr("int")(x.get_str()); }

py::list to_rows(const IntMatrix& m) {
  py::list rows;
  for (int r = 0; r < m.rows(); ++r) {
    py::list row;
    for (int c = 0; c < m.cols(); ++c) row.append(to_int(m.at(r, c)));
    rows.append(row);
  }
  return rows;
}

IntMatrix from_rows(const std::vector<std::vector<py::int_>>& rows, int cols) {
  if (cols < 0) {
    if (rows.empty()) throw InvalidInput("matrix: no rows and no column count");
    cols = static_cast<int>(rows.front().size());
  }
  IntMatrix m(static_cast<int>(rows.size()), cols);
  for (int r = 0; r < m.rows(); ++r) {
    if (static_cast<int>(rows[r].size()) != cols) throw InvalidInput("matrix: ragged rows");
    for (int c = 0; c < cols; ++c) m.at(r, c) = mpz_class(py::str(rows[r][c]).cast<std::string>());
  }
  return m;
}

py::dict group_dict(const AbelianGroup& a) {
  py::list divisors;
  for (const auto& d : a.divisors) divisors.append(to_int(d));
  py::dict out;
  out["betti"] = a.betti;
  out["divisors"] = divisors;
  out["text"] = a.str();
  return out;
}

const PrecoverMorphism& need_morphism(const Document& d) {
  if (!d.morphism) throw InvalidInput("expected a precover or cover document");
  return *d.morphism;
}

const TorsionPiece& need_piece(const Document& d) {
  if (!d.piece) throw InvalidInput("expected a torsion piece document");
  return *d.piece;
}

}  // namespace

PYBIND11_MODULE(_gogbench, m) {
  m.doc() = "Graphs of free groups with cyclic edge groups: covers, homology and torsion towers";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<NotFound>(m, "NotFound", PyExc_LookupError);
  py::register_exception<SearchLimit>(m, "SearchLimit", PyExc_RuntimeError);

  py::enum_<DocKind>(m, "DocKind")
      .value("GOG", DocKind::Gog)
      .value("PRECOVER", DocKind::Precover)
      .value("TORSION_PIECE", DocKind::TorsionPiece)
      .value("TOWER", DocKind::Tower);

  py::class_<Document>(m, "Document")
      .def_readonly("kind", &Document::kind)
      .def_readonly("cover", &Document::cover)
      .def("dumps", [](const Document& d) { return dump_document(d); })
      .def("save", [](const Document& d, const std::string& path) { save_document(d, path); });

  m.def("load", &load_document, py::arg("path"));
  m.def("loads", &parse_document, py::arg("text"));

  m.def("validate", [](const Document& d) {
    Report r;
    if (d.morphism) r = d.cover ? validate_cover(*d.morphism) : validate_precover(*d.morphism);
    else if (d.piece) r = check_torsion_piece(*d.piece);
    else r = validate(*d.gog);
    return r.issues;
  });

  m.def("h1", [](const Document& d) {
    if (d.morphism) return group_dict(h1(total_graph(*d.morphism)));
    if (d.piece) return group_dict(d.piece->certificate.h1);
    return group_dict(h1(*d.gog));
  });

  m.def("euler_characteristic", [](const Document& d) {
    return d.morphism ? euler_characteristic(total_graph(*d.morphism)) : euler_characteristic(*d.gog);
  });

  m.def("degree", [](const Document& d) { return degree(need_morphism(d)); });
  m.def("predegree", [](const Document& d) {
    return d.piece ? predegree(d.piece->piece) : predegree(need_morphism(d));
  });

  m.def(
      "snf",
      [](const std::vector<std::vector<py::int_>>& rows) {
        SmithForm s = snf(from_rows(rows, -1));
        py::dict out;
        out["U"] = to_rows(s.U);
        out["D"] = to_rows(s.D);
        out["V"] = to_rows(s.V);
        out["rank"] = s.rank;
        return out;
      },
      py::arg("rows"));

  m.def(
      "cokernel",
      [](const std::vector<std::vector<py::int_>>& rows, int cols) {
        return group_dict(cokernel(from_rows(rows, cols)));
      },
      py::arg("rows"), py::arg("cols") = -1);

  m.def(
      "enumerate_subgroups",
      [](int rank, int max_index) {
        std::vector<std::vector<std::vector<int>>> out;
        for (const auto& t : enumerate_subgroups(rank, max_index)) out.push_back(t.action());
        return out;
      },
      py::arg("rank"), py::arg("max_index"));

  m.def(
      "elevations",
      [](const Document& d, const std::string& vertex, const std::vector<std::vector<int>>& table) {
        const GraphOfGroups& g = *d.gog;
        int v = g.vertex_index(vertex);
        if (v < 0) throw InvalidInput("unknown vertex " + vertex);
        CosetTable t = CosetTable::make(g.vertex(v).rank, table);
        SchreierBasis s(t);
        Pair pair = induced_pair(g, v);
        py::list out;
        for (const auto& c : pair.peripheral)
          for (const auto& e : elevations(t, s, c)) {
            py::dict row;
            row["class"] = c.canonical.str();
            row["degree"] = e.degree;
            row["anchor"] = e.anchor();
            row["representative"] = e.representative.str();
            out.append(row);
          }
        return out;
      },
      py::arg("doc"), py::arg("vertex"), py::arg("table"));

  m.def(
      "enumerate_covers",
      [](const Document& d, int max_index, long cap) {
        std::vector<Document> out;
        for (const auto& c : enumerate_covers(d.gog, max_index, cap)) out.push_back(morphism_document(c, true));
        return out;
      },
      py::arg("doc"), py::arg("max_index"), py::arg("cap") = 100000);

  m.def(
      "find_torsion_piece",
      [](const Document& d, long prime, int max_index, long cap) -> std::optional<Document> {
        TorsionSearch ts;
        ts.prime = prime;
        ts.max_index = max_index;
        ts.cap = cap;
        if (auto p = find_torsion_piece(d.gog, ts)) return piece_document(*p);
        return std::nullopt;
      },
      py::arg("doc"), py::arg("prime"), py::arg("max_index") = 4, py::arg("cap") = 10000);

  m.def(
      "torsion_exponent",
      [](const Document& d, long prime) {
        const auto& m = d.piece ? d.piece->piece : need_morphism(d);
        return torsion_exponent(h1(total_graph(m)), prime);
      },
      py::arg("doc"), py::arg("prime"));

  m.def(
      "chain",
      [](const Document& d, int copies) {
        Chain ch = chain(need_piece(d), copies);
        return morphism_document(ch.morphism, false);
      },
      py::arg("piece"), py::arg("copies"));

  m.def(
      "build_tower",
      [](const Document& d, std::optional<std::vector<long>> primes, std::optional<int> steps) {
        TowerConfig cfg = d.tower ? *d.tower : TowerConfig{};
        if (primes) cfg.primes = *primes;
        if (steps) cfg.steps = *steps;
        TowerReport r;
        {
          py::gil_scoped_release release;
          r = build_tower(d.gog, cfg.primes, cfg.steps, cfg.bounds);
        }
        py::dict out;
        out["status"] = r.status;
        out["completed_steps"] = r.completed_steps;
        out["csv"] = tower_csv(r);
        out["check"] = r.check.issues;
        py::list stages;
        for (const auto& st : r.stages) {
          py::dict s;
          s["step"] = st.step;
          s["prime"] = st.prime;
          s["degree"] = st.degree;
          s["piece_predegree"] = st.piece_predegree;
          s["alpha"] = st.alpha;
          s["beta"] = st.beta;
          s["excluded_word"] = st.excluded_word;
          s["excluded"] = st.excluded;
          s["notes"] = st.notes;
          stages.append(s);
        }
        out["stages"] = stages;
        return out;
      },
      py::arg("doc"), py::arg("primes") = py::none(), py::arg("steps") = py::none());

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"gogbench"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
