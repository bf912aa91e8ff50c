#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "gogbench/homology.hpp"
#include "support.hpp"

using namespace gbtest;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::string& text) {
  try {
    parse_document(text);
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return "";
}

const char* kHnn = R"({
  "format_version": 1,
  "kind": "gog",
  "base_vertex": "a",
  "vertices": [{"name": "a", "rank": 1, "kind": "cyclic"}],
  "edges": [{"name": "t", "ends": ["a", "a"], "word_fwd": [1], "word_bwd": [1, 1, 1]}]
})";

std::string with(std::string text, const std::string& from, const std::string& to) {
  auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("fixtures round-trip byte for byte") {
  for (auto name : {"hnn_f1.json", "genus2.json", "torsion_seed.json", "seed_identity_cover.json",
                    "seed_piece_p2.json", "seed_tower.json"}) {
    INFO(name);
    std::string text = slurp(fixture(name));
    CHECK(dump_document(parse_document(text)) == text);
  }
}

TEST_CASE("document kinds") {
  CHECK(load_document(fixture("genus2.json")).kind == DocKind::Gog);

  auto cover = load_document(fixture("seed_identity_cover.json"));
  CHECK(cover.kind == DocKind::Precover);
  CHECK(cover.cover);
  REQUIRE(cover.morphism);
  CHECK(validate_cover(*cover.morphism).ok());
  CHECK(degree(*cover.morphism) == 1);

  auto piece = load_document(fixture("seed_piece_p2.json"));
  REQUIRE(piece.piece);
  CHECK(piece.piece->prime == 2);
  CHECK(check_torsion_piece(*piece.piece).ok());
  CHECK(piece.piece->certificate.h1.str() == "Z^2 ⊕ Z/2");
  CHECK(piece.piece->certificate.quotient.str() == "Z ⊕ Z/2");

  auto tower = load_document(fixture("seed_tower.json"));
  REQUIRE(tower.tower);
  CHECK(tower.tower->primes == std::vector<long>{2});
  CHECK(tower.tower->steps == 1);
  CHECK(tower.tower->bounds.cover_index == 4);
}

TEST_CASE("parse errors carry field paths") {
  CHECK(error_of(with(kHnn, "\"format_version\": 1", "\"format_version\": 7")) ==
        "$.format_version: unknown format version 7");
  CHECK(error_of(with(kHnn, ", \"word_bwd\": [1, 1, 1]", "")) ==
        "$.edges[0]: edge t: missing involution partner (word_fwd and word_bwd are both required)");
  CHECK(error_of(with(kHnn, "\"rank\": 1", "\"rank\": 0")) == "$.vertices[0].rank: must be >= 1");
  CHECK(error_of(with(kHnn, "[\"a\", \"a\"]", "[\"a\", \"b\"]")) == "$.edges[0].ends[1]: unknown vertex b");
  CHECK(error_of(with(kHnn, "\"cyclic\"", "\"round\"")).starts_with("$.vertices[0].kind:"));
  CHECK(error_of(with(kHnn, "\"kind\": \"gog\"", "\"kind\": 3")) == "$.kind: expected a string");
  CHECK(error_of("{").starts_with("parse error:"));
  CHECK(error_of(with(kHnn, "\"word_fwd\": [1]", "\"word_fwd\": [2]")).starts_with("$.edges[0].word_fwd:"));
  CHECK(error_of(kHnn).empty());
}

TEST_CASE("morphism errors") {
  std::string text = slurp(fixture("seed_identity_cover.json"));
  CHECK(error_of(with(text, "\"over\": \"v\"", "\"over\": \"w\"")).ends_with("unknown base vertex w"));
  auto anchor = text.find("\"anchor_bwd\"");
  REQUIRE(anchor != std::string::npos);
  std::string cut = text.substr(0, text.rfind(',', anchor)) + text.substr(text.find_first_of("}", anchor));
  CHECK(error_of(cut).find("missing involution partner (anchor_bwd)") != std::string::npos);
}

TEST_CASE("generated documents round-trip") {
  auto g = load_gog("torsion_seed.json");
  for (const auto& c : enumerate_covers(g, 2, 50)) {
    auto d = morphism_document(c, true);
    std::string once = dump_document(d);
    auto back = parse_document(once);
    CHECK(dump_document(back) == once);
    REQUIRE(back.morphism);
    CHECK(degree(*back.morphism) == degree(c));
    CHECK(h1(total_graph(*back.morphism)).str() == h1(total_graph(c)).str());
  }
}
