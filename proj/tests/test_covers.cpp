#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "gogbench/covers.hpp"
#include "oracles.hpp"

using namespace gbtest;

namespace {

std::shared_ptr<const GraphOfGroups> hnn_f2() {
  auto g = std::make_shared<GraphOfGroups>();
  int v = g->add_vertex("v", 2, VertexKind::NonCyclic);
  g->add_edge_pair("t", v, v, W(2, {1}), W(2, {2}));
  return g;
}

std::shared_ptr<const GraphOfGroups> hnn_f1_untwisted() {
  auto g = std::make_shared<GraphOfGroups>();
  int a = g->add_vertex("a", 1, VertexKind::Cyclic);
  g->add_edge_pair("t", a, a, W(1, {1}), W(1, {1}));
  return g;
}

// Index-2 cover of the F_2 HNN with both generators swapping the cosets.
PrecoverMorphism hnn_double(int twist) {
  PrecoverMorphism m;
  m.base = hnn_f2();
  m.add_vertex(0, CosetTable::make(2, {{1, 0}, {1, 0}}));
  m.add_edge_pair(0, 0, 0, 0, twist);
  return m;
}

// w^k for a loop w.
GogWord power(const GogWord& w, int k) {
  GogWord out{w.base, {Word(w.vertex_words[0].rank())}, {}};
  for (int i = 0; i < k; ++i) {
    out.vertex_words.back() = out.vertex_words.back() * w.vertex_words[0];
    for (std::size_t j = 0; j < w.edges.size(); ++j) {
      out.edges.push_back(w.edges[j]);
      out.vertex_words.push_back(w.vertex_words[j + 1]);
    }
  }
  return out;
}

long lcm_upto(long d) {
  long l = 1;
  for (long i = 2; i <= d; ++i) l = std::lcm(l, i);
  return l;
}

}  // namespace

TEST_CASE("identity morphism") {
  for (auto name : {"hnn_f1.json", "genus2.json", "torsion_seed.json"}) {
    auto m = identity_morphism(load_gog(name));
    CHECK(validate_precover(m).ok());
    CHECK(validate_cover(m).ok());
    CHECK(hanging_slots(m).empty());
    CHECK(degree(m) == 1);
    CHECK(predegree(m) == 1);
  }
}

TEST_CASE("detach_edge leaves one slot per side") {
  auto seed = load_gog("torsion_seed.json");
  auto m = detach_edge(identity_morphism(seed), 0);
  CHECK(validate_precover(m).ok());
  auto slots = hanging_slots(m);
  REQUIRE(slots.size() == 2);
  CHECK(slots[0].cyclic_side != slots[1].cyclic_side);
  CHECK(predegree(m) == 1);
  auto r = validate_cover(m);
  CHECK_FALSE(r.ok());
  CHECK(r.mentions("hanging"));
  CHECK(detach_edge(identity_morphism(seed), 1).num_edges() == m.num_edges());
  CHECK_THROWS_AS(detach_edge(identity_morphism(load_gog("genus2.json")), 0), InvalidInput);
}

TEST_CASE("validation failures") {
  PrecoverMorphism bad;
  bad.base = hnn_f2();
  bad.add_vertex(0, CosetTable::make(2, {{1, 0}, {0, 1}}));
  bad.add_edge_pair(0, 0, 0, 0, 0);
  CHECK(validate_precover(bad).mentions("degree mismatch at edge"));

  auto ok = hnn_double(0);
  CHECK(validate_cover(ok).ok());
  CHECK(degree(ok) == 2);

  PrecoverMorphism missing;
  missing.base = hnn_f2();
  missing.add_vertex(0, CosetTable::make(2, {{1, 0}, {1, 0}}));
  auto r = validate_cover(missing);
  CHECK_FALSE(r.ok());
  CHECK(r.mentions("missing elevation"));

  auto id = identity_morphism(hnn_f2());
  auto two = disjoint_union({id, id});
  CHECK(validate_precover(two).ok());
  CHECK(predegree(two) == 2);
  CHECK_THROWS_AS(degree(two), InvalidInput);
}

TEST_CASE("lift_word on the double cover") {
  auto one = identity_morphism(hnn_f2());
  GogWord t{0, {Word(2), Word(2)}, {0}};
  CHECK(lift_word(one, t).in_subgroup);
  CHECK(lift_word(one, GogWord{0, {W(2, {1, -2})}, {}}).in_subgroup);

  // Crossing t from coset 0 lands on the anchored coset; twist 1 shifts it.
  auto d0 = hnn_double(0), d1 = hnn_double(1);
  CHECK(lift_word(d0, t).in_subgroup != lift_word(d1, t).in_subgroup);
  for (const auto& d : {d0, d1}) {
    CHECK(lift_word(d, power(t, 2)).in_subgroup);
    CHECK_FALSE(lift_word(d, GogWord{0, {W(2, {1})}, {}}).in_subgroup);
    CHECK(lift_word(d, GogWord{0, {W(2, {1, 2})}, {}}).in_subgroup);
  }
  auto ex = lift_word(lift_word(d0, t).in_subgroup ? d1 : d0, t);
  CHECK_FALSE(ex.in_subgroup);
  CHECK(ex.exit_step == 1);
}

TEST_CASE("enumerate_covers small cases") {
  for (auto name : {"hnn_f1.json", "genus2.json", "torsion_seed.json"}) {
    auto g = load_gog(name);
    auto one = enumerate_covers(g, 1, 100);
    REQUIRE(one.size() == 1);
    CHECK(isomorphic(one[0], identity_morphism(g)));
  }
  // Matchings oracle at degree 2: one index-2 lift with its single degree-2
  // elevation on each side (one matching), or two index-1 lifts whose two
  // slots per side match in 2 ways, one of them disconnected. Twists are
  // fixed, so the second index-2 subgroup with the same graph is not listed.
  auto covers = enumerate_covers(hnn_f1_untwisted(), 2, 100);
  std::vector<PrecoverMorphism> deg2;
  for (const auto& c : covers)
    if (degree(c) == 2) deg2.push_back(c);
  CHECK(deg2.size() == 2);
  for (std::size_t i = 0; i < deg2.size(); ++i)
    for (std::size_t j = i + 1; j < deg2.size(); ++j) CHECK_FALSE(isomorphic(deg2[i], deg2[j]));

  for (const auto& c : enumerate_covers(load_gog("genus2.json"), 2, 1000)) {
    CHECK(validate_cover(c).ok());
    if (degree(c) == 2) CHECK(euler_characteristic(total_graph(c)) == -4);
  }
  CHECK_THROWS_AS(enumerate_covers(load_gog("torsion_seed.json"), 3, 5), SearchLimit);
}

TEST_CASE("covers satisfy chi multiplicativity and closure of powers") {
  for (auto name : {"hnn_f1.json", "genus2.json", "torsion_seed.json"}) {
    INFO(name);
    auto g = load_gog(name);
    const long chi = euler_characteristic(*g);
    auto words = enumerate_gog_words(*g, 4, 12);
    long n = 0;
    for_each_cover(g, name == std::string("torsion_seed.json") ? 2 : 3, [&](const PrecoverMorphism& c) {
      ++n;
      CHECK(validate_precover(c).ok());
      CHECK(validate_cover(c).ok());
      auto sums = index_sums(c);
      CHECK(std::adjacent_find(sums.begin(), sums.end(), std::not_equal_to<>()) == sums.end());
      CHECK(degree(c) == predegree(c));
      CHECK(euler_characteristic(total_graph(c)) == degree(c) * chi);
      const int k = static_cast<int>(lcm_upto(degree(c)));
      for (const auto& w : words) CHECK(lift_word(c, power(w, k)).in_subgroup);
      return n < 300;
    });
    CHECK(n > 1);
  }
}

TEST_CASE("splice") {
  auto seed = load_gog("torsion_seed.json");
  auto d = detach_edge(identity_morphism(seed), 0);
  auto s = hanging_slots(d);
  REQUIRE(s.size() == 2);
  // Cross-match two copies.
  auto ref = [&](int comp, const HangingSlot& x) { return SlotRef{comp, x.vertex, x.base_edge, x.coset}; };
  auto glued = splice({d, d}, {{ref(0, s[0]), ref(1, s[1])}, {ref(1, s[0]), ref(0, s[1])}});
  CHECK(validate_cover(glued).ok());
  CHECK(hanging_slots(glued).empty());
  CHECK(degree(glued) == 2);
  CHECK(predegree(glued) <= 2 * predegree(d));

  auto u = splice({d, d}, {});
  CHECK(hanging_slots(u).size() == 4);

  // A degree-3 cyclic lift cannot take a degree-1 slot.
  PrecoverMorphism m = d;
  int c3 = m.add_vertex(s[0].cyclic_side ? m.vertices[s[0].vertex].over : m.vertices[s[1].vertex].over,
                        CosetTable::cyclic(3));
  const HangingSlot nc = s[0].cyclic_side ? s[1] : s[0];
  HangingSlot fresh{c3, m.base->edge(nc.base_edge).reverse, 0, 3, true};
  CHECK_THROWS_AS(splice_slots(m, {{nc, fresh}}), InvalidInput);
  CHECK_THROWS_AS(splice_slots(d, {{s[0], s[1]}, {s[0], s[1]}}), InvalidInput);
}

TEST_CASE("split and merge") {
  auto seed = load_gog("torsion_seed.json");
  auto id = identity_morphism(seed);
  int c = seed->vertex_index("C");
  auto inc = id.incoming(c);
  REQUIRE(inc.size() == 2);
  auto s = split_cyclic(id, c, {inc[0]});
  CHECK(validate_precover(s).ok());
  CHECK(s.incoming(c).size() == 1);
  CHECK(s.incoming(s.num_vertices() - 1).size() == 1);
  CHECK(isomorphic(merge_cyclic(s, c, s.num_vertices() - 1), id));
  CHECK_THROWS_AS(split_cyclic(id, seed->vertex_index("v"), {0}), InvalidInput);
  CHECK_THROWS_AS(split_cyclic(id, c, {}), InvalidInput);
  CHECK_THROWS_AS(split_cyclic(id, c, inc), InvalidInput);

  PrecoverMorphism mm = id;
  int c3 = mm.add_vertex(c, CosetTable::cyclic(3));
  CHECK_THROWS_AS(merge_cyclic(mm, c, c3), InvalidInput);
  CHECK_THROWS_AS(merge_cyclic(id, c, seed->vertex_index("D")), InvalidInput);
}

TEST_CASE("split/merge and detach/splice round-trip on random precovers") {
  auto seed = load_gog("torsion_seed.json");
  auto covers = enumerate_covers(seed, 2, 10000);
  std::mt19937 rng(211);
  int split_trials = 0, detach_trials = 0;
  for (int trial = 0; split_trials < 100 || detach_trials < 100; ++trial) {
    const auto& base_cover = covers[rng() % covers.size()];
    // Detach a random edge first so the inputs are proper precovers too.
    PrecoverMorphism m = base_cover;
    auto ds = detachable(m);
    if (trial % 2 && !ds.empty()) m = detach_edge(m, ds[rng() % ds.size()]);

    auto cs = splittable(m);
    if (!cs.empty() && split_trials < 100) {
      int c = cs[rng() % cs.size()];
      auto inc = m.incoming(c);
      std::shuffle(inc.begin(), inc.end(), rng);
      std::size_t k = 1 + rng() % (inc.size() - 1);
      auto s = split_cyclic(m, c, std::vector<int>(inc.begin(), inc.begin() + k));
      CHECK(validate_precover(s).ok());
      CHECK(isomorphic(merge_cyclic(s, c, s.num_vertices() - 1), m));
      ++split_trials;
    }
    auto es = detachable(m);
    if (!es.empty() && detach_trials < 100) {
      int e = es[rng() % es.size()];
      auto before = hanging_slots(m);
      auto d = detach_edge(m, e);
      auto after = hanging_slots(d);
      std::vector<HangingSlot> fresh;
      for (const auto& x : after)
        if (std::find(before.begin(), before.end(), x) == before.end()) fresh.push_back(x);
      REQUIRE(fresh.size() == 2);
      CHECK(isomorphic(splice_slots(d, {{fresh[0], fresh[1]}}), m));
      ++detach_trials;
    }
  }
}

TEST_CASE("complete") {
  auto seed = load_gog("torsion_seed.json");
  auto id = identity_morphism(seed);
  auto same = complete(id);
  REQUIRE(same);
  CHECK(isomorphic(*same, id));

  auto d = detach_edge(id, 2);
  auto back = complete(d, {0, 1000});
  REQUIRE(back);
  CHECK(validate_cover(*back).ok());
  CHECK(degree(*back) == 1);

  // Index-3 lift of the cyclic vertex of the twisted F_1 HNN: the [1] side
  // has one slot of degree 3, the [1,1,1] side three of degree 1.
  PrecoverMorphism m;
  m.base = load_gog("hnn_f1.json");
  m.add_vertex(0, CosetTable::cyclic(3));
  CHECK_FALSE(complete(m, {0, 1000}));
  auto grown = complete(m, {6, 200000});
  if (grown) {
    CHECK(validate_cover(*grown).ok());
    CHECK(degree(*grown) >= predegree(m));
  }
}

TEST_CASE("torsion pieces and chains") {
  auto seed = load_gog("torsion_seed.json");
  TorsionSearch ts;
  ts.prime = 2;
  ts.max_index = 4;
  auto piece = find_torsion_piece(seed, ts);
  REQUIRE(piece);
  CHECK(check_torsion_piece(*piece).ok());
  const auto& cert = piece->certificate;
  CHECK(cert.k >= 1);
  CHECK(p_rank(cert.quotient, 2) >= 1);
  const long pre = predegree(piece->piece);

  for (int alpha = 1; alpha <= 4; ++alpha) {
    Chain ch = chain(*piece, alpha);
    CHECK(validate_precover(ch.morphism).ok());
    CHECK(predegree(ch.morphism) <= alpha * pre);
    CHECK(torsion_exponent(h1(total_graph(ch.morphism)), 2) >= alpha);
    if (alpha == 1) CHECK(isomorphic(ch.morphism, piece->piece));
  }

  // Merging the boundary realizes an HNN extension over the boundary classes.
  auto merged = merge_cyclic(piece->piece, piece->c1, piece->c2);
  AbelianGroup lhs = h1(total_graph(merged));
  Vec diff = cert.c1;
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= cert.c2[i];
  AbelianGroup rhs = quotient_by(cert.h1, {cert.h1.normalize(diff)});
  CHECK(lhs.betti == rhs.betti + 1);
  CHECK(lhs.divisors == rhs.divisors);

  TorsionSearch none;
  none.prime = 2;
  none.max_index = 2;
  CHECK_FALSE(find_torsion_piece(load_gog("genus2.json"), none));
  none.prime = 4;
  CHECK_THROWS_AS(find_torsion_piece(seed, none), InvalidInput);
}

TEST_CASE("torsion_certificate") {
  auto a = cokernel(IntMatrix::from_rows({{2, 0, 0}, {0, 0, 0}}));
  // A = Z/2 + Z^2, boundary classes spanning the free part.
  Vec c1{0, 1, 0}, c2{0, 0, 1};
  auto cert = torsion_certificate(a, c1, c2, 2);
  REQUIRE(cert);
  CHECK(cert->k == 1);
  // Boundary class equal to the torsion generator kills the factor.
  Vec t{1, 0, 0};
  CHECK_FALSE(torsion_certificate(a, t, c2, 2));
  CHECK_FALSE(torsion_certificate(a, c1, c2, 3));
}

TEST_CASE("build_tower") {
  auto seed = load_gog("torsion_seed.json");
  auto zero = build_tower(seed, {2}, 0, {});
  CHECK(zero.ledger.rows.size() == 1);
  CHECK(zero.status == "ok");

  auto one = build_tower(seed, {2}, 1, {});
  REQUIRE(one.status == "ok");
  REQUIRE(one.last_cover);
  CHECK(validate_cover(*one.last_cover).ok());
  CHECK(one.check.ok());
  REQUIRE(one.ledger.rows.size() == 2);
  const auto& st = one.stages.at(0);
  CHECK(one.ledger.rows[1].exponent[0] >= st.alpha);
  CHECK(one.ledger.rows[1].ratio[0] >= mpq_class(1, 4 * st.piece_predegree));
  CHECK(st.excluded);

  TowerBounds tiny;
  tiny.piece_index = 1;
  tiny.cover_index = 1;
  auto nf = build_tower(load_gog("genus2.json"), {2}, 1, tiny);
  CHECK(nf.status.rfind("NotFound: step 1:", 0) == 0);
  CHECK(nf.completed_steps == 0);
  CHECK_THROWS_AS(build_tower(seed, {2, 2}, 2, {}), InvalidInput);
}
