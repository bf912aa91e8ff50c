#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "oracles.hpp"

using namespace gbtest;

namespace {

const CosetTable kSwap = CosetTable::make(2, {{1, 0}, {0, 1}});

}  // namespace

TEST_CASE("validate_table examples") {
  CHECK(validate_table(CosetTable(2, {{0}, {0}})).ok());
  auto r = validate_table(CosetTable(1, {{0, 1}}));
  CHECK_FALSE(r.ok());
  CHECK(r.mentions("transitive"));
  CHECK(validate_table(kSwap).ok());
  CHECK_FALSE(validate_table(CosetTable(1, {{0, 0}})).ok());
  CHECK_THROWS_AS(CosetTable::make(1, {{1, 1}}), InvalidInput);
}

TEST_CASE("index and subgroup rank") {
  CHECK(index(kSwap) == 2);
  CHECK(subgroup_rank(kSwap) == 3);
  CHECK(subgroup_rank(CosetTable::trivial(3)) == 3);
  CHECK(subgroup_rank(CosetTable::make(2, {{1, 2, 3, 4, 0}, {0, 1, 2, 3, 4}})) == 6);
  for (const auto& t : enumerate_subgroups(3, 3)) CHECK(1 - subgroup_rank(t) == t.size() * (1 - 3));
}

TEST_CASE("contains examples") {
  CHECK_FALSE(contains(kSwap, W(2, {1})));
  CHECK(contains(kSwap, W(2, {1, 1})));
  CHECK(contains(kSwap, W(2, {2})));
}

TEST_CASE("Schreier basis") {
  SchreierBasis triv(CosetTable::trivial(2));
  CHECK(triv.basis() == std::vector<Word>{W(2, {1}), W(2, {2})});
  CHECK(triv.rewrite(W(2, {1, -2})) == W(2, {1, -2}));

  SchreierBasis s(kSwap);
  CHECK(s.subgroup_rank() == 3);
  Word r = s.rewrite(W(2, {1, 1}));
  CHECK(r.size() == 1);
  CHECK(s.evaluate(r) == W(2, {1, 1}));
  CHECK(s.evaluate(s.rewrite(W(2, {2}))) == W(2, {2}));
  CHECK_THROWS_AS(s.rewrite(W(2, {1})), InvalidInput);

  std::mt19937 rng(7);
  for (const auto& t : enumerate_subgroups(2, 4)) {
    SchreierBasis b(t);
    CHECK(b.subgroup_rank() == subgroup_rank(t));
    for (const auto& g : b.basis()) CHECK(contains(t, g));
    for (int trial = 0; trial < 40; ++trial) {
      Word w = random_word(rng, 2, 8);
      if (!contains(t, w)) continue;
      CHECK(b.evaluate(b.rewrite(w)) == w);
    }
  }
}

TEST_CASE("elevations examples") {
  auto a = elevations(kSwap, conj_canonical(W(2, {1})));
  REQUIRE(a.size() == 1);
  CHECK(a[0].degree == 2);
  CHECK(a[0].representative == W(2, {1, 1}));
  auto b = elevations(kSwap, conj_canonical(W(2, {2})));
  REQUIRE(b.size() == 2);
  CHECK(b[0].degree == 1);
  CHECK(b[1].degree == 1);
  CHECK(b[0].representative == W(2, {2}));
  CHECK(b[1].representative == W(2, {1, 2, -1}));
  auto c = elevations(CosetTable::trivial(2), conj_canonical(W(2, {1, -2, 1})));
  REQUIRE(c.size() == 1);
  CHECK(c[0].degree == 1);
}

TEST_CASE("elevation degrees partition the index and are minimal") {
  auto classes = short_classes(2, 3);
  for (const auto& t : enumerate_subgroups(2, 4)) {
    SchreierBasis s(t);
    for (const auto& c : classes) CHECK(elevation_defect(t, s, c) == "");
  }
}

TEST_CASE("subgroup counts against the transitive-pair oracle") {
  const long classes[] = {0, 1, 3, 7, 26};
  for (int n = 1; n <= 4; ++n) {
    auto oracle = count_pairs(n);
    CHECK(oracle.classes == classes[n]);
    long count = 0;
    for_each_subgroup(2, n, [&](const CosetTable& t) {
      if (t.size() == n) ++count;
      return true;
    });
    CHECK(count == oracle.classes);
    CHECK(static_cast<long>(enumerate_based_subgroups(2, n).size()) == oracle.transitive_pairs / factorial(n - 1));
  }
}

TEST_CASE("enumerate_subgroups order, rank 1 and cap") {
  auto r1 = enumerate_subgroups(1, 3);
  REQUIRE(r1.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(r1[i].size() == i + 1);
  auto t = enumerate_subgroups(2, 3);
  CHECK(t.size() == 11);
  CHECK(std::is_sorted(t.begin(), t.end(), [](const CosetTable& a, const CosetTable& b) { return a.size() < b.size(); }));
  for (const auto& x : t) CHECK(validate_table(x).ok());
  CHECK_THROWS_AS(enumerate_subgroups(2, 4, 10), SearchLimit);
}

TEST_CASE("restandardize keeps the conjugacy class") {
  for (const auto& t : enumerate_subgroups(2, 4))
    for (int b = 0; b < t.size(); ++b) {
      auto r = restandardize(t, b);
      CHECK(validate_table(r).ok());
      CHECK(r.size() == t.size());
      for (const auto& c : short_classes(2, 2)) {
        std::multiset<int> d1, d2;
        for (const auto& e : elevations(t, c)) d1.insert(e.degree);
        for (const auto& e : elevations(r, c)) d2.insert(e.degree);
        CHECK(d1 == d2);
      }
    }
}

TEST_CASE("pullback") {
  Pair p{2, {conj_canonical(W(2, {1}))}};
  auto a = pullback(p, kSwap);
  REQUIRE(a.pair.peripheral.size() == 1);
  CHECK(a.degree == std::vector<int>{2});
  CHECK(a.pair.rank == 3);

  Pair q{2, {conj_canonical(W(2, {1})), conj_canonical(W(2, {2}))}};
  auto b = pullback(q, CosetTable::trivial(2));
  CHECK(b.pair.peripheral == q.peripheral);

  Pair bad{2, {conj_canonical(W(2, {1})), conj_canonical(W(2, {1, 1}))}};
  CHECK_NOTHROW(pullback(bad, CosetTable::trivial(2)));
  CHECK_THROWS_AS(pullback(bad, kSwap), ElevationCollision);
}

TEST_CASE("malnormality") {
  CHECK(is_malnormal(Pair{2, {conj_canonical(W(2, {1})), conj_canonical(W(2, {2}))}}));
  CHECK_FALSE(is_malnormal(Pair{2, {conj_canonical(W(2, {1, 1}))}}));
  CHECK_FALSE(is_malnormal(Pair{2, {conj_canonical(W(2, {1})), conj_canonical(W(2, {-1}))}}));
  CHECK_FALSE(is_malnormal(Pair{2, {conj_canonical(W(2, {1})), conj_canonical(W(2, {2, 1, -2}))}}));
}

TEST_CASE("prescribe_degrees examples") {
  auto a = prescribe_degrees(Pair{1, {conj_canonical(W(1, {1}))}}, std::vector<int>{3});
  REQUIRE(a);
  CHECK(a->table.size() == 3);
  CHECK(a->constant == 1);

  Pair p{2, {conj_canonical(W(2, {1})), conj_canonical(W(2, {2}))}};
  auto b = prescribe_degrees(p, std::vector<int>{2, 3});
  REQUIRE(b);
  CHECK(b->table.size() == 6);
  CHECK(b->constant == 1);
  for (const auto& e : elevations(b->table, p.peripheral[0])) CHECK(e.degree == 2);
  for (const auto& e : elevations(b->table, p.peripheral[1])) CHECK(e.degree == 3);

  Pair c{2, {conj_canonical(W(2, {1, 2, 1, -2}))}};
  auto r = prescribe_degrees(c, std::vector<int>{2});
  if (r)
    for (const auto& e : elevations(r->table, c.peripheral[0])) CHECK(e.degree == r->constant * 2);

  CHECK_THROWS_AS(prescribe_degrees(Pair{2, {conj_canonical(W(2, {1, 1}))}}, std::vector<int>{2}), InvalidInput);
}

TEST_CASE("prescribe_degrees results are normal with verified degrees") {
  Pair p{2, {conj_canonical(W(2, {1})), conj_canonical(W(2, {2})), conj_canonical(W(2, {1, 2}))}};
  for (int d1 = 1; d1 <= 3; ++d1)
    for (int d2 = 1; d2 <= 3; ++d2) {
      auto r = prescribe_degrees(p, std::vector<std::optional<int>>{d1, d2, std::nullopt});
      REQUIRE(r);
      for (const auto& e : elevations(r->table, p.peripheral[0])) CHECK(e.degree == r->constant * d1);
      for (const auto& e : elevations(r->table, p.peripheral[1])) CHECK(e.degree == r->constant * d2);
      // Normal: every restandardization is the same table.
      for (int b = 0; b < r->table.size(); ++b)
        CHECK(restandardize(r->table, b) == restandardize(r->table, 0));
    }
}

TEST_CASE("prescribe_degrees with a containing subgroup") {
  Pair p{2, {conj_canonical(W(2, {1})), conj_canonical(W(2, {2}))}};
  auto small = prescribe_degrees(p, std::vector<int>{2, 1});
  REQUIRE(small);
  PrescribeOptions o;
  o.within = small->table;
  auto big = prescribe_degrees(p, std::vector<int>{4, 2}, o);
  REQUIRE(big);
  CHECK(big->containment_verified == is_subgroup_of(big->table, small->table));
  CHECK(big->containment_verified);
}
