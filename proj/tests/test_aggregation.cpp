#include "doctest.h"
#include "helpers.hpp"
#include "pcpnet/aggregation.hpp"
#include "pcpnet/errors.hpp"
#include "pcpnet/generator.hpp"
#include "pcpnet/oracle.hpp"
#include "pcpnet/rng.hpp"

using namespace pcpnet;
using testutil::out;

TEST_CASE("aggregation counts rule orientations per slot") {
  using O = Orientation;
  const std::vector<CPNet> nets{
      testutil::chain_ab_det(O::prefers_one, O::prefers_one, O::prefers_zero),
      testutil::chain_ab_det(O::prefers_one, O::prefers_zero, O::prefers_zero),
      testutil::chain_ab_det(O::prefers_zero, O::prefers_one, O::prefers_zero),
  };
  const Aggregate a = aggregate(nets);
  CHECK(a.population == 3);
  CHECK(a.prefers_one == std::vector<std::int64_t>{2, 2, 0});
  CHECK(a.net.prob_one(0) == 2.0 / 3.0);
  CHECK(a.net.prob_one(2) == 0.0);

  SUBCASE("swap probabilities are exact population fractions") {
    // Flipping A between {1,1} and {0,1}: 2 of 3 nets rank A=1 first.
    CHECK(swap_dominance_prob(a, out({1, 1}), out({0, 1})) == 2.0 / 3.0);
    // The reverse direction counts the remaining nets: exactly 1/3, which
    // differs from 1 - 2.0/3.0 in the last bit.
    CHECK(swap_dominance_prob(a, out({0, 1}), out({1, 1})) == 1.0 / 3.0);
    CHECK(1.0 / 3.0 != 1.0 - 2.0 / 3.0);

    // Each direction equals the fraction of nets entailing it.
    for (VarIndex v = 0; v < 2; ++v) {
      for (const Outcome& o : testutil::all_outcomes(a.net.structure())) {
        int cnt = 0;
        for (const CPNet& n : nets)
          if (entails_oracle(n, o, o.flipped(v))) ++cnt;
        CHECK(swap_dominance_prob(a, o, o.flipped(v)) ==
              static_cast<double>(cnt) / 3.0);
      }
    }
  }
  SUBCASE("swap queries demand swap pairs") {
    CHECK_THROWS_AS(swap_dominance_prob(a, out({1, 1}), out({0, 0})),
                    NotASwapPair);
    CHECK_THROWS_AS(swap_dominance_prob(a, out({1, 1}), out({1, 1})),
                    NotASwapPair);
    CHECK(swap_variable(a.net.structure(), out({1, 0}), out({1, 1})) == 1);
  }
}

TEST_CASE("aggregation embeds differing edge sets into the union forest") {
  // Net 1 conditions B on A; net 2 leaves B independent. The union keeps the
  // edge, and net 2's unconditional rule counts in both contexts.
  auto with_edge = testutil::chain_ab();
  auto no_edge = Structure::make({"A", "B"}, {{}, {}});
  using O = Orientation;
  const CPNet n1(with_edge, {O::prefers_one, O::prefers_zero, O::prefers_one});
  const CPNet n2(no_edge, {O::prefers_zero, O::prefers_one});
  const Aggregate a = aggregate({n1, n2});
  CHECK(a.population == 2);
  CHECK(a.net.structure().parents(1) == std::vector<VarIndex>{0});
  CHECK(a.prefers_one == std::vector<std::int64_t>{1, 1, 2});

  SUBCASE("conflicting parent sets with no forest union are rejected") {
    auto other_edge = Structure::make({"A", "B"}, {{1}, {}});
    const CPNet n3(other_edge, {O::prefers_one, O::prefers_one, O::prefers_one});
    // Union would need the edges A->B and B->A at once: a cycle.
    CHECK_THROWS_AS(aggregate({n1, n3}), StructureMismatch);
  }
  SUBCASE("different variable names never aggregate") {
    auto renamed = Structure::make({"A", "Z"}, {{}, {0}});
    const CPNet n4(renamed, {O::prefers_one, O::prefers_one, O::prefers_one});
    CHECK_THROWS_AS(aggregate({n1, n4}), StructureMismatch);
  }
}

TEST_CASE("union parent sets merge per variable and must stay a forest") {
  using O = Orientation;
  auto s3 = Structure::make({"A", "B", "C"}, {{}, {0}, {}});
  auto s3c = Structure::make({"A", "B", "C"}, {{}, {2}, {}});
  const CPNet n1(s3, std::vector<Orientation>(4, O::prefers_one));
  const CPNet n2(s3c, std::vector<Orientation>(4, O::prefers_zero));
  // Union gives B the parents {A, C}: not a forest.
  CHECK_THROWS_AS(aggregate({n1, n2}), StructureMismatch);
}

TEST_CASE("aggregation refuses an empty population") {
  CHECK_THROWS_AS(aggregate({}), EmptyPopulation);
}

TEST_CASE("pcp swap probability reads the deciding slot directly") {
  const PCPNet pn = testutil::chain_ab_pcp();
  CHECK(swap_dominance_prob(pn, out({1, 1}), out({0, 1})) == 0.8);
  CHECK(swap_dominance_prob(pn, out({0, 1}), out({1, 1})) == 1.0 - 0.8);
  CHECK(swap_dominance_prob(pn, out({0, 1}), out({0, 0})) == 0.4);
  CHECK(swap_dominance_prob(pn, out({1, 0}), out({1, 1})) == 0.5);
}

TEST_CASE("majority-beats-every-flip outcomes") {
  SUBCASE("uniform half probabilities qualify everything") {
    auto s = testutil::chain_ab();
    const PCPNet pn(s, {0.5, 0.5, 0.5});
    for (const Outcome& o : testutil::all_outcomes(*s)) CHECK(is_condorcet(pn, o));
    CHECK(find_condorcet(pn) == out({0, 0}));
    CHECK(all_condorcet(pn).size() == 4);
  }
  SUBCASE("a decisive net has exactly its sweep optimum") {
    // p(a first)=0.9; B follows A's value with 0.8.
    auto s = testutil::chain_ab();
    const PCPNet pn(s, {0.9, 0.2, 0.8});
    const auto all = all_condorcet(pn);
    REQUIRE(all.size() == 1);
    CHECK(all[0] == out({1, 1}));
    CHECK(is_condorcet(pn, out({1, 1})));
    CHECK_FALSE(is_condorcet(pn, out({1, 0})));
    CHECK(find_condorcet(pn) == out({1, 1}));
  }
  SUBCASE("an ambivalent root with an opinionated child") {
    auto s = testutil::chain_ab();
    const PCPNet pn(s, {0.5, 0.9, 0.1});
    // {0,1}: B-flip beaten (0.9), A-flip at 0.5: qualifies.
    CHECK(is_condorcet(pn, out({0, 1})));
    // {1,1}: B's rule under A=1 puts 0 first with 0.9: fails.
    CHECK_FALSE(is_condorcet(pn, out({1, 1})));
    CHECK(find_condorcet(pn) == out({0, 1}));
  }
  SUBCASE("scan order is lexicographic with variable 0 most significant") {
    auto s = Structure::make({"A", "B"}, {{}, {}});
    const PCPNet pn(s, {0.5, 0.9});
    // Qualifiers need B=1; the scan meets {0,1} before {1,1}.
    CHECK(find_condorcet(pn) == out({0, 1}));
    CHECK(all_condorcet(pn) == std::vector<Outcome>{out({0, 1}), out({1, 1})});
  }
  SUBCASE("aggregate majority matches per-net entailment counts") {
    SplitMix64 rng(17);
    auto s = random_forest(4, rng);
    std::vector<CPNet> nets;
    for (int i = 0; i < 9; ++i) nets.push_back(random_cpnet(s, rng));
    const Aggregate a = aggregate(nets);
    for (const Outcome& o : testutil::all_outcomes(*s)) {
      bool majority_all = true;
      for (VarIndex v = 0; v < s->var_count() && majority_all; ++v) {
        int cnt = 0;
        for (const CPNet& n : nets)
          if (entails_oracle(n, o, o.flipped(v))) ++cnt;
        majority_all = 2 * cnt >= static_cast<int>(nets.size());
      }
      CHECK(is_condorcet(a.net, o) == majority_all);
    }
  }
}

TEST_CASE("outcome scans refuse oversized variable counts") {
  auto s = make_shape_structure(21, GenShape::star);
  const PCPNet pn(s, std::vector<double>(
                         static_cast<std::size_t>(s->slot_count()), 0.5));
  CHECK_THROWS_AS(find_condorcet(pn), TooLarge);
  CHECK_THROWS_AS(all_condorcet(pn), TooLarge);
  // Point queries stay fine.
  Outcome o;
  o.values.assign(21, 0);
  CHECK(is_condorcet(pn, o));
}
