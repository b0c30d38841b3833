#include "doctest.h"
#include "helpers.hpp"
#include "pcpnet/errors.hpp"
#include "pcpnet/model.hpp"
#include "pcpnet/rng.hpp"

using namespace pcpnet;
using testutil::out;

TEST_CASE("structure validation classifies shapes and rejects junk") {
  SUBCASE("chain is a forest") {
    auto rep = validate_structure({"A", "B"}, {{}, {0}});
    CHECK(rep.well_formed);
    CHECK(rep.acyclic);
    CHECK(rep.forest);
    CHECK(rep.shape == ShapeClass::forest);
    CHECK(rep.topo_order == std::vector<VarIndex>{0, 1});
  }
  SUBCASE("two parents make an acyclic dag, not a forest") {
    auto rep = validate_structure({"A", "B", "C"}, {{}, {}, {0, 1}});
    CHECK(rep.acyclic);
    CHECK_FALSE(rep.forest);
    CHECK(rep.shape == ShapeClass::acyclic_dag);
  }
  SUBCASE("cycles are reported with the offending variables") {
    auto rep = validate_structure({"A", "B"}, {{1}, {0}});
    CHECK(rep.well_formed);
    CHECK_FALSE(rep.acyclic);
    CHECK(rep.message.find("cycle") != std::string::npos);
    CHECK(rep.message.find('A') != std::string::npos);
    CHECK(rep.message.find('B') != std::string::npos);
    CHECK_THROWS_AS(Structure::make({"A", "B"}, {{1}, {0}}), CycleDetected);
  }
  SUBCASE("topological order breaks ties toward smaller indices") {
    // C depends on E; roots are A, B, D, E.
    auto rep = validate_structure({"A", "B", "C", "D", "E"},
                                  {{}, {}, {4}, {}, {}});
    CHECK(rep.topo_order == std::vector<VarIndex>{0, 1, 3, 4, 2});
  }
  SUBCASE("name and parent-list errors") {
    CHECK_FALSE(validate_structure({"A", "A"}, {{}, {}}).well_formed);
    CHECK_FALSE(validate_structure({"1bad"}, {{}}).well_formed);
    CHECK_FALSE(validate_structure({""}, {{}}).well_formed);
    CHECK_FALSE(validate_structure({"A"}, {{0}}).well_formed);   // self-parent
    CHECK_FALSE(validate_structure({"A"}, {{3}}).well_formed);   // out of range
    CHECK_FALSE(validate_structure({"A", "B"}, {{}, {0, 0}}).well_formed);
    CHECK_FALSE(validate_structure({"A", "B"}, {{}}).well_formed);
    CHECK_THROWS_AS(Structure::make({"A", "A"}, {{}, {}}), SemanticError);
  }
}

TEST_CASE("slot layout follows topological order with contexts ascending") {
  // B has parents A and C (declared out of order); slot contexts enumerate
  // parent values with the lower-indexed parent most significant.
  auto s = Structure::make({"A", "B", "C"}, {{}, {2, 0}, {}});
  CHECK(s->parents(1) == std::vector<VarIndex>{0, 2});
  CHECK(s->slot_count() == 1 + 1 + 4);
  // Topo order A, C, B: slot 0 = A, slot 1 = C, slots 2..5 = B's contexts.
  CHECK(s->slot_id(0, 0) == 0);
  CHECK(s->slot_id(2, 0) == 1);
  CHECK(s->first_slot(1) == 2);
  CHECK(s->context_count(1) == 4);
  for (std::uint32_t ctx = 0; ctx < 4; ++ctx) {
    const RuleSlot slot = s->slot(s->slot_id(1, ctx));
    CHECK(slot.var == 1);
    CHECK(slot.ctx == ctx);
  }
  // Outcome A=1, C=0 selects context 0b10 for B.
  CHECK(s->context_of(1, out({1, 0, 0})) == 2);
  CHECK(s->context_of(1, out({0, 1, 1})) == 1);
  CHECK(s->index_of("C") == 2);
  CHECK_FALSE(s->index_of("missing").has_value());
  CHECK(s->forest_parent(0) == -1);
}

TEST_CASE("tables are validated against the structure") {
  auto s = testutil::chain_ab();
  CHECK_THROWS_AS(CPNet(s, {Orientation::prefers_one}), IncompleteTable);
  CHECK_THROWS_AS(PCPNet(s, {0.5, 0.5}), IncompleteTable);
  CHECK_THROWS_AS(PCPNet(s, {0.5, 0.5, 1.5}), SemanticError);
  CHECK_THROWS_AS(PCPNet(s, {0.5, 0.5, -0.1}), SemanticError);

  const CPNet n = testutil::chain_ab_det(
      Orientation::prefers_one, Orientation::prefers_zero,
      Orientation::prefers_one);
  CHECK(n.preferred(0, 0) == 1);
  CHECK(n.preferred(1, 0) == 0);
  CHECK(n.preferred(1, 1) == 1);

  const PCPNet pn = testutil::chain_ab_pcp();
  CHECK(pn.prob_one(1) == 0.4);
  CHECK(pn.prob_toward(1, 0) == 1.0 - 0.4);
  CHECK(pn.prob_of(2, Orientation::prefers_one) == 0.5);
}

TEST_CASE("incomplete tables expose their gaps") {
  auto s = testutil::chain_ab();
  IncompleteCPNet n(s, {Orientation::prefers_one, std::nullopt,
                        Orientation::prefers_zero});
  CHECK(n.absent_count() == 1);
  CHECK(n.absent_slots() == std::vector<int>{1});
  CHECK_FALSE(n.complete());
  CHECK_THROWS_AS(n.as_complete(), IncompleteTable);

  IncompleteCPNet full(s, {Orientation::prefers_one, Orientation::prefers_one,
                           Orientation::prefers_zero});
  CHECK(full.complete());
  CHECK(full.as_complete().orientation(2) == Orientation::prefers_zero);
}

TEST_CASE("net mass: matching-orientation product over slots") {
  const PCPNet pn = testutil::chain_ab_pcp();
  // Net {a first; b-bar first when A=0; b first when A=1}.
  const CPNet n = testutil::chain_ab_det(
      Orientation::prefers_one, Orientation::prefers_zero,
      Orientation::prefers_one);
  CHECK(net_probability(pn, n) == 0.8 * 0.6 * 0.5);

  double total = 0.0;
  for (const CPNet& m : testutil::all_nets(testutil::chain_ab()))
    total += net_probability(pn, m);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(
      net_probability(pn, CPNet(testutil::chain_abc(),
                                std::vector<Orientation>(5, Orientation::prefers_one))),
      IncompatibleStructure);
}

TEST_CASE("sampling is seed-deterministic and honors point masses") {
  const PCPNet pn = testutil::chain_ab_pcp();
  const CPNet a = sample_net(pn, 123);
  const CPNet b = sample_net(pn, 123);
  CHECK(a == b);

  const CPNet fixed = testutil::chain_ab_det(
      Orientation::prefers_zero, Orientation::prefers_one,
      Orientation::prefers_zero);
  const PCPNet point = degenerate_pcpnet(fixed);
  CHECK(net_probability(point, fixed) == 1.0);
  for (std::uint64_t seed = 0; seed < 16; ++seed)
    CHECK(sample_net(point, seed) == fixed);

  // A stream of samples advances the generator rather than resetting it.
  SplitMix64 rng(7);
  const CPNet s1 = sample_net(pn, rng);
  const CPNet s2 = sample_net(pn, rng);
  SplitMix64 rng2(7);
  CHECK(s1 == sample_net(pn, rng2));
  CHECK(s2 == sample_net(pn, rng2));
}

TEST_CASE("outcomes compare by value vector") {
  Outcome o = out({1, 0});
  CHECK(o.value(0) == 1);
  CHECK(o.flipped(1) == out({1, 1}));
  CHECK(o == Outcome::of({1, 0}));
  CHECK(out({0, 1}) < out({1, 0}));
}
