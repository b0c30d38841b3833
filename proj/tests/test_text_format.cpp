#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "pcpnet/errors.hpp"
#include "pcpnet/generator.hpp"
#include "pcpnet/rng.hpp"
#include "pcpnet/text_format.hpp"

using namespace pcpnet;
using testutil::out;

namespace {

ParseError capture_parse_error(const std::string& text) {
  try {
    parse_net(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a ParseError");
  return ParseError(0, 0, "unreachable");
}

std::string capture_semantic_error(const std::string& text) {
  try {
    parse_net(text);
  } catch (const SemanticError& e) {
    return e.what();
  }
  FAIL("expected a SemanticError");
  return {};
}

}  // namespace

TEST_CASE("minimal deterministic net") {
  const ParsedModel m = parse_net("cpnet\nvar A\nA : 1>0\n");
  CHECK(m.kind() == NetKind::det);
  CHECK(m.structure().var_count() == 1);
  CHECK(m.structure().slot_count() == 1);
  CHECK(m.det().orientation(0) == Orientation::prefers_one);
}

TEST_CASE("conditional probability fragment parses into the right slots") {
  const ParsedModel m = parse_net(
      "pcpnet\n"
      "var X\n"
      "var Y <- X\n"
      "X : 1>0 (0.9)\n"
      "Y | X=1 : 1>0 (0.2)\n"
      "Y | X=0 : 1>0 (0.3)\n");
  REQUIRE(m.kind() == NetKind::pcp);
  const PCPNet& pn = m.pcp();
  const Structure& s = pn.structure();
  CHECK(pn.prob_one(s.slot_id(1, 1)) == 0.2);
  CHECK(pn.prob_one(s.slot_id(1, 0)) == 0.3);
  CHECK(pn.prob_one(s.slot_id(0, 0)) == 0.9);
}

TEST_CASE("comments, blank lines and flexible whitespace") {
  const ParsedModel m = parse_net(
      "# preference file\n"
      "cpnet   # header\n"
      "\n"
      "var A\n"
      "var   B   <-   A   # child\n"
      "A : 0>1\n"
      "  B | A=0 : 1>0\n"
      "B|A=1:0>1\n");
  CHECK(m.kind() == NetKind::det);
  CHECK(m.det().orientation(0) == Orientation::prefers_zero);
  CHECK(m.det().orientation(1) == Orientation::prefers_one);
  CHECK(m.det().orientation(2) == Orientation::prefers_zero);
}

TEST_CASE("incomplete nets may omit rule lines") {
  const ParsedModel m = parse_net(
      "cpnet incomplete\n"
      "var A\nvar B <- A\n"
      "B | A=1 : 0>1\n");
  REQUIRE(m.kind() == NetKind::incomplete);
  const IncompleteCPNet& n = m.incomplete();
  CHECK(n.absent_count() == 2);
  CHECK_FALSE(n.orientation(0).has_value());
  CHECK(n.orientation(2) == Orientation::prefers_zero);

  // The complete kinds insist on full coverage and name the missing slot.
  const std::string msg =
      capture_semantic_error("cpnet\nvar A\nvar B <- A\nB | A=1 : 0>1\n");
  CHECK(msg.find("missing rule") != std::string::npos);
  CHECK(msg.find("A") != std::string::npos);
}

TEST_CASE("parse errors carry one-based positions") {
  SUBCASE("empty input") {
    const ParseError e = capture_parse_error("   \n# nothing\n");
    CHECK(e.line == 1);
    CHECK(std::string(e.what()).find("header") != std::string::npos);
  }
  SUBCASE("unknown header") {
    const ParseError e = capture_parse_error("cpnets\nvar A\nA : 1>0\n");
    CHECK(e.line == 1);
  }
  SUBCASE("pcp rule without probability") {
    const ParseError e = capture_parse_error("pcpnet\nvar A\nA : 1>0\n");
    CHECK(e.line == 3);
    CHECK(e.column == 8);
    CHECK(std::string(e.what()) ==
          "line 3:8: pcpnet rules need a probability, e.g. 1>0 (0.8)");
  }
  SUBCASE("probability on a deterministic rule") {
    const ParseError e = capture_parse_error("cpnet\nvar A\nA : 1>0 (0.5)\n");
    CHECK(e.line == 3);
    CHECK(e.column == 9);
  }
  SUBCASE("declaration after rules") {
    const ParseError e =
        capture_parse_error("cpnet\nvar A\nA : 1>0\nvar B\nB : 1>0\n");
    CHECK(e.line == 4);
  }
  SUBCASE("both orders must appear") {
    const ParseError e = capture_parse_error("cpnet\nvar A\nA : 1>1\n");
    CHECK(e.line == 3);
  }
  SUBCASE("trailing junk") {
    const ParseError e = capture_parse_error("cpnet\nvar A\nA : 1>0 extra\n");
    CHECK(e.line == 3);
    CHECK(e.column == 9);
  }
  SUBCASE("malformed probability") {
    const ParseError e = capture_parse_error("pcpnet\nvar A\nA : 1>0 (x)\n");
    CHECK(e.line == 3);
  }
}

TEST_CASE("model-level validation names the offender") {
  CHECK(capture_semantic_error("cpnet\nvar A\nA : 1>0\nA : 0>1\n")
            .find("duplicate rule") != std::string::npos);
  CHECK(capture_semantic_error("cpnet\nvar A\nB : 1>0\n")
            .find("unknown variable 'B'") != std::string::npos);
  CHECK(capture_semantic_error(
            "cpnet\nvar A\nvar B\nB | A=1 : 1>0\nA : 1>0\nB : 1>0\n")
            .find("not a parent") != std::string::npos);
  CHECK(capture_semantic_error(
            "cpnet\nvar A\nvar B <- A\nA : 1>0\nB | A=1, A=0 : 1>0\n")
            .find("assigned twice") != std::string::npos);
  CHECK(capture_semantic_error(
            "cpnet\nvar A\nvar B <- A\nA : 1>0\nB : 1>0\nB | A=1 : 1>0\n")
            .find("every parent") != std::string::npos);
  CHECK(capture_semantic_error("pcpnet\nvar A\nA : 1>0 (1.5)\n")
            .find("outside [0, 1]") != std::string::npos);
  CHECK(capture_semantic_error("cpnet\nvar A <- B\nA : 1>0\n")
            .find("unknown variable 'B'") != std::string::npos);
  // Structure-level failures surface through the same parse call.
  CHECK_THROWS_AS(parse_net("cpnet\nvar A <- B\nvar B <- A\nA:1>0\nB:1>0\n"),
                  CycleDetected);
  CHECK_THROWS_AS(parse_net("cpnet\n"), SemanticError);
}

TEST_CASE("duplicate rules are reported with their context") {
  const std::string msg = capture_semantic_error(
      "cpnet\nvar A\nvar B <- A\nA : 1>0\nB | A=1 : 1>0\nB | A=1 : 0>1\n");
  CHECK(msg.find("line 6") != std::string::npos);
  CHECK(msg.find("B | A=1") != std::string::npos);
}

TEST_CASE("serialization is canonical and round-trips") {
  SUBCASE("pcp rules normalize to the value-1 orientation") {
    const ParsedModel m = parse_net("pcpnet\nvar A\nA : 0>1 (0.3)\n");
    CHECK(m.pcp().prob_one(0) == 0.7);
    const std::string text = serialize(m);
    CHECK(text.find("A : 1>0 (0.7)") != std::string::npos);
    CHECK(parse_net(text).pcp() == m.pcp());
  }
  SUBCASE("deterministic nets keep their orientations") {
    const std::string text =
        "cpnet\nvar A\nvar B <- A\nA : 0>1\nB | A=0 : 1>0\nB | A=1 : 0>1\n";
    const ParsedModel m = parse_net(text);
    CHECK(serialize(m) == text);
  }
  SUBCASE("generated nets of every kind round-trip to equal models") {
    // Together with the text round-trip below: one hundred generated nets.
    SplitMix64 rng(5);
    for (int i = 0; i < 30; ++i) {
      auto s = random_forest(1 + static_cast<int>(rng.below(7)), rng);
      const CPNet det = random_cpnet(s, rng);
      CHECK(parse_net(serialize(det)).det() == det);

      const PCPNet pcp = random_pcpnet(s, rng);
      CHECK(parse_net(serialize(pcp)).pcp() == pcp);

      const IncompleteCPNet inc = random_incomplete_cpnet(
          s, static_cast<int>(rng.below(
                 static_cast<std::uint64_t>(s->slot_count()) + 1)),
          rng);
      const ParsedModel back = parse_net(serialize(inc));
      REQUIRE(back.kind() == NetKind::incomplete);
      CHECK(back.incomplete().structure().same_as(inc.structure()));
      CHECK(back.incomplete().table() == inc.table());
    }
  }
  SUBCASE("document round-trip preserves the serialized text") {
    SplitMix64 rng(6);
    for (int i = 0; i < 10; ++i) {
      auto s = random_forest(2 + static_cast<int>(rng.below(5)), rng);
      const std::string text = serialize(random_pcpnet(s, rng));
      CHECK(serialize(parse_net(text)) == text);
    }
  }
}

TEST_CASE("probability text is the shortest round-trip form") {
  CHECK(format_probability(0.05) == "0.05");
  CHECK(format_probability(0.5) == "0.5");
  CHECK(format_probability(1.0) == "1");
  CHECK(format_probability(0.0) == "0");
  CHECK(format_probability(1.0 / 3.0) == "0.3333333333333333");
}

TEST_CASE("outcome text form") {
  auto s = testutil::chain_abc();
  CHECK(parse_outcome("A=1,B=0,C=1", *s) == out({1, 0, 1}));
  CHECK(parse_outcome(" C = 1 , A = 0 , B = 1 ", *s) == out({0, 1, 1}));
  CHECK(format_outcome(out({1, 0, 1}), *s) == "A=1,B=0,C=1");
  CHECK(parse_outcome(format_outcome(out({0, 0, 1}), *s), *s) == out({0, 0, 1}));

  CHECK_THROWS_AS(parse_outcome("A=1,B=0", *s), SemanticError);       // missing C
  CHECK_THROWS_AS(parse_outcome("A=1,B=0,C=1,A=1", *s), SemanticError);
  CHECK_THROWS_AS(parse_outcome("A=1,B=0,D=1", *s), SemanticError);
  CHECK_THROWS_AS(parse_outcome("A=1,B=0,C=2", *s), SemanticError);
  CHECK_THROWS_AS(parse_outcome("A=1,B0,C=1", *s), SemanticError);
}
