#pragma once

#include <vector>

#include "pcpnet/model.hpp"

namespace pcpnet {

// Enumeration guards. Queries above these limits raise TooLargeForOracle
// instead of grinding forever; the instance itself is fine.
inline constexpr int kOracleSlotGuard = 24;       // 2^24 compatible nets
inline constexpr int kCompletionSlotGuard = 20;   // 2^20 completions
inline constexpr int kOracleVarGuard = 64;        // packed outcome width

// One worsening flip: from and to are a swap pair on slot.var and the rule at
// slot ranks from's value first.
struct FlipStep {
  Outcome from;
  Outcome to;
  RuleSlot slot;
};

// All one-variable worsenings of o, in variable index order.
std::vector<Outcome> worsening_successors(const CPNet& n, const Outcome& o);
std::vector<FlipStep> worsening_flips(const CPNet& n, const Outcome& o);

// True iff a worsening sequence of at least one flip leads from o to o2.
// Plain breadth-first search over the flip graph.
bool entails_oracle(const CPNet& n, const Outcome& o, const Outcome& o2);

// Reference dominance probability by full enumeration of compatible nets:
// the sum of net_probability over every compatible net entailing o > o2.
// Nets enumerate in slot order with the value-1 orientation first; the sum
// accumulates in that enumeration order (fixed 256-chunk grid when threaded,
// so the result is identical for every thread count).
double dominance_prob_oracle(const PCPNet& pn, const Outcome& o,
                             const Outcome& o2, int threads = 1);

// Reference probability that o is the optimum, by the same enumeration.
double optimal_prob_oracle(const PCPNet& pn, const Outcome& o,
                           int threads = 1);

// Every completion of the absent rules, enumerated in slot order with the
// value-1 orientation first. Exactly 2^(#absent) nets.
std::vector<CPNet> enumerate_completions(const IncompleteCPNet& n);

}  // namespace pcpnet
