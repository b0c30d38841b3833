#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pcpnet/model.hpp"

namespace pcpnet {

// Outcome-space scans refuse to enumerate past this many variables.
inline constexpr int kCondorcetVarGuard = 20;

// Population summary: the proportional PCP-net plus the underlying counts,
// so swap probabilities can be reported as exact fractions of the population.
struct Aggregate {
  PCPNet net;
  std::vector<std::int64_t> prefers_one;  // per slot
  std::int64_t population = 0;
};

// Proportional aggregation of deterministic nets: per slot, the fraction of
// nets orienting it toward value 1. Nets over one identical structure
// aggregate directly. Nets over the same variables but different edges are
// first embedded into the union graph when that union is a forest (each rule
// expands to every assignment of the added parents); otherwise the call
// throws StructureMismatch. Throws EmptyPopulation on zero nets.
Aggregate aggregate(const std::vector<CPNet>& nets);

// The variable on which o and o2 differ. Throws NotASwapPair unless they
// differ in exactly one.
VarIndex swap_variable(const Structure& s, const Outcome& o, const Outcome& o2);

// Dominance probability between a swap pair: exactly the table probability
// of the deciding slot oriented toward o's value. No enumeration.
double swap_dominance_prob(const PCPNet& pn, const Outcome& o,
                           const Outcome& o2);
// Count-based variant: (#nets orienting the deciding slot toward o) / m,
// converted to floating point only at the end.
double swap_dominance_prob(const Aggregate& a, const Outcome& o,
                           const Outcome& o2);

// True iff o beats every one-flip neighbour with probability at least 1/2
// (inclusive).
bool is_condorcet(const PCPNet& pn, const Outcome& o);

// Least qualifying outcome in lexicographic variable-index order, or nullopt.
// Throws TooLarge past kCondorcetVarGuard variables.
std::optional<Outcome> find_condorcet(const PCPNet& pn);
// All qualifying outcomes, lexicographic order. Same guard.
std::vector<Outcome> all_condorcet(const PCPNet& pn);

}  // namespace pcpnet
