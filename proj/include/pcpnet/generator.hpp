#pragma once

#include <string>
#include <utility>

#include "pcpnet/model.hpp"
#include "pcpnet/rng.hpp"

namespace pcpnet {

// Deterministic instance generators: the same seed yields the same net on
// every platform (integer-only RNG, probabilities drawn from a fixed grid of
// decimal literals so serialized output is byte-stable).

enum class GenShape { chain, star, balanced };

// chain: i <- i-1; star: i <- 0; balanced: i <- (i-1)/2 (a binary tree).
StructurePtr make_shape_structure(int vars, GenShape shape);

// Uniformly random forest: variable i attaches below one of {none, 0..i-1}.
StructurePtr random_forest(int vars, SplitMix64& rng);

CPNet random_cpnet(StructurePtr s, SplitMix64& rng);
PCPNet random_pcpnet(StructurePtr s, SplitMix64& rng);
IncompleteCPNet random_incomplete_cpnet(StructurePtr s, int absent_slots,
                                        SplitMix64& rng);

Outcome random_outcome(const Structure& s, SplitMix64& rng);
// Two outcomes at Hamming distance exactly `differing` (1 <= differing <= n).
std::pair<Outcome, Outcome> random_outcome_pair(const Structure& s,
                                                int differing,
                                                SplitMix64& rng);

}  // namespace pcpnet
