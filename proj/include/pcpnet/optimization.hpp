#pragma once

#include "pcpnet/model.hpp"

namespace pcpnet {

// Unique optimum of a complete acyclic net: one forward sweep assigning every
// variable its preferred value under its parents' already-chosen values.
Outcome det_optimal(const CPNet& n);

// Probability that o is the optimum: the product over variables of the
// probability that the rule in o's parent context points toward o's value.
// Works for any acyclic structure; factors multiply in variable index order.
double optimal_prob(const PCPNet& pn, const Outcome& o);

struct MapResult {
  Outcome outcome;
  double probability = 1.0;
};

// Most probable optimum of a forest PCP-net by bottom-up dynamic programming
// over the trees. Ties resolve to the lexicographically least outcome in
// variable index order. Throws NotAForest.
MapResult map_optimal(const PCPNet& pn);

}  // namespace pcpnet
