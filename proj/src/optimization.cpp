#include "pcpnet/optimization.hpp"

#include <array>
#include <algorithm>

namespace pcpnet {

Outcome det_optimal(const CPNet& n) {
  const Structure& s = n.structure();
  Outcome o;
  o.values.assign(static_cast<std::size_t>(s.var_count()), 0);
  for (VarIndex v : s.topo_order())
    o.set(v, n.preferred(v, s.context_of(v, o)));
  return o;
}

double optimal_prob(const PCPNet& pn, const Outcome& o) {
  const Structure& s = pn.structure();
  detail::require_outcome(s, o);
  double p = 1.0;
  for (VarIndex v = 0; v < s.var_count(); ++v)
    p *= pn.prob_toward(s.slot_id(v, s.context_of(v, o)), o.value(v));
  return p;
}

namespace {

// best[v][ctx] = highest probability any assignment of v's subtree reaches,
// given v's parent context. pick/tied record the maximizing value (0 first).
struct SubtreeTable {
  std::vector<std::array<double, 2>> best;
  std::vector<std::array<int, 2>> pick;
  std::vector<std::array<bool, 2>> tied;
};

// forced[v] in {-1, 0, 1}: -1 leaves v free. Products multiply in a fixed
// order (own rule, then children ascending), so equal maxima compare equal
// across runs with different forced sets.
SubtreeTable run_dp(const PCPNet& pn, const std::vector<int>& forced) {
  const Structure& s = pn.structure();
  const std::size_t n = static_cast<std::size_t>(s.var_count());
  SubtreeTable t;
  t.best.assign(n, {0.0, 0.0});
  t.pick.assign(n, {0, 0});
  t.tied.assign(n, {false, false});
  const auto& topo = s.topo_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const VarIndex v = *it;
    const int contexts = s.context_count(v);
    for (int ctx = 0; ctx < contexts; ++ctx) {
      std::array<double, 2> score{-1.0, -1.0};
      for (int w = 0; w < 2; ++w) {
        if (forced[static_cast<std::size_t>(v)] >= 0 &&
            forced[static_cast<std::size_t>(v)] != w)
          continue;
        double p = pn.prob_toward(
            s.slot_id(v, static_cast<std::uint32_t>(ctx)), w);
        for (VarIndex c : s.children(v))
          p *= t.best[static_cast<std::size_t>(c)][static_cast<std::size_t>(w)];
        score[static_cast<std::size_t>(w)] = p;
      }
      const int w = score[0] >= score[1] ? 0 : 1;
      t.best[static_cast<std::size_t>(v)][static_cast<std::size_t>(ctx)] =
          score[static_cast<std::size_t>(w)];
      t.pick[static_cast<std::size_t>(v)][static_cast<std::size_t>(ctx)] = w;
      t.tied[static_cast<std::size_t>(v)][static_cast<std::size_t>(ctx)] =
          score[0] == score[1];
    }
  }
  return t;
}

double total_of(const Structure& s, const SubtreeTable& t) {
  double total = 1.0;
  for (VarIndex v = 0; v < s.var_count(); ++v)
    if (s.parents(v).empty())
      total *= t.best[static_cast<std::size_t>(v)][0];
  return total;
}

}  // namespace

MapResult map_optimal(const PCPNet& pn) {
  const Structure& s = pn.structure();
  if (!s.is_forest())
    throw NotAForest("the most-probable-optimum sweep needs a forest");
  const std::size_t n = static_cast<std::size_t>(s.var_count());

  std::vector<int> free_all(n, -1);
  SubtreeTable t = run_dp(pn, free_all);
  const double total = total_of(s, t);

  MapResult res;
  res.outcome.values.assign(n, 0);
  bool any_tie = false;
  for (VarIndex v : s.topo_order()) {
    const VarIndex y = s.forest_parent(v);
    const std::size_t ctx =
        y < 0 ? 0u : static_cast<std::size_t>(res.outcome.value(y));
    res.outcome.set(v, t.pick[static_cast<std::size_t>(v)][ctx]);
    any_tie = any_tie || t.tied[static_cast<std::size_t>(v)][ctx];
  }
  if (any_tie) {
    // Some subtree admits several maximizers; pick the lexicographically
    // least one value at a time. Equality against `total` is exact because
    // every run maximizes over the same product expressions.
    std::vector<int> forced(n, -1);
    for (std::size_t v = 0; v < n; ++v) {
      forced[v] = 0;
      if (total_of(s, run_dp(pn, forced)) != total) forced[v] = 1;
    }
    for (std::size_t v = 0; v < n; ++v)
      res.outcome.set(static_cast<VarIndex>(v), forced[v]);
  }
  // Report the probability in the same form optimal_prob would give, so the
  // two agree bit for bit (the tree-shaped product can differ in rounding).
  res.probability = optimal_prob(pn, res.outcome);
  return res;
}

}  // namespace pcpnet
