#include "pcpnet/aggregation.hpp"

#include <algorithm>

namespace pcpnet {

namespace {

// Reads the orientation a net assigns to a union-structure slot: drop the
// added parents from the union context and look the rest up in the net's own
// (coarser) table. The kept rule repeats for every added-parent assignment.
Orientation embedded_orientation(const CPNet& n, const Structure& uni,
                                 int uni_slot) {
  const RuleSlot slot = uni.slot(uni_slot);
  const auto& uni_parents = uni.parents(slot.var);
  const auto& own_parents = n.structure().parents(slot.var);
  std::uint32_t ctx = 0;
  for (VarIndex p : own_parents) {
    const auto it =
        std::find(uni_parents.begin(), uni_parents.end(), p);
    const int bit_from_left =
        static_cast<int>(it - uni_parents.begin());
    const int shift = static_cast<int>(uni_parents.size()) - 1 - bit_from_left;
    ctx = (ctx << 1) | ((slot.ctx >> shift) & 1u);
  }
  return n.orientation(n.structure().slot_id(slot.var, ctx));
}

}  // namespace

Aggregate aggregate(const std::vector<CPNet>& nets) {
  if (nets.empty())
    throw EmptyPopulation("aggregation needs at least one net");

  const Structure& first = nets[0].structure();
  bool identical = true;
  for (const CPNet& n : nets) {
    if (n.structure().names() != first.names())
      throw StructureMismatch("nets declare different variables");
    if (!n.structure().same_as(first)) identical = false;
  }

  StructurePtr target = nets[0].structure_ptr();
  if (!identical) {
    // Union of the parent relations; each net embeds by table expansion.
    std::vector<std::vector<VarIndex>> parents(first.names().size());
    for (const CPNet& n : nets)
      for (VarIndex v = 0; v < n.structure().var_count(); ++v)
        for (VarIndex p : n.structure().parents(v))
          parents[static_cast<std::size_t>(v)].push_back(p);
    for (auto& ps : parents) {
      std::sort(ps.begin(), ps.end());
      ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
      if (ps.size() > 1)
        throw StructureMismatch("union of the structures is not a forest");
    }
    try {
      target = Structure::make(first.names(), std::move(parents));
    } catch (const CycleDetected&) {
      throw StructureMismatch("union of the structures is not a forest");
    }
  }

  Aggregate agg{PCPNet(target, std::vector<double>(
                                   static_cast<std::size_t>(target->slot_count()), 0.0)),
                std::vector<std::int64_t>(
                    static_cast<std::size_t>(target->slot_count()), 0),
                static_cast<std::int64_t>(nets.size())};
  for (const CPNet& n : nets) {
    for (int s = 0; s < target->slot_count(); ++s) {
      const Orientation o = identical
                                ? n.orientation(s)
                                : embedded_orientation(n, *target, s);
      if (o == Orientation::prefers_one)
        ++agg.prefers_one[static_cast<std::size_t>(s)];
    }
  }
  std::vector<double> prob(static_cast<std::size_t>(target->slot_count()));
  for (std::size_t s = 0; s < prob.size(); ++s)
    prob[s] = static_cast<double>(agg.prefers_one[s]) /
              static_cast<double>(agg.population);
  agg.net = PCPNet(target, std::move(prob));
  return agg;
}

VarIndex swap_variable(const Structure& s, const Outcome& o,
                       const Outcome& o2) {
  detail::require_outcome(s, o);
  detail::require_outcome(s, o2);
  VarIndex found = -1;
  for (VarIndex v = 0; v < s.var_count(); ++v) {
    if (o.value(v) == o2.value(v)) continue;
    if (found >= 0)
      throw NotASwapPair("outcomes differ in more than one variable");
    found = v;
  }
  if (found < 0) throw NotASwapPair("outcomes are identical");
  return found;
}

double swap_dominance_prob(const PCPNet& pn, const Outcome& o,
                           const Outcome& o2) {
  const Structure& s = pn.structure();
  const VarIndex v = swap_variable(s, o, o2);
  return pn.prob_toward(s.slot_id(v, s.context_of(v, o)), o.value(v));
}

double swap_dominance_prob(const Aggregate& a, const Outcome& o,
                           const Outcome& o2) {
  const Structure& s = a.net.structure();
  const VarIndex v = swap_variable(s, o, o2);
  const std::int64_t ones =
      a.prefers_one[static_cast<std::size_t>(s.slot_id(v, s.context_of(v, o)))];
  const std::int64_t toward = o.value(v) != 0 ? ones : a.population - ones;
  return static_cast<double>(toward) / static_cast<double>(a.population);
}

bool is_condorcet(const PCPNet& pn, const Outcome& o) {
  const Structure& s = pn.structure();
  detail::require_outcome(s, o);
  for (VarIndex v = 0; v < s.var_count(); ++v)
    if (swap_dominance_prob(pn, o, o.flipped(v)) < 0.5) return false;
  return true;
}

namespace {

template <class Fn>
void for_each_outcome_lexicographic(int n, Fn&& fn) {
  if (n > kCondorcetVarGuard)
    throw TooLarge("too many variables to scan every outcome");
  const std::uint32_t count = 1u << n;
  Outcome o;
  o.values.assign(static_cast<std::size_t>(n), 0);
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    for (int v = 0; v < n; ++v)
      o.values[static_cast<std::size_t>(v)] =
          static_cast<std::uint8_t>((mask >> (n - 1 - v)) & 1u);
    if (fn(o)) return;
  }
}

}  // namespace

std::optional<Outcome> find_condorcet(const PCPNet& pn) {
  std::optional<Outcome> found;
  for_each_outcome_lexicographic(pn.structure().var_count(),
                                 [&](const Outcome& o) {
                                   if (is_condorcet(pn, o)) {
                                     found = o;
                                     return true;
                                   }
                                   return false;
                                 });
  return found;
}

std::vector<Outcome> all_condorcet(const PCPNet& pn) {
  std::vector<Outcome> out;
  for_each_outcome_lexicographic(pn.structure().var_count(),
                                 [&](const Outcome& o) {
                                   if (is_condorcet(pn, o)) out.push_back(o);
                                   return false;
                                 });
  return out;
}

}  // namespace pcpnet
