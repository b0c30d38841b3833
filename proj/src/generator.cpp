#include "pcpnet/generator.hpp"

#include <algorithm>

#include "pcpnet/errors.hpp"

namespace pcpnet {

namespace {

std::vector<std::string> default_names(int vars) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(vars));
  for (int i = 0; i < vars; ++i) {
    if (vars <= 26)
      names.push_back(std::string(1, char('A' + i)));
    else
      names.push_back("X" + std::to_string(i));
  }
  return names;
}

// Grid of probabilities written as decimal literals so that serializing a
// generated net prints exactly these strings back.
constexpr double kProbGrid[] = {0.05, 0.1,  0.15, 0.2,  0.25, 0.3,  0.35,
                                0.4,  0.45, 0.5,  0.55, 0.6,  0.65, 0.7,
                                0.75, 0.8,  0.85, 0.9,  0.95};
constexpr std::size_t kProbGridSize = sizeof(kProbGrid) / sizeof(kProbGrid[0]);

}  // namespace

StructurePtr make_shape_structure(int vars, GenShape shape) {
  if (vars < 1) throw SemanticError("a net needs at least one variable");
  std::vector<std::vector<VarIndex>> parents(static_cast<std::size_t>(vars));
  for (int i = 1; i < vars; ++i) {
    switch (shape) {
      case GenShape::chain: parents[static_cast<std::size_t>(i)] = {i - 1}; break;
      case GenShape::star: parents[static_cast<std::size_t>(i)] = {0}; break;
      case GenShape::balanced:
        parents[static_cast<std::size_t>(i)] = {(i - 1) / 2};
        break;
    }
  }
  return Structure::make(default_names(vars), std::move(parents));
}

StructurePtr random_forest(int vars, SplitMix64& rng) {
  if (vars < 1) throw SemanticError("a net needs at least one variable");
  std::vector<std::vector<VarIndex>> parents(static_cast<std::size_t>(vars));
  for (int i = 1; i < vars; ++i) {
    // i+1 equally likely attachments: none, or below one of 0..i-1.
    const std::uint64_t r = rng.below(static_cast<std::uint64_t>(i) + 1);
    if (r > 0) parents[static_cast<std::size_t>(i)] = {static_cast<VarIndex>(r - 1)};
  }
  return Structure::make(default_names(vars), std::move(parents));
}

CPNet random_cpnet(StructurePtr s, SplitMix64& rng) {
  std::vector<Orientation> table;
  table.reserve(static_cast<std::size_t>(s->slot_count()));
  for (int sl = 0; sl < s->slot_count(); ++sl)
    table.push_back(rng.coin() ? Orientation::prefers_one
                               : Orientation::prefers_zero);
  return CPNet(std::move(s), std::move(table));
}

PCPNet random_pcpnet(StructurePtr s, SplitMix64& rng) {
  std::vector<double> table;
  table.reserve(static_cast<std::size_t>(s->slot_count()));
  for (int sl = 0; sl < s->slot_count(); ++sl)
    table.push_back(kProbGrid[rng.below(kProbGridSize)]);
  return PCPNet(std::move(s), std::move(table));
}

IncompleteCPNet random_incomplete_cpnet(StructurePtr s, int absent_slots,
                                        SplitMix64& rng) {
  const int slots = s->slot_count();
  if (absent_slots < 0 || absent_slots > slots)
    throw SemanticError("absent slot count outside [0, slot count]");
  std::vector<int> ids(static_cast<std::size_t>(slots));
  for (int i = 0; i < slots; ++i) ids[static_cast<std::size_t>(i)] = i;
  // Partial Fisher-Yates: the first `absent_slots` entries become the gaps.
  for (int i = 0; i < absent_slots; ++i) {
    const auto j = i + static_cast<int>(rng.below(
                           static_cast<std::uint64_t>(slots - i)));
    std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
  }
  std::vector<std::optional<Orientation>> table(static_cast<std::size_t>(slots));
  for (int sl = 0; sl < slots; ++sl)
    table[static_cast<std::size_t>(sl)] =
        rng.coin() ? Orientation::prefers_one : Orientation::prefers_zero;
  for (int i = 0; i < absent_slots; ++i)
    table[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])] =
        std::nullopt;
  return IncompleteCPNet(std::move(s), std::move(table));
}

Outcome random_outcome(const Structure& s, SplitMix64& rng) {
  Outcome o;
  o.values.assign(static_cast<std::size_t>(s.var_count()), 0);
  for (VarIndex v = 0; v < s.var_count(); ++v)
    o.set(v, rng.coin() ? 1 : 0);
  return o;
}

std::pair<Outcome, Outcome> random_outcome_pair(const Structure& s,
                                                int differing,
                                                SplitMix64& rng) {
  const int n = s.var_count();
  if (differing < 1 || differing > n)
    throw SemanticError("differing variable count outside [1, variable count]");
  Outcome o = random_outcome(s, rng);
  std::vector<VarIndex> vars(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) vars[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < differing; ++i) {
    const auto j =
        i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(vars[static_cast<std::size_t>(i)], vars[static_cast<std::size_t>(j)]);
  }
  Outcome o2 = o;
  for (int i = 0; i < differing; ++i) {
    const VarIndex v = vars[static_cast<std::size_t>(i)];
    o2.set(v, 1 - o2.value(v));
  }
  return {std::move(o), std::move(o2)};
}

}  // namespace pcpnet
