#pragma once

#include <utility>
#include <vector>

#include "pcpnet/model.hpp"

namespace testutil {

using namespace pcpnet;

// Two-variable chain A -> B. Slot order: A, B|A=0, B|A=1.
inline StructurePtr chain_ab() {
  return Structure::make({"A", "B"}, {{}, {0}});
}

// p(a first) = 0.8, p(b first | A=0) = 0.4, p(b first | A=1) = 0.5.
inline PCPNet chain_ab_pcp() { return PCPNet(chain_ab(), {0.8, 0.4, 0.5}); }

inline CPNet chain_ab_det(Orientation a, Orientation b0, Orientation b1) {
  return CPNet(chain_ab(), {a, b0, b1});
}

// Three-variable chain A -> B -> C. Slot order: A, B|0, B|1, C|0, C|1.
inline StructurePtr chain_abc() {
  return Structure::make({"A", "B", "C"}, {{}, {0}, {1}});
}

inline Outcome out(std::initializer_list<int> values) {
  return Outcome::of(values);
}

// All 2^slots deterministic tables over a structure, in mask order: bit s of
// the mask set means slot s ranks value 1 first.
inline std::vector<CPNet> all_nets(const StructurePtr& s) {
  const int slots = s->slot_count();
  std::vector<CPNet> nets;
  nets.reserve(std::size_t{1} << slots);
  for (std::uint32_t mask = 0; mask < (1u << slots); ++mask) {
    std::vector<Orientation> t(static_cast<std::size_t>(slots));
    for (int sl = 0; sl < slots; ++sl)
      t[static_cast<std::size_t>(sl)] = (mask >> sl) & 1u
                                            ? Orientation::prefers_one
                                            : Orientation::prefers_zero;
    nets.emplace_back(s, std::move(t));
  }
  return nets;
}

// All 2^n outcomes, variable 0 most significant.
inline std::vector<Outcome> all_outcomes(const Structure& s) {
  const int n = s.var_count();
  std::vector<Outcome> outs;
  outs.reserve(std::size_t{1} << n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Outcome o;
    o.values.assign(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v)
      o.set(v, (mask >> (n - 1 - v)) & 1u ? 1 : 0);
    outs.push_back(std::move(o));
  }
  return outs;
}

}  // namespace testutil
