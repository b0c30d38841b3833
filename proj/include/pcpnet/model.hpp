#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pcpnet/errors.hpp"

namespace pcpnet {

class SplitMix64;

using VarIndex = std::int32_t;

// Which of a variable's two values a rule ranks first.
enum class Orientation : std::uint8_t { prefers_zero = 0, prefers_one = 1 };

inline constexpr int preferred_value(Orientation o) {
  return o == Orientation::prefers_one ? 1 : 0;
}
inline constexpr Orientation orientation_toward(int value) {
  return value != 0 ? Orientation::prefers_one : Orientation::prefers_zero;
}
inline constexpr Orientation opposite(Orientation o) {
  return o == Orientation::prefers_one ? Orientation::prefers_zero
                                       : Orientation::prefers_one;
}

enum class ShapeClass { forest, acyclic_dag };

// Total assignment of 0/1 to every variable, indexed by VarIndex.
struct Outcome {
  std::vector<std::uint8_t> values;

  Outcome() = default;
  explicit Outcome(std::vector<std::uint8_t> v) : values(std::move(v)) {}

  static Outcome of(std::initializer_list<int> bits) {
    Outcome o;
    o.values.reserve(bits.size());
    for (int b : bits) o.values.push_back(static_cast<std::uint8_t>(b != 0));
    return o;
  }

  int size() const { return static_cast<int>(values.size()); }
  int value(VarIndex v) const { return values[static_cast<std::size_t>(v)]; }
  void set(VarIndex v, int val) {
    values[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(val != 0);
  }
  Outcome flipped(VarIndex v) const {
    Outcome r = *this;
    r.values[static_cast<std::size_t>(v)] ^= 1u;
    return r;
  }

  friend bool operator==(const Outcome&, const Outcome&) = default;
  friend auto operator<=>(const Outcome&, const Outcome&) = default;
};

// One conditional preference rule position: a variable plus one assignment to
// its parents. Context bits follow the sorted parent list, first parent in the
// most significant bit, so contexts enumerate in lexicographic order 00, 01,
// 10, 11, ...
struct RuleSlot {
  VarIndex var = -1;
  std::uint32_t ctx = 0;

  friend bool operator==(const RuleSlot&, const RuleSlot&) = default;
};

struct ValidationReport {
  bool well_formed = false;  // names unique and nonempty, parent refs sane
  bool acyclic = false;
  bool forest = false;
  ShapeClass shape = ShapeClass::acyclic_dag;
  std::string message;  // first defect found, empty when fully valid
  std::vector<VarIndex> topo_order;  // filled when acyclic
};

ValidationReport validate_structure(
    const std::vector<std::string>& names,
    const std::vector<std::vector<VarIndex>>& parents);

// Variable set plus parent relation, immutable after construction. Holds the
// derived slot table: one slot per (variable, parent assignment), ordered by
// a fixed deterministic rule (topological variable order, then lexicographic
// context), which every serialization and enumeration in the library follows.
class Structure {
 public:
  // Throws SemanticError on malformed input, CycleDetected on cycles.
  static std::shared_ptr<const Structure> make(
      std::vector<std::string> names,
      std::vector<std::vector<VarIndex>> parents);

  int var_count() const { return static_cast<int>(names_.size()); }
  int slot_count() const { return static_cast<int>(slots_.size()); }

  const std::string& name(VarIndex v) const {
    return names_[static_cast<std::size_t>(v)];
  }
  std::optional<VarIndex> index_of(std::string_view name) const;

  // Sorted ascending.
  const std::vector<VarIndex>& parents(VarIndex v) const {
    return parents_[static_cast<std::size_t>(v)];
  }
  const std::vector<VarIndex>& children(VarIndex v) const {
    return children_[static_cast<std::size_t>(v)];
  }
  // Deterministic: Kahn's algorithm, smallest index first.
  const std::vector<VarIndex>& topo_order() const { return topo_; }

  ShapeClass shape() const {
    return forest_ ? ShapeClass::forest : ShapeClass::acyclic_dag;
  }
  bool is_forest() const { return forest_; }
  // Forest structures only: the unique parent, or -1 for roots.
  VarIndex forest_parent(VarIndex v) const {
    const auto& p = parents(v);
    return p.empty() ? -1 : p[0];
  }

  RuleSlot slot(int slot_id) const {
    return slots_[static_cast<std::size_t>(slot_id)];
  }
  int slot_id(VarIndex v, std::uint32_t ctx) const {
    return slot_base_[static_cast<std::size_t>(v)] + static_cast<int>(ctx);
  }
  int first_slot(VarIndex v) const {
    return slot_base_[static_cast<std::size_t>(v)];
  }
  int context_count(VarIndex v) const {
    return 1 << parents(v).size();
  }
  // All slots in the fixed order.
  const std::vector<RuleSlot>& rule_slots() const { return slots_; }

  // Parent assignment of v induced by a total outcome.
  std::uint32_t context_of(VarIndex v, const Outcome& o) const {
    std::uint32_t ctx = 0;
    for (VarIndex p : parents(v)) ctx = (ctx << 1) | o.values[std::size_t(p)];
    return ctx;
  }

  bool same_as(const Structure& other) const {
    return this == &other ||
           (names_ == other.names_ && parents_ == other.parents_);
  }

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::vector<VarIndex>>& all_parents() const {
    return parents_;
  }

 private:
  Structure() = default;

  std::vector<std::string> names_;
  std::vector<std::vector<VarIndex>> parents_;
  std::vector<std::vector<VarIndex>> children_;
  std::vector<VarIndex> topo_;
  std::vector<RuleSlot> slots_;
  std::vector<int> slot_base_;
  std::unordered_map<std::string, VarIndex> index_;
  bool forest_ = true;
};

using StructurePtr = std::shared_ptr<const Structure>;

// Complete deterministic CP-net: one orientation per slot.
class CPNet {
 public:
  CPNet(StructurePtr s, std::vector<Orientation> table);

  const Structure& structure() const { return *structure_; }
  const StructurePtr& structure_ptr() const { return structure_; }
  Orientation orientation(int slot_id) const {
    return table_[static_cast<std::size_t>(slot_id)];
  }
  int preferred(VarIndex v, std::uint32_t ctx) const {
    return preferred_value(orientation(structure_->slot_id(v, ctx)));
  }
  const std::vector<Orientation>& table() const { return table_; }

  friend bool operator==(const CPNet& a, const CPNet& b) {
    return a.structure_->same_as(*b.structure_) && a.table_ == b.table_;
  }

 private:
  StructurePtr structure_;
  std::vector<Orientation> table_;
};

// Deterministic CP-net with possibly absent rules.
class IncompleteCPNet {
 public:
  IncompleteCPNet(StructurePtr s,
                  std::vector<std::optional<Orientation>> table);

  const Structure& structure() const { return *structure_; }
  const StructurePtr& structure_ptr() const { return structure_; }
  const std::optional<Orientation>& orientation(int slot_id) const {
    return table_[static_cast<std::size_t>(slot_id)];
  }
  const std::vector<std::optional<Orientation>>& table() const {
    return table_;
  }
  int absent_count() const;
  std::vector<int> absent_slots() const;  // slot ids, ascending
  bool complete() const { return absent_count() == 0; }
  // Throws IncompleteTable when rules are absent.
  CPNet as_complete() const;

 private:
  StructurePtr structure_;
  std::vector<std::optional<Orientation>> table_;
};

// Probabilistic CP-net: per slot, the probability that the rule orients
// toward value 1. The complementary orientation has probability 1 - p.
// Rules of distinct slots are independent.
class PCPNet {
 public:
  PCPNet(StructurePtr s, std::vector<double> prob_one);

  const Structure& structure() const { return *structure_; }
  const StructurePtr& structure_ptr() const { return structure_; }
  double prob_one(int slot_id) const {
    return prob_[static_cast<std::size_t>(slot_id)];
  }
  double prob_toward(int slot_id, int value) const {
    double p = prob_[static_cast<std::size_t>(slot_id)];
    return value != 0 ? p : 1.0 - p;
  }
  double prob_of(int slot_id, Orientation o) const {
    return prob_toward(slot_id, preferred_value(o));
  }
  const std::vector<double>& table() const { return prob_; }

  friend bool operator==(const PCPNet& a, const PCPNet& b) {
    return a.structure_->same_as(*b.structure_) && a.prob_ == b.prob_;
  }

 private:
  StructurePtr structure_;
  std::vector<double> prob_;
};

// Probability mass the distribution puts on one deterministic net: the
// product over slots of the matching orientation probability, multiplied in
// slot order.
double net_probability(const PCPNet& pn, const CPNet& n);

// Draw one deterministic net, slot by slot in slot order. The seed overload
// is pure in (pn, seed); the stream overload advances the given generator.
CPNet sample_net(const PCPNet& pn, std::uint64_t seed);
CPNet sample_net(const PCPNet& pn, SplitMix64& rng);

// Point distribution concentrated on the given net (probabilities 0/1).
PCPNet degenerate_pcpnet(const CPNet& n);

namespace detail {
inline void require_same_structure(const Structure& a, const Structure& b) {
  if (!a.same_as(b)) throw IncompatibleStructure("models use different structures");
}
inline void require_outcome(const Structure& s, const Outcome& o) {
  if (o.size() != s.var_count())
    throw Error("outcome does not assign every variable exactly once");
}
}  // namespace detail

}  // namespace pcpnet
