#pragma once

#include <map>
#include <optional>
#include <vector>

#include "pcpnet/model.hpp"

namespace pcpnet {

// Propositional variable over one rule slot: "the net orients slot toward
// orient". Its negation is the same slot with the opposite orientation.
struct RuleLiteral {
  std::int32_t slot = -1;
  Orientation orient = Orientation::prefers_one;

  RuleLiteral negated() const { return {slot, opposite(orient)}; }

  friend bool operator==(const RuleLiteral&, const RuleLiteral&) = default;
};

// Conjunction of rule literals, at most one per slot, kept sorted by slot id.
class LiteralConjunction {
 public:
  LiteralConjunction() = default;

  // False when the literal contradicts one already present.
  bool insert(RuleLiteral l);
  const std::vector<RuleLiteral>& literals() const { return lits_; }
  bool empty() const { return lits_.empty(); }

  // Share a slot with opposite orientations.
  bool contradicts(const LiteralConjunction& other) const;
  // Union of literals, or nullopt on contradiction.
  std::optional<LiteralConjunction> merged(const LiteralConjunction& other) const;

  bool satisfied_by(const CPNet& n) const;
  // Product of per-literal probabilities, in slot order.
  double probability(const PCPNet& pn) const;

  friend bool operator==(const LiteralConjunction&, const LiteralConjunction&) = default;

 private:
  std::vector<RuleLiteral> lits_;
};

// Pairwise mutually exclusive conjunctions; the probability of their
// disjunction is the plain sum of branch probabilities.
using BranchSet = std::vector<LiteralConjunction>;

// Every pair of branches conflicts on some slot.
bool pairwise_exclusive(const BranchSet& bs);

// Formula describing how often a variable can change value along a worsening
// sequence between two fixed outcomes. Leaves are rule literals; ref nodes
// point at the change-formula of (ref_var, ref_k), resolved by ChangeSystem.
struct ChangeFormula {
  enum class Kind { top, bottom, literal, conj, disj, ref };

  Kind kind = Kind::top;
  RuleLiteral lit{};
  std::vector<ChangeFormula> children;
  VarIndex ref_var = -1;
  int ref_k = 0;
  // Annotation: which (variable, k) this formula was built for.
  VarIndex var = -1;
  int k = 0;

  static ChangeFormula top() { return {}; }
  static ChangeFormula bottom();
  static ChangeFormula literal(RuleLiteral l);
  static ChangeFormula conj(std::vector<ChangeFormula> cs);
  static ChangeFormula disj(std::vector<ChangeFormula> cs);
  static ChangeFormula ref(VarIndex v, int k);
};

// Builds the change/worsen formulas of one dominance query over a forest.
// change(x, k) is satisfied by exactly those nets admitting a worsening
// sequence between the two outcomes (restricted to x and its ancestors) in
// which x changes value at least k times. Formulas are memoized per (x, k).
class ChangeSystem {
 public:
  // Throws NotAForest unless every variable has at most one parent.
  ChangeSystem(const Structure& s, const Outcome& o, const Outcome& o2);

  const ChangeFormula& change(VarIndex x, int k);
  // change(x, 0) when the endpoints agree on x, change(x, 1) otherwise.
  const ChangeFormula& worsen(VarIndex x);

  // Exclusive-branch expansion with ref nodes resolved through this system.
  BranchSet unroll(const ChangeFormula& f);
  const BranchSet& change_branches(VarIndex x, int k);  // memoized
  BranchSet worsen_branches(VarIndex x);

  const Structure& structure() const { return s_; }

 private:
  ChangeFormula build(VarIndex x, int k) const;

  const Structure& s_;
  Outcome o_;
  Outcome o2_;
  std::map<std::pair<VarIndex, int>, ChangeFormula> formulas_;
  std::map<std::pair<VarIndex, int>, BranchSet> branches_;
};

// One-shot builders (convenience over ChangeSystem).
ChangeFormula build_change(const Structure& s, const Outcome& o,
                           const Outcome& o2, VarIndex x, int k);
ChangeFormula build_worsen(const Structure& s, const Outcome& o,
                           const Outcome& o2, VarIndex x);

// Exclusive-branch expansion of a ref-free formula. Disjunctions expand as
// first-branch-or-else: A or B becomes A or (not A and B), with the negation
// distributed so every output pair conflicts syntactically.
BranchSet unroll_to_branchset(const ChangeFormula& f);

struct DominanceResult {
  double probability = 0.0;
  BranchSet branches;  // combined exclusive branches over all leaf variables
};

// Exact dominance probability over a forest PCP-net: per-leaf worsen formulas
// unrolled to exclusive branches, combined across leaves, summed. Runs in
// time linear in the variable count for a bounded number of differing
// variables. Throws NotAForest.
DominanceResult dominance_branches(const PCPNet& pn, const Outcome& o,
                                   const Outcome& o2);
double dominance_prob_fpt(const PCPNet& pn, const Outcome& o,
                          const Outcome& o2);

// Deterministic dominance over a forest in one top-down pass. For each
// variable it computes the greatest k such that change(x, k) is satisfied;
// kNoSequence marks variables whose required change is impossible, and any
// such variable refutes dominance. Throws NotAForest.
inline constexpr int kNoSequence = -1;
std::vector<int> alternation_limits(const CPNet& n, const Outcome& o,
                                    const Outcome& o2);
bool det_dominance(const CPNet& n, const Outcome& o, const Outcome& o2);

// True iff some completion of the absent rules entails o > o2. Same top-down
// pass, choosing each absent rule to maximize the variable's limit (the limit
// is monotone in the parent's limit, so the greedy choice is exact).
std::vector<int> completion_alternation_limits(const IncompleteCPNet& n,
                                               const Outcome& o,
                                               const Outcome& o2);
bool completion_dominance_exists(const IncompleteCPNet& n, const Outcome& o,
                                 const Outcome& o2);

}  // namespace pcpnet
