#include "pcpnet/tree_dominance.hpp"

#include <algorithm>

namespace pcpnet {

namespace {

// Orders literals inside a conjunction.
bool lit_less(const RuleLiteral& a, const RuleLiteral& b) {
  return a.slot < b.slot;
}

}  // namespace

bool LiteralConjunction::insert(RuleLiteral l) {
  auto it = std::lower_bound(lits_.begin(), lits_.end(), l, lit_less);
  if (it != lits_.end() && it->slot == l.slot) return it->orient == l.orient;
  lits_.insert(it, l);
  return true;
}

bool LiteralConjunction::contradicts(const LiteralConjunction& other) const {
  auto a = lits_.begin();
  auto b = other.lits_.begin();
  while (a != lits_.end() && b != other.lits_.end()) {
    if (a->slot < b->slot) {
      ++a;
    } else if (b->slot < a->slot) {
      ++b;
    } else {
      if (a->orient != b->orient) return true;
      ++a;
      ++b;
    }
  }
  return false;
}

std::optional<LiteralConjunction> LiteralConjunction::merged(
    const LiteralConjunction& other) const {
  LiteralConjunction out;
  out.lits_.reserve(lits_.size() + other.lits_.size());
  auto a = lits_.begin();
  auto b = other.lits_.begin();
  while (a != lits_.end() || b != other.lits_.end()) {
    if (b == other.lits_.end() || (a != lits_.end() && a->slot < b->slot)) {
      out.lits_.push_back(*a++);
    } else if (a == lits_.end() || b->slot < a->slot) {
      out.lits_.push_back(*b++);
    } else {
      if (a->orient != b->orient) return std::nullopt;
      out.lits_.push_back(*a++);
      ++b;
    }
  }
  return out;
}

bool LiteralConjunction::satisfied_by(const CPNet& n) const {
  for (const RuleLiteral& l : lits_)
    if (n.orientation(l.slot) != l.orient) return false;
  return true;
}

double LiteralConjunction::probability(const PCPNet& pn) const {
  double p = 1.0;
  for (const RuleLiteral& l : lits_) p *= pn.prob_of(l.slot, l.orient);
  return p;
}

bool pairwise_exclusive(const BranchSet& bs) {
  for (std::size_t i = 0; i < bs.size(); ++i)
    for (std::size_t j = i + 1; j < bs.size(); ++j)
      if (!bs[i].contradicts(bs[j])) return false;
  return true;
}

ChangeFormula ChangeFormula::bottom() {
  ChangeFormula f;
  f.kind = Kind::bottom;
  return f;
}

ChangeFormula ChangeFormula::literal(RuleLiteral l) {
  ChangeFormula f;
  f.kind = Kind::literal;
  f.lit = l;
  return f;
}

ChangeFormula ChangeFormula::conj(std::vector<ChangeFormula> cs) {
  ChangeFormula f;
  f.kind = Kind::conj;
  f.children = std::move(cs);
  return f;
}

ChangeFormula ChangeFormula::disj(std::vector<ChangeFormula> cs) {
  ChangeFormula f;
  f.kind = Kind::disj;
  f.children = std::move(cs);
  return f;
}

ChangeFormula ChangeFormula::ref(VarIndex v, int k) {
  ChangeFormula f;
  f.kind = Kind::ref;
  f.ref_var = v;
  f.ref_k = k;
  return f;
}

ChangeSystem::ChangeSystem(const Structure& s, const Outcome& o,
                           const Outcome& o2)
    : s_(s), o_(o), o2_(o2) {
  if (!s.is_forest())
    throw NotAForest("change formulas are only defined over forests");
  detail::require_outcome(s, o);
  detail::require_outcome(s, o2);
}

// The case split. x must change value at least k times along a worsening
// sequence between the two outcomes restricted to x and its ancestors; the
// endpoints fix x's start value a and end value a2, and its parent's values
// b and b2. Flipping x from value v needs the rule of the current parent
// context to rank v first, and consecutive flips of x go in opposite
// directions, so the parent has to supply a known number of context switches.
ChangeFormula ChangeSystem::build(VarIndex x, int k) const {
  const int a = o_.value(x);
  const int a2 = o2_.value(x);
  const bool differs = a != a2;
  const VarIndex y = s_.forest_parent(x);

  ChangeFormula out;
  if (y < 0) {
    // Roots flip under a single unconditional rule, all in one direction:
    // at most one change, and only toward a2.
    if (!differs) {
      out = k == 0 ? ChangeFormula::top() : ChangeFormula::bottom();
    } else if (k == 0) {
      out = ChangeFormula::ref(x, 1);
    } else if (k == 1) {
      out = ChangeFormula::literal(
          {s_.slot_id(x, 0), orientation_toward(a)});
    } else {
      out = ChangeFormula::bottom();
    }
    out.var = x;
    out.k = k;
    return out;
  }

  const int b = o_.value(y);
  const bool pdiff = b != o2_.value(y);
  const int slot_b = s_.slot_id(x, static_cast<std::uint32_t>(b));
  const int slot_bb = s_.slot_id(x, static_cast<std::uint32_t>(1 - b));
  // "when the parent holds its start value, rank a first", etc.
  const RuleLiteral lit_b_a{slot_b, orientation_toward(a)};
  const RuleLiteral lit_bb_a{slot_bb, orientation_toward(a)};
  // Opposite rules in the two contexts let x flip back and forth; the two
  // interleavings differ in which context hosts the first flip.
  auto pair_fwd = ChangeFormula::conj(
      {ChangeFormula::literal(lit_b_a),
       ChangeFormula::literal({slot_bb, orientation_toward(1 - a)})});
  auto pair_rev = ChangeFormula::conj(
      {ChangeFormula::literal({slot_b, orientation_toward(1 - a)}),
       ChangeFormula::literal(lit_bb_a)});

  if (k == 0) {
    out = differs ? ChangeFormula::ref(x, 1) : ChangeFormula::ref(y, 0);
  } else if (k == 1 && !differs) {
    // Equal endpoints need an even change count.
    out = ChangeFormula::ref(x, 2);
  } else if (k == 1 && !pdiff) {
    // One flip of x, either in the parent's resting context (parent free) or
    // in the other context (parent must leave and come back).
    out = ChangeFormula::disj(
        {ChangeFormula::conj(
             {ChangeFormula::literal(lit_b_a), ChangeFormula::ref(y, 0)}),
         ChangeFormula::conj(
             {ChangeFormula::literal(lit_bb_a), ChangeFormula::ref(y, 2)})});
  } else if (k == 1) {
    // Parent switches anyway; either context may host the single flip.
    out = ChangeFormula::conj(
        {ChangeFormula::disj({ChangeFormula::literal(lit_b_a),
                              ChangeFormula::literal(lit_bb_a)}),
         ChangeFormula::ref(y, 1)});
  } else if (!differs && (k & 1)) {
    out = ChangeFormula::ref(x, k + 1);  // parity: equal endpoints, even count
  } else if (differs && !(k & 1)) {
    out = ChangeFormula::ref(x, k + 1);  // parity: swapped endpoints, odd count
  } else if (!differs && !pdiff) {
    // k even: x flips k times through alternating contexts; the parent must
    // switch k-1 times and once more to restore its value.
    out = ChangeFormula::conj(
        {ChangeFormula::disj({std::move(pair_fwd), std::move(pair_rev)}),
         ChangeFormula::ref(y, k)});
  } else if (!differs) {
    // k even, parent endpoints swapped: starting in the resting context
    // saves one parent switch, starting in the other costs one.
    out = ChangeFormula::disj(
        {ChangeFormula::conj({std::move(pair_fwd), ChangeFormula::ref(y, k - 1)}),
         ChangeFormula::conj({std::move(pair_rev), ChangeFormula::ref(y, k + 1)})});
  } else if (!pdiff) {
    // k odd, parent endpoints equal: same one-off bookkeeping.
    out = ChangeFormula::disj(
        {ChangeFormula::conj({std::move(pair_fwd), ChangeFormula::ref(y, k - 1)}),
         ChangeFormula::conj({std::move(pair_rev), ChangeFormula::ref(y, k + 1)})});
  } else {
    // k odd, parent endpoints swapped.
    out = ChangeFormula::conj(
        {ChangeFormula::disj({std::move(pair_fwd), std::move(pair_rev)}),
         ChangeFormula::ref(y, k)});
  }
  out.var = x;
  out.k = k;
  return out;
}

const ChangeFormula& ChangeSystem::change(VarIndex x, int k) {
  auto key = std::make_pair(x, k);
  auto it = formulas_.find(key);
  if (it == formulas_.end()) it = formulas_.emplace(key, build(x, k)).first;
  return it->second;
}

const ChangeFormula& ChangeSystem::worsen(VarIndex x) {
  return change(x, o_.value(x) == o2_.value(x) ? 0 : 1);
}

namespace {

// Sub-cubes of p disjoint from c, covering p-and-not-c: walk the literals of
// c missing from p and negate the first disagreement.
void subtract_into(const LiteralConjunction& p, const LiteralConjunction& c,
                   std::vector<LiteralConjunction>& out) {
  if (p.contradicts(c)) {
    out.push_back(p);
    return;
  }
  std::vector<RuleLiteral> missing;
  {
    auto inside = [&](const RuleLiteral& l) {
      for (const RuleLiteral& pl : p.literals())
        if (pl.slot == l.slot) return true;
      return false;
    };
    for (const RuleLiteral& l : c.literals())
      if (!inside(l)) missing.push_back(l);
  }
  if (missing.empty()) return;  // p lies inside c
  LiteralConjunction acc = p;
  for (const RuleLiteral& l : missing) {
    LiteralConjunction piece = acc;
    piece.insert(l.negated());
    out.push_back(std::move(piece));
    acc.insert(l);
  }
}

// Rewrites a cover into an equivalent pairwise-exclusive one, keeping the
// first cube and replacing each later cube by its part outside all earlier
// cubes (the or-else expansion of A or B into A or (not A and B)).
BranchSet orthogonalize(const std::vector<LiteralConjunction>& in) {
  BranchSet out;
  for (std::size_t i = 0; i < in.size(); ++i) {
    std::vector<LiteralConjunction> pieces{in[i]};
    for (std::size_t j = 0; j < i && !pieces.empty(); ++j) {
      std::vector<LiteralConjunction> next;
      for (const LiteralConjunction& p : pieces) subtract_into(p, in[j], next);
      pieces = std::move(next);
    }
    for (auto& p : pieces) out.push_back(std::move(p));
  }
  return out;
}

struct Unroller {
  ChangeSystem* sys;  // null for ref-free formulas

  BranchSet run(const ChangeFormula& f) {
    switch (f.kind) {
      case ChangeFormula::Kind::top:
        return {LiteralConjunction{}};
      case ChangeFormula::Kind::bottom:
        return {};
      case ChangeFormula::Kind::literal: {
        LiteralConjunction c;
        c.insert(f.lit);
        return {std::move(c)};
      }
      case ChangeFormula::Kind::ref:
        if (!sys) throw Error("formula contains unresolved references");
        return sys->change_branches(f.ref_var, f.ref_k);
      case ChangeFormula::Kind::conj: {
        BranchSet acc{LiteralConjunction{}};
        for (const ChangeFormula& child : f.children) {
          BranchSet cb = run(child);
          BranchSet next;
          for (const LiteralConjunction& a : acc)
            for (const LiteralConjunction& b : cb)
              if (auto m = a.merged(b)) next.push_back(std::move(*m));
          acc = std::move(next);
          if (acc.empty()) break;
        }
        return acc;
      }
      case ChangeFormula::Kind::disj: {
        std::vector<LiteralConjunction> cover;
        for (const ChangeFormula& child : f.children)
          for (LiteralConjunction& c : run(child)) cover.push_back(std::move(c));
        return orthogonalize(cover);
      }
    }
    return {};
  }
};

}  // namespace

BranchSet ChangeSystem::unroll(const ChangeFormula& f) {
  Unroller u{this};
  return u.run(f);
}

const BranchSet& ChangeSystem::change_branches(VarIndex x, int k) {
  auto key = std::make_pair(x, k);
  auto it = branches_.find(key);
  if (it != branches_.end()) return it->second;
  BranchSet bs = unroll(change(x, k));
  return branches_.emplace(key, std::move(bs)).first->second;
}

BranchSet ChangeSystem::worsen_branches(VarIndex x) {
  return change_branches(x, o_.value(x) == o2_.value(x) ? 0 : 1);
}

ChangeFormula build_change(const Structure& s, const Outcome& o,
                           const Outcome& o2, VarIndex x, int k) {
  ChangeSystem sys(s, o, o2);
  return sys.change(x, k);
}

ChangeFormula build_worsen(const Structure& s, const Outcome& o,
                           const Outcome& o2, VarIndex x) {
  ChangeSystem sys(s, o, o2);
  return sys.worsen(x);
}

BranchSet unroll_to_branchset(const ChangeFormula& f) {
  Unroller u{nullptr};
  return u.run(f);
}

DominanceResult dominance_branches(const PCPNet& pn, const Outcome& o,
                                   const Outcome& o2) {
  const Structure& s = pn.structure();
  detail::require_outcome(s, o);
  detail::require_outcome(s, o2);
  if (!s.is_forest())
    throw NotAForest("exact dominance probability needs a forest structure");
  if (o == o2) return {};

  ChangeSystem sys(s, o, o2);
  // Dominance holds iff every leaf admits its worsening; combine the per-leaf
  // exclusive branches with conjunction. Shared ancestor literals collapse
  // and contradictory combinations drop out.
  BranchSet combined{LiteralConjunction{}};
  for (VarIndex v = 0; v < s.var_count(); ++v) {
    if (!s.children(v).empty()) continue;
    BranchSet leaf = sys.worsen_branches(v);
    BranchSet next;
    for (const LiteralConjunction& a : combined)
      for (const LiteralConjunction& b : leaf)
        if (auto m = a.merged(b)) next.push_back(std::move(*m));
    combined = std::move(next);
    if (combined.empty()) return {};
  }
  DominanceResult res;
  for (const LiteralConjunction& c : combined)
    res.probability += c.probability(pn);
  res.branches = std::move(combined);
  return res;
}

double dominance_prob_fpt(const PCPNet& pn, const Outcome& o,
                          const Outcome& o2) {
  return dominance_branches(pn, o, o2).probability;
}

namespace {

// Greatest k such that x can change value at least k times, given that its
// parent manages m switches. fb / fbb say whether the rule in the parent's
// start context (resp. the other context) ranks x's start value first.
int limit_from_pattern(bool differs, bool pdiff, int m, bool fb, bool fbb) {
  if (!differs) {
    // x starts and ends equal: change counts are even, 0 always works.
    if (fb && !fbb) return pdiff ? m + 1 : m;
    if (!fb && fbb) return pdiff ? m - 1 : m;
    return 0;  // both rules point the same way: x cannot flip back
  }
  // x must change an odd number of times, at least once.
  if (fb && !fbb) return pdiff ? m : m + 1;
  if (!fb && fbb) {
    if (pdiff) return m;
    return m >= 2 ? m - 1 : kNoSequence;  // first flip needs a context detour
  }
  if (fb && fbb) return 1;  // one direction only: exactly one flip
  return kNoSequence;       // no rule ever ranks the start value first
}

}  // namespace

std::vector<int> alternation_limits(const CPNet& n, const Outcome& o,
                                    const Outcome& o2) {
  const Structure& s = n.structure();
  detail::require_outcome(s, o);
  detail::require_outcome(s, o2);
  if (!s.is_forest())
    throw NotAForest("the one-pass dominance check needs a forest structure");

  std::vector<int> limit(static_cast<std::size_t>(s.var_count()), kNoSequence);
  for (VarIndex v : s.topo_order()) {
    const int a = o.value(v);
    const bool differs = a != o2.value(v);
    const VarIndex y = s.forest_parent(v);
    if (y < 0) {
      if (!differs)
        limit[static_cast<std::size_t>(v)] = 0;
      else
        limit[static_cast<std::size_t>(v)] =
            n.preferred(v, 0) == a ? 1 : kNoSequence;
      continue;
    }
    const int m = limit[static_cast<std::size_t>(y)];
    if (m == kNoSequence) continue;  // stays kNoSequence
    const int b = o.value(y);
    const bool pdiff = b != o2.value(y);
    const bool fb = n.preferred(v, static_cast<std::uint32_t>(b)) == a;
    const bool fbb = n.preferred(v, static_cast<std::uint32_t>(1 - b)) == a;
    limit[static_cast<std::size_t>(v)] =
        limit_from_pattern(differs, pdiff, m, fb, fbb);
  }
  return limit;
}

bool det_dominance(const CPNet& n, const Outcome& o, const Outcome& o2) {
  if (o == o2) return false;
  for (int l : alternation_limits(n, o, o2))
    if (l == kNoSequence) return false;
  return true;
}

std::vector<int> completion_alternation_limits(const IncompleteCPNet& n,
                                               const Outcome& o,
                                               const Outcome& o2) {
  const Structure& s = n.structure();
  detail::require_outcome(s, o);
  detail::require_outcome(s, o2);
  if (!s.is_forest())
    throw NotAForest("the completion check needs a forest structure");

  std::vector<int> limit(static_cast<std::size_t>(s.var_count()), kNoSequence);
  for (VarIndex v : s.topo_order()) {
    const int a = o.value(v);
    const bool differs = a != o2.value(v);
    const VarIndex y = s.forest_parent(v);
    if (y < 0) {
      if (!differs) {
        limit[static_cast<std::size_t>(v)] = 0;
      } else {
        const auto& rule = n.orientation(s.slot_id(v, 0));
        limit[static_cast<std::size_t>(v)] =
            (!rule.has_value() || preferred_value(*rule) == a) ? 1
                                                               : kNoSequence;
      }
      continue;
    }
    const int m = limit[static_cast<std::size_t>(y)];
    if (m == kNoSequence) continue;
    const int b = o.value(y);
    const bool pdiff = b != o2.value(y);
    // Absent rules are free choices; the limit is monotone in the parent's
    // limit, so maximizing it per variable maximizes it for every descendant.
    const auto& rule_b = n.orientation(s.slot_id(v, static_cast<std::uint32_t>(b)));
    const auto& rule_bb =
        n.orientation(s.slot_id(v, static_cast<std::uint32_t>(1 - b)));
    int best = kNoSequence;
    for (int fb = 0; fb <= 1; ++fb) {
      if (rule_b.has_value() && (preferred_value(*rule_b) == a) != (fb != 0))
        continue;
      for (int fbb = 0; fbb <= 1; ++fbb) {
        if (rule_bb.has_value() && (preferred_value(*rule_bb) == a) != (fbb != 0))
          continue;
        best = std::max(best,
                        limit_from_pattern(differs, pdiff, m, fb != 0, fbb != 0));
      }
    }
    limit[static_cast<std::size_t>(v)] = best;
  }
  return limit;
}

bool completion_dominance_exists(const IncompleteCPNet& n, const Outcome& o,
                                 const Outcome& o2) {
  if (o == o2) return false;
  for (int l : completion_alternation_limits(n, o, o2))
    if (l == kNoSequence) return false;
  return true;
}

}  // namespace pcpnet
