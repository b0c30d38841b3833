#include "pcpnet/model.hpp"

#include <algorithm>
#include <cctype>
#include <queue>

#include "pcpnet/rng.hpp"

namespace pcpnet {

namespace {

// Slot tables grow with 2^parents; anything past this is a modelling error.
constexpr std::size_t kMaxParents = 20;

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  auto head = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto tail = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  if (!head(s[0])) return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!tail(s[i])) return false;
  return true;
}

}  // namespace

ValidationReport validate_structure(
    const std::vector<std::string>& names,
    const std::vector<std::vector<VarIndex>>& parents) {
  ValidationReport rep;
  const std::size_t n = names.size();
  if (parents.size() != n) {
    rep.message = "parent list count does not match variable count";
    return rep;
  }
  {
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < n; ++i) {
      if (!valid_name(names[i])) {
        rep.message = "invalid variable name '" + names[i] + "'";
        return rep;
      }
      if (!seen.emplace(names[i], i).second) {
        rep.message = "duplicate variable name '" + names[i] + "'";
        return rep;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (parents[i].size() > kMaxParents) {
      rep.message = "variable '" + names[i] + "' has too many parents";
      return rep;
    }
    std::vector<VarIndex> sorted = parents[i];
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      VarIndex p = sorted[j];
      if (p < 0 || static_cast<std::size_t>(p) >= n) {
        rep.message = "parent index out of range for '" + names[i] + "'";
        return rep;
      }
      if (static_cast<std::size_t>(p) == i) {
        rep.message = "variable '" + names[i] + "' lists itself as parent";
        return rep;
      }
      if (j > 0 && sorted[j - 1] == p) {
        rep.message = "duplicate parent for '" + names[i] + "'";
        return rep;
      }
    }
  }
  rep.well_formed = true;

  // Kahn's algorithm, smallest index first: deterministic topological order.
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<VarIndex>> children(n);
  for (std::size_t i = 0; i < n; ++i) {
    indegree[i] = static_cast<int>(parents[i].size());
    for (VarIndex p : parents[i]) children[static_cast<std::size_t>(p)].push_back(static_cast<VarIndex>(i));
  }
  std::priority_queue<VarIndex, std::vector<VarIndex>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.push(static_cast<VarIndex>(i));
  while (!ready.empty()) {
    VarIndex v = ready.top();
    ready.pop();
    rep.topo_order.push_back(v);
    for (VarIndex c : children[static_cast<std::size_t>(v)])
      if (--indegree[static_cast<std::size_t>(c)] == 0) ready.push(c);
  }
  if (rep.topo_order.size() != n) {
    rep.topo_order.clear();
    std::string cyc;
    for (std::size_t i = 0; i < n; ++i)
      if (indegree[i] > 0) {
        if (!cyc.empty()) cyc += ", ";
        cyc += names[i];
      }
    rep.message = "cycle through {" + cyc + "}";
    return rep;
  }
  rep.acyclic = true;
  rep.forest = true;
  for (std::size_t i = 0; i < n; ++i)
    if (parents[i].size() > 1) rep.forest = false;
  rep.shape = rep.forest ? ShapeClass::forest : ShapeClass::acyclic_dag;
  return rep;
}

std::shared_ptr<const Structure> Structure::make(
    std::vector<std::string> names,
    std::vector<std::vector<VarIndex>> parents) {
  for (auto& p : parents) std::sort(p.begin(), p.end());
  ValidationReport rep = validate_structure(names, parents);
  if (!rep.well_formed) throw SemanticError(rep.message);
  if (!rep.acyclic) throw CycleDetected(rep.message);

  auto s = std::shared_ptr<Structure>(new Structure());
  s->names_ = std::move(names);
  s->parents_ = std::move(parents);
  s->topo_ = std::move(rep.topo_order);
  s->forest_ = rep.forest;
  const std::size_t n = s->names_.size();
  s->children_.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (VarIndex p : s->parents_[i])
      s->children_[static_cast<std::size_t>(p)].push_back(static_cast<VarIndex>(i));
  for (auto& c : s->children_) std::sort(c.begin(), c.end());
  s->slot_base_.assign(n, 0);
  for (VarIndex v : s->topo_) {
    s->slot_base_[static_cast<std::size_t>(v)] = static_cast<int>(s->slots_.size());
    const std::uint32_t contexts = 1u << s->parents_[static_cast<std::size_t>(v)].size();
    for (std::uint32_t c = 0; c < contexts; ++c) s->slots_.push_back(RuleSlot{v, c});
  }
  for (std::size_t i = 0; i < n; ++i)
    s->index_.emplace(s->names_[i], static_cast<VarIndex>(i));
  return s;
}

std::optional<VarIndex> Structure::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

CPNet::CPNet(StructurePtr s, std::vector<Orientation> table)
    : structure_(std::move(s)), table_(std::move(table)) {
  if (static_cast<int>(table_.size()) != structure_->slot_count())
    throw IncompleteTable("preference table must cover every slot exactly once");
}

IncompleteCPNet::IncompleteCPNet(StructurePtr s,
                                 std::vector<std::optional<Orientation>> table)
    : structure_(std::move(s)), table_(std::move(table)) {
  if (static_cast<int>(table_.size()) != structure_->slot_count())
    throw IncompleteTable("preference table must have one entry per slot");
}

int IncompleteCPNet::absent_count() const {
  int k = 0;
  for (const auto& e : table_)
    if (!e.has_value()) ++k;
  return k;
}

std::vector<int> IncompleteCPNet::absent_slots() const {
  std::vector<int> ids;
  for (std::size_t i = 0; i < table_.size(); ++i)
    if (!table_[i].has_value()) ids.push_back(static_cast<int>(i));
  return ids;
}

CPNet IncompleteCPNet::as_complete() const {
  std::vector<Orientation> t;
  t.reserve(table_.size());
  for (const auto& e : table_) {
    if (!e.has_value())
      throw IncompleteTable("net has absent rules");
    t.push_back(*e);
  }
  return CPNet(structure_, std::move(t));
}

PCPNet::PCPNet(StructurePtr s, std::vector<double> prob_one)
    : structure_(std::move(s)), prob_(std::move(prob_one)) {
  if (static_cast<int>(prob_.size()) != structure_->slot_count())
    throw IncompleteTable("probability table must cover every slot exactly once");
  for (double p : prob_)
    if (!(p >= 0.0 && p <= 1.0))
      throw SemanticError("rule probability outside [0, 1]");
}

double net_probability(const PCPNet& pn, const CPNet& n) {
  detail::require_same_structure(pn.structure(), n.structure());
  double mass = 1.0;
  const int slots = pn.structure().slot_count();
  for (int s = 0; s < slots; ++s) mass *= pn.prob_of(s, n.orientation(s));
  return mass;
}

CPNet sample_net(const PCPNet& pn, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return sample_net(pn, rng);
}

CPNet sample_net(const PCPNet& pn, SplitMix64& rng) {
  std::vector<Orientation> table;
  const int slots = pn.structure().slot_count();
  table.reserve(static_cast<std::size_t>(slots));
  for (int s = 0; s < slots; ++s)
    table.push_back(rng.unit() < pn.prob_one(s) ? Orientation::prefers_one
                                                : Orientation::prefers_zero);
  return CPNet(pn.structure_ptr(), std::move(table));
}

PCPNet degenerate_pcpnet(const CPNet& n) {
  std::vector<double> p;
  p.reserve(n.table().size());
  for (Orientation o : n.table())
    p.push_back(o == Orientation::prefers_one ? 1.0 : 0.0);
  return PCPNet(n.structure_ptr(), std::move(p));
}

}  // namespace pcpnet
