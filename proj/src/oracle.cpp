#include "pcpnet/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <unordered_set>

namespace pcpnet {

namespace {

std::uint64_t pack(const Outcome& o) {
  std::uint64_t m = 0;
  for (int v = o.size() - 1; v >= 0; --v)
    m = (m << 1) | o.values[static_cast<std::size_t>(v)];
  return m;
}

// Flip-graph search state shared across many queries on one structure so the
// per-net enumeration below does not reallocate. Outcomes are packed into one
// machine word, bit v = value of variable v.
struct PackedSearch {
  const Structure& s;
  std::vector<std::uint32_t> stamp;  // visited marks, epoch-tagged
  std::uint32_t epoch = 0;
  std::vector<std::uint64_t> queue;

  explicit PackedSearch(const Structure& st)
      : s(st), stamp(std::size_t(1) << st.var_count(), 0) {}

  std::uint32_t context(VarIndex v, std::uint64_t out) const {
    std::uint32_t ctx = 0;
    for (VarIndex p : s.parents(v)) ctx = (ctx << 1) | ((out >> p) & 1u);
    return ctx;
  }

  // prefers_one(slot) given as a bitmask over slot ids (bit set = slot
  // prefers value 1). True iff a worsening sequence of >= 1 flip reaches to.
  bool reaches(std::uint64_t net_one, std::uint64_t from, std::uint64_t to) {
    if (from == to) return false;
    ++epoch;
    queue.clear();
    queue.push_back(from);
    stamp[from] = epoch;
    const int n = s.var_count();
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::uint64_t cur = queue[head];
      for (VarIndex v = 0; v < n; ++v) {
        const int slot = s.slot_id(v, context(v, cur));
        const int preferred = static_cast<int>((net_one >> slot) & 1u);
        if (preferred != static_cast<int>((cur >> v) & 1u)) continue;
        const std::uint64_t nxt = cur ^ (std::uint64_t(1) << v);
        if (nxt == to) return true;
        if (stamp[nxt] != epoch) {
          stamp[nxt] = epoch;
          queue.push_back(nxt);
        }
      }
    }
    return false;
  }
};

std::uint64_t pack_net(const CPNet& n) {
  std::uint64_t one = 0;
  for (int s = n.structure().slot_count() - 1; s >= 0; --s)
    one = (one << 1) | (n.orientation(s) == Orientation::prefers_one ? 1u : 0u);
  return one;
}

// Splits work into a fixed chunk grid and reduces chunk sums in chunk order,
// so the total is bit-identical for every thread count.
double deterministic_sum(int slots, int threads,
                         const std::function<double(std::uint32_t, std::uint32_t)>& chunk_sum) {
  const int chunk_bits = slots > 8 ? slots - 8 : 0;
  const std::uint32_t chunks = 1u << (slots - chunk_bits);
  std::vector<double> partial(chunks, 0.0);
  if (threads <= 1) {
    for (std::uint32_t c = 0; c < chunks; ++c)
      partial[c] = chunk_sum(c << chunk_bits, (c + 1u) << chunk_bits);
  } else {
    std::atomic<std::uint32_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::uint32_t c = next.fetch_add(1);
        if (c >= chunks) return;
        partial[c] = chunk_sum(c << chunk_bits, (c + 1u) << chunk_bits);
      }
    };
    std::vector<std::thread> pool;
    const int count = std::min<int>(threads, static_cast<int>(chunks));
    pool.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  double total = 0.0;
  for (std::uint32_t c = 0; c < chunks; ++c) total += partial[c];
  return total;
}

}  // namespace

std::vector<FlipStep> worsening_flips(const CPNet& n, const Outcome& o) {
  detail::require_outcome(n.structure(), o);
  std::vector<FlipStep> flips;
  const Structure& s = n.structure();
  for (VarIndex v = 0; v < s.var_count(); ++v) {
    const std::uint32_t ctx = s.context_of(v, o);
    if (n.preferred(v, ctx) == o.value(v))
      flips.push_back(FlipStep{o, o.flipped(v), RuleSlot{v, ctx}});
  }
  return flips;
}

std::vector<Outcome> worsening_successors(const CPNet& n, const Outcome& o) {
  std::vector<Outcome> out;
  for (auto& f : worsening_flips(n, o)) out.push_back(std::move(f.to));
  return out;
}

bool entails_oracle(const CPNet& n, const Outcome& o, const Outcome& o2) {
  const Structure& s = n.structure();
  detail::require_outcome(s, o);
  detail::require_outcome(s, o2);
  if (o == o2) return false;
  if (s.var_count() > kOracleVarGuard)
    throw TooLargeForOracle("too many variables for flip-graph search");

  if (s.var_count() <= 20) {
    PackedSearch search(s);
    return search.reaches(pack_net(n), pack(o), pack(o2));
  }

  // Wide nets: hash-set visited instead of a dense array.
  const std::uint64_t target = pack(o2);
  const std::uint64_t net_one = pack_net(n);
  std::unordered_set<std::uint64_t> visited;
  std::vector<std::uint64_t> queue{pack(o)};
  visited.insert(queue[0]);
  auto context = [&](VarIndex v, std::uint64_t out) {
    std::uint32_t ctx = 0;
    for (VarIndex p : s.parents(v)) ctx = (ctx << 1) | ((out >> p) & 1u);
    return ctx;
  };
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint64_t cur = queue[head];
    for (VarIndex v = 0; v < s.var_count(); ++v) {
      const int slot = s.slot_id(v, context(v, cur));
      if (((net_one >> slot) & 1u) != ((cur >> v) & 1u)) continue;
      const std::uint64_t nxt = cur ^ (std::uint64_t(1) << v);
      if (nxt == target) return true;
      if (visited.insert(nxt).second) queue.push_back(nxt);
    }
  }
  return false;
}

double dominance_prob_oracle(const PCPNet& pn, const Outcome& o,
                             const Outcome& o2, int threads) {
  const Structure& s = pn.structure();
  detail::require_outcome(s, o);
  detail::require_outcome(s, o2);
  const int slots = s.slot_count();
  if (slots > kOracleSlotGuard)
    throw TooLargeForOracle("too many slots to enumerate compatible nets");
  if (o == o2) return 0.0;

  const std::uint64_t from = pack(o);
  const std::uint64_t to = pack(o2);
  // Net mask convention: bit s set = slot s prefers value 0, so mask 0 is the
  // all-value-1 net and enumeration runs value-1 first.
  auto chunk = [&](std::uint32_t lo, std::uint32_t hi) {
    PackedSearch search(s);
    double acc = 0.0;
    for (std::uint32_t mask = lo; mask < hi; ++mask) {
      double mass = 1.0;
      for (int sl = 0; sl < slots; ++sl)
        mass *= ((mask >> sl) & 1u) ? 1.0 - pn.prob_one(sl) : pn.prob_one(sl);
      if (mass == 0.0) continue;
      const std::uint64_t net_one = ~static_cast<std::uint64_t>(mask);
      if (search.reaches(net_one, from, to)) acc += mass;
    }
    return acc;
  };
  return deterministic_sum(slots, threads, chunk);
}

double optimal_prob_oracle(const PCPNet& pn, const Outcome& o, int threads) {
  const Structure& s = pn.structure();
  detail::require_outcome(s, o);
  const int slots = s.slot_count();
  if (slots > kOracleSlotGuard)
    throw TooLargeForOracle("too many slots to enumerate compatible nets");

  const std::uint64_t target = pack(o);
  const auto& topo = s.topo_order();
  auto chunk = [&](std::uint32_t lo, std::uint32_t hi) {
    double acc = 0.0;
    for (std::uint32_t mask = lo; mask < hi; ++mask) {
      // Forward sweep: each variable takes its preferred value under the
      // values already forced on its parents. The net's unique optimum.
      std::uint64_t opt = 0;
      bool match = true;
      for (VarIndex v : topo) {
        std::uint32_t ctx = 0;
        for (VarIndex p : s.parents(v)) ctx = (ctx << 1) | ((opt >> p) & 1u);
        const int slot = s.slot_id(v, ctx);
        const std::uint64_t val = ((mask >> slot) & 1u) ? 0u : 1u;
        if (val != ((target >> v) & 1u)) {
          match = false;
          break;
        }
        opt |= val << v;
      }
      if (!match) continue;
      double mass = 1.0;
      for (int sl = 0; sl < slots; ++sl)
        mass *= ((mask >> sl) & 1u) ? 1.0 - pn.prob_one(sl) : pn.prob_one(sl);
      acc += mass;
    }
    return acc;
  };
  return deterministic_sum(slots, threads, chunk);
}

std::vector<CPNet> enumerate_completions(const IncompleteCPNet& n) {
  const std::vector<int> absent = n.absent_slots();
  if (static_cast<int>(absent.size()) > kCompletionSlotGuard)
    throw TooLargeForOracle("too many absent rules to enumerate completions");
  std::vector<Orientation> base(n.table().size(), Orientation::prefers_one);
  for (std::size_t i = 0; i < n.table().size(); ++i)
    if (n.table()[i].has_value()) base[i] = *n.table()[i];
  std::vector<CPNet> out;
  const std::uint32_t count = 1u << absent.size();
  out.reserve(count);
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    std::vector<Orientation> table = base;
    for (std::size_t j = 0; j < absent.size(); ++j)
      table[static_cast<std::size_t>(absent[j])] =
          ((mask >> j) & 1u) ? Orientation::prefers_zero : Orientation::prefers_one;
    out.emplace_back(n.structure_ptr(), std::move(table));
  }
  return out;
}

}  // namespace pcpnet
