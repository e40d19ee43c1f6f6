#include "txseq/ordering.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace txseq {

Ordering to_ordering(std::span<const Transaction> txs, std::span<const std::uint32_t> order) {
  Ordering out;
  out.reserve(order.size());
  for (std::uint32_t i : order) out.push_back(txs[i].id());
  return out;
}

namespace {

Permutation identity(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0u);
  return p;
}

}  // namespace

Permutation order_by_gas_price(std::span<const Transaction> txs) {
  Permutation p = identity(txs.size());
  std::sort(p.begin(), p.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (txs[a].gas_price() != txs[b].gas_price()) return txs[a].gas_price() > txs[b].gas_price();
    return txs[a].id() < txs[b].id();
  });
  return p;
}

Permutation order_by_exec_time(std::span<const Transaction> txs) {
  Permutation p = identity(txs.size());
  std::sort(p.begin(), p.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (txs[a].exec_time() != txs[b].exec_time()) return txs[a].exec_time() < txs[b].exec_time();
    return txs[a].id() < txs[b].id();
  });
  return p;
}

Permutation order_given(std::span<const Transaction> txs) { return identity(txs.size()); }

Permutation random_permutation(std::size_t n, Rng& rng) {
  Permutation p = identity(n);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(p[i - 1], p[rng.uniform(i)]);
  }
  return p;
}

Permutation order_random(std::span<const Transaction> txs, std::uint64_t seed) {
  Rng rng(seed);
  return random_permutation(txs.size(), rng);
}

Permutation ox_crossover(std::span<const std::uint32_t> parent_a,
                         std::span<const std::uint32_t> parent_b, std::size_t start,
                         std::size_t length) {
  const std::size_t n = parent_a.size();
  if (parent_b.size() != n) throw ContractError("crossover parents differ in length");
  if (start + length > n) throw ContractError("crossover slice out of range");
  Permutation child;
  child.reserve(n);
  std::vector<std::uint8_t> seen(n, 0);
  auto emit = [&](std::uint32_t v) {
    if (v >= n) throw ContractError("crossover parent is not a permutation");
    if (!seen[v]) {
      seen[v] = 1;
      child.push_back(v);
    }
  };
  for (std::size_t i = 0; i < start; ++i) emit(parent_b[i]);
  for (std::size_t i = start; i < start + length; ++i) emit(parent_a[i]);
  for (std::size_t i = start; i < n; ++i) emit(parent_b[i]);
  if (child.size() != n) throw ContractError("crossover parents are not permutations of one set");
  return child;
}

Permutation ox_crossover(std::span<const std::uint32_t> parent_a,
                         std::span<const std::uint32_t> parent_b, Rng& rng) {
  const std::size_t n = parent_a.size();
  if (n == 0) return {};
  const std::size_t length = 1 + rng.uniform(n);
  const std::size_t start = rng.uniform(n - length + 1);
  return ox_crossover(parent_a, parent_b, start, length);
}

Permutation insertion_move(std::span<const std::uint32_t> seq, std::size_t from, std::size_t to) {
  if (from >= seq.size() || to >= seq.size()) throw ContractError("insertion index out of range");
  Permutation out(seq.begin(), seq.end());
  const std::uint32_t v = out[from];
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(from));
  out.insert(out.begin() + static_cast<std::ptrdiff_t>(to), v);
  return out;
}

Permutation insertion_mutate(std::span<const std::uint32_t> seq, Rng& rng) {
  const std::size_t n = seq.size();
  if (n < 2) return {seq.begin(), seq.end()};
  const std::size_t from = rng.uniform(n);
  std::size_t to = rng.uniform(n - 1);
  if (to >= from) ++to;
  return insertion_move(seq, from, to);
}

namespace {

template <class Pick>
Permutation traverse(const DependencyGraph& graph, Pick&& pick_ready) {
  const std::size_t n = graph.size();
  std::vector<std::uint32_t> missing(n);
  std::vector<std::uint32_t> ready;
  for (std::uint32_t v = 0; v < n; ++v) {
    missing[v] = static_cast<std::uint32_t>(graph.predecessors(v).size());
    if (missing[v] == 0) ready.push_back(v);
  }
  Permutation out;
  out.reserve(n);
  while (!ready.empty()) {
    const std::uint32_t v = pick_ready(ready);
    out.push_back(v);
    for (std::uint32_t s : graph.successors(v)) {
      if (--missing[s] == 0) ready.push_back(s);
    }
  }
  return out;
}

}  // namespace

Permutation fair_seed(const DependencyGraph& graph) {
  auto higher = [&](std::uint32_t a, std::uint32_t b) {
    if (graph.gas_price(a) != graph.gas_price(b)) return graph.gas_price(a) > graph.gas_price(b);
    return graph.id(a) < graph.id(b);
  };
  // Max-heap on (gas desc, id asc) over the ready set.
  auto heap_less = [&](std::uint32_t a, std::uint32_t b) { return higher(b, a); };
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, decltype(heap_less)> heap(
      heap_less);
  const std::size_t n = graph.size();
  std::vector<std::uint32_t> missing(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    missing[v] = static_cast<std::uint32_t>(graph.predecessors(v).size());
    if (missing[v] == 0) heap.push(v);
  }
  Permutation out;
  out.reserve(n);
  while (!heap.empty()) {
    const std::uint32_t v = heap.top();
    heap.pop();
    out.push_back(v);
    for (std::uint32_t s : graph.successors(v)) {
      if (--missing[s] == 0) heap.push(s);
    }
  }
  return out;
}

Permutation fair_random_order(const DependencyGraph& graph, Rng& rng) {
  return traverse(graph, [&](std::vector<std::uint32_t>& ready) {
    const std::size_t k = rng.uniform(ready.size());
    const std::uint32_t v = ready[k];
    ready[k] = ready.back();
    ready.pop_back();
    return v;
  });
}

Permutation fair_crossover(std::span<const std::uint32_t> parent_a,
                           std::span<const std::uint32_t> parent_b,
                           const DependencyGraph& graph) {
  const std::size_t n = graph.size();
  if (parent_a.size() != n || parent_b.size() != n) {
    throw ContractError("fair crossover parents do not match the graph");
  }
  std::vector<std::uint8_t> emitted(n, 0);
  std::vector<std::uint32_t> missing(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    missing[v] = static_cast<std::uint32_t>(graph.predecessors(v).size());
  }
  const std::span<const std::uint32_t> parents[2] = {parent_a, parent_b};
  std::size_t cursor[2] = {0, 0};
  Permutation child;
  child.reserve(n);
  for (std::size_t turn = 0; child.size() < n; turn ^= 1) {
    const auto& parent = parents[turn];
    std::size_t& c = cursor[turn];
    while (c < n && emitted[parent[c]]) ++c;
    // In a topological parent the first unemitted node is always ready; the
    // scan past unready nodes covers parents that are not.
    std::size_t pick = c;
    while (pick < n && (emitted[parent[pick]] || missing[parent[pick]] != 0)) ++pick;
    if (pick == n) throw ContractError("fair crossover parent is not a topological order");
    const std::uint32_t v = parent[pick];
    emitted[v] = 1;
    child.push_back(v);
    for (std::uint32_t s : graph.successors(v)) --missing[s];
  }
  return child;
}

Permutation fair_mutate(std::span<const std::uint32_t> seq, const DependencyGraph& graph,
                        Rng& rng) {
  const std::size_t n = seq.size();
  if (n < 2) return {seq.begin(), seq.end()};
  const std::size_t i = rng.uniform(n);
  const std::uint32_t v = seq[i];
  std::ptrdiff_t lo = static_cast<std::ptrdiff_t>(i) - 1;
  while (lo >= 0 && !graph.adjacent(seq[static_cast<std::size_t>(lo)], v)) --lo;
  std::size_t hi = i + 1;
  while (hi < n && !graph.adjacent(seq[hi], v)) ++hi;
  // Final index p must satisfy lo < p < hi.
  const std::size_t first = static_cast<std::size_t>(lo + 1);
  const std::size_t slots = hi - first;
  if (slots <= 1) return {seq.begin(), seq.end()};
  std::size_t to = first + rng.uniform(slots - 1);
  if (to >= i) ++to;
  return insertion_move(seq, i, to);
}

}  // namespace txseq
