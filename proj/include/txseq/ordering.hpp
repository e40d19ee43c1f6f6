#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "txseq/core.hpp"
#include "txseq/dependency_graph.hpp"
#include "txseq/instance.hpp"
#include "txseq/random.hpp"

namespace txseq {

/// A block ordering expressed as transaction ids.
using Ordering = std::vector<TxId>;

Ordering to_ordering(std::span<const Transaction> txs, std::span<const std::uint32_t> order);

// Heuristic sequencers. Each returns positions into `txs`.

/// Descending gas price, ties by ascending id.
Permutation order_by_gas_price(std::span<const Transaction> txs);
/// Ascending execution time, ties by ascending id.
Permutation order_by_exec_time(std::span<const Transaction> txs);
/// Arrival order: the input order as given.
Permutation order_given(std::span<const Transaction> txs);
/// Seeded uniform shuffle (Fisher-Yates).
Permutation order_random(std::span<const Transaction> txs, std::uint64_t seed);
Permutation random_permutation(std::size_t n, Rng& rng);

// Permutation operators.

/// Order crossover with an explicit slice: parent_a[start, start + length)
/// is inserted into parent_b before index `start`, then later duplicates are
/// dropped scanning left to right.
Permutation ox_crossover(std::span<const std::uint32_t> parent_a,
                         std::span<const std::uint32_t> parent_b, std::size_t start,
                         std::size_t length);
/// Random slice: length uniform in [1, n], start uniform in [0, n - length].
Permutation ox_crossover(std::span<const std::uint32_t> parent_a,
                         std::span<const std::uint32_t> parent_b, Rng& rng);

/// Removes the element at `from` and reinserts it so it ends at index `to`.
Permutation insertion_move(std::span<const std::uint32_t> seq, std::size_t from, std::size_t to);
/// Moves a uniformly chosen element to a uniformly chosen different index.
/// Sequences shorter than 2 are returned unchanged.
Permutation insertion_mutate(std::span<const std::uint32_t> seq, Rng& rng);

// Fair-order operators over topological orders of a dependency graph.

/// Ready-set traversal that always emits the highest gas price (ties by id).
Permutation fair_seed(const DependencyGraph& graph);
/// Ready-set traversal choosing uniformly at random among ready nodes.
Permutation fair_random_order(const DependencyGraph& graph, Rng& rng);
/// Alternates between the parents, each time emitting that parent's first
/// not-yet-emitted node whose predecessors have all been emitted.
Permutation fair_crossover(std::span<const std::uint32_t> parent_a,
                           std::span<const std::uint32_t> parent_b,
                           const DependencyGraph& graph);
/// Relocates a random node uniformly within the window bounded by its
/// nearest conflicting neighbours, excluding its current slot.
Permutation fair_mutate(std::span<const std::uint32_t> seq, const DependencyGraph& graph,
                        Rng& rng);

}  // namespace txseq
