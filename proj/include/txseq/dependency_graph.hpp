#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "txseq/core.hpp"
#include "txseq/instance.hpp"

namespace txseq {

/// Conflict DAG over a fair total order: edge i -> j iff i precedes j in the
/// order and the two conflict. Nodes are positions in that order.
class DependencyGraph {
 public:
  /// `l_fair` lists the transactions in fair order.
  explicit DependencyGraph(std::span<const Transaction> l_fair);
  /// Uses the instance's index order (ascending id) as the fair order.
  explicit DependencyGraph(const BlockInstance& instance);

  std::size_t size() const noexcept { return preds_.size(); }
  std::size_t edge_count() const noexcept { return edges_; }
  std::span<const std::uint32_t> predecessors(std::uint32_t v) const { return preds_[v]; }
  std::span<const std::uint32_t> successors(std::uint32_t v) const { return succs_[v]; }
  bool has_edge(std::uint32_t from, std::uint32_t to) const;
  /// Edge in either direction, i.e. the two transactions conflict.
  bool adjacent(std::uint32_t a, std::uint32_t b) const {
    return a < b ? has_edge(a, b) : has_edge(b, a);
  }

  double gas_price(std::uint32_t v) const { return gas_[v]; }
  TxId id(std::uint32_t v) const { return ids_[v]; }

 private:
  void build(std::span<const std::vector<std::uint32_t>> reads,
             std::span<const std::vector<std::uint32_t>> writes, std::size_t object_count);

  std::vector<std::vector<std::uint32_t>> preds_;
  std::vector<std::vector<std::uint32_t>> succs_;
  std::vector<double> gas_;
  std::vector<TxId> ids_;
  std::size_t edges_ = 0;
};

DependencyGraph build_dependency_graph(std::span<const Transaction> l_fair);

/// True iff `order` is a permutation of the graph's nodes respecting every edge.
bool is_topological(std::span<const std::uint32_t> order, const DependencyGraph& graph);

}  // namespace txseq
