#include "txseq/dependency_graph.hpp"

#include <algorithm>
#include <unordered_map>

namespace txseq {

DependencyGraph::DependencyGraph(std::span<const Transaction> l_fair) {
  std::unordered_map<ObjectId, std::uint32_t> local;
  auto local_of = [&](ObjectId k) {
    return local.emplace(k, static_cast<std::uint32_t>(local.size())).first->second;
  };
  std::vector<std::vector<std::uint32_t>> reads(l_fair.size()), writes(l_fair.size());
  for (std::size_t i = 0; i < l_fair.size(); ++i) {
    for (ObjectId k : l_fair[i].reads()) reads[i].push_back(local_of(k));
    for (ObjectId k : l_fair[i].writes()) writes[i].push_back(local_of(k));
    gas_.push_back(l_fair[i].gas_price());
    ids_.push_back(l_fair[i].id());
  }
  build(reads, writes, local.size());
}

DependencyGraph::DependencyGraph(const BlockInstance& instance) {
  const std::size_t n = instance.size();
  std::vector<std::vector<std::uint32_t>> reads(n), writes(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    auto r = instance.reads(i);
    auto w = instance.writes(i);
    reads[i].assign(r.begin(), r.end());
    writes[i].assign(w.begin(), w.end());
    gas_.push_back(instance.tx(i).gas_price());
    ids_.push_back(instance.tx(i).id());
  }
  build(reads, writes, instance.object_count());
}

void DependencyGraph::build(std::span<const std::vector<std::uint32_t>> reads,
                            std::span<const std::vector<std::uint32_t>> writes,
                            std::size_t object_count) {
  const std::size_t n = reads.size();
  preds_.assign(n, {});
  succs_.assign(n, {});
  // Earlier readers and writers per object, in fair order.
  std::vector<std::vector<std::uint32_t>> readers(object_count), writers(object_count);
  for (std::uint32_t j = 0; j < n; ++j) {
    auto& p = preds_[j];
    for (std::uint32_t k : reads[j]) p.insert(p.end(), writers[k].begin(), writers[k].end());
    for (std::uint32_t k : writes[j]) {
      p.insert(p.end(), writers[k].begin(), writers[k].end());
      p.insert(p.end(), readers[k].begin(), readers[k].end());
    }
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    for (std::uint32_t i : p) succs_[i].push_back(j);
    edges_ += p.size();
    for (std::uint32_t k : reads[j]) readers[k].push_back(j);
    for (std::uint32_t k : writes[j]) writers[k].push_back(j);
  }
}

bool DependencyGraph::has_edge(std::uint32_t from, std::uint32_t to) const {
  const auto& p = preds_[to];
  return std::binary_search(p.begin(), p.end(), from);
}

DependencyGraph build_dependency_graph(std::span<const Transaction> l_fair) {
  return DependencyGraph(l_fair);
}

bool is_topological(std::span<const std::uint32_t> order, const DependencyGraph& graph) {
  const std::size_t n = graph.size();
  if (!is_permutation_of_size(order, n)) return false;
  std::vector<std::uint32_t> position(n);
  for (std::uint32_t p = 0; p < n; ++p) position[order[p]] = p;
  for (std::uint32_t v = 0; v < n; ++v) {
    for (std::uint32_t u : graph.predecessors(v)) {
      if (position[u] > position[v]) return false;
    }
  }
  return true;
}

}  // namespace txseq
