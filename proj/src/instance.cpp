#include "txseq/instance.hpp"

#include <algorithm>
#include <unordered_map>

namespace txseq {

BlockInstance::BlockInstance(std::vector<Transaction> txs, SchedulingConfig config,
                             const Carryover& carryover)
    : txs_(std::move(txs)), config_(config), carryover_(carryover) {
  config_.validate();
  for (Time offset : carryover_.worker_offsets) {
    if (offset < 0) throw std::invalid_argument("carryover worker offsets must be >= 0");
  }
  for (const auto& [k, offset] : carryover_.object_offsets) {
    if (offset < 0) throw std::invalid_argument("carryover object offsets must be >= 0");
  }
  std::sort(txs_.begin(), txs_.end(),
            [](const Transaction& a, const Transaction& b) { return a.id() < b.id(); });
  for (std::size_t i = 1; i < txs_.size(); ++i) {
    if (txs_[i - 1].id() == txs_[i].id()) {
      throw ContractError("duplicate transaction id " + std::to_string(txs_[i].id().value));
    }
  }

  const std::size_t n = txs_.size();
  std::unordered_map<ObjectId, std::uint32_t> local;
  auto local_of = [&](ObjectId k) {
    auto [it, inserted] = local.emplace(k, static_cast<std::uint32_t>(objects_.size()));
    if (inserted) objects_.push_back(k);
    return it->second;
  };

  read_begin_.reserve(n + 1);
  write_begin_.reserve(n + 1);
  exec_.reserve(n);
  fee_.reserve(n);
  carry_bound_.reserve(n);
  for (const auto& tx : txs_) {
    read_begin_.push_back(static_cast<std::uint32_t>(read_objs_.size()));
    write_begin_.push_back(static_cast<std::uint32_t>(write_objs_.size()));
    for (ObjectId k : tx.reads()) read_objs_.push_back(local_of(k));
    for (ObjectId k : tx.writes()) write_objs_.push_back(local_of(k));
    exec_.push_back(tx.exec_time());
    fee_.push_back(tx.fee());
    carry_bound_.push_back(carryover_.object_bound(tx));
    total_fee_ += tx.fee();
  }
  read_begin_.push_back(static_cast<std::uint32_t>(read_objs_.size()));
  write_begin_.push_back(static_cast<std::uint32_t>(write_objs_.size()));

  worker_offsets_.resize(config_.workers);
  for (std::uint32_t w = 0; w < config_.workers; ++w) {
    worker_offsets_[w] = carryover_.worker_offset(w);
  }
}

std::uint32_t BlockInstance::index_of(TxId id) const {
  auto it = std::lower_bound(txs_.begin(), txs_.end(), id,
                             [](const Transaction& tx, TxId key) { return tx.id() < key; });
  if (it == txs_.end() || it->id() != id) return static_cast<std::uint32_t>(txs_.size());
  return static_cast<std::uint32_t>(it - txs_.begin());
}

std::vector<TxId> BlockInstance::ids(std::span<const std::uint32_t> order) const {
  std::vector<TxId> out;
  out.reserve(order.size());
  for (std::uint32_t i : order) out.push_back(txs_.at(i).id());
  return out;
}

bool is_permutation_of_size(std::span<const std::uint32_t> order, std::size_t n) {
  if (order.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (std::uint32_t i : order) {
    if (i >= n || seen[i]) return false;
    seen[i] = true;
  }
  return true;
}

}  // namespace txseq
