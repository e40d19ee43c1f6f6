#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "txseq/core.hpp"

namespace txseq {

/// Positions into a block's transaction list.
using Permutation = std::vector<std::uint32_t>;

/// One block's scheduling problem in a dense, index-addressed form.
///
/// Transactions are held sorted by id, so index order is id order. Objects
/// are renumbered to dense local indices and the carryover is folded into a
/// per-worker offset and a per-transaction object bound. Built once per
/// block; the scheduler kernels then evaluate many orderings against it.
class BlockInstance {
 public:
  BlockInstance(std::vector<Transaction> txs, SchedulingConfig config,
                const Carryover& carryover = {});

  std::size_t size() const noexcept { return txs_.size(); }
  bool empty() const noexcept { return txs_.empty(); }
  std::span<const Transaction> transactions() const noexcept { return txs_; }
  const Transaction& tx(std::uint32_t i) const { return txs_[i]; }
  const SchedulingConfig& config() const noexcept { return config_; }
  const Carryover& carryover() const noexcept { return carryover_; }

  std::size_t object_count() const noexcept { return objects_.size(); }
  ObjectId object(std::uint32_t local) const { return objects_[local]; }

  std::span<const std::uint32_t> reads(std::uint32_t i) const {
    return {read_objs_.data() + read_begin_[i], read_objs_.data() + read_begin_[i + 1]};
  }
  std::span<const std::uint32_t> writes(std::uint32_t i) const {
    return {write_objs_.data() + write_begin_[i], write_objs_.data() + write_begin_[i + 1]};
  }
  Time exec_time(std::uint32_t i) const { return exec_[i]; }
  double fee(std::uint32_t i) const { return fee_[i]; }
  /// Largest carryover object offset over transaction i's touched set.
  Time carry_bound(std::uint32_t i) const { return carry_bound_[i]; }
  Time worker_offset(std::uint32_t w) const { return worker_offsets_[w]; }

  /// Index of the transaction with this id, or size() if absent.
  std::uint32_t index_of(TxId id) const;

  /// Σ fee over all transactions in index order; the profit upper bound.
  double total_fee() const noexcept { return total_fee_; }

  /// Converts an index permutation to transaction ids.
  std::vector<TxId> ids(std::span<const std::uint32_t> order) const;

 private:
  std::vector<Transaction> txs_;
  SchedulingConfig config_;
  Carryover carryover_;
  std::vector<ObjectId> objects_;
  std::vector<std::uint32_t> read_begin_, write_begin_;
  std::vector<std::uint32_t> read_objs_, write_objs_;
  std::vector<Time> exec_;
  std::vector<double> fee_;
  std::vector<Time> carry_bound_;
  std::vector<Time> worker_offsets_;
  double total_fee_ = 0.0;
};

bool is_permutation_of_size(std::span<const std::uint32_t> order, std::size_t n);

}  // namespace txseq
