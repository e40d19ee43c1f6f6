#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace txseq {

/// Abstract execution units. Integral so overlap checks are exact.
using Time = std::int64_t;

/// Raised when a caller breaks a documented precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Opaque object token. Only equality carries meaning; the ordering exists
/// so ids can live in sorted containers.
struct ObjectId {
  std::uint64_t value = 0;
  friend auto operator<=>(ObjectId, ObjectId) = default;
};

struct TxId {
  std::uint64_t value = 0;
  friend auto operator<=>(TxId, TxId) = default;
};

}  // namespace txseq

template <>
struct std::hash<txseq::ObjectId> {
  std::size_t operator()(txseq::ObjectId id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};

template <>
struct std::hash<txseq::TxId> {
  std::size_t operator()(txseq::TxId id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};

namespace txseq {

/// A transaction: object accesses, predicted execution time and the gas
/// price paid per unit of execution time.
///
/// Object sets are normalized at construction: duplicates are removed and an
/// object present in both sets is kept only in the write set, so `reads()`
/// holds the read-only accesses.
class Transaction {
 public:
  Transaction(TxId id, std::vector<ObjectId> reads, std::vector<ObjectId> writes,
              Time exec_time, double gas_price);

  TxId id() const noexcept { return id_; }
  std::span<const ObjectId> reads() const noexcept { return reads_; }
  std::span<const ObjectId> writes() const noexcept { return writes_; }
  /// reads ∪ writes, sorted.
  std::span<const ObjectId> touched() const noexcept { return touched_; }
  Time exec_time() const noexcept { return exec_time_; }
  double gas_price() const noexcept { return gas_price_; }
  double fee() const noexcept { return static_cast<double>(exec_time_) * gas_price_; }

  Transaction with_exec_time(Time exec_time) const;
  Transaction with_id(TxId id) const;

  friend bool operator==(const Transaction&, const Transaction&) = default;

 private:
  TxId id_;
  std::vector<ObjectId> reads_;
  std::vector<ObjectId> writes_;
  std::vector<ObjectId> touched_;
  Time exec_time_;
  double gas_price_;
};

/// True iff one transaction writes an object the other touches.
bool conflicts(const Transaction& a, const Transaction& b);

struct Placement {
  Time start = 0;
  std::uint32_t worker = 0;
  friend bool operator==(Placement, Placement) = default;
};

/// Output of a scheduling function: every transaction maps to a placement or
/// is deferred. Entries keep the order in which they were decided.
class Schedule {
 public:
  struct Entry {
    TxId tx;
    std::optional<Placement> placement;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  void place(TxId tx, Placement placement);
  void defer(TxId tx);

  bool contains(TxId tx) const { return index_.contains(tx); }
  /// nullptr when `tx` is not in the schedule; otherwise the entry's slot
  /// (an empty optional means deferred).
  const std::optional<Placement>* find(TxId tx) const;

  std::span<const Entry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  std::vector<TxId> scheduled() const;
  /// Deferred transactions in decision order.
  std::vector<TxId> deferred() const;

  friend bool operator==(const Schedule& a, const Schedule& b) { return a.entries_ == b.entries_; }

 private:
  void add(TxId tx, std::optional<Placement> placement);

  std::vector<Entry> entries_;
  std::unordered_map<TxId, std::size_t> index_;
};

struct SchedulingConfig {
  Time deadline = 1;
  std::uint32_t workers = 1;

  void validate() const;
};

/// Earliest-start offsets inherited from the previous round. Missing workers
/// and objects have offset 0.
struct Carryover {
  std::vector<Time> worker_offsets;
  std::map<ObjectId, Time> object_offsets;

  Time worker_offset(std::uint32_t worker) const noexcept {
    return worker < worker_offsets.size() ? worker_offsets[worker] : 0;
  }
  Time object_offset(ObjectId object) const noexcept {
    auto it = object_offsets.find(object);
    return it == object_offsets.end() ? 0 : it->second;
  }
  /// Max object offset over a transaction's touched set.
  Time object_bound(const Transaction& tx) const noexcept;

  friend bool operator==(const Carryover&, const Carryover&) = default;
};

/// Σ t·g over placed transactions, accumulated in ascending id order.
/// Throws ContractError if a transaction in `txs` is absent from `schedule`.
double profit(const Schedule& schedule, std::span<const Transaction> txs);

struct Violation {
  std::string rule;
  TxId tx;
  std::optional<TxId> other;
  std::string detail;
};

struct ValidationOptions {
  /// Realized schedules may legitimately run past the deadline.
  bool check_deadline = true;
  /// Per-transaction durations overriding exec_time (realized replay).
  const std::unordered_map<TxId, Time>* durations = nullptr;
};

/// Checks every placement against the scheduling rules. Rules reported:
/// missing, unknown, negative-start, deadline, worker-range, worker-overlap,
/// conflict-overlap, carryover-worker, carryover-object.
std::vector<Violation> validate_schedule(const Schedule& schedule,
                                         std::span<const Transaction> txs,
                                         const SchedulingConfig& config,
                                         const Carryover& carryover,
                                         const ValidationOptions& options = {});

/// Causal-order check: for conflicting i before j in `l_fair`, a placed j
/// requires a placed i with end_i <= start_j. Rule reported: fair-order.
std::vector<Violation> validate_fair_order(const Schedule& schedule,
                                           std::span<const Transaction> l_fair);

}  // namespace txseq
