#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "txseq/core.hpp"
#include "txseq/dependency_graph.hpp"
#include "txseq/gap_index.hpp"
#include "txseq/instance.hpp"

namespace txseq {

enum class SchedulerKind {
  /// Greedy append-only placement at the end of worker queues.
  Basic,
  /// Basic placement preceded by a best-fit search of idle gaps.
  GapFill,
  /// GapFill under causal-order constraints with deferral cascade.
  Fair,
};

std::string_view to_string(SchedulerKind kind);

struct WorkerChoice {
  std::uint32_t worker = 0;
  Time start = 0;
  friend bool operator==(WorkerChoice, WorkerChoice) = default;
};

/// Earliest-start-time worker selection: the worker whose feasible start
/// max(free[w], lower_bound) is smallest, lowest index on ties.
WorkerChoice select_worker(std::span<const Time> worker_free, Time lower_bound);

/// Per-object occupied intervals, disjoint and sorted.
class IntervalSet {
 public:
  struct Interval {
    Time lo;
    Time hi;
  };

  void clear() noexcept { items_.clear(); }
  /// Inserts [lo, hi), merging with touching or overlapping intervals.
  void insert_merge(Time lo, Time hi);
  /// First interval with hi > from, if it starts before `until`.
  const Interval* first_overlap(Time from, Time until) const;
  std::span<const Interval> items() const noexcept { return items_; }

 private:
  std::vector<Interval> items_;
};

/// Reusable scratch state for the scheduler kernels. Not thread-safe: use
/// one workspace per thread.
class SchedulerWorkspace {
 public:
  /// Placement per instance index from the last `run_scheduler` call.
  std::span<const std::optional<Placement>> placements() const noexcept { return placements_; }

 private:
  friend double run_scheduler(const BlockInstance&, SchedulerKind,
                              std::span<const std::uint32_t>, SchedulerWorkspace&);
  friend class Kernel;

  std::vector<std::optional<Placement>> placements_;
  std::vector<Time> worker_free_;
  std::vector<Time> last_write_end_;
  std::vector<Time> last_any_end_;
  std::vector<IntervalSet> write_busy_;
  std::vector<IntervalSet> any_busy_;
  std::vector<std::uint8_t> poisoned_read_;
  std::vector<std::uint8_t> poisoned_write_;
  GapIndex gaps_;
};

/// Schedules `order` (a permutation of instance indices) and returns the
/// profit. Placements are left in `workspace.placements()`.
double run_scheduler(const BlockInstance& instance, SchedulerKind kind,
                     std::span<const std::uint32_t> order, SchedulerWorkspace& workspace);

/// Profit of scheduling `order`, using a per-thread workspace. Pure.
double evaluate(const BlockInstance& instance, SchedulerKind kind,
                std::span<const std::uint32_t> order);

/// Runs the kernel and materializes a Schedule in processing order.
Schedule schedule_instance(const BlockInstance& instance, SchedulerKind kind,
                           std::span<const std::uint32_t> order);

Schedule schedule_basic(std::span<const Transaction> ordering, const SchedulingConfig& config,
                        const Carryover& carryover = {});
Schedule schedule_gap_fill(std::span<const Transaction> ordering, const SchedulingConfig& config,
                           const Carryover& carryover = {});
/// `ordering` must respect the causal order of `l_fair`; when a graph is
/// supplied it is checked and ContractError is thrown on violation. Without
/// a graph the ordering itself is taken as the fair order.
Schedule schedule_fair(std::span<const Transaction> ordering, const SchedulingConfig& config,
                       const Carryover& carryover = {},
                       std::span<const Transaction> l_fair = {});

}  // namespace txseq
