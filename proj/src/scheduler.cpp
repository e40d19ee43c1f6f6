#include "txseq/scheduler.hpp"

#include <algorithm>
#include <unordered_map>

namespace txseq {

std::string_view to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::Basic:
      return "basic";
    case SchedulerKind::GapFill:
      return "gap_fill";
    case SchedulerKind::Fair:
      return "fair";
  }
  return "unknown";
}

WorkerChoice select_worker(std::span<const Time> worker_free, Time lower_bound) {
  if (worker_free.empty()) throw ContractError("select_worker needs at least one worker");
  WorkerChoice best{0, std::max(worker_free[0], lower_bound)};
  for (std::uint32_t w = 1; w < worker_free.size(); ++w) {
    const Time start = std::max(worker_free[w], lower_bound);
    if (start < best.start) best = {w, start};
  }
  return best;
}

void IntervalSet::insert_merge(Time lo, Time hi) {
  // First interval that could touch [lo, hi): hi' >= lo.
  auto first = std::lower_bound(items_.begin(), items_.end(), lo,
                                [](const Interval& iv, Time key) { return iv.hi < key; });
  auto last = first;
  while (last != items_.end() && last->lo <= hi) {
    lo = std::min(lo, last->lo);
    hi = std::max(hi, last->hi);
    ++last;
  }
  if (first == last) {
    items_.insert(first, Interval{lo, hi});
  } else {
    *first = Interval{lo, hi};
    items_.erase(first + 1, last);
  }
}

const IntervalSet::Interval* IntervalSet::first_overlap(Time from, Time until) const {
  auto it = std::upper_bound(items_.begin(), items_.end(), from,
                             [](Time key, const Interval& iv) { return key < iv.hi; });
  if (it == items_.end() || it->lo >= until) return nullptr;
  return &*it;
}

class Kernel {
 public:
  Kernel(const BlockInstance& inst, SchedulerKind kind, SchedulerWorkspace& ws)
      : inst_(inst), kind_(kind), ws_(ws) {
    const std::size_t n = inst.size();
    const std::size_t objects = inst.object_count();
    const std::uint32_t m = inst.config().workers;
    ws_.placements_.assign(n, std::nullopt);
    ws_.worker_free_.resize(m);
    for (std::uint32_t w = 0; w < m; ++w) ws_.worker_free_[w] = inst.worker_offset(w);
    ws_.last_write_end_.assign(objects, 0);
    ws_.last_any_end_.assign(objects, 0);
    ws_.gaps_.clear();
    if (kind_ == SchedulerKind::GapFill) {
      if (ws_.write_busy_.size() < objects) {
        ws_.write_busy_.resize(objects);
        ws_.any_busy_.resize(objects);
      }
      for (std::size_t k = 0; k < objects; ++k) {
        ws_.write_busy_[k].clear();
        ws_.any_busy_[k].clear();
      }
    }
    if (kind_ == SchedulerKind::Fair) {
      ws_.poisoned_read_.assign(objects, 0);
      ws_.poisoned_write_.assign(objects, 0);
    }
  }

  void process(std::uint32_t i) {
    const Time t = inst_.exec_time(i);
    const Time deadline = inst_.config().deadline;
    if (kind_ == SchedulerKind::Fair && poisoned(i)) {
      defer(i);
      return;
    }
    if (t > deadline) {
      defer(i);
      return;
    }
    const Time carry = inst_.carry_bound(i);
    const Time object_ready = object_lower_bound(i);

    if (kind_ != SchedulerKind::Basic) {
      for (auto it = ws_.gaps_.smallest_at_least(t); it != ws_.gaps_.end(); ++it) {
        const Gap gap = *it;
        Time start = std::max(gap.lo, carry);
        if (kind_ == SchedulerKind::Fair) {
          start = std::max(start, object_ready);
        } else if (start < object_ready) {
          start = earliest_free(i, start, gap.hi);
        }
        if (start + t <= gap.hi) {
          ws_.gaps_.erase(it);
          if (start > gap.lo) ws_.gaps_.insert({gap.worker, gap.lo, start});
          if (start + t < gap.hi) ws_.gaps_.insert({gap.worker, start + t, gap.hi});
          place(i, {start, gap.worker});
          return;
        }
      }
    }

    const WorkerChoice choice = select_worker(ws_.worker_free_, std::max(object_ready, carry));
    if (choice.start + t > deadline) {
      defer(i);
      return;
    }
    Time& free = ws_.worker_free_[choice.worker];
    if (kind_ != SchedulerKind::Basic && choice.start > free) {
      ws_.gaps_.insert({choice.worker, free, choice.start});
    }
    free = choice.start + t;
    place(i, {choice.start, choice.worker});
  }

 private:
  bool poisoned(std::uint32_t i) const {
    for (std::uint32_t k : inst_.reads(i)) {
      if (ws_.poisoned_write_[k]) return true;
    }
    for (std::uint32_t k : inst_.writes(i)) {
      if (ws_.poisoned_write_[k] || ws_.poisoned_read_[k]) return true;
    }
    return false;
  }

  /// Latest end of any already placed transaction conflicting with i.
  Time object_lower_bound(std::uint32_t i) const {
    Time bound = 0;
    for (std::uint32_t k : inst_.reads(i)) bound = std::max(bound, ws_.last_write_end_[k]);
    for (std::uint32_t k : inst_.writes(i)) bound = std::max(bound, ws_.last_any_end_[k]);
    return bound;
  }

  /// Earliest start >= from such that [start, start + t) avoids every
  /// conflicting interval; may exceed `limit - t`, meaning no fit.
  Time earliest_free(std::uint32_t i, Time from, Time limit) const {
    const Time t = inst_.exec_time(i);
    Time start = from;
    bool moved = true;
    while (moved && start + t <= limit) {
      moved = false;
      for (std::uint32_t k : inst_.reads(i)) {
        while (const auto* iv = ws_.write_busy_[k].first_overlap(start, start + t)) {
          start = iv->hi;
          moved = true;
        }
      }
      for (std::uint32_t k : inst_.writes(i)) {
        while (const auto* iv = ws_.any_busy_[k].first_overlap(start, start + t)) {
          start = iv->hi;
          moved = true;
        }
      }
    }
    return start;
  }

  void place(std::uint32_t i, Placement p) {
    const Time end = p.start + inst_.exec_time(i);
    ws_.placements_[i] = p;
    for (std::uint32_t k : inst_.reads(i)) {
      ws_.last_any_end_[k] = std::max(ws_.last_any_end_[k], end);
      if (kind_ == SchedulerKind::GapFill) ws_.any_busy_[k].insert_merge(p.start, end);
    }
    for (std::uint32_t k : inst_.writes(i)) {
      ws_.last_any_end_[k] = std::max(ws_.last_any_end_[k], end);
      ws_.last_write_end_[k] = std::max(ws_.last_write_end_[k], end);
      if (kind_ == SchedulerKind::GapFill) {
        ws_.any_busy_[k].insert_merge(p.start, end);
        ws_.write_busy_[k].insert_merge(p.start, end);
      }
    }
  }

  void defer(std::uint32_t i) {
    if (kind_ != SchedulerKind::Fair) return;
    for (std::uint32_t k : inst_.reads(i)) ws_.poisoned_read_[k] = 1;
    for (std::uint32_t k : inst_.writes(i)) ws_.poisoned_write_[k] = 1;
  }

  const BlockInstance& inst_;
  SchedulerKind kind_;
  SchedulerWorkspace& ws_;
};

double run_scheduler(const BlockInstance& instance, SchedulerKind kind,
                     std::span<const std::uint32_t> order, SchedulerWorkspace& workspace) {
  if (order.size() != instance.size()) {
    throw ContractError("ordering size does not match block size");
  }
  Kernel kernel(instance, kind, workspace);
  for (std::uint32_t i : order) kernel.process(i);
  double total = 0.0;
  for (std::uint32_t i = 0; i < instance.size(); ++i) {
    if (workspace.placements_[i]) total += instance.fee(i);
  }
  return total;
}

double evaluate(const BlockInstance& instance, SchedulerKind kind,
                std::span<const std::uint32_t> order) {
  thread_local SchedulerWorkspace workspace;
  return run_scheduler(instance, kind, order, workspace);
}

Schedule schedule_instance(const BlockInstance& instance, SchedulerKind kind,
                           std::span<const std::uint32_t> order) {
  SchedulerWorkspace workspace;
  run_scheduler(instance, kind, order, workspace);
  Schedule schedule;
  for (std::uint32_t i : order) {
    const auto& p = workspace.placements()[i];
    if (p) {
      schedule.place(instance.tx(i).id(), *p);
    } else {
      schedule.defer(instance.tx(i).id());
    }
  }
  return schedule;
}

namespace {

Schedule schedule_ordering(std::span<const Transaction> ordering, const SchedulingConfig& config,
                           const Carryover& carryover, SchedulerKind kind) {
  BlockInstance instance({ordering.begin(), ordering.end()}, config, carryover);
  Permutation order;
  order.reserve(ordering.size());
  for (const auto& tx : ordering) order.push_back(instance.index_of(tx.id()));
  return schedule_instance(instance, kind, order);
}

}  // namespace

Schedule schedule_basic(std::span<const Transaction> ordering, const SchedulingConfig& config,
                        const Carryover& carryover) {
  return schedule_ordering(ordering, config, carryover, SchedulerKind::Basic);
}

Schedule schedule_gap_fill(std::span<const Transaction> ordering, const SchedulingConfig& config,
                           const Carryover& carryover) {
  return schedule_ordering(ordering, config, carryover, SchedulerKind::GapFill);
}

Schedule schedule_fair(std::span<const Transaction> ordering, const SchedulingConfig& config,
                       const Carryover& carryover, std::span<const Transaction> l_fair) {
  if (!l_fair.empty()) {
    if (l_fair.size() != ordering.size()) {
      throw ContractError("fair order and ordering cover different transactions");
    }
    std::unordered_map<TxId, std::uint32_t> fair_position;
    for (std::uint32_t p = 0; p < l_fair.size(); ++p) fair_position.emplace(l_fair[p].id(), p);
    Permutation as_fair;
    as_fair.reserve(ordering.size());
    for (const auto& tx : ordering) {
      auto it = fair_position.find(tx.id());
      if (it == fair_position.end()) {
        throw ContractError("transaction " + std::to_string(tx.id().value) +
                            " not in fair order");
      }
      as_fair.push_back(it->second);
    }
    if (!is_topological(as_fair, DependencyGraph(l_fair))) {
      throw ContractError("ordering violates the causal order of the fair order");
    }
  }
  return schedule_ordering(ordering, config, carryover, SchedulerKind::Fair);
}

}  // namespace txseq
