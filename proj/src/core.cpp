#include "txseq/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace txseq {

namespace {

void sort_unique(std::vector<ObjectId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool intersects(std::span<const ObjectId> a, std::span<const ObjectId> b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

std::string tx_str(TxId id) { return std::to_string(id.value); }

}  // namespace

Transaction::Transaction(TxId id, std::vector<ObjectId> reads, std::vector<ObjectId> writes,
                         Time exec_time, double gas_price)
    : id_(id),
      reads_(std::move(reads)),
      writes_(std::move(writes)),
      exec_time_(exec_time),
      gas_price_(gas_price) {
  if (exec_time_ < 1) {
    throw std::invalid_argument("transaction " + tx_str(id_) + ": exec_time must be >= 1");
  }
  if (!(gas_price_ >= 0.0) || !std::isfinite(gas_price_)) {
    throw std::invalid_argument("transaction " + tx_str(id_) +
                                ": gas_price must be finite and >= 0");
  }
  sort_unique(reads_);
  sort_unique(writes_);
  // An object both read and written counts as written.
  std::vector<ObjectId> read_only;
  read_only.reserve(reads_.size());
  std::set_difference(reads_.begin(), reads_.end(), writes_.begin(), writes_.end(),
                      std::back_inserter(read_only));
  reads_ = std::move(read_only);
  touched_.reserve(reads_.size() + writes_.size());
  std::merge(reads_.begin(), reads_.end(), writes_.begin(), writes_.end(),
             std::back_inserter(touched_));
}

Transaction Transaction::with_exec_time(Time exec_time) const {
  return Transaction(id_, reads_, writes_, exec_time, gas_price_);
}

Transaction Transaction::with_id(TxId id) const {
  Transaction copy = *this;
  copy.id_ = id;
  return copy;
}

bool conflicts(const Transaction& a, const Transaction& b) {
  return intersects(a.writes(), b.touched()) || intersects(b.writes(), a.touched());
}

void Schedule::add(TxId tx, std::optional<Placement> placement) {
  auto [it, inserted] = index_.emplace(tx, entries_.size());
  if (!inserted) {
    throw ContractError("transaction " + tx_str(tx) + " already in schedule");
  }
  entries_.push_back({tx, placement});
}

void Schedule::place(TxId tx, Placement placement) { add(tx, placement); }

void Schedule::defer(TxId tx) { add(tx, std::nullopt); }

const std::optional<Placement>* Schedule::find(TxId tx) const {
  auto it = index_.find(tx);
  return it == index_.end() ? nullptr : &entries_[it->second].placement;
}

std::vector<TxId> Schedule::scheduled() const {
  std::vector<TxId> out;
  for (const auto& e : entries_) {
    if (e.placement) out.push_back(e.tx);
  }
  return out;
}

std::vector<TxId> Schedule::deferred() const {
  std::vector<TxId> out;
  for (const auto& e : entries_) {
    if (!e.placement) out.push_back(e.tx);
  }
  return out;
}

void SchedulingConfig::validate() const {
  if (deadline < 1) throw std::invalid_argument("deadline must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
}

Time Carryover::object_bound(const Transaction& tx) const noexcept {
  Time bound = 0;
  if (object_offsets.empty()) return bound;
  for (ObjectId k : tx.touched()) bound = std::max(bound, object_offset(k));
  return bound;
}

double profit(const Schedule& schedule, std::span<const Transaction> txs) {
  std::vector<const Transaction*> sorted;
  sorted.reserve(txs.size());
  for (const auto& tx : txs) sorted.push_back(&tx);
  std::sort(sorted.begin(), sorted.end(),
            [](const Transaction* a, const Transaction* b) { return a->id() < b->id(); });
  double total = 0.0;
  for (const Transaction* tx : sorted) {
    const auto* slot = schedule.find(tx->id());
    if (slot == nullptr) {
      throw ContractError("transaction " + tx_str(tx->id()) + " missing from schedule");
    }
    if (slot->has_value()) total += tx->fee();
  }
  return total;
}

namespace {

struct PlacedTx {
  const Transaction* tx;
  Placement placement;
  Time duration;
  Time end() const { return placement.start + duration; }
};

struct Access {
  Time start;
  Time end;
  bool write;
  TxId tx;
};

}  // namespace

std::vector<Violation> validate_schedule(const Schedule& schedule,
                                         std::span<const Transaction> txs,
                                         const SchedulingConfig& config,
                                         const Carryover& carryover,
                                         const ValidationOptions& options) {
  std::vector<Violation> out;
  auto report = [&](std::string rule, TxId tx, std::optional<TxId> other, std::string detail) {
    out.push_back({std::move(rule), tx, other, std::move(detail)});
  };

  std::unordered_map<TxId, const Transaction*> by_id;
  by_id.reserve(txs.size());
  for (const auto& tx : txs) by_id.emplace(tx.id(), &tx);

  for (const auto& e : schedule.entries()) {
    if (!by_id.contains(e.tx)) report("unknown", e.tx, std::nullopt, "not an input transaction");
  }

  std::vector<PlacedTx> placed;
  for (const auto& tx : txs) {
    const auto* slot = schedule.find(tx.id());
    if (slot == nullptr) {
      report("missing", tx.id(), std::nullopt, "absent from schedule");
      continue;
    }
    if (!slot->has_value()) continue;
    Time duration = tx.exec_time();
    if (options.durations != nullptr) {
      if (auto it = options.durations->find(tx.id()); it != options.durations->end()) {
        duration = it->second;
      }
    }
    placed.push_back({&tx, **slot, duration});
  }

  for (const auto& p : placed) {
    const TxId id = p.tx->id();
    const Time s = p.placement.start;
    if (s < 0) report("negative-start", id, std::nullopt, "start " + std::to_string(s));
    if (options.check_deadline && p.end() > config.deadline) {
      std::ostringstream msg;
      msg << "end " << p.end() << " > deadline " << config.deadline;
      report("deadline", id, std::nullopt, msg.str());
    }
    if (p.placement.worker >= config.workers) {
      report("worker-range", id, std::nullopt,
             "worker " + std::to_string(p.placement.worker) + " >= " +
                 std::to_string(config.workers));
    }
    const Time worker_bound = carryover.worker_offset(p.placement.worker);
    if (s < worker_bound) {
      report("carryover-worker", id, std::nullopt,
             "start " + std::to_string(s) + " < worker offset " + std::to_string(worker_bound));
    }
    for (ObjectId k : p.tx->touched()) {
      const Time bound = carryover.object_offset(k);
      if (s < bound) {
        report("carryover-object", id, std::nullopt,
               "start " + std::to_string(s) + " < offset " + std::to_string(bound) +
                   " of object " + std::to_string(k.value));
      }
    }
  }

  // Same-worker overlap: sweep each worker's placements by start.
  {
    std::vector<const PlacedTx*> order;
    for (const auto& p : placed) order.push_back(&p);
    std::sort(order.begin(), order.end(), [](const PlacedTx* a, const PlacedTx* b) {
      if (a->placement.worker != b->placement.worker) {
        return a->placement.worker < b->placement.worker;
      }
      if (a->placement.start != b->placement.start) return a->placement.start < b->placement.start;
      return a->tx->id() < b->tx->id();
    });
    const PlacedTx* latest = nullptr;
    for (const PlacedTx* p : order) {
      if (latest != nullptr && latest->placement.worker == p->placement.worker &&
          p->placement.start < latest->end()) {
        report("worker-overlap", p->tx->id(), latest->tx->id(),
               "worker " + std::to_string(p->placement.worker));
      }
      if (latest == nullptr || latest->placement.worker != p->placement.worker ||
          p->end() > latest->end()) {
        latest = p;
      }
    }
  }

  // Conflict overlap: per object, sweep accesses by start tracking the
  // latest-ending write and the latest-ending access of any kind.
  {
    std::unordered_map<ObjectId, std::vector<Access>> per_object;
    for (const auto& p : placed) {
      for (ObjectId k : p.tx->reads()) {
        per_object[k].push_back({p.placement.start, p.end(), false, p.tx->id()});
      }
      for (ObjectId k : p.tx->writes()) {
        per_object[k].push_back({p.placement.start, p.end(), true, p.tx->id()});
      }
    }
    std::vector<std::pair<ObjectId, std::vector<Access>*>> objects;
    objects.reserve(per_object.size());
    for (auto& [k, v] : per_object) objects.emplace_back(k, &v);
    std::sort(objects.begin(), objects.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [k, accesses] : objects) {
      std::sort(accesses->begin(), accesses->end(), [](const Access& a, const Access& b) {
        if (a.start != b.start) return a.start < b.start;
        return a.tx < b.tx;
      });
      const Access* last_write = nullptr;
      const Access* last_any = nullptr;
      for (const Access& a : *accesses) {
        const Access* blocker = nullptr;
        if (a.write && last_any != nullptr && a.start < last_any->end) blocker = last_any;
        if (!a.write && last_write != nullptr && a.start < last_write->end) blocker = last_write;
        if (blocker != nullptr) {
          report("conflict-overlap", a.tx, blocker->tx, "object " + std::to_string(k.value));
        }
        if (last_any == nullptr || a.end > last_any->end) last_any = &a;
        if (a.write && (last_write == nullptr || a.end > last_write->end)) last_write = &a;
      }
    }
  }
  return out;
}

std::vector<Violation> validate_fair_order(const Schedule& schedule,
                                           std::span<const Transaction> l_fair) {
  struct ObjectHistory {
    bool write_unplaced = false;
    bool any_unplaced = false;
    Time write_end = 0;
    Time any_end = 0;
    std::optional<TxId> write_culprit;
    std::optional<TxId> any_culprit;
  };
  std::unordered_map<ObjectId, ObjectHistory> history;
  std::vector<Violation> out;

  for (const auto& tx : l_fair) {
    const auto* slot = schedule.find(tx.id());
    const bool is_placed = slot != nullptr && slot->has_value();
    if (is_placed) {
      const Time s = (*slot)->start;
      auto check = [&](bool unplaced, Time end, std::optional<TxId> culprit, ObjectId k) {
        if (unplaced) {
          out.push_back({"fair-order", tx.id(), culprit,
                         "earlier conflicting transaction deferred on object " +
                             std::to_string(k.value)});
        } else if (end > s) {
          out.push_back({"fair-order", tx.id(), culprit,
                         "starts before earlier conflicting transaction ends on object " +
                             std::to_string(k.value)});
        }
      };
      for (ObjectId k : tx.reads()) {
        if (auto it = history.find(k); it != history.end()) {
          check(it->second.write_unplaced, it->second.write_end, it->second.write_culprit, k);
        }
      }
      for (ObjectId k : tx.writes()) {
        if (auto it = history.find(k); it != history.end()) {
          check(it->second.any_unplaced, it->second.any_end, it->second.any_culprit, k);
        }
      }
    }
    const Time end = is_placed ? (*slot)->start + tx.exec_time() : 0;
    auto record = [&](ObjectId k, bool write) {
      auto& h = history[k];
      if (!is_placed) {
        h.any_unplaced = true;
        h.any_culprit = tx.id();
        if (write) {
          h.write_unplaced = true;
          h.write_culprit = tx.id();
        }
        return;
      }
      if (end > h.any_end) {
        h.any_end = end;
        if (!h.any_unplaced) h.any_culprit = tx.id();
      }
      if (write && end > h.write_end) {
        h.write_end = end;
        if (!h.write_unplaced) h.write_culprit = tx.id();
      }
    };
    for (ObjectId k : tx.reads()) record(k, false);
    for (ObjectId k : tx.writes()) record(k, true);
  }
  return out;
}

}  // namespace txseq
