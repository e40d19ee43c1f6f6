#pragma once

// Straightforward reimplementation of the scheduling rules used as a test
// oracle. Placement state is a flat list rescanned on every query.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "txseq/core.hpp"

namespace ref {

using txseq::Carryover;
using txseq::Placement;
using txseq::Schedule;
using txseq::SchedulingConfig;
using txseq::Time;
using txseq::Transaction;

enum class Mode { Basic, GapFill, Fair };

struct Placed {
  const Transaction* tx;
  Time start;
  std::uint32_t worker;
  Time end() const { return start + tx->exec_time(); }
};

struct IdleGap {
  std::uint32_t worker;
  Time lo;
  Time hi;
};

inline Schedule schedule(std::span<const Transaction> ordering, const SchedulingConfig& cfg,
                         const Carryover& carry, Mode mode) {
  Schedule out;
  std::vector<Placed> placed;
  std::vector<const Transaction*> deferred;

  auto worker_free = [&](std::uint32_t w) {
    Time f = carry.worker_offset(w);
    for (const auto& p : placed) {
      if (p.worker == w) f = std::max(f, p.end());
    }
    return f;
  };
  auto gaps = [&] {
    std::vector<IdleGap> g;
    for (std::uint32_t w = 0; w < cfg.workers; ++w) {
      std::vector<std::pair<Time, Time>> iv;
      for (const auto& p : placed) {
        if (p.worker == w) iv.emplace_back(p.start, p.end());
      }
      std::sort(iv.begin(), iv.end());
      Time cursor = carry.worker_offset(w);
      for (auto [s, e] : iv) {
        if (s > cursor) g.push_back({w, cursor, s});
        cursor = std::max(cursor, e);
      }
    }
    std::sort(g.begin(), g.end(), [](const IdleGap& a, const IdleGap& b) {
      return std::make_tuple(a.hi - a.lo, a.lo, a.worker) <
             std::make_tuple(b.hi - b.lo, b.lo, b.worker);
    });
    return g;
  };

  for (const auto& tx : ordering) {
    const Time t = tx.exec_time();
    bool poisoned = false;
    if (mode == Mode::Fair) {
      for (const auto* d : deferred) poisoned = poisoned || txseq::conflicts(*d, tx);
    }
    if (poisoned || t > cfg.deadline) {
      out.defer(tx.id());
      deferred.push_back(&tx);
      continue;
    }
    const Time carry_lb = carry.object_bound(tx);
    Time conflict_end = 0;
    for (const auto& p : placed) {
      if (txseq::conflicts(*p.tx, tx)) conflict_end = std::max(conflict_end, p.end());
    }

    std::optional<Placement> chosen;
    if (mode != Mode::Basic) {
      for (const auto& g : gaps()) {
        if (g.hi - g.lo < t) continue;
        Time s = std::max(g.lo, carry_lb);
        if (mode == Mode::Fair) {
          s = std::max(s, conflict_end);
        } else {
          bool moved = true;
          while (moved) {
            moved = false;
            for (const auto& p : placed) {
              if (txseq::conflicts(*p.tx, tx) && p.start < s + t && s < p.end()) {
                s = p.end();
                moved = true;
              }
            }
          }
        }
        if (s + t <= g.hi) {
          chosen = Placement{s, g.worker};
          break;
        }
      }
    }
    if (!chosen) {
      const Time lb = std::max(conflict_end, carry_lb);
      std::uint32_t best_w = 0;
      Time best = std::max(worker_free(0), lb);
      for (std::uint32_t w = 1; w < cfg.workers; ++w) {
        const Time s = std::max(worker_free(w), lb);
        if (s < best) {
          best = s;
          best_w = w;
        }
      }
      if (best + t <= cfg.deadline) chosen = Placement{best, best_w};
    }
    if (chosen) {
      out.place(tx.id(), *chosen);
      placed.push_back({&tx, chosen->start, chosen->worker});
    } else {
      out.defer(tx.id());
      deferred.push_back(&tx);
    }
  }
  return out;
}

inline double profit_of(const Schedule& s, std::span<const Transaction> txs) {
  double total = 0.0;
  for (const auto& tx : txs) {
    const auto* slot = s.find(tx.id());
    if (slot && *slot) total += tx.fee();
  }
  return total;
}

}  // namespace ref
