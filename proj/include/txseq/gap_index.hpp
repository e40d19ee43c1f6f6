#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "txseq/core.hpp"

namespace txseq {

/// An idle interval [lo, hi) on one worker.
struct Gap {
  std::uint32_t worker = 0;
  Time lo = 0;
  Time hi = 0;

  Time duration() const noexcept { return hi - lo; }
  friend bool operator==(Gap, Gap) = default;
};

/// Idle intervals of all workers ordered by (duration, lo, worker).
///
/// Backed by a sorted vector: gap counts per block stay small and the
/// scheduler rebuilds the index once per evaluation, so contiguous storage
/// beats a node-based tree here.
class GapIndex {
 public:
  using const_iterator = std::vector<Gap>::const_iterator;

  void insert(Gap gap);
  /// Removes one gap equal to `gap`; returns false if absent.
  bool erase(const Gap& gap);
  const_iterator erase(const_iterator it);
  void clear() noexcept { gaps_.clear(); }

  /// First gap with duration >= min_duration.
  const_iterator smallest_at_least(Time min_duration) const;

  const_iterator begin() const noexcept { return gaps_.begin(); }
  const_iterator end() const noexcept { return gaps_.end(); }
  std::size_t size() const noexcept { return gaps_.size(); }
  bool empty() const noexcept { return gaps_.empty(); }

 private:
  static bool before(const Gap& a, const Gap& b) noexcept {
    if (a.duration() != b.duration()) return a.duration() < b.duration();
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.worker < b.worker;
  }

  std::vector<Gap> gaps_;
};

}  // namespace txseq
