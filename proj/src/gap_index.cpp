#include "txseq/gap_index.hpp"

#include <algorithm>

namespace txseq {

void GapIndex::insert(Gap gap) {
  if (gap.hi <= gap.lo) throw ContractError("gap must be non-empty");
  auto it = std::upper_bound(gaps_.begin(), gaps_.end(), gap, before);
  gaps_.insert(it, gap);
}

bool GapIndex::erase(const Gap& gap) {
  auto it = std::lower_bound(gaps_.begin(), gaps_.end(), gap, before);
  if (it == gaps_.end() || !(*it == gap)) return false;
  gaps_.erase(it);
  return true;
}

GapIndex::const_iterator GapIndex::erase(const_iterator it) { return gaps_.erase(it); }

GapIndex::const_iterator GapIndex::smallest_at_least(Time min_duration) const {
  return std::partition_point(gaps_.begin(), gaps_.end(),
                              [&](const Gap& g) { return g.duration() < min_duration; });
}

}  // namespace txseq
