#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "txseq/continuous.hpp"

namespace txseq {

struct BlockMetrics {
  std::size_t block_index = 0;
  std::size_t scheduled = 0;
  std::size_t deferred = 0;
  std::size_t canceled = 0;
  double profit = 0.0;
  Time deadline_new = 0;
  std::vector<double> latencies;

  double mean_latency() const noexcept;
};

BlockMetrics block_metrics(const RoundResult& result);
std::vector<BlockMetrics> block_metrics(std::span<const RoundResult> results);

/// Mean with a 95% normal-approximation half-width.
struct MeanHw {
  double mean = 0.0;
  double half_width = 0.0;
};

/// Throws std::invalid_argument on an empty sample.
MeanHw mean_hw(std::span<const double> values);

/// Mean scheduled count per block over blocks [window_begin, end).
MeanHw throughput(std::span<const BlockMetrics> blocks, std::size_t window_begin = 0);

/// series[s][b] = cumulative profit of s up to block b divided by the
/// minimum cumulative profit over all sequencers at b (1 when that minimum
/// is 0). All runs must cover the same blocks.
std::vector<std::vector<double>> normalized_cumulative_profit(
    std::span<const std::vector<BlockMetrics>> runs);

/// Latencies in units of d of every executed transaction in the window.
std::vector<double> latency(std::span<const BlockMetrics> blocks, std::size_t window_begin = 0);

/// (first block b > spike_end with no deferrals) - spike_end, or nullopt.
std::optional<std::size_t> blocks_to_recover(std::span<const BlockMetrics> blocks,
                                             std::size_t spike_end);

struct RunSummary {
  std::string sequencer;
  MeanHw throughput;
  /// Per-block normalized cumulative profit over the window.
  MeanHw normalized_profit;
  double final_normalized_profit = 0.0;
  double total_profit = 0.0;
  MeanHw latency;
  std::optional<std::size_t> blocks_to_recover;
};

/// One summary per run. `spike_end` is the last spike block, if any.
std::vector<RunSummary> summarize(std::span<const std::string> names,
                                  std::span<const std::vector<BlockMetrics>> runs,
                                  std::size_t window_begin,
                                  std::optional<std::size_t> spike_end = std::nullopt);

}  // namespace txseq
