#include "txseq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace txseq {

double BlockMetrics::mean_latency() const noexcept {
  if (latencies.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(latencies.begin(), latencies.end(), 0.0) /
         static_cast<double>(latencies.size());
}

BlockMetrics block_metrics(const RoundResult& result) {
  BlockMetrics m;
  m.block_index = result.round;
  m.scheduled = result.scheduled.size();
  m.deferred = result.deferred.size();
  m.canceled = result.canceled.size();
  m.profit = result.realized_profit;
  m.deadline_new = result.deadline_new;
  m.latencies = result.latencies;
  return m;
}

std::vector<BlockMetrics> block_metrics(std::span<const RoundResult> results) {
  std::vector<BlockMetrics> out;
  out.reserve(results.size());
  for (const auto& r : results) out.push_back(block_metrics(r));
  return out;
}

MeanHw mean_hw(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("empty sample");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return {mean, 1.96 * sd / std::sqrt(n)};
}

MeanHw throughput(std::span<const BlockMetrics> blocks, std::size_t window_begin) {
  std::vector<double> counts;
  for (std::size_t b = window_begin; b < blocks.size(); ++b) {
    counts.push_back(static_cast<double>(blocks[b].scheduled));
  }
  return mean_hw(counts);
}

std::vector<std::vector<double>> normalized_cumulative_profit(
    std::span<const std::vector<BlockMetrics>> runs) {
  std::vector<std::vector<double>> series(runs.size());
  if (runs.empty()) return series;
  const std::size_t blocks = runs[0].size();
  for (const auto& run : runs) {
    if (run.size() != blocks) throw std::invalid_argument("runs cover different block counts");
  }
  std::vector<double> cum(runs.size(), 0.0);
  for (auto& s : series) s.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t s = 0; s < runs.size(); ++s) cum[s] += runs[s][b].profit;
    const double low = *std::min_element(cum.begin(), cum.end());
    for (std::size_t s = 0; s < runs.size(); ++s) {
      series[s].push_back(low > 0.0 ? cum[s] / low : 1.0);
    }
  }
  return series;
}

std::vector<double> latency(std::span<const BlockMetrics> blocks, std::size_t window_begin) {
  std::vector<double> out;
  for (std::size_t b = window_begin; b < blocks.size(); ++b) {
    out.insert(out.end(), blocks[b].latencies.begin(), blocks[b].latencies.end());
  }
  return out;
}

std::optional<std::size_t> blocks_to_recover(std::span<const BlockMetrics> blocks,
                                             std::size_t spike_end) {
  for (std::size_t b = spike_end + 1; b < blocks.size(); ++b) {
    if (blocks[b].deferred == 0) return b - spike_end;
  }
  return std::nullopt;
}

std::vector<RunSummary> summarize(std::span<const std::string> names,
                                  std::span<const std::vector<BlockMetrics>> runs,
                                  std::size_t window_begin, std::optional<std::size_t> spike_end) {
  if (names.size() != runs.size()) throw std::invalid_argument("one name per run required");
  const auto series = normalized_cumulative_profit(runs);
  std::vector<RunSummary> out;
  for (std::size_t s = 0; s < runs.size(); ++s) {
    const auto& run = runs[s];
    if (window_begin >= run.size()) throw std::invalid_argument("reporting window is empty");
    RunSummary summary;
    summary.sequencer = names[s];
    summary.throughput = throughput(run, window_begin);
    summary.normalized_profit =
        mean_hw(std::span(series[s]).subspan(window_begin));
    summary.final_normalized_profit = series[s].back();
    for (const auto& b : run) summary.total_profit += b.profit;
    const auto lat = latency(run, window_begin);
    if (!lat.empty()) summary.latency = mean_hw(lat);
    if (spike_end) summary.blocks_to_recover = blocks_to_recover(run, *spike_end);
    out.push_back(std::move(summary));
  }
  return out;
}

}  // namespace txseq
