#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "txseq/data.hpp"

namespace txseq {

enum class SyntheticProfile {
  /// Low gas-price variance, object sets correlated with execution time.
  Sui,
  /// High gas-price variance, base fee attached, no object sets.
  Eth,
};

SyntheticProfile parse_profile(std::string_view name);
std::string_view to_string(SyntheticProfile profile);

struct SyntheticParams {
  // Execution time: log-normal, clamped.
  double exec_log_median = 7.0;
  double exec_log_sigma = 1.0;
  Time exec_min = 50;
  Time exec_max = 40000;

  // Touched-object count k = 1 + Poisson(lambda), with log lambda linear in
  // the standardized log execution time.
  double objects_log_lambda = -0.3;
  double objects_slope = 0.7;
  std::size_t objects_max = 12;

  // Object sources, per touched object.
  double p_hot = 0.9;
  double p_global = 0.1;  // the rest are private objects
  std::size_t hot_set_size = 5;
  /// Zipf exponent over the hot set; 0 draws it uniformly.
  double hot_zipf = 0.0;
  /// Transactions per hot-set shift of one object.
  std::size_t hot_shift_every = 400;
  std::size_t global_objects = 4000;
  double global_zipf = 1.1;

  // Gas price: reference price with a premium tail.
  double gas_reference = 750.0;
  double p_premium = 0.4;
  double premium_log_sigma = 0.8;

  // ETH-only: base fee random walk and heavy-tailed tips.
  double base_fee_start = 20.0;
  double base_fee_step_sigma = 0.05;
  std::size_t txs_per_base_fee = 150;
  double tip_log_median = -1.5;
  double tip_log_sigma = 1.6;

  static SyntheticParams preset(SyntheticProfile profile);
};

/// Deterministic synthetic stream for the profile.
std::vector<DatasetRecord> generate_synthetic(SyntheticProfile profile, std::size_t n,
                                              std::uint64_t seed);
std::vector<DatasetRecord> generate_synthetic(SyntheticProfile profile, std::size_t n,
                                              std::uint64_t seed, const SyntheticParams& params);

}  // namespace txseq
