#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "txseq/continuous.hpp"
#include "txseq/data.hpp"
#include "txseq/metrics.hpp"
#include "txseq/sequencer.hpp"
#include "txseq/synthetic.hpp"

namespace txseq {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitDataset = 2,
  kExitValidation = 3,
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScenarioKind { Sustained, Spike, Custom };

struct SpikeShape {
  std::size_t low = 30;
  std::size_t high = 100;
  std::size_t begin = 20;
  std::size_t end = 30;  // exclusive
};

struct ExperimentConfig {
  /// Dataset file; when empty the synthetic profile is generated instead.
  std::filesystem::path dataset;
  SyntheticProfile synthetic_profile = SyntheticProfile::Sui;
  std::size_t synthetic_size = 20000;
  std::uint64_t synthetic_seed = 1;

  ScenarioKind scenario = ScenarioKind::Sustained;
  std::size_t blocks = 200;
  std::size_t tx_per_block = 100;
  SpikeShape spike;
  std::vector<std::size_t> traffic;  // custom scenario

  RoundConfig round;
  std::vector<SequencerSpec> sequencers;
  PerturbationSpec perturbation;
  /// Perturbation seed given explicitly; otherwise derived from `seed`.
  bool perturbation_seed_set = false;
  std::uint64_t seed = 1;
  std::size_t report_from = 20;
  std::filesystem::path out = "results";

  /// Per-block incoming counts for the scenario.
  std::vector<std::size_t> traffic_counts() const;
  /// Last spike block, for spike scenarios.
  std::optional<std::size_t> spike_end() const;
  void validate() const;

  static ExperimentConfig sustained_preset();
  static ExperimentConfig spike_preset();
};

/// Parses a JSON config. Relative dataset paths resolve against `base_dir`.
/// Throws ConfigError.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);

/// "100" for a constant count, or a comma list of COUNT or COUNTxREPEAT
/// items such as "30x20,100x10,30x170". Throws ConfigError.
std::vector<std::size_t> parse_traffic_spec(const std::string& spec);

/// Loads or generates the configured stream. Throws DatasetError.
std::vector<Transaction> load_stream(const ExperimentConfig& config);

struct SequencerRun {
  SequencerSpec spec;
  std::vector<RoundResult> rounds;
  std::vector<BlockMetrics> metrics;
};

struct ExperimentResult {
  std::vector<SequencerRun> runs;
  std::vector<RunSummary> summaries;
};

/// Runs every sequencer of the lineup on identical traffic.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                std::span<const Transaction> stream);

/// Writes blocks.csv, summary.json, config.json and schedules/*.jsonl.
void write_results(const ExperimentConfig& config, const ExperimentResult& result);

int cmd_run(const ExperimentConfig& config, std::ostream& log);
int cmd_prepare(const std::filesystem::path& eth_path, const std::filesystem::path& sui_path,
                std::uint64_t seed, const std::filesystem::path& out, std::ostream& log);
int cmd_analyze(const std::filesystem::path& dataset, std::size_t sample, std::size_t max_distance,
                std::uint64_t seed, const std::filesystem::path& out, std::ostream& log);
int cmd_validate(const std::filesystem::path& results_dir, std::ostream& log);
int cmd_generate(SyntheticProfile profile, std::size_t n, std::uint64_t seed,
                 const std::filesystem::path& out, std::ostream& log);

}  // namespace txseq
