#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "txseq/experiment.hpp"

using namespace txseq;

namespace {

struct RunFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> sequencers;
  std::optional<std::size_t> blocks;
  std::optional<std::string> tx_per_block;
  std::optional<std::uint32_t> workers;
  std::optional<Time> deadline;
  std::optional<std::uint32_t> theta;
  std::optional<double> perturb;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  for (char c : text) {
    if (c == ',') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else if (c != ' ') {
      item.push_back(c);
    }
  }
  if (!item.empty()) out.push_back(item);
  return out;
}

ExperimentConfig resolve(const RunFlags& f) {
  ExperimentConfig c = f.config.empty() ? ExperimentConfig::sustained_preset()
                                        : load_config(f.config);
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.out = *f.out;
  if (f.sequencers) {
    c.sequencers.clear();
    for (const auto& name : split_list(*f.sequencers)) {
      try {
        c.sequencers.push_back(parse_sequencer(name));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }
  if (f.tx_per_block) {
    const auto counts = parse_traffic_spec(*f.tx_per_block);
    if (counts.size() == 1 && c.scenario == ScenarioKind::Sustained) {
      c.tx_per_block = counts[0];
    } else {
      c.scenario = ScenarioKind::Custom;
      c.traffic = counts;
      c.blocks = counts.size();
    }
  }
  if (f.blocks) {
    c.blocks = *f.blocks;
    if (c.scenario == ScenarioKind::Custom) c.traffic.resize(c.blocks, c.traffic.empty() ? 0 : c.traffic.back());
  }
  if (f.workers) c.round.workers = *f.workers;
  if (f.deadline) c.round.deadline = *f.deadline;
  if (f.theta) c.round.max_deferrals = *f.theta;
  if (f.perturb) {
    c.perturbation.enabled = true;
    c.perturbation.sigma = *f.perturb;
  }
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transaction sequencing and continuous block execution simulator"};
  app.require_subcommand(1);

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario for a sequencer lineup");
  run_cmd->add_option("--config", run.config, "Experiment config (JSON)");
  run_cmd->add_option("--seed", run.seed, "Global seed");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--sequencers", run.sequencers, "Comma-separated sequencer lineup");
  run_cmd->add_option("--blocks", run.blocks, "Number of blocks");
  run_cmd->add_option("--tx-per-block", run.tx_per_block,
                      "Incoming transactions per block: N or COUNTxREPEAT,...");
  run_cmd->add_option("--workers", run.workers, "Workers per block");
  run_cmd->add_option("--deadline", run.deadline, "Base deadline d");
  run_cmd->add_option("--theta", run.theta, "Maximum deferrals before cancellation");
  run_cmd->add_option("--perturb", run.perturb, "Enable execution-time perturbation with sigma");

  std::string eth, sui, prep_out;
  std::uint64_t prep_seed = 1;
  auto* prep_cmd = app.add_subcommand("prepare", "Normalize an ETH stream and project object sets");
  prep_cmd->add_option("--eth", eth, "ETH-style dataset with base fees")->required();
  prep_cmd->add_option("--sui", sui, "Dataset supplying object sets")->required();
  prep_cmd->add_option("--seed", prep_seed, "Projection seed");
  prep_cmd->add_option("--out", prep_out, "Output dataset")->required();

  std::string an_dataset, an_out;
  std::size_t an_sample = 50000, an_distance = 1000;
  std::uint64_t an_seed = 1;
  auto* an_cmd = app.add_subcommand("analyze", "Mean Jaccard similarity by distance");
  an_cmd->add_option("--dataset", an_dataset, "Dataset")->required();
  an_cmd->add_option("--sample", an_sample, "Number of sampled anchors");
  an_cmd->add_option("--max-distance", an_distance, "Largest distance");
  an_cmd->add_option("--seed", an_seed, "Sampling seed");
  an_cmd->add_option("--out", an_out, "Output CSV")->required();

  std::string val_dir;
  auto* val_cmd = app.add_subcommand("validate", "Re-validate stored schedules");
  val_cmd->add_option("results", val_dir, "Results directory")->required();

  std::string gen_profile = "sui", gen_out;
  std::size_t gen_n = 20000;
  std::uint64_t gen_seed = 1;
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic dataset");
  gen_cmd->add_option("--profile", gen_profile, "sui or eth");
  gen_cmd->add_option("--n", gen_n, "Number of records");
  gen_cmd->add_option("--seed", gen_seed, "Generator seed");
  gen_cmd->add_option("--out", gen_out, "Output dataset")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(resolve(run), std::cerr);
    if (*prep_cmd) return cmd_prepare(eth, sui, prep_seed, prep_out, std::cerr);
    if (*an_cmd) return cmd_analyze(an_dataset, an_sample, an_distance, an_seed, an_out, std::cerr);
    if (*val_cmd) return cmd_validate(val_dir, std::cerr);
    if (*gen_cmd) return cmd_generate(parse_profile(gen_profile), gen_n, gen_seed, gen_out, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DatasetError& e) {
    std::cerr << "dataset error: " << e.what() << '\n';
    return kExitDataset;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
