#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "txseq/genetic.hpp"
#include "txseq/instance.hpp"
#include "txseq/scheduler.hpp"

namespace txseq {

enum class SequencerKind {
  Sui,             // gas price order, basic scheduler
  GasPrice,        // gas price order, gap-filling scheduler
  LowestExecTime,  // ascending execution time, gap-filling
  Given,           // arrival order, gap-filling
  Random,          // seeded shuffle, gap-filling
  Genetic,         // genetic search, gap-filling
  FairGasPrice,    // gas-price dependency traversal, fair scheduler
  FairGenetic,     // fair genetic search, fair scheduler
};

/// A sequencer lineup entry: how a block is ordered and which scheduling
/// function places it.
struct SequencerSpec {
  SequencerKind kind = SequencerKind::GasPrice;
  std::size_t population = 100;
  std::size_t epochs = 50;
  double mutation_probability = 0.7;

  SchedulerKind scheduler() const noexcept;
  bool fair() const noexcept {
    return kind == SequencerKind::FairGasPrice || kind == SequencerKind::FairGenetic;
  }
  bool genetic() const noexcept {
    return kind == SequencerKind::Genetic || kind == SequencerKind::FairGenetic;
  }
  /// Canonical name, e.g. "gas_price" or "genetic:100:50".
  std::string name() const;

  friend bool operator==(const SequencerSpec&, const SequencerSpec&) = default;
};

/// Accepts sui, gas_price (gp), lowest_exec_time (let), given, random,
/// genetic[:POP:EPOCHS] (ge10, ge50), fair_gas_price (fair_gp) and
/// fair_genetic[:POP:EPOCHS]. Throws std::invalid_argument otherwise.
SequencerSpec parse_sequencer(std::string_view text);

struct SequencingOutcome {
  Permutation order;
  double predicted_profit = 0.0;
  std::size_t evaluations = 0;
};

/// Orders one block. `seed` drives the random and genetic sequencers.
SequencingOutcome sequence_block(const SequencerSpec& spec, const BlockInstance& instance,
                                 std::uint64_t seed, const Budget& budget = {});

}  // namespace txseq
