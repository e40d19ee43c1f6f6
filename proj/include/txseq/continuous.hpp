#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "txseq/core.hpp"
#include "txseq/data.hpp"
#include "txseq/genetic.hpp"
#include "txseq/sequencer.hpp"

namespace txseq {

struct RoundConfig {
  Time deadline = 62500;       // d
  std::uint32_t workers = 4;   // m
  std::uint32_t max_deferrals = 5;  // theta

  void validate() const;
};

/// A transaction waiting in the pending set.
struct PendingTx {
  Transaction tx;
  std::uint32_t deferrals = 0;
  /// Round in which the transaction first entered a transaction set.
  std::size_t first_round = 0;
  /// Absolute origin of that round.
  Time entry_origin = 0;
};

/// State carried from round i-1 into round i.
struct RoundState {
  std::size_t round = 0;
  std::vector<PendingTx> pending;
  Carryover carryover;
  /// Absolute time of the round's origin o_i.
  Time origin = 0;
  /// Deadline and slack of the previous round; unset before round 0.
  std::optional<Time> prev_deadline;
  std::optional<Time> prev_slack;
};

struct Assembly {
  /// Incoming and surviving pending transactions, sorted by id.
  std::vector<PendingTx> all;
  std::vector<TxId> canceled;
};

/// T_all = incoming ∪ {pending with fewer than theta deferrals}; the rest
/// is canceled. Throws ContractError on a duplicate id.
Assembly assemble_round(std::span<const Transaction> incoming, std::span<const PendingTx> pending,
                        std::uint32_t theta, std::size_t round, Time origin);

/// d + min(prev_slack, prev_deadline); d when there is no previous round.
Time extend_deadline(Time deadline, std::optional<Time> prev_slack,
                     std::optional<Time> prev_deadline);

struct CarryoverResult {
  Carryover carryover;
  /// delta: d_new - E, clamped at 0.
  Time slack = 0;
  /// E: earliest worker completion, the next round's origin shift.
  Time shift = 0;
};

/// Offsets for the next round from a round's completion times. `worker_end`
/// holds C^w per worker; `object_end` holds alpha_k.
CarryoverResult compute_carryover(std::span<const Time> worker_end,
                                  const std::map<ObjectId, Time>& object_end, Time deadline_new);

/// Replays a schedule with actual durations: placements run in (estimated
/// start, worker, id) order, each starting at the earliest time its worker,
/// its objects and the carryover allow.
struct Realized {
  std::unordered_map<TxId, Placement> placements;
  std::unordered_map<TxId, Time> durations;
  std::vector<Time> worker_end;
  std::map<ObjectId, Time> object_end;
};

Realized replay_schedule(const Schedule& schedule, std::span<const Transaction> txs,
                         std::uint32_t workers, const Carryover& carryover,
                         const PerturbationSpec& perturbation);

struct RoundResult {
  std::size_t round = 0;
  std::vector<Transaction> transactions;  // T_all, sorted by id
  Schedule schedule;
  Carryover carryover;  // carry-in used by this round
  Realized realized;
  std::vector<TxId> scheduled;
  std::vector<TxId> deferred;
  std::vector<TxId> canceled;
  Time origin = 0;
  Time deadline_new = 0;
  double predicted_profit = 0.0;
  double realized_profit = 0.0;
  /// (absolute realized end - entry origin) / d per executed transaction,
  /// in ascending id order.
  std::vector<double> latencies;
  std::size_t evaluations = 0;
};

struct RoundInputs {
  const SequencerSpec* sequencer = nullptr;
  RoundConfig config;
  PerturbationSpec perturbation;
  std::uint64_t seed = 0;
};

/// One round: assembles T_all, extends the deadline, sequences and schedules
/// with predicted times, replays with actual times and advances the state.
RoundResult run_round(std::span<const Transaction> incoming, RoundState& state,
                      const RoundInputs& inputs);

/// Slices the stream into blocks of the given sizes, cycling the stream with
/// fresh ids when traffic exceeds it.
std::vector<std::vector<Transaction>> make_traffic(std::span<const Transaction> stream,
                                                   std::span<const std::size_t> counts);

/// Runs every round of a scenario. Round r is sequenced with seed
/// derive_seed(seed, {r}).
std::vector<RoundResult> run_scenario(const std::vector<std::vector<Transaction>>& traffic,
                                      const SequencerSpec& sequencer, const RoundConfig& config,
                                      const PerturbationSpec& perturbation, std::uint64_t seed);

/// Traffic presets.
std::vector<std::size_t> sustained_traffic(std::size_t blocks, std::size_t per_block);
/// `low` per block outside [spike_begin, spike_end), `high` inside.
std::vector<std::size_t> spike_traffic(std::size_t blocks, std::size_t low, std::size_t high,
                                       std::size_t spike_begin, std::size_t spike_end);

}  // namespace txseq
