#include "txseq/continuous.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

#include "txseq/instance.hpp"
#include "txseq/random.hpp"

namespace txseq {

void RoundConfig::validate() const {
  if (deadline < 1) throw std::invalid_argument("deadline must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (max_deferrals < 1) throw std::invalid_argument("theta must be >= 1");
}

Assembly assemble_round(std::span<const Transaction> incoming, std::span<const PendingTx> pending,
                        std::uint32_t theta, std::size_t round, Time origin) {
  Assembly out;
  out.all.reserve(incoming.size() + pending.size());
  std::unordered_set<TxId> seen;
  seen.reserve(incoming.size() + pending.size());
  for (const auto& p : pending) {
    if (!seen.insert(p.tx.id()).second) throw ContractError("duplicate pending transaction");
    if (p.deferrals >= theta) {
      out.canceled.push_back(p.tx.id());
    } else {
      out.all.push_back(p);
    }
  }
  for (const auto& tx : incoming) {
    if (!seen.insert(tx.id()).second) {
      throw ContractError("transaction " + std::to_string(tx.id().value) + " is already pending");
    }
    out.all.push_back(PendingTx{tx, 0, round, origin});
  }
  std::sort(out.all.begin(), out.all.end(),
            [](const PendingTx& a, const PendingTx& b) { return a.tx.id() < b.tx.id(); });
  std::sort(out.canceled.begin(), out.canceled.end());
  return out;
}

Time extend_deadline(Time deadline, std::optional<Time> prev_slack,
                     std::optional<Time> prev_deadline) {
  if (!prev_slack || !prev_deadline) return deadline;
  return deadline + std::min(*prev_slack, *prev_deadline);
}

CarryoverResult compute_carryover(std::span<const Time> worker_end,
                                  const std::map<ObjectId, Time>& object_end, Time deadline_new) {
  CarryoverResult out;
  const Time e = worker_end.empty() ? 0 : *std::min_element(worker_end.begin(), worker_end.end());
  out.shift = e;
  out.slack = std::max<Time>(0, deadline_new - e);
  out.carryover.worker_offsets.reserve(worker_end.size());
  for (Time c : worker_end) out.carryover.worker_offsets.push_back(c - e);
  for (const auto& [object, end] : object_end) {
    if (end > e) out.carryover.object_offsets.emplace(object, end - e);
  }
  return out;
}

Realized replay_schedule(const Schedule& schedule, std::span<const Transaction> txs,
                         std::uint32_t workers, const Carryover& carryover,
                         const PerturbationSpec& perturbation) {
  std::unordered_map<TxId, const Transaction*> by_id;
  by_id.reserve(txs.size());
  for (const auto& tx : txs) by_id.emplace(tx.id(), &tx);

  struct Item {
    Time start;
    std::uint32_t worker;
    TxId id;
  };
  std::vector<Item> items;
  for (const auto& entry : schedule.entries()) {
    if (entry.placement) items.push_back({entry.placement->start, entry.placement->worker, entry.tx});
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return std::tie(a.start, a.worker, a.id) < std::tie(b.start, b.worker, b.id);
  });

  struct ObjectFree {
    Time write_end;
    Time any_end;
  };
  std::unordered_map<ObjectId, ObjectFree> objects;
  auto object_state = [&](ObjectId k) -> ObjectFree& {
    auto it = objects.find(k);
    if (it == objects.end()) {
      const Time off = carryover.object_offset(k);
      it = objects.emplace(k, ObjectFree{off, off}).first;
    }
    return it->second;
  };

  Realized out;
  out.worker_end.resize(workers);
  for (std::uint32_t w = 0; w < workers; ++w) out.worker_end[w] = carryover.worker_offset(w);
  out.placements.reserve(items.size());
  out.durations.reserve(items.size());

  for (const Item& item : items) {
    const Transaction& tx = *by_id.at(item.id);
    if (item.worker >= workers) throw ContractError("placement on a nonexistent worker");
    Time start = out.worker_end[item.worker];
    for (ObjectId k : tx.reads()) start = std::max(start, object_state(k).write_end);
    for (ObjectId k : tx.writes()) start = std::max(start, object_state(k).any_end);
    const Time duration = perturb_exec_time(tx.exec_time(), perturbation, tx.id().value);
    const Time end = start + duration;
    for (ObjectId k : tx.reads()) {
      auto& s = object_state(k);
      s.any_end = std::max(s.any_end, end);
    }
    for (ObjectId k : tx.writes()) {
      auto& s = object_state(k);
      s.write_end = end;
      s.any_end = std::max(s.any_end, end);
    }
    out.worker_end[item.worker] = end;
    out.placements.emplace(tx.id(), Placement{start, item.worker});
    out.durations.emplace(tx.id(), duration);
  }

  for (const auto& [k, s] : objects) out.object_end.emplace(k, s.any_end);
  for (const auto& [k, off] : carryover.object_offsets) out.object_end.emplace(k, off);
  return out;
}

RoundResult run_round(std::span<const Transaction> incoming, RoundState& state,
                      const RoundInputs& inputs) {
  if (!inputs.sequencer) throw ContractError("run_round needs a sequencer");
  inputs.config.validate();
  RoundResult result;
  result.round = state.round;
  result.origin = state.origin;
  result.carryover = state.carryover;
  result.deadline_new =
      extend_deadline(inputs.config.deadline, state.prev_slack, state.prev_deadline);

  Assembly assembly = assemble_round(incoming, state.pending, inputs.config.max_deferrals,
                                     state.round, state.origin);
  result.canceled = std::move(assembly.canceled);
  result.transactions.reserve(assembly.all.size());
  for (const auto& p : assembly.all) result.transactions.push_back(p.tx);

  const BlockInstance instance(result.transactions,
                               SchedulingConfig{result.deadline_new, inputs.config.workers},
                               state.carryover);
  SequencingOutcome outcome = sequence_block(*inputs.sequencer, instance, inputs.seed);
  result.evaluations = outcome.evaluations;
  result.schedule = schedule_instance(instance, inputs.sequencer->scheduler(), outcome.order);
  result.predicted_profit = profit(result.schedule, result.transactions);

  result.realized = replay_schedule(result.schedule, result.transactions, inputs.config.workers,
                                    state.carryover, inputs.perturbation);

  std::vector<PendingTx> next_pending;
  const double d = static_cast<double>(inputs.config.deadline);
  for (const auto& p : assembly.all) {
    const auto* slot = result.schedule.find(p.tx.id());
    if (*slot) {
      result.scheduled.push_back(p.tx.id());
      const Time duration = result.realized.durations.at(p.tx.id());
      result.realized_profit += static_cast<double>(duration) * p.tx.gas_price();
      const Time end = state.origin + result.realized.placements.at(p.tx.id()).start + duration;
      result.latencies.push_back(static_cast<double>(end - p.entry_origin) / d);
    } else {
      result.deferred.push_back(p.tx.id());
      PendingTx next = p;
      ++next.deferrals;
      next_pending.push_back(std::move(next));
    }
  }

  CarryoverResult carry =
      compute_carryover(result.realized.worker_end, result.realized.object_end, result.deadline_new);
  state.pending = std::move(next_pending);
  state.carryover = std::move(carry.carryover);
  state.origin += carry.shift;
  state.prev_slack = carry.slack;
  state.prev_deadline = inputs.config.deadline;
  ++state.round;
  return result;
}

std::vector<std::vector<Transaction>> make_traffic(std::span<const Transaction> stream,
                                                   std::span<const std::size_t> counts) {
  std::vector<std::vector<Transaction>> blocks;
  blocks.reserve(counts.size());
  std::size_t pos = 0;
  for (std::size_t count : counts) {
    if (count > 0 && stream.empty()) throw std::invalid_argument("traffic needs a non-empty stream");
    std::vector<Transaction> block;
    block.reserve(count);
    for (std::size_t k = 0; k < count; ++k, ++pos) {
      const Transaction& source = stream[pos % stream.size()];
      block.push_back(pos < stream.size() ? source : source.with_id(TxId{pos}));
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

std::vector<RoundResult> run_scenario(const std::vector<std::vector<Transaction>>& traffic,
                                      const SequencerSpec& sequencer, const RoundConfig& config,
                                      const PerturbationSpec& perturbation, std::uint64_t seed) {
  config.validate();
  perturbation.validate();
  RoundState state;
  std::vector<RoundResult> results;
  results.reserve(traffic.size());
  RoundInputs inputs{&sequencer, config, perturbation, 0};
  for (std::size_t r = 0; r < traffic.size(); ++r) {
    inputs.seed = derive_seed(seed, {r});
    results.push_back(run_round(traffic[r], state, inputs));
  }
  return results;
}

std::vector<std::size_t> sustained_traffic(std::size_t blocks, std::size_t per_block) {
  return std::vector<std::size_t>(blocks, per_block);
}

std::vector<std::size_t> spike_traffic(std::size_t blocks, std::size_t low, std::size_t high,
                                       std::size_t spike_begin, std::size_t spike_end) {
  std::vector<std::size_t> out(blocks, low);
  for (std::size_t b = spike_begin; b < std::min(spike_end, blocks); ++b) out[b] = high;
  return out;
}

}  // namespace txseq
