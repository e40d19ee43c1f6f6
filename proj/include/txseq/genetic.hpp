#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stop_token>
#include <vector>

#include "txseq/dependency_graph.hpp"
#include "txseq/instance.hpp"
#include "txseq/random.hpp"
#include "txseq/scheduler.hpp"

namespace txseq {

struct GeneticParams {
  std::size_t population_size = 100;  // mu
  std::size_t epochs = 50;
  std::size_t children_per_epoch = 0;  // lambda; 0 means equal to mu
  double mutation_probability = 0.7;
  std::uint64_t seed = 0;
  /// Worker threads for fitness evaluation within an epoch.
  std::size_t threads = 1;
  /// Stop once the best fitness reaches this value (e.g. the block's total
  /// fee: nothing left to gain once every transaction is scheduled).
  std::optional<double> fitness_upper_bound;

  std::size_t lambda() const noexcept {
    return children_per_epoch == 0 ? population_size : children_per_epoch;
  }
  void validate() const;
};

/// Anytime stop signal, polled between epochs.
class Budget {
 public:
  Budget() = default;
  static Budget until(std::chrono::steady_clock::time_point deadline) {
    Budget b;
    b.deadline_ = deadline;
    return b;
  }
  static Budget from(std::stop_token token) {
    Budget b;
    b.token_ = std::move(token);
    return b;
  }

  bool exhausted() const {
    if (token_.stop_requested()) return true;
    return deadline_ && std::chrono::steady_clock::now() >= *deadline_;
  }

 private:
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::stop_token token_;
};

/// Fitness of an index permutation. Must be pure; with threads > 1 it is
/// called concurrently.
using FitnessFn = std::function<double(std::span<const std::uint32_t>)>;

/// Profit under `kind` for orderings of `instance`.
FitnessFn profit_fitness(const BlockInstance& instance, SchedulerKind kind);

/// The representation-specific parts of the search.
struct GeneticOperators {
  std::function<Permutation()> seed;
  std::function<Permutation(Rng&)> random_individual;
  std::function<Permutation(std::span<const std::uint32_t>, std::span<const std::uint32_t>, Rng&)>
      crossover;
  std::function<Permutation(std::span<const std::uint32_t>, Rng&)> mutate;
};

GeneticOperators permutation_operators(Permutation seed);
GeneticOperators fair_operators(const DependencyGraph& graph);

struct GeneticResult {
  Permutation best;
  double best_fitness = 0.0;
  double seed_fitness = 0.0;
  std::size_t epochs_run = 0;
  std::size_t evaluations = 0;
  /// Best fitness after initialization (index 0) and after each epoch.
  std::vector<double> best_history;
  bool stopped_early = false;
};

/// Observer called after initialization and each epoch with the sorted
/// population (fittest first).
using EpochObserver =
    std::function<void(std::size_t epoch, std::span<const Permutation> population,
                       std::span<const double> fitness)>;

/// (mu + lambda) genetic search seeded with `ops.seed()`.
GeneticResult run_genetic(const GeneticOperators& ops, const FitnessFn& fitness,
                          const GeneticParams& params, const Budget& budget = {},
                          const EpochObserver& observer = {});

/// Gas-price seeded search with order crossover and insertion mutation.
GeneticResult genetic_order(const BlockInstance& instance, SchedulerKind kind,
                            const GeneticParams& params, const Budget& budget = {},
                            const EpochObserver& observer = {});

/// Fair variant: seeds and operators stay within topological orders of the
/// instance's dependency graph; fitness uses the fair scheduler.
GeneticResult genetic_order_fair(const BlockInstance& instance, const DependencyGraph& graph,
                                 const GeneticParams& params, const Budget& budget = {},
                                 const EpochObserver& observer = {});

}  // namespace txseq
