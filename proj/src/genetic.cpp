#include "txseq/genetic.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "txseq/ordering.hpp"

namespace txseq {

void GeneticParams::validate() const {
  if (population_size < 2) throw std::invalid_argument("population size must be >= 2");
  if (!(mutation_probability >= 0.0 && mutation_probability <= 1.0)) {
    throw std::invalid_argument("mutation probability must lie in [0, 1]");
  }
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

FitnessFn profit_fitness(const BlockInstance& instance, SchedulerKind kind) {
  return [&instance, kind](std::span<const std::uint32_t> order) {
    return evaluate(instance, kind, order);
  };
}

GeneticOperators permutation_operators(Permutation seed) {
  const std::size_t n = seed.size();
  GeneticOperators ops;
  ops.seed = [seed = std::move(seed)] { return seed; };
  ops.random_individual = [n](Rng& rng) { return random_permutation(n, rng); };
  ops.crossover = [](std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                     Rng& rng) { return ox_crossover(a, b, rng); };
  ops.mutate = [](std::span<const std::uint32_t> s, Rng& rng) { return insertion_mutate(s, rng); };
  return ops;
}

GeneticOperators fair_operators(const DependencyGraph& graph) {
  GeneticOperators ops;
  ops.seed = [&graph] { return fair_seed(graph); };
  ops.random_individual = [&graph](Rng& rng) { return fair_random_order(graph, rng); };
  ops.crossover = [&graph](std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                           Rng&) { return fair_crossover(a, b, graph); };
  ops.mutate = [&graph](std::span<const std::uint32_t> s, Rng& rng) {
    return fair_mutate(s, graph, rng);
  };
  return ops;
}

namespace {

void evaluate_all(const FitnessFn& fitness, std::span<const Permutation> items,
                  std::span<double> out, std::size_t threads) {
  threads = std::min(threads, items.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < items.size(); ++i) out[i] = fitness(items[i]);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < items.size(); i += threads) out[i] = fitness(items[i]);
    });
  }
}

/// Keeps the `keep` fittest of (items, fitness), fittest first; equal
/// fitness breaks by lexicographic order of the sequence.
void select_survivors(std::vector<Permutation>& items, std::vector<double>& fitness,
                      std::size_t keep) {
  std::vector<std::size_t> idx(items.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (fitness[a] != fitness[b]) return fitness[a] > fitness[b];
    if (items[a] != items[b]) return items[a] < items[b];
    return a < b;
  });
  keep = std::min(keep, idx.size());
  std::vector<Permutation> next_items;
  std::vector<double> next_fitness;
  next_items.reserve(keep);
  next_fitness.reserve(keep);
  for (std::size_t r = 0; r < keep; ++r) {
    next_items.push_back(std::move(items[idx[r]]));
    next_fitness.push_back(fitness[idx[r]]);
  }
  items = std::move(next_items);
  fitness = std::move(next_fitness);
}

}  // namespace

GeneticResult run_genetic(const GeneticOperators& ops, const FitnessFn& fitness,
                          const GeneticParams& params, const Budget& budget,
                          const EpochObserver& observer) {
  params.validate();
  const std::size_t mu = params.population_size;
  const std::size_t lambda = params.lambda();
  GeneticResult result;

  std::vector<Permutation> population;
  population.reserve(mu + lambda);
  population.push_back(ops.seed());
  for (std::size_t i = 1; i < mu; ++i) {
    Rng rng = Rng::derive(params.seed, {0, i});
    population.push_back(ops.random_individual(rng));
  }
  std::vector<double> scores(population.size());
  evaluate_all(fitness, population, scores, params.threads);
  result.evaluations += population.size();
  result.seed_fitness = scores[0];
  select_survivors(population, scores, mu);
  result.best_history.push_back(scores[0]);
  if (observer) observer(0, population, scores);

  auto reached_bound = [&] {
    return params.fitness_upper_bound && scores[0] >= *params.fitness_upper_bound;
  };

  for (std::size_t epoch = 1; epoch <= params.epochs && !reached_bound(); ++epoch) {
    if (budget.exhausted()) {
      result.stopped_early = true;
      break;
    }
    std::vector<Permutation> children;
    children.reserve(lambda);
    for (std::size_t c = 0; c < lambda; ++c) {
      Rng rng = Rng::derive(params.seed, {epoch, c});
      const std::size_t a = rng.uniform(population.size());
      std::size_t b = rng.uniform(population.size() - 1);
      if (b >= a) ++b;
      Permutation child = ops.crossover(population[a], population[b], rng);
      if (rng.bernoulli(params.mutation_probability)) child = ops.mutate(child, rng);
      children.push_back(std::move(child));
    }
    std::vector<double> child_scores(children.size());
    evaluate_all(fitness, children, child_scores, params.threads);
    result.evaluations += children.size();
    for (std::size_t c = 0; c < children.size(); ++c) {
      population.push_back(std::move(children[c]));
      scores.push_back(child_scores[c]);
    }
    select_survivors(population, scores, mu);
    result.epochs_run = epoch;
    result.best_history.push_back(scores[0]);
    if (observer) observer(epoch, population, scores);
  }
  if (reached_bound() && result.epochs_run < params.epochs) result.stopped_early = true;

  result.best = std::move(population[0]);
  result.best_fitness = scores[0];
  return result;
}

GeneticResult genetic_order(const BlockInstance& instance, SchedulerKind kind,
                            const GeneticParams& params, const Budget& budget,
                            const EpochObserver& observer) {
  return run_genetic(permutation_operators(order_by_gas_price(instance.transactions())),
                     profit_fitness(instance, kind), params, budget, observer);
}

GeneticResult genetic_order_fair(const BlockInstance& instance, const DependencyGraph& graph,
                                 const GeneticParams& params, const Budget& budget,
                                 const EpochObserver& observer) {
  if (graph.size() != instance.size()) {
    throw ContractError("dependency graph does not match the block");
  }
  return run_genetic(fair_operators(graph), profit_fitness(instance, SchedulerKind::Fair), params,
                     budget, observer);
}

}  // namespace txseq
