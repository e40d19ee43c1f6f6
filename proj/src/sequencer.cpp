#include "txseq/sequencer.hpp"

#include <charconv>
#include <stdexcept>
#include <vector>

#include "txseq/dependency_graph.hpp"
#include "txseq/ordering.hpp"

namespace txseq {

SchedulerKind SequencerSpec::scheduler() const noexcept {
  switch (kind) {
    case SequencerKind::Sui:
      return SchedulerKind::Basic;
    case SequencerKind::FairGasPrice:
    case SequencerKind::FairGenetic:
      return SchedulerKind::Fair;
    default:
      return SchedulerKind::GapFill;
  }
}

std::string SequencerSpec::name() const {
  auto ga = [&](std::string base) {
    return base + ":" + std::to_string(population) + ":" + std::to_string(epochs);
  };
  switch (kind) {
    case SequencerKind::Sui:
      return "sui";
    case SequencerKind::GasPrice:
      return "gas_price";
    case SequencerKind::LowestExecTime:
      return "lowest_exec_time";
    case SequencerKind::Given:
      return "given";
    case SequencerKind::Random:
      return "random";
    case SequencerKind::Genetic:
      return ga("genetic");
    case SequencerKind::FairGasPrice:
      return "fair_gas_price";
    case SequencerKind::FairGenetic:
      return ga("fair_genetic");
  }
  return "unknown";
}

namespace {

std::size_t parse_count(std::string_view text, std::string_view whole) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0) {
    throw std::invalid_argument("bad genetic parameter in sequencer '" + std::string(whole) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = text.find(sep, begin);
    parts.push_back(text.substr(begin, end - begin));
    if (end == std::string_view::npos) break;
    begin = end + 1;
  }
  return parts;
}

}  // namespace

SequencerSpec parse_sequencer(std::string_view text) {
  SequencerSpec spec;
  const auto parts = split(text, ':');
  const std::string_view head = parts[0];
  auto genetic_params = [&](SequencerKind kind) {
    spec.kind = kind;
    if (parts.size() == 3) {
      spec.population = parse_count(parts[1], text);
      spec.epochs = parse_count(parts[2], text);
    } else if (parts.size() != 1) {
      throw std::invalid_argument("expected NAME:POP:EPOCHS, got '" + std::string(text) + "'");
    }
    if (spec.population < 2) throw std::invalid_argument("genetic population must be >= 2");
  };
  auto plain = [&](SequencerKind kind) {
    if (parts.size() != 1) {
      throw std::invalid_argument("sequencer '" + std::string(head) + "' takes no parameters");
    }
    spec.kind = kind;
  };

  if (head == "sui") {
    plain(SequencerKind::Sui);
  } else if (head == "gas_price" || head == "gp") {
    plain(SequencerKind::GasPrice);
  } else if (head == "lowest_exec_time" || head == "let") {
    plain(SequencerKind::LowestExecTime);
  } else if (head == "given") {
    plain(SequencerKind::Given);
  } else if (head == "random") {
    plain(SequencerKind::Random);
  } else if (head == "genetic") {
    genetic_params(SequencerKind::Genetic);
  } else if (head == "ge10" || head == "ge50") {
    plain(SequencerKind::Genetic);
    spec.epochs = head == "ge10" ? 10 : 50;
  } else if (head == "fair_gas_price" || head == "fair_gp") {
    plain(SequencerKind::FairGasPrice);
  } else if (head == "fair_genetic") {
    genetic_params(SequencerKind::FairGenetic);
  } else {
    throw std::invalid_argument("unknown sequencer '" + std::string(text) + "'");
  }
  return spec;
}

SequencingOutcome sequence_block(const SequencerSpec& spec, const BlockInstance& instance,
                                 std::uint64_t seed, const Budget& budget) {
  SequencingOutcome out;
  const auto txs = instance.transactions();
  auto finish_heuristic = [&](Permutation order) {
    out.predicted_profit = evaluate(instance, spec.scheduler(), order);
    out.evaluations = 1;
    out.order = std::move(order);
  };
  GeneticParams params;
  params.population_size = spec.population;
  params.epochs = spec.epochs;
  params.mutation_probability = spec.mutation_probability;
  params.seed = seed;
  params.fitness_upper_bound = instance.total_fee();

  switch (spec.kind) {
    case SequencerKind::Sui:
    case SequencerKind::GasPrice:
      finish_heuristic(order_by_gas_price(txs));
      break;
    case SequencerKind::LowestExecTime:
      finish_heuristic(order_by_exec_time(txs));
      break;
    case SequencerKind::Given:
      finish_heuristic(order_given(txs));
      break;
    case SequencerKind::Random:
      finish_heuristic(order_random(txs, seed));
      break;
    case SequencerKind::FairGasPrice:
      finish_heuristic(fair_seed(DependencyGraph(instance)));
      break;
    case SequencerKind::Genetic: {
      if (instance.empty()) break;
      auto result = genetic_order(instance, spec.scheduler(), params, budget);
      out.order = std::move(result.best);
      out.predicted_profit = result.best_fitness;
      out.evaluations = result.evaluations;
      break;
    }
    case SequencerKind::FairGenetic: {
      if (instance.empty()) break;
      const DependencyGraph graph(instance);
      auto result = genetic_order_fair(instance, graph, params, budget);
      out.order = std::move(result.best);
      out.predicted_profit = result.best_fitness;
      out.evaluations = result.evaluations;
      break;
    }
  }
  return out;
}

}  // namespace txseq
