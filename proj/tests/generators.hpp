#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "txseq/core.hpp"
#include "txseq/random.hpp"

namespace gen {

using txseq::Carryover;
using txseq::ObjectId;
using txseq::Rng;
using txseq::SchedulingConfig;
using txseq::Time;
using txseq::Transaction;
using txseq::TxId;

struct Shape {
  std::size_t max_n = 200;
  std::uint32_t max_workers = 8;
  std::size_t max_objects = 30;
  Time max_exec = 100;
  bool with_carryover = true;
};

inline std::vector<ObjectId> draw_objects(Rng& rng, std::size_t universe, std::size_t max_count) {
  std::vector<ObjectId> out;
  const std::size_t k = rng.uniform(max_count + 1);
  for (std::size_t j = 0; j < k; ++j) out.push_back(ObjectId{rng.uniform(universe)});
  return out;
}

inline std::vector<Transaction> transactions(Rng& rng, std::size_t n, std::size_t objects,
                                             Time max_exec) {
  std::vector<Transaction> txs;
  txs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto reads = draw_objects(rng, objects, 3);
    auto writes = draw_objects(rng, objects, 2);
    const Time t = 1 + static_cast<Time>(rng.uniform(static_cast<std::uint64_t>(max_exec)));
    const double g = static_cast<double>(1 + rng.uniform(50)) / 4.0;
    txs.emplace_back(TxId{i * 3 + 7}, std::move(reads), std::move(writes), t, g);
  }
  return txs;
}

struct Instance {
  std::vector<Transaction> txs;
  SchedulingConfig config;
  Carryover carryover;
};

inline Instance instance(Rng& rng, const Shape& shape) {
  Instance inst;
  const std::size_t n = rng.uniform(shape.max_n + 1);
  const std::size_t objects = 1 + rng.uniform(shape.max_objects);
  inst.txs = transactions(rng, n, objects, shape.max_exec);
  inst.config.workers = 1 + static_cast<std::uint32_t>(rng.uniform(shape.max_workers));
  Time total = 0;
  for (const auto& tx : inst.txs) total += tx.exec_time();
  // Deadlines from very tight to slack so deferral paths are exercised.
  const Time scale = std::max<Time>(1, total / std::max<Time>(1, inst.config.workers));
  inst.config.deadline = 1 + static_cast<Time>(rng.uniform(static_cast<std::uint64_t>(scale) + 20));
  if (shape.with_carryover && rng.bernoulli(0.5)) {
    for (std::uint32_t w = 0; w < inst.config.workers; ++w) {
      inst.carryover.worker_offsets.push_back(
          rng.bernoulli(0.5) ? 0 : static_cast<Time>(rng.uniform(static_cast<std::uint64_t>(inst.config.deadline / 2 + 1))));
    }
    for (std::size_t k = 0; k < objects; ++k) {
      if (rng.bernoulli(0.3)) {
        inst.carryover.object_offsets[ObjectId{k}] =
            1 + static_cast<Time>(rng.uniform(static_cast<std::uint64_t>(inst.config.deadline / 2 + 1)));
      }
    }
  }
  return inst;
}

inline std::vector<Transaction> shuffled(std::vector<Transaction> txs, Rng& rng) {
  for (std::size_t i = txs.size(); i > 1; --i) std::swap(txs[i - 1], txs[rng.uniform(i)]);
  return txs;
}

}  // namespace gen
