#include <doctest.h>

#include "generators.hpp"
#include "reference.hpp"
#include "txseq/gap_index.hpp"
#include "txseq/instance.hpp"
#include "txseq/ordering.hpp"
#include "txseq/scheduler.hpp"

using namespace txseq;

namespace {

Transaction tx(std::uint64_t id, Time t, double g, std::vector<std::uint64_t> w,
               std::vector<std::uint64_t> r = {}) {
  std::vector<ObjectId> reads, writes;
  for (auto o : r) reads.push_back(ObjectId{o});
  for (auto o : w) writes.push_back(ObjectId{o});
  return Transaction(TxId{id}, reads, writes, t, g);
}

std::optional<Placement> at(const Schedule& s, std::uint64_t id) {
  const auto* slot = s.find(TxId{id});
  REQUIRE(slot != nullptr);
  return *slot;
}

std::vector<Transaction> by_gas(const std::vector<Transaction>& txs) {
  std::vector<Transaction> out;
  for (auto i : order_by_gas_price(txs)) out.push_back(txs[i]);
  return out;
}

}  // namespace

TEST_CASE("basic: congestive transaction first blocks the rest") {
  const std::vector<Transaction> order{tx(1, 10, 10, {0, 1}), tx(2, 10, 9, {0}), tx(3, 10, 9, {1})};
  const auto s = schedule_basic(order, {10, 2});
  CHECK(at(s, 1) == Placement{0, 0});
  CHECK_FALSE(at(s, 2));
  CHECK_FALSE(at(s, 3));
  CHECK(profit(s, order) == doctest::Approx(100));
}

TEST_CASE("basic: feasible alternative order") {
  const std::vector<Transaction> order{tx(2, 10, 9, {0}), tx(3, 10, 9, {1}), tx(1, 10, 10, {0, 1})};
  const auto s = schedule_basic(order, {10, 2});
  CHECK(at(s, 2) == Placement{0, 0});
  CHECK(at(s, 3) == Placement{0, 1});
  CHECK_FALSE(at(s, 1));
  CHECK(profit(s, order) == doctest::Approx(180));
}

TEST_CASE("empty ordering gives an empty schedule") {
  const std::vector<Transaction> none;
  CHECK(schedule_basic(none, {10, 2}).empty());
  CHECK(schedule_gap_fill(none, {10, 2}).empty());
  CHECK(schedule_fair(none, {10, 2}).empty());
}

TEST_CASE("select_worker") {
  const std::vector<Time> free{3, 7};
  CHECK(select_worker(free, 0) == WorkerChoice{0, 3});
  CHECK(select_worker(free, 9) == WorkerChoice{0, 9});
  const std::vector<Time> tied{5, 5};
  CHECK(select_worker(tied, 0) == WorkerChoice{0, 5});
  CHECK_THROWS_AS(select_worker(std::vector<Time>{}, 0), ContractError);
}

TEST_CASE("gap fill uses an object-delayed gap") {
  // Object 0 is held until 5, so w0 idles on [0,5) before tx1.
  Carryover c;
  c.object_offsets[ObjectId{0}] = 5;
  const std::vector<Transaction> order{tx(1, 5, 1, {0}), tx(2, 4, 1, {1})};
  const auto basic = schedule_basic(order, {10, 1}, c);
  CHECK(at(basic, 1) == Placement{5, 0});
  CHECK_FALSE(at(basic, 2));
  const auto gap = schedule_gap_fill(order, {10, 1}, c);
  CHECK(at(gap, 1) == Placement{5, 0});
  CHECK(at(gap, 2) == Placement{0, 0});
}

TEST_CASE("gap too short is skipped") {
  Carryover c;
  c.object_offsets[ObjectId{0}] = 5;
  const std::vector<Transaction> order{tx(1, 5, 1, {0}), tx(2, 6, 1, {1})};
  const auto s = schedule_gap_fill(order, {20, 1}, c);
  CHECK(at(s, 2) == Placement{10, 0});
}

TEST_CASE("without gaps gap fill equals basic") {
  const std::vector<Transaction> order{tx(1, 3, 1, {0}), tx(2, 4, 1, {1}), tx(3, 2, 1, {2}),
                                       tx(4, 5, 1, {3})};
  CHECK(schedule_gap_fill(order, {10, 2}) == schedule_basic(order, {10, 2}));
}

TEST_CASE("fair: chain is serialized") {
  const std::vector<Transaction> order{tx(1, 2, 1, {0}), tx(2, 3, 1, {0}), tx(3, 1, 1, {0})};
  const auto s = schedule_fair(order, {10, 3}, {}, order);
  REQUIRE(at(s, 1));
  REQUIRE(at(s, 2));
  REQUIRE(at(s, 3));
  CHECK(at(s, 1)->start + 2 <= at(s, 2)->start);
  CHECK(at(s, 2)->start + 3 <= at(s, 3)->start);
}

TEST_CASE("fair: deferral cascades along the chain") {
  const std::vector<Transaction> order{tx(1, 20, 1, {0}), tx(2, 3, 1, {0}), tx(3, 1, 1, {0}),
                                       tx(4, 1, 1, {9})};
  const auto s = schedule_fair(order, {10, 3}, {}, order);
  CHECK_FALSE(at(s, 1));
  CHECK_FALSE(at(s, 2));
  CHECK_FALSE(at(s, 3));
  CHECK(at(s, 4));
}

TEST_CASE("fair: rejects orders that break the causal order") {
  const std::vector<Transaction> fair{tx(1, 2, 1, {0}), tx(2, 3, 1, {0})};
  const std::vector<Transaction> swapped{fair[1], fair[0]};
  CHECK_THROWS_AS(schedule_fair(swapped, {10, 2}, {}, fair), ContractError);
  const std::vector<Transaction> free_fair{tx(1, 2, 1, {0}), tx(2, 3, 1, {1})};
  const std::vector<Transaction> free_swapped{free_fair[1], free_fair[0]};
  CHECK_NOTHROW(schedule_fair(free_swapped, {10, 2}, {}, free_fair));
}

TEST_CASE("fair equals gap fill on conflict-free sets") {
  Rng rng(5);
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<Transaction> txs;
    const std::size_t n = 1 + rng.uniform(40);
    for (std::size_t i = 0; i < n; ++i) {
      txs.push_back(tx(i, 1 + static_cast<Time>(rng.uniform(30)), 1.0 + static_cast<double>(rng.uniform(9)), {1000 + i}, {7}));
    }
    auto inst = gen::instance(rng, {40, 6, 4, 30, true});
    const SchedulingConfig cfg{inst.config.deadline, inst.config.workers};
    Carryover c;
    c.worker_offsets = inst.carryover.worker_offsets;
    c.object_offsets[ObjectId{7}] = static_cast<Time>(rng.uniform(10));
    const auto ordered = gen::shuffled(txs, rng);
    CHECK(schedule_fair(ordered, cfg, c) == schedule_gap_fill(ordered, cfg, c));
  }
}

TEST_CASE("kernels match the reference scheduler") {
  Rng rng(2024);
  for (int rep = 0; rep < 1500; ++rep) {
    auto inst = gen::instance(rng, {60, 5, 12, 40, true});
    const auto ordered = gen::shuffled(inst.txs, rng);
    CAPTURE(rep);
    CHECK(schedule_basic(ordered, inst.config, inst.carryover) ==
          ref::schedule(ordered, inst.config, inst.carryover, ref::Mode::Basic));
    CHECK(schedule_gap_fill(ordered, inst.config, inst.carryover) ==
          ref::schedule(ordered, inst.config, inst.carryover, ref::Mode::GapFill));
    CHECK(schedule_fair(ordered, inst.config, inst.carryover) ==
          ref::schedule(ordered, inst.config, inst.carryover, ref::Mode::Fair));
  }
}

TEST_CASE("every emitted schedule validates") {
  Rng rng(99);
  for (int rep = 0; rep < 600; ++rep) {
    auto inst = gen::instance(rng, {120, 8, 25, 200, true});
    const auto ordered = gen::shuffled(inst.txs, rng);
    for (auto s : {schedule_basic(ordered, inst.config, inst.carryover),
                   schedule_gap_fill(ordered, inst.config, inst.carryover)}) {
      CHECK(validate_schedule(s, inst.txs, inst.config, inst.carryover).empty());
    }
    const auto fair = schedule_fair(ordered, inst.config, inst.carryover);
    CHECK(validate_schedule(fair, inst.txs, inst.config, inst.carryover).empty());
    CHECK(validate_fair_order(fair, ordered).empty());
  }
}

TEST_CASE("deadline sweep across magnitudes validates") {
  Rng rng(3);
  for (Time d : {10, 100, 1000, 10000, 100000, 1000000}) {
    for (int rep = 0; rep < 40; ++rep) {
      auto txs = gen::transactions(rng, 80, 10, d / 5 + 1);
      const SchedulingConfig cfg{d, 1 + static_cast<std::uint32_t>(rng.uniform(8))};
      const auto ordered = gen::shuffled(txs, rng);
      CHECK(validate_schedule(schedule_gap_fill(ordered, cfg), txs, cfg, {}).empty());
      CHECK(validate_schedule(schedule_basic(ordered, cfg), txs, cfg, {}).empty());
    }
  }
}

TEST_CASE("schedulers are deterministic") {
  Rng rng(8);
  auto inst = gen::instance(rng, {150, 6, 20, 60, true});
  const auto ordered = gen::shuffled(inst.txs, rng);
  CHECK(schedule_gap_fill(ordered, inst.config, inst.carryover) ==
        schedule_gap_fill(ordered, inst.config, inst.carryover));
  CHECK(schedule_basic(ordered, inst.config, inst.carryover) ==
        schedule_basic(ordered, inst.config, inst.carryover));
}

TEST_CASE("gap fill never moves earlier placements") {
  Rng rng(17);
  for (int rep = 0; rep < 200; ++rep) {
    auto inst = gen::instance(rng, {60, 4, 10, 40, true});
    const auto ordered = gen::shuffled(inst.txs, rng);
    const auto full = schedule_gap_fill(ordered, inst.config, inst.carryover);
    const std::size_t k = ordered.size() / 2;
    const std::vector<Transaction> prefix(ordered.begin(), ordered.begin() + static_cast<std::ptrdiff_t>(k));
    const auto part = schedule_gap_fill(prefix, inst.config, inst.carryover);
    for (const auto& e : part.entries()) CHECK(*full.find(e.tx) == e.placement);
  }
}

TEST_CASE("single worker without conflicts packs a prefix back to back") {
  Rng rng(21);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<Transaction> txs;
    const std::size_t n = 1 + rng.uniform(30);
    for (std::size_t i = 0; i < n; ++i) txs.push_back(tx(i, 1 + static_cast<Time>(rng.uniform(20)), 1, {100 + i}));
    const Time offset = static_cast<Time>(rng.uniform(20));
    Carryover c;
    c.worker_offsets = {offset};
    const SchedulingConfig cfg{offset + static_cast<Time>(rng.uniform(200)) + 1, 1};
    for (auto s : {schedule_basic(txs, cfg, c), schedule_gap_fill(txs, cfg, c)}) {
      Time cursor = offset;
      bool stopped = false;
      for (const auto& t : txs) {
        const auto p = at(s, t.id().value);
        if (!stopped && cursor + t.exec_time() <= cfg.deadline) {
          REQUIRE(p);
          CHECK(p->start == cursor);
          cursor += t.exec_time();
        } else {
          stopped = true;
          // Later shorter transactions may still fit at the queue end.
          if (p) {
            CHECK(p->start == cursor);
            cursor += t.exec_time();
          }
        }
      }
    }
  }
}

TEST_CASE("gap fill dominates basic on average under gas-price order") {
  Rng rng(31);
  double basic = 0.0, gap = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    auto inst = gen::instance(rng, {80, 6, 10, 60, false});
    const auto ordered = by_gas(inst.txs);
    basic += profit(schedule_basic(ordered, inst.config), inst.txs);
    gap += profit(schedule_gap_fill(ordered, inst.config), inst.txs);
  }
  CHECK(gap >= basic);
}

TEST_CASE("transactions longer than the deadline are deferred") {
  const std::vector<Transaction> order{tx(1, 11, 1, {0})};
  CHECK_FALSE(at(schedule_gap_fill(order, {10, 2}), 1));
  CHECK_FALSE(at(schedule_basic(order, {10, 2}), 1));
}

TEST_CASE("gap index ordering and query") {
  GapIndex g;
  g.insert({1, 0, 5});
  g.insert({0, 10, 15});
  g.insert({0, 20, 22});
  g.insert({2, 0, 5});
  std::vector<Gap> seen(g.begin(), g.end());
  REQUIRE(seen.size() == 4);
  CHECK(seen[0] == Gap{0, 20, 22});
  CHECK(seen[1] == Gap{1, 0, 5});
  CHECK(seen[2] == Gap{2, 0, 5});
  CHECK(seen[3] == Gap{0, 10, 15});
  CHECK(*g.smallest_at_least(3) == seen[1]);
  CHECK(g.smallest_at_least(6) == g.end());
  CHECK(g.erase(Gap{0, 10, 15}));
  CHECK_FALSE(g.erase(Gap{0, 10, 15}));
  CHECK(g.size() == 3);
}

TEST_CASE("interval set merges touching intervals") {
  IntervalSet s;
  s.insert_merge(5, 10);
  s.insert_merge(0, 2);
  s.insert_merge(10, 12);
  REQUIRE(s.items().size() == 2);
  CHECK(s.items()[1].lo == 5);
  CHECK(s.items()[1].hi == 12);
  CHECK(s.first_overlap(2, 5) == nullptr);
  CHECK(s.first_overlap(1, 3) != nullptr);
  s.insert_merge(1, 6);
  CHECK(s.items().size() == 1);
}
