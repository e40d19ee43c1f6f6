#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "txseq/metrics.hpp"

using namespace txseq;

namespace {

std::vector<BlockMetrics> run_of(std::vector<double> profits, std::vector<std::size_t> deferred = {}) {
  std::vector<BlockMetrics> out;
  for (std::size_t b = 0; b < profits.size(); ++b) {
    BlockMetrics m;
    m.block_index = b;
    m.profit = profits[b];
    m.scheduled = 33;
    m.deferred = b < deferred.size() ? deferred[b] : 0;
    out.push_back(m);
  }
  return out;
}

}  // namespace

TEST_CASE("throughput of a constant run") {
  const auto run = run_of(std::vector<double>(10, 1.0));
  const auto t = throughput(run);
  CHECK(t.mean == 33.0);
  CHECK(t.half_width == 0.0);
  CHECK_THROWS_AS(throughput(run, 10), std::invalid_argument);
}

TEST_CASE("half width is the normal interval over blocks") {
  const std::vector<double> v{1, 2, 3, 4};
  const auto m = mean_hw(v);
  CHECK(m.mean == 2.5);
  CHECK(m.half_width == doctest::Approx(1.96 * std::sqrt(5.0 / 3.0) / 2.0));
}

TEST_CASE("normalized cumulative profit") {
  const std::vector<std::vector<BlockMetrics>> tied{run_of({2, 2, 2}), run_of({2, 2, 2})};
  for (const auto& s : normalized_cumulative_profit(tied)) {
    for (double v : s) CHECK(v == 1.0);
  }
  const std::vector<std::vector<BlockMetrics>> runs{run_of({1, 4, 1}), run_of({2, 1, 1}),
                                                    run_of({0.5, 0.5, 9})};
  const auto s = normalized_cumulative_profit(runs);
  CHECK(s[0] == std::vector<double>{2.0, 5.0, 1.5});
  CHECK(s[2][2] == 2.5);
  CHECK(s[1][2] == 1.0);
  const std::vector<std::vector<BlockMetrics>> with_zero{run_of({0, 3}), run_of({2, 2})};
  CHECK(normalized_cumulative_profit(with_zero)[1][0] == 1.0);
}

TEST_CASE("normalized series: at least 1 and the minimum touches 1") {
  Rng rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<std::vector<BlockMetrics>> runs;
    for (int s = 0; s < 4; ++s) {
      std::vector<double> p;
      for (int b = 0; b < 20; ++b) p.push_back(1.0 + static_cast<double>(rng.uniform(100)));
      runs.push_back(run_of(p));
    }
    const auto series = normalized_cumulative_profit(runs);
    for (std::size_t b = 0; b < 20; ++b) {
      double low = 1e300;
      for (const auto& s : series) {
        CHECK(s[b] >= 1.0);
        low = std::min(low, s[b]);
      }
      CHECK(low == 1.0);
    }
  }
}

TEST_CASE("blocks to recover") {
  CHECK(blocks_to_recover(run_of({1, 1, 1, 1}, {5, 5, 0, 0}), 1) == 1);
  CHECK(blocks_to_recover(run_of({1, 1, 1, 1}, {5, 5, 3, 0}), 1) == 2);
  CHECK_FALSE(blocks_to_recover(run_of({1, 1, 1}, {5, 5, 5}), 1));
}

TEST_CASE("latency semantics") {
  const SequencerSpec gp = parse_sequencer("gas_price");
  RoundConfig cfg{100, 1, 5};
  SUBCASE("a transaction filling the round ends at 1") {
    RoundState st;
    const std::vector<Transaction> in{Transaction(TxId{1}, {}, {}, 100, 1)};
    const auto r = run_round(in, st, {&gp, cfg, {}, 0});
    CHECK(r.latencies == std::vector<double>{1.0});
  }
  SUBCASE("an early transaction is below 1") {
    RoundState st;
    const std::vector<Transaction> in{Transaction(TxId{1}, {}, {}, 30, 1)};
    const auto r = run_round(in, st, {&gp, cfg, {}, 0});
    CHECK(r.latencies[0] < 1.0);
  }
  SUBCASE("a deferred transaction exceeds 1") {
    RoundState st;
    const std::vector<Transaction> r0{Transaction(TxId{1}, {}, {}, 100, 5),
                                      Transaction(TxId{2}, {}, {}, 100, 1)};
    const auto a = run_round(r0, st, {&gp, cfg, {}, 0});
    CHECK(a.deferred == std::vector<TxId>{TxId{2}});
    const auto b = run_round({}, st, {&gp, cfg, {}, 0});
    REQUIRE(b.latencies.size() == 1);
    CHECK(b.latencies[0] > 1.0);
    CHECK(b.latencies[0] == 2.0);
  }
}

TEST_CASE("summary is a pure function of block metrics") {
  const std::vector<std::vector<BlockMetrics>> runs{run_of({1, 4, 1, 2}, {0, 2, 1, 0}),
                                                    run_of({2, 1, 1, 2}, {0, 3, 3, 3})};
  const std::vector<std::string> names{"a", "b"};
  const auto s1 = summarize(names, runs, 1, 1);
  const auto s2 = summarize(names, runs, 1, 1);
  CHECK(s1[0].final_normalized_profit == s2[0].final_normalized_profit);
  CHECK(s1[0].total_profit == 8.0);
  CHECK(s1[0].blocks_to_recover == 2);
  CHECK_FALSE(s1[1].blocks_to_recover);
  CHECK(s1[0].throughput.half_width >= 0.0);
  CHECK(s1[0].final_normalized_profit == doctest::Approx(8.0 / 6.0));
}

TEST_CASE("block metrics mirror the round partition") {
  Rng rng(5);
  std::vector<std::vector<Transaction>> traffic;
  std::uint64_t id = 0;
  for (int b = 0; b < 10; ++b) {
    std::vector<Transaction> block;
    for (const auto& t : gen::transactions(rng, 30, 5, 40)) block.push_back(t.with_id(TxId{id++}));
    traffic.push_back(block);
  }
  const auto rounds =
      run_scenario(traffic, parse_sequencer("gas_price"), {150, 2, 2}, {}, 1);
  const auto m = block_metrics(rounds);
  std::size_t pending = 0;
  for (std::size_t b = 0; b < m.size(); ++b) {
    CHECK(m[b].scheduled + m[b].deferred == rounds[b].transactions.size());
    CHECK(m[b].scheduled <= traffic[b].size() + pending);
    CHECK(m[b].latencies.size() == m[b].scheduled);
    pending = m[b].deferred;
  }
  CHECK(std::isnan(BlockMetrics{}.mean_latency()));
}
