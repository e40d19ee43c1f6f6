#include <doctest.h>

#include "generators.hpp"
#include "txseq/core.hpp"

using namespace txseq;

namespace {

Transaction tx(std::uint64_t id, std::vector<std::uint64_t> r, std::vector<std::uint64_t> w,
               Time t = 1, double g = 1.0) {
  std::vector<ObjectId> reads, writes;
  for (auto o : r) reads.push_back(ObjectId{o});
  for (auto o : w) writes.push_back(ObjectId{o});
  return Transaction(TxId{id}, reads, writes, t, g);
}

bool has_rule(const std::vector<Violation>& v, const std::string& rule) {
  for (const auto& x : v) {
    if (x.rule == rule) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("read-read sharing is not a conflict") {
  CHECK_FALSE(conflicts(tx(1, {0}, {}), tx(2, {0}, {})));
}

TEST_CASE("write-read overlap conflicts") {
  CHECK(conflicts(tx(1, {}, {0}), tx(2, {0}, {})));
  CHECK(conflicts(tx(2, {0}, {}), tx(1, {}, {0})));
}

TEST_CASE("disjoint object sets do not conflict") {
  CHECK_FALSE(conflicts(tx(1, {0}, {1}), tx(2, {2}, {3})));
}

TEST_CASE("object in both sets is treated as written") {
  const auto a = tx(1, {5, 6}, {5});
  CHECK(a.reads().size() == 1);
  CHECK(a.reads()[0] == ObjectId{6});
  CHECK(a.writes().size() == 1);
  CHECK(a.touched().size() == 2);
  CHECK(conflicts(a, tx(2, {5}, {})));
}

TEST_CASE("transaction invariants are enforced") {
  CHECK_THROWS_AS(tx(1, {}, {}, 0), std::invalid_argument);
  CHECK_THROWS_AS(tx(1, {}, {}, 1, -1.0), std::invalid_argument);
}

TEST_CASE("conflicts is symmetric and needs a write") {
  Rng rng(11);
  for (int rep = 0; rep < 2000; ++rep) {
    auto txs = gen::transactions(rng, 2, 6, 5);
    CHECK(conflicts(txs[0], txs[1]) == conflicts(txs[1], txs[0]));
    if (txs[0].writes().empty() && txs[1].writes().empty()) {
      CHECK_FALSE(conflicts(txs[0], txs[1]));
    }
  }
}

TEST_CASE("profit sums scheduled fees only") {
  std::vector<Transaction> none;
  CHECK(profit(Schedule{}, none) == 0.0);

  std::vector<Transaction> one{tx(1, {}, {}, 10, 3.0)};
  Schedule s1;
  s1.place(TxId{1}, {0, 0});
  CHECK(profit(s1, one) == doctest::Approx(30.0));

  std::vector<Transaction> three{tx(1, {}, {}, 10, 3.0), tx(2, {}, {}, 5, 2.0),
                                 tx(3, {}, {}, 100, 100.0)};
  Schedule s3;
  s3.place(TxId{1}, {0, 0});
  s3.defer(TxId{3});
  s3.place(TxId{2}, {10, 0});
  CHECK(profit(s3, three) == doctest::Approx(40.0));
}

TEST_CASE("profit rejects a transaction missing from the schedule") {
  std::vector<Transaction> txs{tx(1, {}, {}, 10, 3.0)};
  CHECK_THROWS_AS(profit(Schedule{}, txs), ContractError);
}

TEST_CASE("profit does not depend on entry order") {
  std::vector<Transaction> txs{tx(1, {}, {}, 3, 0.1), tx(2, {}, {}, 7, 0.7), tx(3, {}, {}, 11, 1.3)};
  Schedule a, b;
  a.place(TxId{1}, {0, 0});
  a.place(TxId{2}, {0, 1});
  a.place(TxId{3}, {0, 2});
  b.place(TxId{3}, {0, 2});
  b.place(TxId{1}, {0, 0});
  b.place(TxId{2}, {0, 1});
  CHECK(profit(a, txs) == profit(b, txs));
  CHECK(profit(a, txs) == doctest::Approx(3 * 0.1 + 7 * 0.7 + 11 * 1.3).epsilon(1e-9));
}

TEST_CASE("schedule rejects duplicates") {
  Schedule s;
  s.place(TxId{1}, {0, 0});
  CHECK_THROWS_AS(s.defer(TxId{1}), ContractError);
}

TEST_CASE("validator: conflicting overlap on different workers") {
  std::vector<Transaction> txs{tx(1, {}, {0}, 5), tx(2, {0}, {}, 5)};
  Schedule s;
  s.place(TxId{1}, {0, 0});
  s.place(TxId{2}, {3, 1});
  CHECK(has_rule(validate_schedule(s, txs, {20, 2}, {}), "conflict-overlap"));
}

TEST_CASE("validator: ending exactly at the deadline is allowed") {
  std::vector<Transaction> txs{tx(1, {}, {}, 5)};
  Schedule s;
  s.place(TxId{1}, {5, 0});
  CHECK(validate_schedule(s, txs, {10, 1}, {}).empty());
  Schedule late;
  late.place(TxId{1}, {6, 0});
  CHECK(has_rule(validate_schedule(late, txs, {10, 1}, {}), "deadline"));
}

TEST_CASE("validator: worker carryover offset") {
  std::vector<Transaction> txs{tx(1, {}, {}, 2)};
  Schedule s;
  s.place(TxId{1}, {0, 0});
  Carryover c;
  c.worker_offsets = {3};
  CHECK(has_rule(validate_schedule(s, txs, {10, 1}, c), "carryover-worker"));
}

TEST_CASE("validator: object carryover offset") {
  std::vector<Transaction> txs{tx(1, {4}, {}, 2)};
  Schedule s;
  s.place(TxId{1}, {1, 0});
  Carryover c;
  c.object_offsets[ObjectId{4}] = 2;
  CHECK(has_rule(validate_schedule(s, txs, {10, 1}, c), "carryover-object"));
}

TEST_CASE("validator: remaining rules") {
  std::vector<Transaction> txs{tx(1, {}, {}, 2), tx(2, {}, {}, 2)};
  SUBCASE("missing") {
    Schedule s;
    s.place(TxId{1}, {0, 0});
    CHECK(has_rule(validate_schedule(s, txs, {10, 1}, {}), "missing"));
  }
  SUBCASE("unknown") {
    Schedule s;
    s.place(TxId{1}, {0, 0});
    s.defer(TxId{2});
    s.defer(TxId{9});
    CHECK(has_rule(validate_schedule(s, txs, {10, 1}, {}), "unknown"));
  }
  SUBCASE("worker range and overlap") {
    Schedule s;
    s.place(TxId{1}, {0, 0});
    s.place(TxId{2}, {1, 0});
    CHECK(has_rule(validate_schedule(s, txs, {10, 1}, {}), "worker-overlap"));
    Schedule r;
    r.place(TxId{1}, {0, 0});
    r.place(TxId{2}, {0, 2});
    CHECK(has_rule(validate_schedule(r, txs, {10, 2}, {}), "worker-range"));
  }
  SUBCASE("negative start") {
    Schedule s;
    s.place(TxId{1}, {-1, 0});
    s.defer(TxId{2});
    CHECK(has_rule(validate_schedule(s, txs, {10, 1}, {}), "negative-start"));
  }
  SUBCASE("durations override and deadline can be skipped") {
    Schedule s;
    s.place(TxId{1}, {0, 0});
    s.place(TxId{2}, {2, 0});
    std::unordered_map<TxId, Time> d{{TxId{1}, 3}, {TxId{2}, 20}};
    ValidationOptions opt;
    opt.durations = &d;
    CHECK(has_rule(validate_schedule(s, txs, {10, 1}, {}, opt), "worker-overlap"));
    Schedule ok;
    ok.place(TxId{1}, {0, 0});
    ok.place(TxId{2}, {3, 0});
    opt.check_deadline = false;
    CHECK(validate_schedule(ok, txs, {10, 1}, {}, opt).empty());
  }
}

TEST_CASE("fair-order check") {
  std::vector<Transaction> fair{tx(1, {}, {0}, 2), tx(2, {}, {0}, 2)};
  Schedule good;
  good.place(TxId{1}, {0, 0});
  good.place(TxId{2}, {2, 1});
  CHECK(validate_fair_order(good, fair).empty());
  Schedule reversed;
  reversed.place(TxId{2}, {0, 0});
  reversed.place(TxId{1}, {2, 1});
  CHECK_FALSE(validate_fair_order(reversed, fair).empty());
  Schedule skipped;
  skipped.defer(TxId{1});
  skipped.place(TxId{2}, {0, 0});
  CHECK_FALSE(validate_fair_order(skipped, fair).empty());
}
