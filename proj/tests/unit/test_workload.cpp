#include <doctest.h>

#include <random>

#include "homeo/lang/eval.hpp"
#include "homeo/protocol/compiled.hpp"
#include "homeo/workload/microbench.hpp"

using namespace homeo;
using namespace homeo::workload;

namespace {

std::int64_t order_once(std::int64_t qty) {
  auto t = microbench_txn(10, 100);
  lang::Database db{{"stock_3", qty}};
  std::vector<std::int64_t> p{3};
  return lang::eval(protocol::bind(t, p), {}, db).db.get("stock_3");
}

}  // namespace

TEST_CASE("order decrements or refills") {
  CHECK(order_once(5) == 4);
  CHECK(order_once(1) == 99);
  CHECK(order_once(2) == 1);
  CHECK(order_once(0) == 99);
}

TEST_CASE("multi-item order takes one parameter per item") {
  auto t = microbench_txn(10, 100, 5);
  CHECK(t.params.size() == 5);
  MicrobenchSpec s;
  s.items_per_txn = 5;
  std::mt19937_64 rng(1);
  CHECK(sample_request(s, rng).size() == 5);
}

TEST_CASE("multi-item order equals single orders in sequence") {
  std::mt19937_64 rng(7);
  auto single = microbench_txn(6, 10, 1);
  for (int k = 2; k <= 5; ++k) {
    auto multi = microbench_txn(6, 10, k);
    for (int trial = 0; trial < 200; ++trial) {
      lang::Database db;
      for (int j = 0; j < 6; ++j) db.set("stock_" + std::to_string(j), std::uniform_int_distribution<int>(0, 10)(rng));
      std::vector<std::int64_t> items;
      for (int i = 0; i < k; ++i) items.push_back(std::uniform_int_distribution<int>(0, 5)(rng));
      lang::Database seqdb = db;
      for (auto j : items) {
        std::vector<std::int64_t> p{j};
        seqdb = lang::eval(protocol::bind(single, p), {}, seqdb).db;
      }
      CHECK(lang::eval(protocol::bind(multi, items), {}, db).db == seqdb);
    }
  }
}

TEST_CASE("cold-only traffic never picks a hot item") {
  MicrobenchSpec s;
  s.hot_traffic = 0;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20000; ++i) CHECK(sample_item(s, rng) >= hot_items(s));
}

TEST_CASE("hot share follows the traffic setting") {
  MicrobenchSpec s;
  s.hot_fraction = 0.01;
  s.hot_traffic = 0.10;
  std::mt19937_64 rng(11);
  int hot = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) hot += sample_item(s, rng) < hot_items(s);
  CHECK(static_cast<double>(hot) / n == doctest::Approx(0.10).epsilon(0.1));
}

TEST_CASE("item weights sum to one") {
  for (double h : {0.0, 0.1, 0.5, 1.0}) {
    MicrobenchSpec s;
    s.items = 500;
    s.hot_traffic = h;
    double total = 0;
    for (std::int64_t j = 0; j < s.items; ++j) total += item_weight(s, j);
    CHECK(total == doctest::Approx(1.0));
  }
}

TEST_CASE("request stream is seed-deterministic") {
  MicrobenchSpec s;
  s.items_per_txn = 3;
  s.hot_traffic = 0.3;
  std::mt19937_64 a(99), b(99), c(100);
  std::vector<std::int64_t> ra, rb, rc;
  for (int i = 0; i < 1000; ++i) {
    auto x = sample_request(s, a), y = sample_request(s, b), z = sample_request(s, c);
    ra.insert(ra.end(), x.begin(), x.end());
    rb.insert(rb.end(), y.begin(), y.end());
    rc.insert(rc.end(), z.begin(), z.end());
  }
  CHECK(ra == rb);
  CHECK(ra != rc);
}

TEST_CASE("scenario places stock everywhere and orders at every site") {
  protocol::SimConfig cfg;
  cfg.items = 50;
  cfg.sites = 3;
  auto sc = microbench_scenario(cfg);
  CHECK(sc.instances.size() == 150);
  CHECK(sc.placement.replicated.size() == 50);
  for (const auto& [x, v] : sc.initial.entries()) CHECK((v >= 0 && v <= cfg.refill));
  cfg.initial_stock = protocol::InitialStock::Refill;
  auto full = microbench_scenario(cfg);
  for (const auto& [x, v] : full.initial.entries()) CHECK(v == cfg.refill);
  std::mt19937_64 rng(1);
  auto r = sc.sample(2, rng);
  REQUIRE(r.parts.size() == 1);
  CHECK(sc.instances[r.parts[0]].home == 2);
  CHECK(sc.instances[r.parts[0]].params == r.params);
}

TEST_CASE("model mirrors the request distribution") {
  MicrobenchSpec s;
  s.items_per_txn = 2;
  auto m = microbench_model(s);
  REQUIRE(m.entries.size() == 1);
  CHECK(m.entries[0].txn == "order2");
  std::mt19937_64 rng(5);
  CHECK(m.entries[0].params(rng).size() == 2);
}

TEST_CASE("bad specs are rejected") {
  MicrobenchSpec s;
  s.refill = 1;
  CHECK_THROWS_AS(validate(s), ConfigError);
  s = {};
  s.items_per_txn = 6;
  CHECK_THROWS_AS(validate(s), ConfigError);
}
