#include <doctest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "homeo/analysis/table.hpp"
#include "homeo/protocol/oracle.hpp"
#include "homeo/protocol/simulator.hpp"
#include "homeo/treaty/treaty.hpp"
#include "homeo/workload/microbench.hpp"

using namespace homeo;
using namespace homeo::protocol;

namespace {

SimConfig small(Mode mode) {
  SimConfig c;
  c.mode = mode;
  c.items = 20;
  c.refill = 12;
  c.clients_per_site = 4;
  c.duration_s = 20;
  c.warmup_s = 2;
  c.seed = 5;
  return c;
}

std::string csv(const SimResult& r) {
  std::ostringstream o;
  write_csv(o, r.trace);
  return o.str();
}

struct Run {
  SimResult result;
  OracleVerdict verdict;
};

Run run(const SimConfig& cfg, const Scenario& sc) {
  Compiled c(sc);
  Run r{simulate(cfg, c), {}};
  r.verdict = check_equivalence(r.result.trace, c, sc.initial, r.result.final_db);
  return r;
}

Run run_micro(const SimConfig& cfg) { return run(cfg, workload::microbench_scenario(cfg)); }

}  // namespace

TEST_CASE("config text parses keys, comments and aliases") {
  auto c = parse_sim_config("# defaults aside\nmode = 2pc\nsites=3\nrtt_ms=50 # half\nseed=9\ninitial_stock=refill\n");
  CHECK(c.mode == Mode::TwoPC);
  CHECK(c.sites == 3);
  CHECK(c.rtt_ms == 50);
  CHECK(c.seed == 9);
  CHECK(c.initial_stock == InitialStock::Refill);
  CHECK(c.clients_per_site == 16);
  CHECK(parse_sim_config(to_text(c)).sites == 3);
  CHECK_THROWS_AS(parse_sim_config("colour=blue\n"), ConfigError);
  CHECK_THROWS_AS(parse_sim_config("sites=two\n"), ConfigError);
  CHECK_THROWS_AS(parse_sim_config("sites\n"), ConfigError);
  CHECK_THROWS_AS(parse_sim_config("sites=0\n"), ConfigError);
  CHECK_THROWS_AS(parse_sim_config("mode=fast\n"), ConfigError);
}

TEST_CASE("vote picks the earliest violator, then the lower site") {
  CHECK(vote_winner({{5, 2, 7}}).site == 2);
  CHECK(vote_winner({{5, 2, 1}, {5, 1, 9}}).site == 1);
  CHECK(vote_winner({{6, 1, 1}, {5, 2, 9}}).site == 2);
  CHECK_THROWS_AS(vote_winner({}), InputError);
}

TEST_CASE("round start gives each replica a bound on its own sales") {
  SimConfig cfg;
  cfg.items = 1;
  auto sc = workload::microbench_scenario(cfg);
  sc.initial.set("stock_0", 40);
  Compiled c(sc);
  REQUIRE(c.components().size() == 1);
  lang::Database d{{"stock_0", 40}};
  analysis::Guard psi;
  for (std::size_t m : c.components()[0].members) psi = analysis::conjoin(psi, analysis::lookup(c.instance(m).table, d).guard);
  std::set<std::string> frozen(c.components()[0].frozen.begin(), c.components()[0].frozen.end());
  auto gt = treaty::freeze(treaty::preprocess(analysis::simplify_guard(psi), d), frozen, d);
  auto templates = treaty::make_templates(gt, c.treaty_placement());
  REQUIRE(templates.size() == 2);
  for (const auto& t : templates) {
    REQUIRE(t.clauses.size() == 1);
    const auto& cl = t.clauses[0];
    REQUIRE(cl.terms.size() == 1);
    CHECK(cl.terms.begin()->first == "dstock_0_" + std::to_string(t.site));
  }
  CHECK(treaty::to_string(templates[0].clauses[0]) == "dstock_0_1 + c_dstock_0_2 >= -38");
}

TEST_CASE("local mode never synchronizes and runs at service time") {
  auto r = run_micro(small(Mode::Local)).result;
  CHECK(r.metrics.committed > 0);
  CHECK(r.metrics.sync_ratio == 0);
  CHECK(r.messages == 0);
  for (const auto& rec : r.trace.records) CHECK(rec.end_us - rec.start_us == 2000);
}

TEST_CASE("2pc pays two round trips per transaction") {
  auto cfg = small(Mode::TwoPC);
  auto r = run_micro(cfg);
  CHECK(r.verdict.ok);
  CHECK(r.result.metrics.committed > 0);
  for (const auto& rec : r.result.trace.records) CHECK(rec.end_us - rec.start_us >= 200000);
  CHECK(r.result.metrics.p50_ms == doctest::Approx(200).epsilon(0.1));
  CHECK(r.result.metrics.sync_ratio == 1);
}

TEST_CASE("homeostasis run matches the serial oracle") {
  auto cfg = small(Mode::Homeostasis);
  auto r = run_micro(cfg);
  INFO(r.verdict.detail);
  CHECK(r.verdict.ok);
  CHECK(r.result.treaty_breaches == 0);
  CHECK(r.result.invalid_configs == 0);
  CHECK(r.result.metrics.winners > 0);
  CHECK(r.result.metrics.sync_ratio < 0.5);
}

TEST_CASE("violation latency is two round trips plus bounded overhead") {
  auto cfg = small(Mode::Homeostasis);
  auto r = run_micro(cfg).result;
  std::set<std::uint64_t> lost;
  for (const auto& rec : r.trace.records)
    if (rec.outcome == Outcome::AbortedLoser) lost.insert(rec.txn_id);
  int winners = 0;
  for (const auto& rec : r.trace.records)
    if (rec.outcome == Outcome::ViolationWinner && !lost.count(rec.txn_id)) {
      ++winners;
      CHECK(rec.end_us - rec.start_us >= 200000);
      CHECK(rec.end_us - rec.start_us <= 200000 + 50000);
    } else if (rec.outcome == Outcome::CommittedLocal) {
      CHECK(rec.end_us - rec.start_us == 2000);
    }
  CHECK(winners > 0);
  CHECK(r.metrics.min_winner_latency_ms >= 200);
  CHECK(r.metrics.max_winner_latency_ms <= 250);
}

TEST_CASE("losers are retried after the winner's cleanup") {
  auto cfg = small(Mode::Homeostasis);
  cfg.items = 1;
  cfg.refill = 6;
  cfg.clients_per_site = 8;
  cfg.sites = 3;
  auto r = run_micro(cfg);
  CHECK(r.verdict.ok);
  std::map<std::uint64_t, std::vector<Outcome>> by_txn;
  for (const auto& rec : r.result.trace.records) by_txn[rec.txn_id].push_back(rec.outcome);
  int losers = 0;
  for (const auto& [id, outs] : by_txn) {
    if (std::find(outs.begin(), outs.end(), Outcome::AbortedLoser) == outs.end()) continue;
    ++losers;
    REQUIRE(!outs.empty());
    CHECK((outs.back() == Outcome::Retried || outs.back() == Outcome::ViolationWinner));
  }
  CHECK(losers > 0);
}

TEST_CASE("a single site never sends messages") {
  auto cfg = small(Mode::Homeostasis);
  cfg.sites = 1;
  auto r = run_micro(cfg);
  CHECK(r.verdict.ok);
  CHECK(r.result.messages == 0);
}

TEST_CASE("opt baseline is also equivalent to a serial run") {
  auto r = run_micro(small(Mode::Opt));
  INFO(r.verdict.detail);
  CHECK(r.verdict.ok);
  CHECK(r.result.metrics.winners > 0);
}

TEST_CASE("multi-item orders stay equivalent") {
  auto cfg = small(Mode::Homeostasis);
  cfg.items_per_txn = 3;
  cfg.items = 8;
  auto r = run_micro(cfg);
  INFO(r.verdict.detail);
  CHECK(r.verdict.ok);
  CHECK(r.result.treaty_breaches == 0);
}

TEST_CASE("multi-item cleanups give every item a looked-ahead treaty") {
  // Violations scale with the items touched, not with the items starved of solver time.
  auto sync_ratio = [](int items_per_txn) {
    SimConfig cfg;
    cfg.items_per_txn = items_per_txn;
    cfg.duration_s = 30;
    cfg.warmup_s = 3;
    auto r = run_micro(cfg);
    CHECK(r.verdict.ok);
    return compute_metrics(r.result.trace, cfg).sync_ratio;
  };
  double one = sync_ratio(1), three = sync_ratio(3);
  CHECK(one > 0);
  CHECK(three < 4 * one);
}

TEST_CASE("randomized mixed scenarios stay equivalent") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    int sites = 2 + static_cast<int>(seed % 4);
    SimConfig cfg;
    cfg.sites = sites;
    cfg.clients_per_site = 1 + static_cast<int>(seed % 3);
    cfg.rtt_ms = 10 + 10 * static_cast<double>(seed % 5);
    cfg.duration_s = 3;
    cfg.warmup_s = 0;
    cfg.seed = seed;
    cfg.mode = seed % 5 == 0 ? Mode::Opt : Mode::Homeostasis;
    auto sc = workload::mixed_scenario(seed, sites);
    auto r = run(cfg, sc);
    INFO("seed " << seed << ": " << r.verdict.detail);
    CHECK(r.verdict.ok);
    CHECK(r.result.treaty_breaches == 0);
    CHECK(r.result.invalid_configs == 0);
  }
}

TEST_CASE("an invalid configuration is caught by the oracle") {
  auto cfg = small(Mode::Homeostasis);
  cfg.fault = Fault::BreakH1;
  auto r = run_micro(cfg);
  CHECK(r.result.invalid_configs > 0);
  CHECK_FALSE(r.verdict.ok);
}

TEST_CASE("same seed, same trace") {
  auto cfg = small(Mode::Homeostasis);
  auto a = run_micro(cfg).result, b = run_micro(cfg).result;
  CHECK(csv(a) == csv(b));
  cfg.seed = 6;
  CHECK(csv(run_micro(cfg).result) != csv(a));
}

TEST_CASE("oracle over an empty trace returns the initial state") {
  SimConfig cfg;
  cfg.items = 3;
  auto sc = workload::microbench_scenario(cfg);
  Compiled c(sc);
  SimTrace empty;
  auto run = serial_oracle(empty, c, sc.initial);
  CHECK(run.final_db == sc.initial);
  CHECK(run.logs.empty());
  CHECK(check_equivalence(empty, c, sc.initial, sc.initial).ok);
}

TEST_CASE("metrics cover the measurement window only") {
  SimTrace t;
  auto add = [&](std::int64_t s, std::int64_t e, Outcome o, bool synced) {
    TraceRecord r;
    r.start_us = s;
    r.end_us = e;
    r.outcome = o;
    r.synced = synced;
    t.records.push_back(r);
  };
  add(0, 500000, Outcome::CommittedLocal, false);       // warm-up
  add(1000000, 1002000, Outcome::CommittedLocal, false);
  add(1000000, 1004000, Outcome::CommittedLocal, false);
  add(1000000, 1210000, Outcome::ViolationWinner, true);
  add(1000000, 1001000, Outcome::AbortedLoser, true);
  add(1000000, 1300000, Outcome::Retried, true);
  SimConfig cfg;
  cfg.sites = 2;
  cfg.duration_s = 3;
  cfg.warmup_s = 1;
  auto m = compute_metrics(t, cfg);
  CHECK(m.committed == 4);
  CHECK(m.synced == 2);
  CHECK(m.sync_ratio == doctest::Approx(0.5));
  CHECK(m.throughput_per_site == doctest::Approx(1.0));
  CHECK(m.p50_ms == doctest::Approx(4));
  CHECK(m.p99_ms == doctest::Approx(300));
  CHECK(m.winners == 1);
  CHECK(m.loser_attempts == 1);
}
