#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "homeo/harness/commands.hpp"
#include "homeo/harness/files.hpp"

using namespace homeo;
using namespace homeo::harness;

namespace {

std::string data(const std::string& name) { return std::string(HOMEO_TEST_DATA) + "/" + name; }

// Scratch directory, removed with the fixture.
struct Scratch {
  std::filesystem::path dir;
  Scratch() : dir(std::filesystem::temp_directory_path() / ("hst_test_" + std::to_string(::getpid()))) {
    std::filesystem::create_directories(dir);
  }
  ~Scratch() { std::filesystem::remove_all(dir); }
  std::string file(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  }
};

const char* kWorkedPlacement = "sites 2\nloc x 1\nloc y 2\nhome T1 1\nhome T2 2\n";

protocol::SimConfig tiny() {
  protocol::SimConfig c;
  c.items = 30;
  c.refill = 10;
  c.clients_per_site = 3;
  c.duration_s = 10;
  c.warmup_s = 1;
  return c;
}

}  // namespace

TEST_CASE("placement, database and model files") {
  Placement p = parse_placement("# two sites\nsites 2\nloc x 1\nloc y 2 # remote\nhome T1 1\nreplicated s t\n");
  CHECK(p.sites == 2);
  CHECK(p.location("y") == 2);
  CHECK(p.home_of("T1") == 1);
  CHECK(p.is_replicated("t"));
  CHECK_THROWS_AS(parse_placement("sites 2\nloc x 3\n"), InputError);
  CHECK_THROWS_AS(parse_placement("where x 1\n"), InputError);

  lang::Database db = parse_database("x = 10\ny = -3\n");
  CHECK(db == lang::Database{{"x", 10}, {"y", -3}});
  CHECK_THROWS_AS(parse_database("x 10\n"), InputError);
  CHECK_THROWS_AS(parse_database("x = ten\n"), InputError);

  auto m = parse_model("T1 2\norder 1 0:9\n");
  REQUIRE(m.entries.size() == 2);
  CHECK(m.entries[0].weight == 2);
  CHECK_FALSE(m.entries[0].params);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    auto ps = m.entries[1].params(rng);
    REQUIRE(ps.size() == 1);
    CHECK(ps[0] >= 0);
    CHECK(ps[0] <= 9);
  }
  CHECK_THROWS_AS(parse_model("T1 0\n"), InputError);
  CHECK_THROWS_AS(parse_model("T1 1 5:2\n"), InputError);
}

TEST_CASE("analyze prints single and joint tables") {
  CHECK(analyze({{data("T1.hst")}, "", false}) ==
        "x + y < 10  =>  write(x = read(x) + 1)\n"
        "x + y >= 10  =>  write(x = read(x) - 1)\n");
  CHECK(analyze({{data("T1.hst"), data("T2.hst")}, "", false}) ==
        "x + y < 10  =>  write(x = read(x) + 1)  |  write(y = read(y) + 1)\n"
        "x + y >= 10 && x + y < 20  =>  write(x = read(x) - 1)  |  write(y = read(y) + 1)\n"
        "x + y >= 20  =>  write(x = read(x) - 1)  |  write(y = read(y) - 1)\n");
}

TEST_CASE("analyze rewrites remote writes to deltas") {
  Scratch s;
  auto p = s.file("p.txt", "sites 2\nloc x 2\nhome fig14 1\n");
  CHECK(analyze({{data("fig14.hst")}, p, true}) ==
        "dx_1 + x > 0  =>  write(dx_1 = read(dx_1) - 1)\n"
        "dx_1 + x <= 0  =>  write(dx_1 = 10 - read(x))\n");
  CHECK_THROWS_AS(analyze({{data("fig14.hst")}, "", true}), InputError);
}

TEST_CASE("analyze exit codes") {
  std::ostringstream out, err;
  CHECK(cmd_analyze({{data("T1.hst")}, "", false}, out, err) == kOk);
  CHECK(cmd_analyze({{data("empty.hst")}, "", false}, out, err) == kUsage);
  CHECK(err.str().find("SyntaxError") != std::string::npos);
  CHECK(err.str().find("empty.hst") != std::string::npos);
  CHECK(cmd_analyze({{data("missing.hst")}, "", false}, out, err) == kUsage);
}

TEST_CASE("treaty on the worked example with the appendix sequences") {
  Scratch s;
  TreatyOptions o;
  o.files = {data("T1.hst"), data("T2.hst")};
  o.placement = s.file("p.txt", kWorkedPlacement);
  o.db = s.file("db.txt", "x = 10\ny = 13\n");
  o.sequences = {"T1,T1,T2", "T1,T1,T1", "T1,T2,T1"};
  CHECK(harness::treaty(o) ==
        "global: -x - y <= -20\n"
        "template 1: x + c_y >= 20\n"
        "template 2: c_x + y >= 20\n"
        "config: c_x = 8\n"
        "config: c_y = 12\n"
        "local 1: x >= 8\n"
        "local 2: y >= 12\n"
        "satisfied: 2/3\n"
        "valid: yes\n");
  o.sequences.clear();
  std::string plain = harness::treaty(o);
  CHECK(plain.find("config: c_x = 7\nconfig: c_y = 10\n") != std::string::npos);
  o.model = s.file("m.txt", "T1 2\nT2 1\n");
  CHECK(harness::treaty(o) == harness::treaty(o));
  CHECK(harness::treaty(o).find("valid: yes") != std::string::npos);
}

TEST_CASE("treaty with one site is the global clause") {
  Scratch s;
  TreatyOptions o;
  o.files = {data("T1.hst"), data("T2.hst")};
  o.placement = s.file("p.txt", "sites 1\nloc x 1\nloc y 1\nhome T1 1\nhome T2 1\n");
  o.db = s.file("db.txt", "x = 10\ny = 13\n");
  CHECK(harness::treaty(o).find("local 1: x + y >= 20\n") != std::string::npos);
}

TEST_CASE("treaty input errors exit with usage") {
  Scratch s;
  TreatyOptions o;
  o.files = {data("T1.hst"), data("T2.hst")};
  o.placement = s.file("p.txt", "sites 2\nloc x 1\nhome T1 1\nhome T2 2\n");
  o.db = s.file("db.txt", "x = 10\ny = 13\n");
  std::ostringstream out, err;
  CHECK(cmd_treaty(o, out, err) == kUsage);
  CHECK(err.str().find("UnplacedObject") != std::string::npos);
}

TEST_CASE("sweeps expand to labelled configurations") {
  auto runs = expand(tiny(), {parse_sweep("rtt_ms=50,100"), parse_sweep("mode=homeostasis,2pc")});
  REQUIRE(runs.size() == 4);
  CHECK(runs[0].first == "rtt_ms=50_mode=homeostasis");
  CHECK(runs[3].first == "rtt_ms=100_mode=2pc");
  CHECK(runs[3].second.rtt_ms == 100);
  CHECK(runs[3].second.mode == protocol::Mode::TwoPC);
  CHECK(expand(tiny(), {}).at(0).first == "run");
  CHECK_THROWS_AS(parse_sweep("colour=red"), ConfigError);
  CHECK_THROWS_AS(parse_sweep("sites=2,x"), ConfigError);
  CHECK_THROWS_AS(parse_sweep("sites"), ConfigError);
}

TEST_CASE("local mode rows never synchronize") {
  auto r = run_microbench("local", [] {
    auto c = tiny();
    c.mode = protocol::Mode::Local;
    return c;
  }());
  CHECK_FALSE(r.oracle_checked);
  CHECK(r.metrics.sync_ratio == 0);
  std::istringstream in(r.csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "txn_id,site,round,start_ms,end_ms,outcome,synced");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.back() == '0');
  }
  CHECK(rows > 0);
}

TEST_CASE("simulate writes identical output for the same seed") {
  Scratch s;
  auto cfg = s.file("c.txt", protocol::to_text(tiny()));
  auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::ostringstream out, err;
  SimulateOptions o;
  o.config = cfg;
  o.sweeps = {"mode=homeostasis,2pc"};
  o.seed = 4;
  o.threads = 2;
  o.out = (s.dir / "a").string();
  REQUIRE(cmd_simulate(o, out, err) == kOk);
  o.out = (s.dir / "b").string();
  REQUIRE(cmd_simulate(o, out, err) == kOk);
  for (const char* f : {"mode=homeostasis.csv", "mode=2pc.csv", "summary.csv"}) {
    std::string a = read(s.dir / "a" / f);
    CHECK(!a.empty());
    CHECK(a == read(s.dir / "b" / f));
  }
}

TEST_CASE("simulate fails the run when the oracle disagrees") {
  std::ostringstream out, err;
  SimulateOptions o;
  o.sets = {"items=30", "refill=10", "clients_per_site=3", "duration_s=10", "warmup_s=1", "fault=h1"};
  CHECK(cmd_simulate(o, out, err) == kCheckFailed);
  CHECK(err.str().find("serial oracle mismatch") != std::string::npos);
  o.sets = {"duration_s=-1"};
  CHECK(cmd_simulate(o, out, err) == kUsage);
}

TEST_CASE("homeostasis stays at least 50x ahead of 2pc across round-trip times") {
  protocol::SimConfig base;
  base.duration_s = 20;
  base.warmup_s = 2;
  auto reports = run_all(expand(base, {parse_sweep("rtt_ms=50,100,150,200"), parse_sweep("mode=homeostasis,2pc")}));
  REQUIRE(reports.size() == 8);
  for (std::size_t i = 0; i < reports.size(); i += 2) {
    INFO(reports[i].label);
    CHECK(reports[i].oracle_ok);
    CHECK(reports[i + 1].oracle_ok);
    CHECK(reports[i].metrics.throughput_per_site >= 50 * reports[i + 1].metrics.throughput_per_site);
  }
}
