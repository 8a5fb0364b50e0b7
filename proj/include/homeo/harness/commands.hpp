#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "homeo/protocol/metrics.hpp"
#include "homeo/protocol/sim_config.hpp"

namespace homeo::harness {

// Exit codes shared by every subcommand.
constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct AnalyzeOptions {
  std::vector<std::string> files;
  std::string placement;  // required with replicated
  bool replicated = false;  // rewrite to per-site deltas first
};

// Table of one file, or the joint table of several.
std::string analyze(const AnalyzeOptions& o);

struct TreatyOptions {
  std::vector<std::string> files;
  std::string placement;
  std::string db;
  std::string model;                   // sample sequences from this model
  std::vector<std::string> sequences;  // or run these, e.g. "T1,T1,T2"
  std::vector<std::string> binds;      // "TXN=v1,v2" parameter bindings
  int lookahead = 3;
  int samples = 10;
  std::uint64_t seed = 1;
  std::uint64_t budget = 100000;
};

// Global treaty, local templates, configuration and instantiated local
// treaties as text.
std::string treaty(const TreatyOptions& o);

// One swept key over a list of values.
struct SweepSpec {
  std::string key;
  std::vector<std::string> values;
};
SweepSpec parse_sweep(const std::string& arg);  // "KEY=v1,v2,..."

// Cartesian product of the sweeps over base; labels like "rtt_ms=50_mode=2pc",
// or "run" when nothing is swept.
std::vector<std::pair<std::string, protocol::SimConfig>> expand(const protocol::SimConfig& base,
                                                                const std::vector<SweepSpec>& sweeps);

struct RunReport {
  std::string label;
  protocol::SimConfig config;
  protocol::Metrics metrics;
  std::string csv;
  bool oracle_checked = false;  // local mode keeps divergent copies and is not checked
  bool oracle_ok = true;
  std::string oracle_detail;
};

RunReport run_microbench(const std::string& label, const protocol::SimConfig& cfg);

// Runs share nothing and fan out over up to `threads` workers; results keep
// input order.
std::vector<RunReport> run_all(const std::vector<std::pair<std::string, protocol::SimConfig>>& runs,
                               unsigned threads = 0);

struct SimulateOptions {
  std::string config;               // key=value file
  std::vector<std::string> sets;    // "KEY=VALUE" overrides
  std::vector<std::string> sweeps;  // "KEY=v1,v2,..."
  std::string out;                  // directory for CSV and summaries
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out, std::ostream& err);
int cmd_treaty(const TreatyOptions& o, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err);

}  // namespace homeo::harness
