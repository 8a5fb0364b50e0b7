#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "homeo/protocol/sim_config.hpp"
#include "homeo/protocol/trace.hpp"

namespace homeo::protocol {

// Over committed requests that end inside [warmup, duration).
struct Metrics {
  std::uint64_t committed = 0;
  std::uint64_t synced = 0;
  std::uint64_t winners = 0;
  std::uint64_t loser_attempts = 0;
  double throughput_per_site = 0;  // per simulated second
  double p50_ms = 0, p90_ms = 0, p95_ms = 0, p99_ms = 0;
  double sync_ratio = 0;
  // Winners whose first attempt violated; a winner that earlier lost a vote
  // also waited out someone else's cleanup.
  double max_winner_latency_ms = 0;
  double min_winner_latency_ms = 0;
};

Metrics compute_metrics(const SimTrace& trace, const SimConfig& cfg);

// Nearest-rank percentile of an ascending vector; 0 when empty.
double percentile(const std::vector<double>& sorted, double p);

void write_csv(std::ostream& out, const SimTrace& trace);
std::string summary_text(const Metrics& m);

}  // namespace homeo::protocol
