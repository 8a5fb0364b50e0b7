#pragma once

#include <cstdint>

#include "homeo/lang/database.hpp"
#include "homeo/protocol/compiled.hpp"
#include "homeo/protocol/metrics.hpp"
#include "homeo/protocol/scenario.hpp"
#include "homeo/protocol/sim_config.hpp"
#include "homeo/protocol/trace.hpp"

namespace homeo::protocol {

struct SimResult {
  SimTrace trace;
  Metrics metrics;
  lang::Database final_db;  // logical values after the run drains
  std::uint64_t rounds = 0;              // treaty computations
  std::uint64_t messages = 0;            // simulated network messages
  std::uint64_t treaty_breaches = 0;     // commits after which a global treaty failed
  std::uint64_t invalid_configs = 0;     // configurations failing check_valid
};

// Deterministic discrete-event run of one scenario. Clients are closed-loop
// and stop issuing at duration_s; the run then drains outstanding work.
SimResult simulate(const SimConfig& cfg, const Scenario& scenario);
SimResult simulate(const SimConfig& cfg, const Compiled& compiled);

// Least (time, site, seq) wins.
struct Violator {
  std::int64_t time_us = 0;
  SiteId site = 1;
  std::uint64_t seq = 0;
};
Violator vote_winner(const std::vector<Violator>& violators);

}  // namespace homeo::protocol
