#pragma once

#include <cstdint>
#include <string>

namespace homeo::protocol {

enum class Mode { Homeostasis, TwoPC, Local, Opt };
enum class InitialStock { Refill, Uniform };
enum class Fault { None, BreakH1 };

struct SimConfig {
  Mode mode = Mode::Homeostasis;
  int sites = 2;
  int clients_per_site = 16;
  double rtt_ms = 100;
  double service_ms = 2;
  std::int64_t refill = 100;
  std::int64_t items = 10000;
  double hot_fraction = 0.01;
  double hot_traffic_pct = 0;  // percent of picks that go to hot items
  int items_per_txn = 1;
  int lookahead = 20;
  int cost_factor = 10;       // sampled sequences per treaty computation
  double solver_budget = 50;  // ms
  double duration_s = 300;
  double warmup_s = 5;
  std::uint64_t seed = 1;
  InitialStock initial_stock = InitialStock::Uniform;
  Fault fault = Fault::None;
};

// key=value lines; '#' starts a comment. Unknown keys and bad values throw ConfigError.
SimConfig parse_sim_config(const std::string& text, SimConfig base = {});
void set_key(SimConfig& cfg, const std::string& key, const std::string& value);
void validate(const SimConfig& cfg);
std::string to_text(const SimConfig& cfg);

std::string to_string(Mode m);

}  // namespace homeo::protocol
