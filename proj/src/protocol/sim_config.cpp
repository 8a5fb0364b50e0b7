#include "homeo/protocol/sim_config.hpp"

#include <charconv>
#include <sstream>

#include "homeo/common.hpp"

namespace homeo::protocol {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T number(const std::string& key, const std::string& v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("bad value '" + v + "' for " + key);
  return out;
}

}  // namespace

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Homeostasis: return "homeostasis";
    case Mode::TwoPC: return "twopc";
    case Mode::Local: return "local";
    case Mode::Opt: return "opt";
  }
  return "?";
}

void set_key(SimConfig& c, const std::string& key, const std::string& v) {
  if (key == "mode") {
    if (v == "homeostasis") c.mode = Mode::Homeostasis;
    else if (v == "twopc" || v == "2pc") c.mode = Mode::TwoPC;
    else if (v == "local") c.mode = Mode::Local;
    else if (v == "opt") c.mode = Mode::Opt;
    else throw ConfigError("unknown mode '" + v + "'");
  } else if (key == "sites") c.sites = number<int>(key, v);
  else if (key == "clients_per_site") c.clients_per_site = number<int>(key, v);
  else if (key == "rtt_ms") c.rtt_ms = number<double>(key, v);
  else if (key == "service_ms") c.service_ms = number<double>(key, v);
  else if (key == "refill") c.refill = number<std::int64_t>(key, v);
  else if (key == "items") c.items = number<std::int64_t>(key, v);
  else if (key == "hot_fraction") c.hot_fraction = number<double>(key, v);
  else if (key == "hot_traffic_pct") c.hot_traffic_pct = number<double>(key, v);
  else if (key == "items_per_txn") c.items_per_txn = number<int>(key, v);
  else if (key == "lookahead") c.lookahead = number<int>(key, v);
  else if (key == "cost_factor") c.cost_factor = number<int>(key, v);
  else if (key == "solver_budget") c.solver_budget = number<double>(key, v);
  else if (key == "duration_s") c.duration_s = number<double>(key, v);
  else if (key == "warmup_s") c.warmup_s = number<double>(key, v);
  else if (key == "seed") c.seed = number<std::uint64_t>(key, v);
  else if (key == "initial_stock") {
    if (v == "refill") c.initial_stock = InitialStock::Refill;
    else if (v == "uniform") c.initial_stock = InitialStock::Uniform;
    else throw ConfigError("initial_stock must be refill or uniform");
  } else if (key == "fault") {
    if (v == "none") c.fault = Fault::None;
    else if (v == "h1") c.fault = Fault::BreakH1;
    else throw ConfigError("fault must be none or h1");
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

void validate(const SimConfig& c) {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  need(c.sites >= 1, "sites must be >= 1");
  need(c.clients_per_site >= 1, "clients_per_site must be >= 1");
  need(c.rtt_ms >= 0, "rtt_ms must be >= 0");
  need(c.service_ms > 0, "service_ms must be > 0");
  need(c.refill >= 2, "refill must be >= 2");
  need(c.items >= 1, "items must be >= 1");
  need(c.hot_fraction >= 0 && c.hot_fraction <= 1, "hot_fraction must be in [0, 1]");
  need(c.hot_traffic_pct >= 0 && c.hot_traffic_pct <= 100, "hot_traffic_pct must be in [0, 100]");
  need(c.items_per_txn >= 1 && c.items_per_txn <= 5, "items_per_txn must be in [1, 5]");
  need(c.lookahead >= 0, "lookahead must be >= 0");
  need(c.cost_factor >= 1, "cost_factor must be >= 1");
  need(c.solver_budget >= 0, "solver_budget must be >= 0");
  need(c.duration_s > 0, "duration_s must be > 0");
  need(c.warmup_s >= 0 && c.warmup_s < c.duration_s, "warmup_s must be in [0, duration_s)");
}

SimConfig parse_sim_config(const std::string& text, SimConfig base) {
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(n) + ": expected key=value");
    set_key(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  validate(base);
  return base;
}

std::string to_text(const SimConfig& c) {
  std::ostringstream o;
  o << "mode=" << to_string(c.mode) << "\nsites=" << c.sites << "\nclients_per_site=" << c.clients_per_site
    << "\nrtt_ms=" << c.rtt_ms << "\nservice_ms=" << c.service_ms << "\nrefill=" << c.refill
    << "\nitems=" << c.items << "\nhot_fraction=" << c.hot_fraction << "\nhot_traffic_pct=" << c.hot_traffic_pct
    << "\nitems_per_txn=" << c.items_per_txn << "\nlookahead=" << c.lookahead
    << "\ncost_factor=" << c.cost_factor << "\nsolver_budget=" << c.solver_budget
    << "\nduration_s=" << c.duration_s << "\nwarmup_s=" << c.warmup_s << "\nseed=" << c.seed
    << "\ninitial_stock=" << (c.initial_stock == InitialStock::Refill ? "refill" : "uniform")
    << "\nfault=" << (c.fault == Fault::None ? "none" : "h1") << "\n";
  return o.str();
}

}  // namespace homeo::protocol
