#include "homeo/workload/microbench.hpp"

#include <cmath>

#include "homeo/common.hpp"
#include "homeo/lang/desugar.hpp"
#include "homeo/lang/parser.hpp"

namespace homeo::workload {

void validate(const MicrobenchSpec& s) {
  if (s.items < 1) throw ConfigError("items must be >= 1");
  if (s.refill < 2) throw ConfigError("refill must be >= 2");
  if (s.hot_fraction < 0 || s.hot_fraction > 1) throw ConfigError("hot_fraction must be in [0, 1]");
  if (s.hot_traffic < 0 || s.hot_traffic > 1) throw ConfigError("hot traffic share must be in [0, 1]");
  if (s.items_per_txn < 1 || s.items_per_txn > 5) throw ConfigError("items_per_txn must be in [1, 5]");
}

MicrobenchSpec spec_from(const protocol::SimConfig& cfg) {
  MicrobenchSpec s;
  s.items = cfg.items;
  s.refill = cfg.refill;
  s.hot_fraction = cfg.hot_fraction;
  s.hot_traffic = cfg.hot_traffic_pct / 100.0;
  s.items_per_txn = cfg.items_per_txn;
  validate(s);
  return s;
}

lang::Transaction microbench_txn(std::int64_t items, std::int64_t refill, int k) {
  if (k < 1) throw ConfigError("an order needs at least one item");
  std::string src = "array stock[" + std::to_string(items) + "];\n";
  std::string name = k == 1 ? "order" : "order" + std::to_string(k);
  src += name + " ::= {\n";
  std::string params;
  for (int i = 1; i <= k; ++i) {
    std::string p = k == 1 ? "p" : "p" + std::to_string(i);
    std::string q = "qty" + std::to_string(i);
    src += "  " + q + " := read(stock[" + p + "]);\n";
    src += "  if (" + q + " > 1) then write(stock[" + p + "] = " + q + " - 1) else write(stock[" + p +
           "] = " + std::to_string(refill - 1) + ")";
    src += i < k ? ";\n" : "\n";
    params += (i > 1 ? ", " : "") + p;
  }
  src += "}(" + params + ")\n";
  return lang::parse(src);
}

std::int64_t hot_items(const MicrobenchSpec& s) {
  auto h = static_cast<std::int64_t>(std::llround(s.hot_fraction * static_cast<double>(s.items)));
  return std::clamp<std::int64_t>(h, 0, s.items);
}

std::int64_t sample_item(const MicrobenchSpec& s, std::mt19937_64& rng) {
  std::int64_t h = hot_items(s);
  bool hot = h == s.items || (h > 0 && std::uniform_real_distribution<double>(0, 1)(rng) < s.hot_traffic);
  if (hot) return std::uniform_int_distribution<std::int64_t>(0, h - 1)(rng);
  return std::uniform_int_distribution<std::int64_t>(h, s.items - 1)(rng);
}

std::vector<std::int64_t> sample_request(const MicrobenchSpec& s, std::mt19937_64& rng) {
  std::vector<std::int64_t> out;
  for (int i = 0; i < s.items_per_txn; ++i) out.push_back(sample_item(s, rng));
  return out;
}

double item_weight(const MicrobenchSpec& s, std::int64_t item) {
  std::int64_t h = hot_items(s);
  double p_hot = h == 0 ? 0 : h == s.items ? 1 : s.hot_traffic;
  if (item < h) return p_hot / static_cast<double>(h);
  return (1 - p_hot) / static_cast<double>(s.items - h);
}

protocol::Scenario microbench_scenario(const protocol::SimConfig& cfg) {
  MicrobenchSpec spec = spec_from(cfg);
  const int K = cfg.sites;
  protocol::Scenario sc;
  sc.placement.sites = K;
  for (std::int64_t j = 0; j < spec.items; ++j) sc.placement.replicated.insert(lang::array_element("stock", j));
  sc.txns.push_back(microbench_txn(spec.items, spec.refill, 1));
  if (spec.items_per_txn > 1) sc.txns.push_back(microbench_txn(spec.items, spec.refill, spec.items_per_txn));
  for (SiteId s = 1; s <= K; ++s)
    for (std::int64_t j = 0; j < spec.items; ++j)
      sc.instances.push_back({0, {j}, s, item_weight(spec, j) / K});

  std::mt19937_64 stock_rng(cfg.seed ^ 0x5eedf00dULL);
  std::uniform_int_distribution<std::int64_t> level(0, spec.refill);
  for (std::int64_t j = 0; j < spec.items; ++j)
    sc.initial.set(lang::array_element("stock", j),
                   cfg.initial_stock == protocol::InitialStock::Refill ? spec.refill : level(stock_rng));

  const std::int64_t n = spec.items;
  sc.sample = [spec, n](SiteId s, std::mt19937_64& rng) {
    protocol::Request r;
    r.params = sample_request(spec, rng);
    r.txn = r.params.size() == 1 ? 0 : 1;
    for (std::int64_t j : r.params) r.parts.push_back(static_cast<std::size_t>((s - 1) * n + j));
    return r;
  };
  return sc;
}

treaty::WorkloadModel microbench_model(const MicrobenchSpec& s) {
  treaty::WorkloadModel m;
  m.entries.push_back({s.items_per_txn == 1 ? "order" : "order" + std::to_string(s.items_per_txn), 1.0,
                       [s](std::mt19937_64& rng) { return sample_request(s, rng); }});
  return m;
}

}  // namespace homeo::workload
