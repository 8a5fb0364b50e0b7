#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "homeo/lang/ast.hpp"
#include "homeo/protocol/scenario.hpp"
#include "homeo/protocol/sim_config.hpp"
#include "homeo/treaty/lookahead.hpp"

namespace homeo::workload {

struct MicrobenchSpec {
  std::int64_t items = 10000;
  std::int64_t refill = 100;
  double hot_fraction = 0.01;  // share of items that are hot
  double hot_traffic = 0;      // share of picks that go to hot items
  int items_per_txn = 1;
};

void validate(const MicrobenchSpec& s);
MicrobenchSpec spec_from(const protocol::SimConfig& cfg);

// Orders k items of stock[0..items): each one decrements, or refills to
// refill - 1 once the quantity is down to 1. Parameters p1..pk (p for k = 1).
lang::Transaction microbench_txn(std::int64_t items, std::int64_t refill, int k = 1);

std::int64_t hot_items(const MicrobenchSpec& s);  // hot items are 0 .. hot_items - 1
std::int64_t sample_item(const MicrobenchSpec& s, std::mt19937_64& rng);
std::vector<std::int64_t> sample_request(const MicrobenchSpec& s, std::mt19937_64& rng);
double item_weight(const MicrobenchSpec& s, std::int64_t item);  // pick probability

// Live workload: every site orders every item; stock is replicated.
protocol::Scenario microbench_scenario(const protocol::SimConfig& cfg);

// Same request distribution, as a model for lookahead sampling.
treaty::WorkloadModel microbench_model(const MicrobenchSpec& s);

// Small random scenario over a handful of placed and replicated objects,
// mixing counters, transfers, reads of remote objects and equality tests.
protocol::Scenario mixed_scenario(std::uint64_t seed, int sites);

}  // namespace homeo::workload
