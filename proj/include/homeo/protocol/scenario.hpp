#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "homeo/lang/ast.hpp"
#include "homeo/lang/database.hpp"
#include "homeo/placement.hpp"

namespace homeo::protocol {

// One parameter binding of a transaction at its home site. Treaties are
// computed over instances; weight is its share of the request stream.
struct Instance {
  std::size_t txn = 0;
  std::vector<std::int64_t> params;
  SiteId home = 1;
  double weight = 1;
};

// A client request: instances run back to back as one atomic unit. txn and
// params name the whole program the request stands for; the serial oracle
// runs that program.
struct Request {
  std::vector<std::size_t> parts;
  std::size_t txn = 0;
  std::vector<std::int64_t> params;
};

struct Scenario {
  Placement placement;  // sites, object locations, replicated set
  std::vector<lang::Transaction> txns;
  std::vector<Instance> instances;
  lang::Database initial;
  std::function<Request(SiteId, std::mt19937_64&)> sample;
};

}  // namespace homeo::protocol
