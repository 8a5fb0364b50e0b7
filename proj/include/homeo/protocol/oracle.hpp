#pragma once

#include <string>
#include <vector>

#include "homeo/lang/database.hpp"
#include "homeo/protocol/compiled.hpp"
#include "homeo/protocol/trace.hpp"

namespace homeo::protocol {

struct OracleRun {
  lang::Database final_db;
  std::vector<std::vector<std::int64_t>> logs;  // per committed record, in serial order
  std::vector<std::size_t> order;               // record indices in serial order
};

// Runs every committed request, in commit_seq order, from initial.
OracleRun serial_oracle(const SimTrace& trace, const Compiled& compiled, const lang::Database& initial);

struct OracleVerdict {
  bool ok = true;
  std::size_t checked = 0;
  std::string detail;  // first mismatch
};

OracleVerdict check_equivalence(const SimTrace& trace, const Compiled& compiled, const lang::Database& initial,
                                const lang::Database& protocol_final);

}  // namespace homeo::protocol
