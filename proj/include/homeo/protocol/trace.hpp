#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "homeo/common.hpp"

namespace homeo::protocol {

enum class Outcome { CommittedLocal, ViolationWinner, AbortedLoser, Retried, Committed2PC };
std::string to_string(Outcome o);
bool committed(Outcome o);

// Times are simulated microseconds. commit_seq orders committed records in
// the serial order the protocol claims; 0 for aborted attempts.
struct TraceRecord {
  std::uint64_t txn_id = 0;
  SiteId site = 1;
  int round = 0;
  std::int64_t start_us = 0;
  std::int64_t end_us = 0;
  Outcome outcome = Outcome::CommittedLocal;
  bool synced = false;
  std::uint64_t commit_seq = 0;
  std::size_t txn = 0;
  std::vector<std::int64_t> params;
  std::vector<std::int64_t> log;
};

struct SimTrace {
  std::vector<TraceRecord> records;
};

}  // namespace homeo::protocol
