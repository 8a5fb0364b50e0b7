#include "homeo/protocol/oracle.hpp"

#include <algorithm>

#include "homeo/lang/eval.hpp"

namespace homeo::protocol {

OracleRun serial_oracle(const SimTrace& trace, const Compiled& compiled, const lang::Database& initial) {
  OracleRun run;
  for (std::size_t i = 0; i < trace.records.size(); ++i)
    if (committed(trace.records[i].outcome)) run.order.push_back(i);
  std::sort(run.order.begin(), run.order.end(), [&](std::size_t a, std::size_t b) {
    return trace.records[a].commit_seq < trace.records[b].commit_seq;
  });
  run.final_db = initial;
  for (std::size_t i : run.order) {
    const TraceRecord& r = trace.records[i];
    std::vector<std::int64_t> log;
    lang::exec_in_place(compiled.program(r.txn, r.params).body, {}, {}, run.final_db, log);
    run.logs.push_back(std::move(log));
  }
  return run;
}

namespace {

std::string show(const std::vector<std::int64_t>& log) {
  std::string s = "[";
  for (std::size_t i = 0; i < log.size(); ++i) s += (i ? "," : "") + std::to_string(log[i]);
  return s + "]";
}

}  // namespace

OracleVerdict check_equivalence(const SimTrace& trace, const Compiled& compiled, const lang::Database& initial,
                                const lang::Database& protocol_final) {
  OracleVerdict v;
  OracleRun run = serial_oracle(trace, compiled, initial);
  for (std::size_t k = 0; k < run.order.size(); ++k) {
    const TraceRecord& r = trace.records[run.order[k]];
    ++v.checked;
    if (r.log != run.logs[k] && v.ok) {
      v.ok = false;
      v.detail = "txn " + std::to_string(r.txn_id) + " logged " + show(r.log) + ", serial run logged " +
                 show(run.logs[k]);
    }
  }
  if (!run.final_db.same_values(protocol_final) && v.ok) {
    v.ok = false;
    for (const auto& [x, val] : run.final_db.entries())
      if (protocol_final.get(x) != val) {
        v.detail = "object " + x + " is " + std::to_string(protocol_final.get(x)) + ", serial run gives " +
                   std::to_string(val);
        break;
      }
    if (v.detail.empty()) v.detail = "final databases differ";
  }
  return v;
}

}  // namespace homeo::protocol
