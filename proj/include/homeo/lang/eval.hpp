#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "homeo/lang/ast.hpp"
#include "homeo/lang/database.hpp"

namespace homeo::lang {

struct EvalResult {
  Database db;
  std::vector<std::int64_t> log;
  bool operator==(const EvalResult& o) const { return db == o.db && log == o.log; }
};

EvalResult eval(const Transaction& t, std::span<const std::int64_t> params, const Database& db);

// Evaluates a command directly; params are bound by name.
EvalResult eval_command(const ComPtr& c, const std::vector<std::string>& param_names,
                        std::span<const std::int64_t> params, const Database& db);

// Write-only variant used on hot paths: runs c on db in place, appending prints to log.
void exec_in_place(const ComPtr& c, const std::vector<std::string>& param_names,
                   std::span<const std::int64_t> params, Database& db, std::vector<std::int64_t>& log);

// Expression/boolean evaluation over a database with no temps in scope.
std::int64_t eval_closed(const ExprPtr& e, const std::vector<std::string>& param_names,
                         std::span<const std::int64_t> params, const Database& db);
bool eval_closed(const BoolPtr& b, const std::vector<std::string>& param_names,
                 std::span<const std::int64_t> params, const Database& db);

// Reference interpreter for L++ array commands, used to cross-check desugaring.
EvalResult eval_arrays_direct(const Transaction& t, std::span<const std::int64_t> params, const Database& db);

}  // namespace homeo::lang
