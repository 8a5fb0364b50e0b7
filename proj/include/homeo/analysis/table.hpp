#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "homeo/analysis/formula.hpp"
#include "homeo/lang/ast.hpp"
#include "homeo/lang/database.hpp"

namespace homeo::analysis {

struct Row {
  Guard guard;
  lang::ComPtr body;  // straight-line
};

struct SymbolicTable {
  std::string source;
  std::vector<std::string> params;
  std::vector<Row> rows;
};

struct JointRow {
  Guard guard;                          // merged, for display and pruning
  std::vector<Guard> member_guards;     // unqualified, evaluated per member
  std::vector<lang::ComPtr> bodies;
  std::vector<std::size_t> member_rows;
};

struct JointSymbolicTable {
  std::vector<std::string> members;
  std::vector<std::vector<std::string>> params;
  std::vector<JointRow> rows;
};

SymbolicTable build_table(const lang::Transaction& t);
JointSymbolicTable build_joint_table(const std::vector<SymbolicTable>& tables);

const Row& lookup(const SymbolicTable& t, const lang::Database& db, std::span<const std::int64_t> params = {});
const JointRow& lookup(const JointSymbolicTable& t, const lang::Database& db,
                       const std::vector<std::vector<std::int64_t>>& params = {});

// Joint lookup without materializing the cross product: one row per member.
std::vector<const Row*> lookup_members(const std::vector<const SymbolicTable*>& tables, const lang::Database& db,
                                       const std::vector<std::vector<std::int64_t>>& params = {});

// Row body as a runnable transaction with the source's parameters.
lang::Transaction row_transaction(const SymbolicTable& t, const Row& r);

// "GUARD  =>  BODY" per line; joint bodies are separated by "  |  ".
std::string dump(const SymbolicTable& t);
std::string dump(const JointSymbolicTable& t);

}  // namespace homeo::analysis
