#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "homeo/treaty/treaty.hpp"

namespace homeo::treaty {

struct WorkloadEntry {
  std::string txn;
  double weight = 1;
  std::function<std::vector<std::int64_t>(std::mt19937_64&)> params;  // empty: no parameters
};

struct WorkloadModel {
  std::vector<WorkloadEntry> entries;
};

// Deterministic weighted index pick.
std::size_t pick_weighted(const std::vector<double>& weights, std::mt19937_64& rng);

// Applies one transaction to a database; returns the successor state.
using Step = std::function<Database(const std::string& txn, const std::vector<std::int64_t>& params, const Database&)>;

std::vector<Database> execute_sequence(const Step& step, const std::vector<std::string>& txns, const Database& db);

std::vector<std::vector<Database>> sample_executions(const WorkloadModel& model, const Step& step, const Database& db,
                                                     int L, int f, std::uint64_t seed);
std::vector<std::vector<Database>> sample_executions(const WorkloadModel& model,
                                                     const analysis::JointSymbolicTable& joint, const Database& db,
                                                     int L, int f, std::uint64_t seed);
// Step that looks up the member's row of the joint table and applies its body.
Step joint_step(const analysis::JointSymbolicTable& joint);

// Bounds a group places on one configuration variable, in effective form
// e = sign * c: e <= upper, and e == fixed when set.
struct VarBound {
  std::optional<std::int64_t> upper;
  std::optional<std::int64_t> fixed;
  bool conflict = false;
};

struct SoftGroup {
  std::map<std::string, VarBound> bounds;
};

std::vector<SoftGroup> soft_constraints(const std::vector<LocalTreatyTemplate>& templates,
                                        const std::vector<std::vector<Database>>& sequences);
std::string to_string(const SoftGroup& g, const std::vector<LocalTreatyTemplate>& templates);

bool satisfies(const TreatyConfiguration& cfg, const SoftGroup& g, const std::vector<LocalTreatyTemplate>& templates);
int satisfied_groups(const TreatyConfiguration& cfg, const std::vector<SoftGroup>& groups,
                     const std::vector<LocalTreatyTemplate>& templates);

// Selection problem handed to a solver: pick a largest set of groups that
// is jointly feasible. feasible() answers for a candidate set.
struct SelectionProblem {
  std::size_t groups = 0;
  std::function<bool(const std::vector<std::size_t>&)> feasible;
  std::vector<std::size_t> incumbent;  // feasible starting point
};

struct Selection {
  std::vector<std::size_t> chosen;
  std::uint64_t steps = 0;
};

using GroupSolver = std::function<Selection(const SelectionProblem&, std::uint64_t budget)>;

// Exact branch and bound over include/exclude decisions, include first.
Selection branch_and_bound(const SelectionProblem& p, std::uint64_t budget);

struct OptimizeResult {
  TreatyConfiguration config;
  std::vector<std::size_t> satisfied;
  std::uint64_t steps = 0;
};

OptimizeResult optimize_config(const std::vector<LocalTreatyTemplate>& templates, const GlobalTreaty& gt,
                               const Database& db, const std::vector<SoftGroup>& groups,
                               std::uint64_t budget = 100000, const GroupSolver& solver = branch_and_bound);

// Valid configuration that shares each clause's slack equally among the
// sites with local terms (the demarcation-style split).
TreatyConfiguration equal_split_config(const std::vector<LocalTreatyTemplate>& templates, const GlobalTreaty& gt,
                                       const Database& db);

}  // namespace homeo::treaty
