#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "homeo/analysis/formula.hpp"
#include "homeo/analysis/table.hpp"
#include "homeo/lang/database.hpp"
#include "homeo/placement.hpp"

namespace homeo::treaty {

using analysis::Terms;
using lang::Database;

enum class Op { Eq, Lt, Le };
std::string to_string(Op op);

// (sum_i d_i x_i) op bound
struct LinearConstraint {
  Terms terms;
  Op op = Op::Le;
  std::int64_t bound = 0;
};

struct GlobalTreaty {
  std::vector<LinearConstraint> clauses;
};

// (sum of local terms) + sign * config_var  op  bound.
// sign is -1 when every coefficient of the global clause is non-positive, so
// that "-x - c <= -20" reads as "x + c >= 20". Clauses without an origin are
// pins added for remote reads.
struct LocalClause {
  Terms terms;
  std::string config_var;
  int sign = 1;
  Op op = Op::Le;
  std::int64_t bound = 0;
  std::optional<std::size_t> origin;
  std::size_t config_pos = 0;  // display position of the variable among the terms
};

struct LocalTreatyTemplate {
  SiteId site = 1;
  std::vector<LocalClause> clauses;
};

struct TreatyConfiguration {
  std::map<std::string, std::int64_t> assignment;
  bool operator==(const TreatyConfiguration&) const = default;
};

std::string to_string(const LinearConstraint& c);
std::string to_string(const LocalClause& c);
std::string to_string(const LocalClause& c, std::int64_t value);
std::string to_string(const GlobalTreaty& gt);

std::int64_t eval_terms(const Terms& t, const Database& db);
bool holds(const LinearConstraint& c, const Database& db);
bool holds(const GlobalTreaty& gt, const Database& db);
bool holds(const LocalClause& c, std::int64_t value, const Database& db);
bool holds(const LocalTreatyTemplate& t, const TreatyConfiguration& cfg, const Database& db);

// Linear atoms pass through; every other atom is decided on db and the
// objects it mentions are pinned to their values in db.
GlobalTreaty preprocess(const analysis::Guard& psi, const Database& db);

// Replaces objects that cannot change during a round by their values.
GlobalTreaty freeze(const GlobalTreaty& gt, const std::set<std::string>& frozen, const Database& db);

std::vector<LocalTreatyTemplate> make_templates(const GlobalTreaty& gt, const Placement& placement);

TreatyConfiguration default_config(const std::vector<LocalTreatyTemplate>& templates, const GlobalTreaty& gt,
                                   const Database& db);

bool check_h1(const std::vector<LocalTreatyTemplate>& templates, const TreatyConfiguration& cfg,
              const GlobalTreaty& gt);
bool check_valid(const std::vector<LocalTreatyTemplate>& templates, const TreatyConfiguration& cfg,
                 const GlobalTreaty& gt, const Database& db);

// Each read of a remote object x by a body running at site i pins x at its
// own site: x - c = 0 with c fixed to the current value of x.
struct SiteBody {
  SiteId site;
  lang::ComPtr body;
};
std::vector<LocalTreatyTemplate> pin_remote_reads(const std::vector<SiteBody>& bodies, const Placement& placement,
                                                  std::vector<LocalTreatyTemplate> templates);

}  // namespace homeo::treaty
