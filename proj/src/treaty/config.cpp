#include "homeo/common.hpp"
#include "homeo/treaty/treaty.hpp"

namespace homeo::treaty {

TreatyConfiguration default_config(const std::vector<LocalTreatyTemplate>& templates, const GlobalTreaty&,
                                   const Database& db) {
  // Each site is fixed to its current contribution: sum + sign * c == bound on db
  // for equalities, and the tightest value that still holds for the rest.
  // A lone site owns every term, so its clause stays the global one (c = 0).
  TreatyConfiguration cfg;
  for (const auto& t : templates)
    for (const auto& c : t.clauses)
      cfg.assignment[c.config_var] = templates.size() == 1 && c.origin
                                         ? 0
                                         : checked_mul(c.sign, checked_sub(c.bound, eval_terms(c.terms, db)));
  return cfg;
}

bool check_h1(const std::vector<LocalTreatyTemplate>& templates, const TreatyConfiguration& cfg,
              const GlobalTreaty& gt) {
  for (std::size_t g = 0; g < gt.clauses.size(); ++g) {
    std::int64_t sum = 0, count = 0, bound = 0;
    Op op = Op::Le;
    for (const auto& t : templates)
      for (const auto& c : t.clauses) {
        if (c.origin != g) continue;
        auto it = cfg.assignment.find(c.config_var);
        if (it == cfg.assignment.end()) return false;
        sum = checked_add(sum, checked_mul(c.sign, it->second));
        bound = c.bound;
        op = c.op;
        ++count;
      }
    if (count != static_cast<std::int64_t>(templates.size())) return false;
    std::int64_t need = checked_mul(count - 1, bound);
    if (op == Op::Eq ? sum != need : sum < need) return false;
  }
  return true;
}

bool check_valid(const std::vector<LocalTreatyTemplate>& templates, const TreatyConfiguration& cfg,
                 const GlobalTreaty& gt, const Database& db) {
  if (!check_h1(templates, cfg, gt)) return false;
  for (const auto& t : templates)
    if (!holds(t, cfg, db)) return false;
  return true;
}

}  // namespace homeo::treaty
