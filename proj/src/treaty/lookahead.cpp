#include "homeo/treaty/lookahead.hpp"

#include <algorithm>

#include "homeo/common.hpp"
#include "homeo/lang/eval.hpp"

namespace homeo::treaty {

std::size_t pick_weighted(const std::vector<double>& weights, std::mt19937_64& rng) {
  double total = 0;
  for (double w : weights) total += w;
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return weights.size() - 1;
}

std::vector<Database> execute_sequence(const Step& step, const std::vector<std::string>& txns, const Database& db) {
  std::vector<Database> out{db};
  for (const auto& t : txns) out.push_back(step(t, {}, out.back()));
  return out;
}

std::vector<std::vector<Database>> sample_executions(const WorkloadModel& model, const Step& step, const Database& db,
                                                     int L, int f, std::uint64_t seed) {
  if (L < 0 || f < 1) throw InputError("lookahead needs L >= 0 and f >= 1");
  if (model.entries.empty()) throw InputError("empty workload model");
  std::vector<double> weights;
  for (const auto& e : model.entries) {
    if (!(e.weight > 0)) throw InputError("workload weights must be positive");
    weights.push_back(e.weight);
  }
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Database>> out;
  for (int s = 0; s < f; ++s) {
    std::vector<Database> run{db};
    for (int j = 0; j < L; ++j) {
      const WorkloadEntry& e = model.entries[pick_weighted(weights, rng)];
      std::vector<std::int64_t> ps = e.params ? e.params(rng) : std::vector<std::int64_t>{};
      run.push_back(step(e.txn, ps, run.back()));
    }
    out.push_back(std::move(run));
  }
  return out;
}

Step joint_step(const analysis::JointSymbolicTable& joint) {
  return [joint](const std::string& txn, const std::vector<std::int64_t>& params, const Database& db) {
    auto it = std::find(joint.members.begin(), joint.members.end(), txn);
    if (it == joint.members.end()) throw InputError("transaction '" + txn + "' is not in the joint table");
    std::size_t i = static_cast<std::size_t>(it - joint.members.begin());
    analysis::Valuation v{db, joint.params[i], params};
    // every member row consistent with db survives pruning, so the first hit is it
    for (const auto& r : joint.rows) {
      if (!analysis::holds(r.member_guards[i], v)) continue;
      Database next = db;
      std::vector<std::int64_t> log;
      lang::exec_in_place(r.bodies[i], joint.params[i], params, next, log);
      return next;
    }
    throw NoMatch("no joint row for '" + txn + "' matches " + db.to_string());
  };
}

std::vector<std::vector<Database>> sample_executions(const WorkloadModel& model,
                                                     const analysis::JointSymbolicTable& joint, const Database& db,
                                                     int L, int f, std::uint64_t seed) {
  return sample_executions(model, joint_step(joint), db, L, f, seed);
}

std::vector<SoftGroup> soft_constraints(const std::vector<LocalTreatyTemplate>& templates,
                                        const std::vector<std::vector<Database>>& sequences) {
  std::vector<SoftGroup> out;
  for (const auto& run : sequences) {
    SoftGroup g;
    for (const auto& t : templates)
      for (const auto& c : t.clauses) {
        VarBound& b = g.bounds[c.config_var];
        for (const auto& d : run) {
          std::int64_t room = checked_sub(c.bound, eval_terms(c.terms, d));
          if (c.op == Op::Eq) {
            if (b.fixed && *b.fixed != room) b.conflict = true;
            b.fixed = room;
          } else {
            if (c.op == Op::Lt) room = checked_sub(room, 1);
            b.upper = b.upper ? std::min(*b.upper, room) : room;
          }
        }
      }
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

struct VarInfo {
  int sign = 1;
  Op op = Op::Le;
  std::optional<std::size_t> origin;
  std::size_t site_index = 0;
  bool has_terms = false;
};

std::map<std::string, VarInfo> var_info(const std::vector<LocalTreatyTemplate>& templates) {
  std::map<std::string, VarInfo> out;
  for (std::size_t i = 0; i < templates.size(); ++i)
    for (const auto& c : templates[i].clauses) out[c.config_var] = VarInfo{c.sign, c.op, c.origin, i, !c.terms.empty()};
  return out;
}

std::string show(const std::string& var, const VarBound& b, int sign) {
  if (b.conflict) return var + " unsatisfiable";
  if (b.fixed) return var + " = " + std::to_string(sign * *b.fixed);
  if (!b.upper) return var + " free";
  return var + (sign < 0 ? " >= " : " <= ") + std::to_string(sign * *b.upper);
}

}  // namespace

std::string to_string(const SoftGroup& g, const std::vector<LocalTreatyTemplate>& templates) {
  std::string out;
  for (const auto& t : templates)
    for (const auto& c : t.clauses) {
      auto it = g.bounds.find(c.config_var);
      if (it == g.bounds.end()) continue;
      out += (out.empty() ? "" : ", ") + show(c.config_var, it->second, c.sign);
    }
  return "{" + out + "}";
}

bool satisfies(const TreatyConfiguration& cfg, const SoftGroup& g, const std::vector<LocalTreatyTemplate>& templates) {
  auto info = var_info(templates);
  for (const auto& [var, b] : g.bounds) {
    auto it = cfg.assignment.find(var);
    auto in = info.find(var);
    if (it == cfg.assignment.end() || in == info.end() || b.conflict) return false;
    std::int64_t e = in->second.sign * it->second;
    if (b.fixed && e != *b.fixed) return false;
    if (b.upper && e > *b.upper) return false;
  }
  return true;
}

int satisfied_groups(const TreatyConfiguration& cfg, const std::vector<SoftGroup>& groups,
                     const std::vector<LocalTreatyTemplate>& templates) {
  int n = 0;
  for (const auto& g : groups) n += satisfies(cfg, g, templates);
  return n;
}

Selection branch_and_bound(const SelectionProblem& p, std::uint64_t budget) {
  Selection best{p.incumbent, 0};
  std::vector<std::size_t> viable;
  for (std::size_t i = 0; i < p.groups && best.steps < budget; ++i) {
    ++best.steps;
    if (p.feasible({i})) viable.push_back(i);
  }
  std::vector<std::size_t> chosen;
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (best.steps >= budget) return;
    if (chosen.size() + (viable.size() - k) <= best.chosen.size()) return;
    if (k == viable.size()) {
      best.chosen = chosen;
      return;
    }
    ++best.steps;
    chosen.push_back(viable[k]);
    if (p.feasible(chosen)) self(self, k + 1);
    chosen.pop_back();
    self(self, k + 1);
  };
  rec(rec, 0);
  std::sort(best.chosen.begin(), best.chosen.end());
  return best;
}

OptimizeResult optimize_config(const std::vector<LocalTreatyTemplate>& templates, const GlobalTreaty& gt,
                               const Database& db, const std::vector<SoftGroup>& groups, std::uint64_t budget,
                               const GroupSolver& solver) {
  OptimizeResult result;
  result.config = default_config(templates, gt, db);
  if (groups.empty()) return result;
  auto info = var_info(templates);
  std::map<std::string, std::int64_t> dflt;  // effective defaults, the H2 caps
  for (const auto& [var, c] : result.config.assignment) dflt[var] = info[var].sign * c;

  // per clause: sum of defaults and what H1 needs
  std::map<std::size_t, std::int64_t> sum_default, need;
  std::map<std::size_t, std::vector<std::string>> members;
  for (const auto& t : templates)
    for (const auto& c : t.clauses)
      if (c.origin && c.op != Op::Eq) {
        sum_default[*c.origin] = checked_add(sum_default[*c.origin], dflt[c.config_var]);
        members[*c.origin].push_back(c.config_var);
        need[*c.origin] = c.bound;
      }
  for (auto& [g, n] : need) n = checked_mul(static_cast<std::int64_t>(members[g].size()) - 1, n);

  auto caps_of = [&](const std::vector<std::size_t>& set, std::map<std::string, std::int64_t>& caps) {
    for (std::size_t gi : set)
      for (const auto& [var, b] : groups[gi].bounds) {
        auto in = info.find(var);
        if (in == info.end() || b.conflict) return false;
        if (b.fixed && *b.fixed != dflt[var]) return false;  // equalities and pins are fixed by H2
        if (b.upper) {
          std::int64_t cap = std::min(dflt[var], *b.upper);
          auto it = caps.find(var);
          caps[var] = it == caps.end() ? cap : std::min(it->second, cap);
        }
      }
    return true;
  };
  auto feasible = [&](const std::vector<std::size_t>& set) {
    std::map<std::string, std::int64_t> caps;
    if (!caps_of(set, caps)) return false;
    std::map<std::size_t, std::int64_t> sums;
    for (const auto& [var, cap] : caps) {
      const VarInfo& in = info[var];
      if (!in.origin || in.op == Op::Eq) {
        if (cap < dflt[var]) return false;
        continue;
      }
      auto [it, fresh] = sums.try_emplace(*in.origin, sum_default[*in.origin]);
      it->second += cap - dflt[var];
    }
    for (const auto& [g, s] : sums)
      if (s < need[g]) return false;
    return true;
  };

  SelectionProblem problem;
  problem.groups = groups.size();
  problem.feasible = feasible;
  for (std::size_t i = 0; i < groups.size(); ++i)
    if (satisfies(result.config, groups[i], templates)) problem.incumbent.push_back(i);
  Selection sel = solver(problem, budget);
  result.steps = sel.steps;
  std::map<std::string, std::int64_t> caps;
  if (!caps_of(sel.chosen, caps) || !feasible(sel.chosen)) {
    caps.clear();
    sel.chosen = problem.incumbent;
    caps_of(sel.chosen, caps);
  }

  // Tighten to the caps, then hand the remaining slack of each clause back in
  // equal shares to the sites that have local terms.
  std::map<std::string, std::int64_t> e = dflt;
  for (const auto& [var, cap] : caps) e[var] = cap;
  for (const auto& [g, vars] : members) {
    std::int64_t total = 0;
    for (const auto& v : vars) total = checked_add(total, e[v]);
    std::int64_t slack = checked_sub(total, need[g]);
    if (slack <= 0) continue;
    std::vector<std::string> takers;
    for (const auto& v : vars)
      if (info[v].has_terms) takers.push_back(v);
    if (takers.empty()) takers.push_back(vars.front());
    std::int64_t share = slack / static_cast<std::int64_t>(takers.size());
    std::int64_t rest = slack % static_cast<std::int64_t>(takers.size());
    for (std::size_t i = 0; i < takers.size(); ++i)
      e[takers[i]] -= share + (static_cast<std::int64_t>(i) < rest ? 1 : 0);
  }
  for (const auto& [var, v] : e) result.config.assignment[var] = info[var].sign * v;
  for (std::size_t i = 0; i < groups.size(); ++i)
    if (satisfies(result.config, groups[i], templates)) result.satisfied.push_back(i);
  return result;
}

TreatyConfiguration equal_split_config(const std::vector<LocalTreatyTemplate>& templates, const GlobalTreaty& gt,
                                       const Database& db) {
  // One unconstrained group: nothing is capped, so all slack is split.
  return optimize_config(templates, gt, db, {SoftGroup{}}).config;
}

}  // namespace homeo::treaty
