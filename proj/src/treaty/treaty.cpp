#include "homeo/treaty/treaty.hpp"

#include <set>

#include "homeo/common.hpp"
#include "homeo/lang/linear.hpp"
#include "homeo/lang/printer.hpp"

namespace homeo::treaty {

using namespace lang;

std::string to_string(Op op) {
  switch (op) {
    case Op::Eq: return "=";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
  }
  return "?";
}

namespace {

std::string flipped(Op op) {
  switch (op) {
    case Op::Eq: return "=";
    case Op::Lt: return ">";
    case Op::Le: return ">=";
  }
  return "?";
}

bool compare(std::int64_t lhs, Op op, std::int64_t rhs) {
  switch (op) {
    case Op::Eq: return lhs == rhs;
    case Op::Lt: return lhs < rhs;
    case Op::Le: return lhs <= rhs;
  }
  return false;
}

// Sum of named terms, printed like a linear expression; "0" when empty.
std::string sum_string(const std::vector<std::pair<std::string, std::int64_t>>& items) {
  LinearForm f;
  for (const auto& [k, c] : items) f.terms.push_back({read(k), c});
  return to_string(from_linear(f), PrintStyle{true, true});
}

std::vector<std::pair<std::string, std::int64_t>> as_items(const Terms& t, std::int64_t scale = 1) {
  std::vector<std::pair<std::string, std::int64_t>> out;
  for (const auto& [k, c] : t) out.push_back({k, checked_mul(c, scale)});
  return out;
}

}  // namespace

std::string to_string(const LinearConstraint& c) {
  return sum_string(as_items(c.terms)) + " " + to_string(c.op) + " " + std::to_string(c.bound);
}

std::string to_string(const GlobalTreaty& gt) {
  if (gt.clauses.empty()) return "true";
  std::string out;
  for (const auto& c : gt.clauses) out += (out.empty() ? "" : " && ") + to_string(c);
  return out;
}

std::string to_string(const LocalClause& c) {
  if (!c.origin) return sum_string(as_items(c.terms)) + " = " + c.config_var;
  std::int64_t s = c.sign < 0 ? -1 : 1;
  auto items = as_items(c.terms, s);
  std::size_t pos = std::min(c.config_pos, items.size());
  items.insert(items.begin() + static_cast<std::ptrdiff_t>(pos), {c.config_var, c.sign * s});
  return sum_string(items) + " " + (s < 0 ? flipped(c.op) : to_string(c.op)) + " " + std::to_string(c.bound * s);
}

std::string to_string(const LocalClause& c, std::int64_t value) {
  std::int64_t rhs = checked_sub(c.bound, checked_mul(c.sign, value));
  std::int64_t s = c.sign < 0 ? -1 : 1;
  std::string lhs = c.terms.empty() ? "0" : sum_string(as_items(c.terms, s));
  return lhs + " " + (s < 0 ? flipped(c.op) : to_string(c.op)) + " " + std::to_string(checked_mul(rhs, s));
}

std::int64_t eval_terms(const Terms& t, const Database& db) {
  std::int64_t sum = 0;
  for (const auto& [k, c] : t) sum = checked_add(sum, checked_mul(c, db.get(k)));
  return sum;
}

bool holds(const LinearConstraint& c, const Database& db) { return compare(eval_terms(c.terms, db), c.op, c.bound); }

bool holds(const GlobalTreaty& gt, const Database& db) {
  for (const auto& c : gt.clauses)
    if (!holds(c, db)) return false;
  return true;
}

bool holds(const LocalClause& c, std::int64_t value, const Database& db) {
  return compare(checked_add(eval_terms(c.terms, db), checked_mul(c.sign, value)), c.op, c.bound);
}

bool holds(const LocalTreatyTemplate& t, const TreatyConfiguration& cfg, const Database& db) {
  for (const auto& c : t.clauses) {
    auto it = cfg.assignment.find(c.config_var);
    if (it == cfg.assignment.end() || !holds(c, it->second, db)) return false;
  }
  return true;
}

GlobalTreaty preprocess(const analysis::Guard& psi, const Database& db) {
  std::vector<std::string> none;
  if (!analysis::holds(psi, analysis::Valuation{db, none, {}}))
    throw PsiViolated("guard " + analysis::to_string(psi) + " does not hold on " + db.to_string());
  GlobalTreaty gt;
  std::set<std::string> pinned;
  auto pin = [&](const std::string& x) {
    if (!pinned.insert(x).second) return;
    gt.clauses.push_back(LinearConstraint{{{x, 1}}, Op::Eq, db.get(x)});
  };
  for (const auto& a : psi.atoms) {
    if (!a.linear || a.rel == analysis::Rel::Ne) {
      std::set<ObjectId> objs;
      if (a.linear)
        for (const auto& [k, c] : a.terms) objs.insert(k);
      else
        collect_reads(a.opaque, objs);
      for (const auto& x : objs) pin(x);
      continue;
    }
    LinearConstraint c{a.terms, Op::Le, a.bound};
    auto negate_all = [&] {
      for (auto& [k, v] : c.terms) v = checked_neg(v);
      c.bound = checked_neg(c.bound);
    };
    switch (a.rel) {
      case analysis::Rel::Lt: c.op = Op::Lt; break;
      case analysis::Rel::Le: c.op = Op::Le; break;
      case analysis::Rel::Eq: c.op = Op::Eq; break;
      case analysis::Rel::Gt: negate_all(); c.op = Op::Lt; break;
      case analysis::Rel::Ge: negate_all(); c.op = Op::Le; break;
      case analysis::Rel::Ne: break;
    }
    for (const auto& [k, v] : c.terms)
      if (analysis::is_param_key(k)) throw InputError("treaty guards must not mention parameters");
    gt.clauses.push_back(std::move(c));
  }
  return gt;
}

GlobalTreaty freeze(const GlobalTreaty& gt, const std::set<std::string>& frozen, const Database& db) {
  GlobalTreaty out;
  for (const auto& c : gt.clauses) {
    LinearConstraint r{{}, c.op, c.bound};
    for (const auto& [k, v] : c.terms) {
      if (frozen.count(k))
        r.bound = checked_sub(r.bound, checked_mul(v, db.get(k)));
      else
        r.terms[k] = v;
    }
    if (!r.terms.empty()) out.clauses.push_back(std::move(r));
  }
  return out;
}

namespace {

std::string fresh(const std::string& base, std::set<std::string>& taken) {
  std::string name = base;
  for (int i = 2; taken.count(name); ++i) name = base + "." + std::to_string(i);
  taken.insert(name);
  return name;
}

}  // namespace

std::vector<LocalTreatyTemplate> make_templates(const GlobalTreaty& gt, const Placement& placement) {
  std::vector<LocalTreatyTemplate> out;
  for (SiteId k = 1; k <= placement.sites; ++k) out.push_back(LocalTreatyTemplate{k, {}});
  std::set<std::string> taken;
  for (const auto& c : gt.clauses)
    for (const auto& [x, d] : c.terms) {
      SiteId s = placement.location(x);
      if (s < 1 || s > placement.sites) throw UnplacedObject("object '" + x + "' is placed on a missing site");
    }
  for (std::size_t i = 0; i < gt.clauses.size(); ++i) {
    const LinearConstraint& g = gt.clauses[i];
    Op op = g.op == Op::Lt ? Op::Le : g.op;
    std::int64_t bound = g.op == Op::Lt ? checked_sub(g.bound, 1) : g.bound;
    bool nonpositive = true;
    for (const auto& [x, d] : g.terms) nonpositive = nonpositive && d <= 0;
    for (auto& t : out) {
      LocalClause lc;
      lc.op = op;
      lc.bound = bound;
      lc.sign = nonpositive ? -1 : 1;
      lc.origin = i;
      std::vector<std::string> remote;
      for (const auto& [x, d] : g.terms) {
        if (placement.location(x) == t.site)
          lc.terms[x] = d;
        else
          remote.push_back(x);
      }
      lc.config_pos = lc.terms.size();
      if (!remote.empty()) {
        lc.config_pos = 0;
        for (const auto& [x, d] : lc.terms) lc.config_pos += x < remote.front();
      }
      lc.config_var = fresh(remote.size() == 1 ? "c_" + remote.front()
                                               : "c" + std::to_string(i + 1) + "_" + std::to_string(t.site),
                            taken);
      t.clauses.push_back(std::move(lc));
    }
  }
  return out;
}

std::vector<LocalTreatyTemplate> pin_remote_reads(const std::vector<SiteBody>& bodies, const Placement& placement,
                                                  std::vector<LocalTreatyTemplate> templates) {
  std::set<std::string> taken;
  std::set<std::string> pinned;
  for (const auto& t : templates)
    for (const auto& c : t.clauses) {
      taken.insert(c.config_var);
      if (!c.origin) pinned.insert(c.terms.begin()->first);
    }
  for (const auto& b : bodies) {
    for (const auto& x : read_write_sets(b.body).reads) {
      if (placement.is_local(x, b.site) || pinned.count(x)) continue;
      SiteId at = placement.location(x);
      LocalTreatyTemplate* t = nullptr;
      for (auto& tt : templates)
        if (tt.site == at) t = &tt;
      if (!t) {
        templates.push_back(LocalTreatyTemplate{at, {}});
        t = &templates.back();
      }
      LocalClause pin;
      pin.terms = {{x, 1}};
      pin.sign = -1;
      pin.op = Op::Eq;
      pin.bound = 0;
      pin.config_var = fresh("c_" + x, taken);
      t->clauses.push_back(std::move(pin));
      pinned.insert(x);
    }
  }
  return templates;
}

}  // namespace homeo::treaty
