#include "homeo/analysis/table.hpp"

#include <algorithm>
#include <set>

#include "homeo/common.hpp"
#include "homeo/lang/printer.hpp"
#include "homeo/lang/transform.hpp"

namespace homeo::analysis {

using namespace lang;

namespace {

// A row under construction: conjuncts over the state before the command
// being processed, body commands in reverse order.
struct Raw {
  std::vector<BoolPtr> conj;
  std::vector<ComPtr> rev_body;
};

using Rows = std::vector<Raw>;

template <class F>
void map_conj(Rows& q, const F& f) {
  for (auto& r : q)
    for (auto& b : r.conj) b = f(b);
}

Rows backward(const ComPtr& c, Rows q) {
  switch (c->kind) {
    case ComKind::Skip: return q;
    case ComKind::Seq:
      for (auto it = c->items.rbegin(); it != c->items.rend(); ++it) q = backward(*it, std::move(q));
      return q;
    case ComKind::If: {
      Rows q1 = backward(c->then_branch, q);
      Rows q2 = backward(c->else_branch, std::move(q));
      Rows out;
      for (auto& r : q1) {
        r.conj.insert(r.conj.begin(), c->cond);
        out.push_back(std::move(r));
      }
      BoolPtr nb = bnot(c->cond);
      for (auto& r : q2) {
        r.conj.insert(r.conj.begin(), nb);
        out.push_back(std::move(r));
      }
      return out;
    }
    case ComKind::Assign:
      map_conj(q, [&](const BoolPtr& b) { return subst_temp(b, c->name, c->expr); });
      for (auto& r : q) r.rev_body.push_back(c);
      return q;
    case ComKind::Write:
      map_conj(q, [&](const BoolPtr& b) { return subst_read(b, c->name, c->expr); });
      for (auto& r : q) r.rev_body.push_back(c);
      return q;
    case ComKind::Print:
      for (auto& r : q) r.rev_body.push_back(c);
      return q;
    case ComKind::ArrayRead:
    case ComKind::ArrayWrite: throw std::invalid_argument("symbolic tables need a desugared transaction");
  }
  return q;
}

ComPtr straight_line(std::vector<ComPtr> rev) {
  std::reverse(rev.begin(), rev.end());
  if (rev.empty()) return skip();
  return inline_temps(rev.size() == 1 ? rev[0] : seq(std::move(rev)));
}

Guard rename_params(const Guard& g, const std::string& prefix, const std::vector<std::string>& params) {
  Guard out = g;
  for (auto& a : out.atoms) {
    if (a.linear) {
      Terms t;
      for (const auto& [k, c] : a.terms) t[is_param_key(k) ? param_key(prefix + k.substr(1)) : k] = c;
      a.terms = std::move(t);
    } else {
      for (const auto& p : params) a.opaque = subst_param(a.opaque, p, param(prefix + p));
    }
  }
  return out;
}

std::string dump_line(const Guard& g, const std::vector<ComPtr>& bodies) {
  std::string out = to_string(g) + "  =>  ";
  for (std::size_t i = 0; i < bodies.size(); ++i) out += (i ? "  |  " : "") + to_line(bodies[i]);
  return out + "\n";
}

}  // namespace

SymbolicTable build_table(const Transaction& t) {
  if (!t.arrays.empty()) throw std::invalid_argument("symbolic tables need a desugared transaction");
  SymbolicTable out;
  out.source = t.name;
  out.params = t.params;
  Rows q = backward(t.body, Rows{Raw{}});
  for (auto& r : q) {
    Guard g = simplify_guard(normalize(r.conj));
    if (!check_satisfiable(g)) continue;
    out.rows.push_back(Row{std::move(g), straight_line(std::move(r.rev_body))});
  }
  return out;
}

JointSymbolicTable build_joint_table(const std::vector<SymbolicTable>& tables) {
  JointSymbolicTable out;
  std::map<std::string, int> param_uses;
  for (const auto& t : tables) {
    out.members.push_back(t.source);
    out.params.push_back(t.params);
    for (const auto& p : std::set<std::string>(t.params.begin(), t.params.end())) ++param_uses[p];
  }
  // Parameters shared by name across members are distinct values; qualify them.
  std::vector<std::vector<Guard>> qualified(tables.size());
  for (std::size_t i = 0; i < tables.size(); ++i) {
    bool clash = false;
    for (const auto& p : tables[i].params) clash |= param_uses[p] > 1;
    std::string prefix = (tables[i].source.empty() ? "T" + std::to_string(i + 1) : tables[i].source) + ".";
    for (const auto& r : tables[i].rows)
      qualified[i].push_back(clash ? rename_params(r.guard, prefix, tables[i].params) : r.guard);
  }
  if (tables.empty()) return out;
  std::vector<std::size_t> idx(tables.size(), 0);
  for (const auto& t : tables)
    if (t.rows.empty()) return out;
  for (;;) {
    Guard g;
    for (std::size_t i = 0; i < tables.size(); ++i) g = conjoin(g, qualified[i][idx[i]]);
    g = simplify_guard(g);
    if (check_satisfiable(g)) {
      JointRow r;
      r.guard = std::move(g);
      r.member_rows = idx;
      for (std::size_t i = 0; i < tables.size(); ++i) {
        r.member_guards.push_back(tables[i].rows[idx[i]].guard);
        r.bodies.push_back(tables[i].rows[idx[i]].body);
      }
      out.rows.push_back(std::move(r));
    }
    std::size_t k = tables.size();
    while (k-- > 0) {
      if (++idx[k] < tables[k].rows.size()) break;
      idx[k] = 0;
    }
    if (k == SIZE_MAX) break;
  }
  return out;
}

const Row& lookup(const SymbolicTable& t, const Database& db, std::span<const std::int64_t> params) {
  if (params.size() != t.params.size())
    throw ArityMismatch("table '" + t.source + "' expects " + std::to_string(t.params.size()) + " parameter(s)");
  const Row* found = nullptr;
  Valuation v{db, t.params, params};
  for (const auto& r : t.rows) {
    if (!holds(r.guard, v)) continue;
    if (found) throw MultiMatch("two rows of '" + t.source + "' match " + db.to_string());
    found = &r;
  }
  if (!found) throw NoMatch("no row of '" + t.source + "' matches " + db.to_string());
  return *found;
}

const JointRow& lookup(const JointSymbolicTable& t, const Database& db,
                       const std::vector<std::vector<std::int64_t>>& params) {
  std::vector<std::vector<std::int64_t>> ps = params;
  ps.resize(t.members.size());
  const JointRow* found = nullptr;
  for (const auto& r : t.rows) {
    bool all = true;
    for (std::size_t i = 0; all && i < t.members.size(); ++i) {
      if (ps[i].size() != t.params[i].size())
        throw ArityMismatch("member '" + t.members[i] + "' expects " + std::to_string(t.params[i].size()) +
                            " parameter(s)");
      all = holds(r.member_guards[i], Valuation{db, t.params[i], ps[i]});
    }
    if (!all) continue;
    if (found) throw MultiMatch("two joint rows match " + db.to_string());
    found = &r;
  }
  if (!found) throw NoMatch("no joint row matches " + db.to_string());
  return *found;
}

std::vector<const Row*> lookup_members(const std::vector<const SymbolicTable*>& tables, const Database& db,
                                       const std::vector<std::vector<std::int64_t>>& params) {
  std::vector<const Row*> out;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    std::span<const std::int64_t> p;
    if (i < params.size()) p = params[i];
    out.push_back(&lookup(*tables[i], db, p));
  }
  return out;
}

Transaction row_transaction(const SymbolicTable& t, const Row& r) {
  Transaction out;
  out.name = t.source;
  out.params = t.params;
  out.body = r.body;
  return out;
}

std::string dump(const SymbolicTable& t) {
  std::string out;
  for (const auto& r : t.rows) out += dump_line(r.guard, {r.body});
  return out;
}

std::string dump(const JointSymbolicTable& t) {
  std::string out;
  for (const auto& r : t.rows) out += dump_line(r.guard, r.bodies);
  return out;
}

}  // namespace homeo::analysis
