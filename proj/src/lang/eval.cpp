#include "homeo/lang/eval.hpp"

#include <sstream>
#include <unordered_map>

#include "homeo/common.hpp"
#include "homeo/lang/desugar.hpp"

namespace homeo::lang {

bool Database::same_values(const Database& o) const {
  for (const auto& [k, v] : values_)
    if (o.get(k) != v) return false;
  for (const auto& [k, v] : o.values_)
    if (get(k) != v) return false;
  return true;
}

std::string Database::to_string() const {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (const auto& [k, v] : values_) {
    out << (first ? "" : ", ") << k << ":" << v;
    first = false;
  }
  out << "}";
  return out.str();
}

namespace {

struct Machine {
  const std::vector<std::string>& pnames;
  std::span<const std::int64_t> pvals;
  Database& db;
  std::vector<std::int64_t>& log;
  const std::map<std::string, std::int64_t>* arrays = nullptr;
  std::unordered_map<std::string, std::int64_t> temps{};

  std::int64_t param_value(const std::string& p) const {
    for (std::size_t i = 0; i < pnames.size(); ++i)
      if (pnames[i] == p) return pvals[i];
    throw ArityMismatch("no value for parameter '" + p + "'");
  }

  std::int64_t ev(const ExprPtr& e) {
    switch (e->kind) {
      case ExprKind::Lit: return e->value;
      case ExprKind::Param: return param_value(e->name);
      case ExprKind::Temp: {
        auto it = temps.find(e->name);
        if (it == temps.end()) throw UnboundTemp("temp '" + e->name + "' read before assignment");
        return it->second;
      }
      case ExprKind::Read: return db.get(e->name);
      case ExprKind::Add: return checked_add(ev(e->lhs), ev(e->rhs));
      case ExprKind::Mul: return checked_mul(ev(e->lhs), ev(e->rhs));
      case ExprKind::Neg: return checked_neg(ev(e->lhs));
    }
    return 0;
  }

  bool ev(const BoolPtr& b) {
    switch (b->kind) {
      case BoolKind::True: return true;
      case BoolKind::False: return false;
      case BoolKind::Cmp: {
        std::int64_t l = ev(b->lhs), r = ev(b->rhs);
        switch (b->op) {
          case CmpOp::Lt: return l < r;
          case CmpOp::Le: return l <= r;
          case CmpOp::Eq: return l == r;
        }
        return false;
      }
      case BoolKind::And: return ev(b->a) && ev(b->b);
      case BoolKind::Not: return !ev(b->a);
    }
    return false;
  }

  std::int64_t bound(const std::string& a) const {
    if (!arrays) throw std::invalid_argument("array command in pure L evaluation");
    auto it = arrays->find(a);
    if (it == arrays->end()) throw UnknownArray("array '" + a + "' is not declared");
    return it->second;
  }

  void run(const ComPtr& c) {
    switch (c->kind) {
      case ComKind::Skip: return;
      case ComKind::Assign: temps[c->name] = ev(c->expr); return;
      case ComKind::Write: db.set(c->name, ev(c->expr)); return;
      case ComKind::Print: log.push_back(ev(c->expr)); return;
      case ComKind::Seq:
        for (const auto& i : c->items) run(i);
        return;
      case ComKind::If: run(ev(c->cond) ? c->then_branch : c->else_branch); return;
      case ComKind::ArrayRead: {
        std::int64_t n = bound(c->target), i = ev(c->index);
        if (0 <= i && i < n) temps[c->name] = db.get(array_element(c->target, i));
        return;
      }
      case ComKind::ArrayWrite: {
        std::int64_t n = bound(c->name), i = ev(c->index);
        if (0 <= i && i < n) db.set(array_element(c->name, i), ev(c->expr));
        return;
      }
    }
  }
};

void check_arity(const Transaction& t, std::span<const std::int64_t> params) {
  if (params.size() != t.params.size())
    throw ArityMismatch("transaction '" + t.name + "' expects " + std::to_string(t.params.size()) +
                        " parameter(s), got " + std::to_string(params.size()));
}

}  // namespace

EvalResult eval(const Transaction& t, std::span<const std::int64_t> params, const Database& db) {
  check_arity(t, params);
  if (!t.arrays.empty()) throw std::invalid_argument("eval expects a desugared transaction");
  return eval_command(t.body, t.params, params, db);
}

EvalResult eval_command(const ComPtr& c, const std::vector<std::string>& param_names,
                        std::span<const std::int64_t> params, const Database& db) {
  EvalResult r{db, {}};
  exec_in_place(c, param_names, params, r.db, r.log);
  return r;
}

void exec_in_place(const ComPtr& c, const std::vector<std::string>& param_names,
                   std::span<const std::int64_t> params, Database& db, std::vector<std::int64_t>& log) {
  Machine m{param_names, params, db, log};
  m.run(c);
}

std::int64_t eval_closed(const ExprPtr& e, const std::vector<std::string>& param_names,
                         std::span<const std::int64_t> params, const Database& db) {
  std::vector<std::int64_t> log;
  Machine m{param_names, params, const_cast<Database&>(db), log};
  return m.ev(e);
}

bool eval_closed(const BoolPtr& b, const std::vector<std::string>& param_names,
                 std::span<const std::int64_t> params, const Database& db) {
  std::vector<std::int64_t> log;
  Machine m{param_names, params, const_cast<Database&>(db), log};
  return m.ev(b);
}

EvalResult eval_arrays_direct(const Transaction& t, std::span<const std::int64_t> params, const Database& db) {
  check_arity(t, params);
  EvalResult r{db, {}};
  Machine m{t.params, params, r.db, r.log, &t.arrays};
  m.run(t.body);
  return r;
}

}  // namespace homeo::lang
