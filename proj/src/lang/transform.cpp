#include "homeo/lang/transform.hpp"

#include <optional>
#include <set>

#include "homeo/common.hpp"
#include "homeo/lang/linear.hpp"

namespace homeo::lang {

namespace {

template <class Match>
ExprPtr replace(const ExprPtr& e, const Match& match, const ExprPtr& by) {
  switch (e->kind) {
    case ExprKind::Add:
    case ExprKind::Mul: {
      ExprPtr l = replace(e->lhs, match, by), r = replace(e->rhs, match, by);
      if (l == e->lhs && r == e->rhs) return e;
      return e->kind == ExprKind::Add ? add(l, r) : mul(l, r);
    }
    case ExprKind::Neg: {
      ExprPtr l = replace(e->lhs, match, by);
      return l == e->lhs ? e : neg(l);
    }
    default: return match(e) ? by : e;
  }
}

template <class F>
BoolPtr map_bool(const BoolPtr& b, const F& f) {
  switch (b->kind) {
    case BoolKind::Cmp: {
      ExprPtr l = f(b->lhs), r = f(b->rhs);
      return l == b->lhs && r == b->rhs ? b : cmp(b->op, l, r);
    }
    case BoolKind::And: {
      BoolPtr x = map_bool(b->a, f), y = map_bool(b->b, f);
      return x == b->a && y == b->b ? b : band(x, y);
    }
    case BoolKind::Not: {
      BoolPtr x = map_bool(b->a, f);
      return x == b->a ? b : bnot(x);
    }
    default: return b;
  }
}

}  // namespace

ExprPtr subst_temp(const ExprPtr& e, const std::string& t, const ExprPtr& by) {
  return replace(e, [&](const ExprPtr& n) { return n->kind == ExprKind::Temp && n->name == t; }, by);
}
BoolPtr subst_temp(const BoolPtr& b, const std::string& t, const ExprPtr& by) {
  return map_bool(b, [&](const ExprPtr& e) { return subst_temp(e, t, by); });
}
ExprPtr subst_read(const ExprPtr& e, const ObjectId& x, const ExprPtr& by) {
  return replace(e, [&](const ExprPtr& n) { return n->kind == ExprKind::Read && n->name == x; }, by);
}
BoolPtr subst_read(const BoolPtr& b, const ObjectId& x, const ExprPtr& by) {
  return map_bool(b, [&](const ExprPtr& e) { return subst_read(e, x, by); });
}
ExprPtr subst_param(const ExprPtr& e, const std::string& p, const ExprPtr& by) {
  return replace(e, [&](const ExprPtr& n) { return n->kind == ExprKind::Param && n->name == p; }, by);
}
BoolPtr subst_param(const BoolPtr& b, const std::string& p, const ExprPtr& by) {
  return map_bool(b, [&](const ExprPtr& e) { return subst_param(e, p, by); });
}

namespace {

// Negative constants are kept as Neg(Lit) so printed and parsed forms agree.
std::optional<std::int64_t> const_value(const ExprPtr& e) {
  if (e->kind == ExprKind::Lit) return e->value;
  if (e->kind == ExprKind::Neg && e->lhs->kind == ExprKind::Lit && e->lhs->value != INT64_MIN) return -e->lhs->value;
  return std::nullopt;
}

ExprPtr constant(std::int64_t v) { return v < 0 && v != INT64_MIN ? neg(lit(-v)) : lit(v); }

}  // namespace

ExprPtr fold(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Add:
    case ExprKind::Mul: {
      ExprPtr l = fold(e->lhs), r = fold(e->rhs);
      auto a = const_value(l), b = const_value(r);
      if (a && b) {
        try {
          return constant(e->kind == ExprKind::Add ? checked_add(*a, *b) : checked_mul(*a, *b));
        } catch (const OverflowError&) {
        }
      }
      if (l == e->lhs && r == e->rhs) return e;
      return e->kind == ExprKind::Add ? add(l, r) : mul(l, r);
    }
    case ExprKind::Neg: {
      ExprPtr l = fold(e->lhs);
      if (l->kind == ExprKind::Lit) return l == e->lhs ? e : neg(l);
      auto a = const_value(l);
      if (a && *a != INT64_MIN) return constant(-*a);
      return l == e->lhs ? e : neg(l);
    }
    default: return e;
  }
}

BoolPtr fold(const BoolPtr& b) {
  switch (b->kind) {
    case BoolKind::Cmp: {
      ExprPtr l = fold(b->lhs), r = fold(b->rhs);
      auto x = const_value(l), y = const_value(r);
      if (x && y) {
        bool v = b->op == CmpOp::Lt ? *x < *y : b->op == CmpOp::Le ? *x <= *y : *x == *y;
        return v ? btrue() : bfalse();
      }
      return l == b->lhs && r == b->rhs ? b : cmp(b->op, l, r);
    }
    case BoolKind::And: {
      BoolPtr x = fold(b->a), y = fold(b->b);
      if (x->kind == BoolKind::False || y->kind == BoolKind::False) return bfalse();
      if (x->kind == BoolKind::True) return y;
      if (y->kind == BoolKind::True) return x;
      return x == b->a && y == b->b ? b : band(x, y);
    }
    case BoolKind::Not: {
      BoolPtr x = fold(b->a);
      if (x->kind == BoolKind::True) return bfalse();
      if (x->kind == BoolKind::False) return btrue();
      return x == b->a ? b : bnot(x);
    }
    default: return b;
  }
}

namespace {

struct Def {
  std::string temp;
  ExprPtr expr;
  std::set<ObjectId> reads;
};

using DefEnv = std::vector<Def>;

ExprPtr inline_env(const ExprPtr& e, const DefEnv& env) {
  ExprPtr r = e;
  for (const auto& d : env) r = subst_temp(r, d.temp, d.expr);
  return r;
}

BoolPtr inline_env(const BoolPtr& b, const DefEnv& env) {
  BoolPtr r = b;
  for (const auto& d : env) r = subst_temp(r, d.temp, d.expr);
  return r;
}

void forget_temp(DefEnv& env, const std::string& t) {
  std::erase_if(env, [&](const Def& d) { return d.temp == t || uses_temp(d.expr, t); });
}

ComPtr forward(const ComPtr& c, DefEnv& env) {
  switch (c->kind) {
    case ComKind::Skip: return c;
    case ComKind::Assign: {
      ExprPtr e = inline_env(c->expr, env);
      forget_temp(env, c->name);
      // t := f(t) with the old t no longer inlinable stays a plain assignment.
      if (!uses_temp(e, c->name)) {
        Def d{c->name, e, {}};
        collect_reads(e, d.reads);
        env.push_back(std::move(d));
      }
      return e == c->expr ? c : assign(c->name, e);
    }
    case ComKind::Write: {
      ExprPtr e = inline_env(c->expr, env);
      std::erase_if(env, [&](const Def& d) { return d.reads.count(c->name) != 0; });
      return e == c->expr ? c : write(c->name, e);
    }
    case ComKind::Print: {
      ExprPtr e = inline_env(c->expr, env);
      return e == c->expr ? c : print(e);
    }
    case ComKind::Seq: {
      std::vector<ComPtr> items;
      for (const auto& i : c->items) items.push_back(forward(i, env));
      return seq(std::move(items));
    }
    case ComKind::If: {
      BoolPtr b = inline_env(c->cond, env);
      DefEnv e1 = env, e2 = env;
      ComPtr c1 = forward(c->then_branch, e1);
      ComPtr c2 = forward(c->else_branch, e2);
      DefEnv merged;
      for (const auto& d : e1)
        for (const auto& d2 : e2)
          if (d.temp == d2.temp && equal(d.expr, d2.expr)) merged.push_back(d);
      env = std::move(merged);
      return ifte(b, c1, c2);
    }
    default: return c;
  }
}

void temps_of(const ExprPtr& e, std::set<std::string>& out) {
  switch (e->kind) {
    case ExprKind::Temp: out.insert(e->name); break;
    case ExprKind::Add:
    case ExprKind::Mul:
      temps_of(e->lhs, out);
      temps_of(e->rhs, out);
      break;
    case ExprKind::Neg: temps_of(e->lhs, out); break;
    default: break;
  }
}

void temps_of(const BoolPtr& b, std::set<std::string>& out) {
  switch (b->kind) {
    case BoolKind::Cmp:
      temps_of(b->lhs, out);
      temps_of(b->rhs, out);
      break;
    case BoolKind::And:
      temps_of(b->a, out);
      temps_of(b->b, out);
      break;
    case BoolKind::Not: temps_of(b->a, out); break;
    default: break;
  }
}

ComPtr tidy_seq(std::vector<ComPtr> items) {
  std::erase_if(items, [](const ComPtr& i) { return i->kind == ComKind::Skip; });
  if (items.empty()) return skip();
  if (items.size() == 1) return items[0];
  return seq(std::move(items));
}

ComPtr dce(const ComPtr& c, std::set<std::string>& live) {
  switch (c->kind) {
    case ComKind::Assign:
      if (!live.count(c->name)) return skip();
      live.erase(c->name);
      temps_of(c->expr, live);
      return c;
    case ComKind::Write:
    case ComKind::Print: temps_of(c->expr, live); return c;
    case ComKind::Seq: {
      std::vector<ComPtr> items(c->items.size());
      for (std::size_t i = c->items.size(); i-- > 0;) items[i] = dce(c->items[i], live);
      return tidy_seq(std::move(items));
    }
    case ComKind::If: {
      std::set<std::string> l1 = live, l2 = live;
      ComPtr c1 = dce(c->then_branch, l1);
      ComPtr c2 = dce(c->else_branch, l2);
      live = std::move(l1);
      live.insert(l2.begin(), l2.end());
      temps_of(c->cond, live);
      return ifte(c->cond, c1, c2);
    }
    default: return c;
  }
}

ComPtr cancel(const ComPtr& c, bool& changed) {
  auto ex = [&](const ExprPtr& e) {
    ExprPtr r = cancel_terms(e);
    if (r != e) changed = true;
    return r;
  };
  switch (c->kind) {
    case ComKind::Assign: {
      ExprPtr e = ex(c->expr);
      return e == c->expr ? c : assign(c->name, e);
    }
    case ComKind::Write: {
      ExprPtr e = ex(c->expr);
      return e == c->expr ? c : write(c->name, e);
    }
    case ComKind::Print: {
      ExprPtr e = ex(c->expr);
      return e == c->expr ? c : print(e);
    }
    case ComKind::Seq: {
      std::vector<ComPtr> items;
      for (const auto& i : c->items) items.push_back(cancel(i, changed));
      return seq(std::move(items));
    }
    case ComKind::If: {
      BoolPtr b = map_bool(c->cond, ex);
      return ifte(b, cancel(c->then_branch, changed), cancel(c->else_branch, changed));
    }
    default: return c;
  }
}

}  // namespace

ComPtr eliminate_dead_temps(const ComPtr& c) {
  std::set<std::string> live;
  return dce(c, live);
}

ComPtr inline_temps(const ComPtr& c) {
  DefEnv env;
  return eliminate_dead_temps(forward(c, env));
}

ExprPtr cancel_terms(const ExprPtr& e) {
  auto f = to_linear(e);
  if (!f || !f->combined) return e;
  return from_linear(*f);
}

ComPtr cancel_terms(const ComPtr& c, bool* changed) {
  bool ch = false;
  ComPtr r = cancel(c, ch);
  if (changed) *changed = ch;
  return ch ? r : c;
}

}  // namespace homeo::lang
