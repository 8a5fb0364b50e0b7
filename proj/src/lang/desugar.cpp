#include "homeo/lang/desugar.hpp"

#include <optional>
#include <unordered_map>

#include "homeo/common.hpp"
#include "homeo/lang/transform.hpp"

namespace homeo::lang {

std::string array_element(const std::string& array, std::int64_t i) { return array + "_" + std::to_string(i); }

namespace {

std::optional<std::int64_t> literal_value(const ExprPtr& e) {
  if (e->kind == ExprKind::Lit) return e->value;
  if (e->kind == ExprKind::Neg && e->lhs->kind == ExprKind::Lit) return -e->lhs->value;
  return std::nullopt;
}

struct Desugarer {
  std::map<std::string, std::int64_t> bounds;

  std::int64_t bound(const std::string& a) const {
    auto it = bounds.find(a);
    if (it == bounds.end()) throw UnknownArray("array '" + a + "' has no declared bound");
    return it->second;
  }

  static void check_literal(const std::string& a, std::int64_t i, std::int64_t n) {
    if (i < 0 || i >= n)
      throw BoundExceeded("index " + std::to_string(i) + " outside array '" + a + "' of length " +
                          std::to_string(n));
  }

  template <class Make>
  static ComPtr chain(const ExprPtr& index, std::int64_t n, const Make& make) {
    ComPtr acc = skip();
    for (std::int64_t i = n; i-- > 0;) acc = ifte(cmp(CmpOp::Eq, index, lit(i)), make(i), acc);
    return acc;
  }

  ComPtr run(const ComPtr& c) const {
    switch (c->kind) {
      case ComKind::Seq: {
        std::vector<ComPtr> items;
        for (const auto& i : c->items) items.push_back(run(i));
        return seq(std::move(items));
      }
      case ComKind::If: return ifte(c->cond, run(c->then_branch), run(c->else_branch));
      case ComKind::ArrayRead: {
        std::int64_t n = bound(c->target);
        const std::string& a = c->target;
        const std::string& t = c->name;
        if (auto v = literal_value(c->index)) {
          check_literal(a, *v, n);
          return assign(t, read(array_element(a, *v)));
        }
        return chain(c->index, n, [&](std::int64_t i) { return assign(t, read(array_element(a, i))); });
      }
      case ComKind::ArrayWrite: {
        std::int64_t n = bound(c->name);
        const std::string& a = c->name;
        if (auto v = literal_value(c->index)) {
          check_literal(a, *v, n);
          return write(array_element(a, *v), c->expr);
        }
        return chain(c->index, n, [&](std::int64_t i) { return write(array_element(a, i), c->expr); });
      }
      default: return c;
    }
  }
};

using ConstEnv = std::unordered_map<std::string, std::int64_t>;

ExprPtr consts(const ExprPtr& e, const ConstEnv& env) {
  ExprPtr r = e;
  for (const auto& [t, v] : env) r = subst_temp(r, t, lit(v));
  return fold(r);
}

BoolPtr consts(const BoolPtr& b, const ConstEnv& env) {
  BoolPtr r = b;
  for (const auto& [t, v] : env) r = subst_temp(r, t, lit(v));
  return fold(r);
}

ComPtr propagate(const ComPtr& c, ConstEnv& env) {
  switch (c->kind) {
    case ComKind::Skip: return c;
    case ComKind::Assign: {
      ExprPtr e = consts(c->expr, env);
      if (auto v = literal_value(e))
        env[c->name] = *v;
      else
        env.erase(c->name);
      return assign(c->name, e);
    }
    case ComKind::Write: return write(c->name, consts(c->expr, env));
    case ComKind::Print: return print(consts(c->expr, env));
    case ComKind::Seq: {
      std::vector<ComPtr> items;
      for (const auto& i : c->items) items.push_back(propagate(i, env));
      return seq(std::move(items));
    }
    case ComKind::If: {
      BoolPtr b = consts(c->cond, env);
      if (b->kind == BoolKind::True) return propagate(c->then_branch, env);
      if (b->kind == BoolKind::False) return propagate(c->else_branch, env);
      ConstEnv e1 = env, e2 = env;
      ComPtr c1 = propagate(c->then_branch, e1);
      ComPtr c2 = propagate(c->else_branch, e2);
      env.clear();
      for (const auto& [t, v] : e1) {
        auto it = e2.find(t);
        if (it != e2.end() && it->second == v) env[t] = v;
      }
      return ifte(b, c1, c2);
    }
    case ComKind::ArrayRead: {
      ExprPtr i = consts(c->index, env);
      env.erase(c->name);
      return array_read(c->name, c->target, i);
    }
    case ComKind::ArrayWrite: return array_write(c->name, consts(c->index, env), consts(c->expr, env));
  }
  return c;
}

ComPtr bind_param(const ComPtr& x, const std::string& p, const ExprPtr& v) {
  auto e = [&](const ExprPtr& y) { return subst_param(y, p, v); };
  switch (x->kind) {
    case ComKind::Skip: return x;
    case ComKind::Assign: return assign(x->name, e(x->expr));
    case ComKind::Write: return write(x->name, e(x->expr));
    case ComKind::Print: return print(e(x->expr));
    case ComKind::Seq: {
      std::vector<ComPtr> items;
      for (const auto& i : x->items) items.push_back(bind_param(i, p, v));
      return seq(std::move(items));
    }
    case ComKind::If:
      return ifte(subst_param(x->cond, p, v), bind_param(x->then_branch, p, v), bind_param(x->else_branch, p, v));
    case ComKind::ArrayRead: return array_read(x->name, x->target, e(x->index));
    case ComKind::ArrayWrite: return array_write(x->name, e(x->index), e(x->expr));
  }
  return x;
}

}  // namespace

Transaction desugar_arrays(const Transaction& t, const std::map<std::string, std::int64_t>& bounds) {
  Desugarer d{t.arrays};
  for (const auto& [a, n] : bounds) {
    if (n <= 0) throw BoundExceeded("array '" + a + "' must have a positive bound");
    d.bounds[a] = n;
  }
  Transaction out = t;
  out.arrays.clear();
  out.body = d.run(t.body);
  return out;
}

Transaction specialize(const Transaction& t, std::span<const std::int64_t> params) {
  if (params.size() != t.params.size())
    throw ArityMismatch("transaction '" + t.name + "' expects " + std::to_string(t.params.size()) +
                        " parameter(s), got " + std::to_string(params.size()));
  Transaction out = t;
  out.params.clear();
  ComPtr body = t.body;
  for (std::size_t i = 0; i < params.size(); ++i) body = bind_param(body, t.params[i], lit(params[i]));
  ConstEnv env;
  out.body = propagate(body, env);
  return out;
}

}  // namespace homeo::lang
