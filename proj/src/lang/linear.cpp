#include "homeo/lang/linear.hpp"

#include "homeo/common.hpp"

namespace homeo::lang {

namespace {

bool same_atom(const ExprPtr& a, const ExprPtr& b) { return a->kind == b->kind && a->name == b->name; }

void add_term(LinearForm& f, const ExprPtr& atom, std::int64_t c) {
  for (auto& [a, k] : f.terms) {
    if (same_atom(a, atom)) {
      k = checked_add(k, c);
      f.combined = true;
      return;
    }
  }
  f.terms.push_back({atom, c});
}

void scale(LinearForm& f, std::int64_t c) {
  for (auto& t : f.terms) t.second = checked_mul(t.second, c);
  f.constant = checked_mul(f.constant, c);
}

std::optional<LinearForm> lin(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Lit: {
      LinearForm f;
      f.constant = e->value;
      return f;
    }
    case ExprKind::Param:
    case ExprKind::Temp:
    case ExprKind::Read: {
      LinearForm f;
      f.terms.push_back({e, 1});
      return f;
    }
    case ExprKind::Neg: {
      auto f = lin(e->lhs);
      if (f) scale(*f, -1);
      return f;
    }
    case ExprKind::Add: {
      auto a = lin(e->lhs);
      auto b = lin(e->rhs);
      if (!a || !b) return std::nullopt;
      for (const auto& [atom, c] : b->terms) add_term(*a, atom, c);
      a->constant = checked_add(a->constant, b->constant);
      a->combined = a->combined || b->combined;
      return a;
    }
    case ExprKind::Mul: {
      auto a = lin(e->lhs);
      auto b = lin(e->rhs);
      if (!a || !b) return std::nullopt;
      if (!a->terms.empty() && !b->terms.empty()) return std::nullopt;
      if (a->terms.empty()) std::swap(a, b);
      scale(*a, b->constant);
      a->combined = a->combined || b->combined;
      return a;
    }
  }
  return std::nullopt;
}

ExprPtr magnitude_term(const ExprPtr& atom, std::int64_t c) { return c == 1 ? atom : mul(lit(c), atom); }

}  // namespace

std::optional<LinearForm> to_linear(const ExprPtr& e) {
  try {
    return lin(e);
  } catch (const OverflowError&) {
    return std::nullopt;
  }
}

ExprPtr from_linear(const LinearForm& f) {
  ExprPtr acc;
  for (const auto& [atom, c] : f.terms) {
    if (c == 0) continue;
    bool negative = c < 0 && c != INT64_MIN;
    std::int64_t m = negative ? -c : c;
    ExprPtr t = magnitude_term(atom, m);
    if (!acc)
      acc = negative ? neg(t) : t;
    else
      acc = negative ? sub(acc, t) : add(acc, t);
  }
  std::int64_t k = f.constant;
  if (!acc) return k < 0 && k != INT64_MIN ? neg(lit(-k)) : lit(k);
  if (k > 0 || k == INT64_MIN) return add(acc, lit(k));
  if (k < 0) return sub(acc, lit(-k));
  return acc;
}

}  // namespace homeo::lang
