#include "homeo/analysis/formula.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "homeo/common.hpp"
#include "homeo/lang/eval.hpp"
#include "homeo/lang/linear.hpp"
#include "homeo/lang/printer.hpp"
#include "homeo/lang/transform.hpp"

namespace homeo::analysis {

using namespace lang;

std::string param_key(const std::string& p) { return "@" + p; }
bool is_param_key(const std::string& key) { return !key.empty() && key[0] == '@'; }

Rel negate(Rel r) {
  switch (r) {
    case Rel::Lt: return Rel::Ge;
    case Rel::Le: return Rel::Gt;
    case Rel::Eq: return Rel::Ne;
    case Rel::Ne: return Rel::Eq;
    case Rel::Gt: return Rel::Le;
    case Rel::Ge: return Rel::Lt;
  }
  return r;
}

Rel flip(Rel r) {
  switch (r) {
    case Rel::Lt: return Rel::Gt;
    case Rel::Le: return Rel::Ge;
    case Rel::Gt: return Rel::Lt;
    case Rel::Ge: return Rel::Le;
    default: return r;
  }
}

std::string to_string(Rel r) {
  switch (r) {
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Eq: return "=";
    case Rel::Ne: return "!=";
    case Rel::Gt: return ">";
    case Rel::Ge: return ">=";
  }
  return "?";
}

bool compare(std::int64_t lhs, Rel r, std::int64_t bound) {
  switch (r) {
    case Rel::Lt: return lhs < bound;
    case Rel::Le: return lhs <= bound;
    case Rel::Eq: return lhs == bound;
    case Rel::Ne: return lhs != bound;
    case Rel::Gt: return lhs > bound;
    case Rel::Ge: return lhs >= bound;
  }
  return false;
}

namespace {

// Objects before parameters, each in key order.
std::vector<std::pair<std::string, std::int64_t>> ordered(const Terms& t) {
  std::vector<std::pair<std::string, std::int64_t>> out;
  for (const auto& kv : t)
    if (!is_param_key(kv.first)) out.push_back(kv);
  for (const auto& kv : t)
    if (is_param_key(kv.first)) out.push_back(kv);
  return out;
}

void orient(Atom& a) {
  auto o = ordered(a.terms);
  if (o.empty() || o.front().second > 0) return;
  for (auto& [k, c] : a.terms) c = checked_neg(c);
  a.bound = checked_neg(a.bound);
  a.rel = flip(a.rel);
}

Atom opaque_atom(const BoolPtr& b) {
  Atom a;
  a.linear = false;
  a.opaque = b;
  return a;
}


// lhs op rhs with polarity; nullopt if the comparison is not linear.
std::optional<Atom> linearize(CmpOp op, const ExprPtr& lhs, const ExprPtr& rhs, bool positive) {
  auto f = to_linear(sub(lhs, rhs));
  if (!f) return std::nullopt;
  Atom a;
  try {
    for (const auto& [atom, c] : f->terms) {
      if (c == 0) continue;
      std::string key;
      if (atom->kind == ExprKind::Read)
        key = atom->name;
      else if (atom->kind == ExprKind::Param)
        key = param_key(atom->name);
      else
        return std::nullopt;
      a.terms[key] = checked_add(a.terms[key], c);
      if (a.terms[key] == 0) a.terms.erase(key);
    }
    a.bound = checked_neg(f->constant);
    Rel r = op == CmpOp::Lt ? Rel::Lt : op == CmpOp::Le ? Rel::Le : Rel::Eq;
    a.rel = positive ? r : negate(r);
    orient(a);
  } catch (const OverflowError&) {
    return std::nullopt;
  }
  return a;
}

void push(Guard& g, const BoolPtr& b, bool positive) {
  if (g.is_false) return;
  switch (b->kind) {
    case BoolKind::True:
      if (!positive) g.is_false = true;
      return;
    case BoolKind::False:
      if (positive) g.is_false = true;
      return;
    case BoolKind::Not: push(g, b->a, !positive); return;
    case BoolKind::And:
      if (positive) {
        push(g, b->a, true);
        push(g, b->b, true);
      } else {
        g.atoms.push_back(opaque_atom(bnot(b)));
      }
      return;
    case BoolKind::Cmp: {
      auto a = linearize(b->op, b->lhs, b->rhs, positive);
      if (!a) {
        g.atoms.push_back(opaque_atom(positive ? b : bnot(b)));
        return;
      }
      if (a->terms.empty()) {
        if (!compare(0, a->rel, a->bound)) g.is_false = true;
        return;
      }
      g.atoms.push_back(std::move(*a));
      return;
    }
  }
}

ExprPtr terms_expr(const Terms& t) {
  LinearForm f;
  for (const auto& [k, c] : ordered(t)) f.terms.push_back({is_param_key(k) ? param(k.substr(1)) : read(k), c});
  return from_linear(f);
}

bool same_atom(const Atom& a, const Atom& b) {
  if (a.linear != b.linear) return false;
  if (!a.linear) return equal(a.opaque, b.opaque);
  return a.terms == b.terms && a.rel == b.rel && a.bound == b.bound;
}

}  // namespace

Guard normalize(const std::vector<BoolPtr>& conjuncts) {
  Guard g;
  for (const auto& b : conjuncts) push(g, fold(b), true);
  if (g.is_false) g.atoms.clear();
  return g;
}

Guard conjoin(const Guard& a, const Guard& b) {
  Guard g;
  g.is_false = a.is_false || b.is_false;
  if (g.is_false) return g;
  g.atoms = a.atoms;
  g.atoms.insert(g.atoms.end(), b.atoms.begin(), b.atoms.end());
  return g;
}

Guard simplify_guard(const Guard& g) {
  if (g.is_false) return g;
  struct Bounds {
    Terms terms;
    std::optional<std::int64_t> lo, hi;
    std::vector<std::int64_t> ne;
    std::vector<Atom> originals;
  };
  std::vector<Bounds> groups;
  std::vector<Atom> opaque;
  for (const auto& a : g.atoms) {
    if (!a.linear) {
      bool dup = false;
      for (const auto& o : opaque) dup |= same_atom(o, a);
      if (!dup) opaque.push_back(a);
      continue;
    }
    Bounds* b = nullptr;
    for (auto& x : groups)
      if (x.terms == a.terms) b = &x;
    if (!b) {
      groups.push_back(Bounds{a.terms, {}, {}, {}, {}});
      b = &groups.back();
    }
    b->originals.push_back(a);
    auto lower = [&](std::int64_t v) { b->lo = b->lo ? std::max(*b->lo, v) : v; };
    auto upper = [&](std::int64_t v) { b->hi = b->hi ? std::min(*b->hi, v) : v; };
    try {
      switch (a.rel) {
        case Rel::Lt: upper(checked_sub(a.bound, 1)); break;
        case Rel::Le: upper(a.bound); break;
        case Rel::Gt: lower(checked_add(a.bound, 1)); break;
        case Rel::Ge: lower(a.bound); break;
        case Rel::Eq:
          lower(a.bound);
          upper(a.bound);
          break;
        case Rel::Ne: b->ne.push_back(a.bound); break;
      }
    } catch (const OverflowError&) {
      return g;
    }
  }
  Guard out;
  for (auto& b : groups) {
    if (b.lo && b.hi && *b.lo > *b.hi) {
      out.is_false = true;
      out.atoms.clear();
      return out;
    }
    if (b.lo && b.hi && *b.lo == *b.hi) {
      for (auto v : b.ne)
        if (v == *b.lo) {
          out.is_false = true;
          out.atoms.clear();
          return out;
        }
      out.atoms.push_back(Atom{true, b.terms, Rel::Eq, *b.lo, nullptr});
      continue;
    }
    // A lone bound keeps its original relation.
    std::size_t bound_atoms = 0;
    for (const auto& a : b.originals) bound_atoms += a.rel != Rel::Ne;
    if (bound_atoms == 1) {
      for (const auto& a : b.originals)
        if (a.rel != Rel::Ne) out.atoms.push_back(a);
    } else {
      if (b.lo) out.atoms.push_back(Atom{true, b.terms, Rel::Ge, *b.lo, nullptr});
      if (b.hi) out.atoms.push_back(Atom{true, b.terms, Rel::Lt, *b.hi + 1, nullptr});
    }
    std::vector<std::int64_t> seen;
    for (auto v : b.ne) {
      if ((b.lo && v < *b.lo) || (b.hi && v > *b.hi)) continue;
      if (std::find(seen.begin(), seen.end(), v) != seen.end()) continue;
      seen.push_back(v);
      out.atoms.push_back(Atom{true, b.terms, Rel::Ne, v, nullptr});
    }
  }
  out.atoms.insert(out.atoms.end(), opaque.begin(), opaque.end());
  return out;
}

std::string to_string(const Atom& a) {
  PrintStyle style{true, true};
  if (!a.linear) return to_string(a.opaque, style);
  return to_string(terms_expr(a.terms), style) + " " + to_string(a.rel) + " " + std::to_string(a.bound);
}

std::string to_string(const Guard& g) {
  if (g.is_false) return "false";
  if (g.atoms.empty()) return "true";
  std::string out;
  for (const auto& a : g.atoms) {
    if (!out.empty()) out += " && ";
    out += to_string(a);
  }
  return out;
}

std::int64_t eval_terms(const Terms& t, const Valuation& v) {
  std::int64_t sum = 0;
  for (const auto& [k, c] : t) {
    std::int64_t x;
    if (is_param_key(k)) {
      std::string p = k.substr(1);
      std::size_t i = 0;
      while (i < v.param_names.size() && v.param_names[i] != p) ++i;
      if (i == v.param_names.size()) throw ArityMismatch("no value for parameter '" + p + "'");
      x = v.params[i];
    } else {
      x = v.db.get(k);
    }
    sum = checked_add(sum, checked_mul(c, x));
  }
  return sum;
}

bool holds(const Atom& a, const Valuation& v) {
  if (!a.linear) return eval_closed(a.opaque, v.param_names, v.params, v.db);
  return compare(eval_terms(a.terms, v), a.rel, a.bound);
}

bool holds(const Guard& g, const Valuation& v) {
  if (g.is_false) return false;
  for (const auto& a : g.atoms)
    if (!holds(a, v)) return false;
  return true;
}

namespace {

// sum coef * var <= bound over integers
struct Ineq {
  std::map<std::string, std::int64_t> coef;
  std::int64_t bound;
};

void tighten(Ineq& q) {
  std::int64_t g = 0;
  for (const auto& [k, c] : q.coef) g = std::gcd(g, c < 0 ? -c : c);
  if (g <= 1) return;
  for (auto& [k, c] : q.coef) c /= g;
  // floor division keeps every integer solution
  std::int64_t b = q.bound / g;
  if (q.bound % g != 0 && q.bound < 0) --b;
  q.bound = b;
}

std::optional<bool> fourier_motzkin(std::vector<Ineq> qs) {
  constexpr std::size_t kMaxRows = 4000;
  for (;;) {
    for (auto& q : qs) {
      tighten(q);
      if (q.coef.empty() && q.bound < 0) return false;
    }
    std::erase_if(qs, [](const Ineq& q) { return q.coef.empty(); });
    if (qs.empty()) return true;
    // eliminate the variable producing the fewest new rows
    std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
    for (const auto& q : qs)
      for (const auto& [k, c] : q.coef) (c > 0 ? counts[k].first : counts[k].second)++;
    std::string var;
    std::size_t best = SIZE_MAX;
    for (const auto& [k, pn] : counts) {
      std::size_t cost = pn.first * pn.second;
      if (cost < best) {
        best = cost;
        var = k;
      }
    }
    std::vector<Ineq> pos, negs, next;
    for (auto& q : qs) {
      auto it = q.coef.find(var);
      if (it == q.coef.end())
        next.push_back(std::move(q));
      else
        (it->second > 0 ? pos : negs).push_back(std::move(q));
    }
    for (const auto& p : pos)
      for (const auto& n : negs) {
        std::int64_t a = p.coef.at(var), b = -n.coef.at(var);
        Ineq r;
        r.bound = checked_add(checked_mul(b, p.bound), checked_mul(a, n.bound));
        for (const auto& [k, c] : p.coef) r.coef[k] = checked_mul(b, c);
        for (const auto& [k, c] : n.coef) r.coef[k] = checked_add(r.coef[k], checked_mul(a, c));
        std::erase_if(r.coef, [](const auto& kv) { return kv.second == 0; });
        next.push_back(std::move(r));
      }
    if (next.size() > kMaxRows) return std::nullopt;
    qs = std::move(next);
  }
}

}  // namespace

bool check_satisfiable(const Guard& g) {
  Guard s = simplify_guard(g);
  if (s.is_false) return false;
  std::vector<Ineq> qs;
  try {
    for (const auto& a : s.atoms) {
      if (!a.linear || a.rel == Rel::Ne) continue;
      Ineq le{a.terms, a.bound}, ge{{}, checked_neg(a.bound)};
      for (const auto& [k, c] : a.terms) ge.coef[k] = checked_neg(c);
      switch (a.rel) {
        case Rel::Lt: le.bound = checked_sub(a.bound, 1); qs.push_back(le); break;
        case Rel::Le: qs.push_back(le); break;
        case Rel::Gt: ge.bound = checked_sub(ge.bound, 1); qs.push_back(ge); break;
        case Rel::Ge: qs.push_back(ge); break;
        case Rel::Eq:
          qs.push_back(le);
          qs.push_back(ge);
          break;
        case Rel::Ne: break;
      }
    }
    return fourier_motzkin(std::move(qs)).value_or(true);
  } catch (const OverflowError&) {
    return true;
  }
}

}  // namespace homeo::analysis
