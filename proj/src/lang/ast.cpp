#include "homeo/lang/ast.hpp"

namespace homeo::lang {

namespace {

ExprPtr make_expr(ExprKind k, std::int64_t v, std::string name, ExprPtr l, ExprPtr r) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->value = v;
  e->name = std::move(name);
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

ComPtr make_com(ComKind k) {
  auto c = std::make_shared<Com>();
  c->kind = k;
  return c;
}

}  // namespace

ExprPtr lit(std::int64_t v) { return make_expr(ExprKind::Lit, v, "", nullptr, nullptr); }
ExprPtr param(std::string name) { return make_expr(ExprKind::Param, 0, std::move(name), nullptr, nullptr); }
ExprPtr temp(std::string name) { return make_expr(ExprKind::Temp, 0, std::move(name), nullptr, nullptr); }
ExprPtr read(ObjectId x) { return make_expr(ExprKind::Read, 0, std::move(x), nullptr, nullptr); }
ExprPtr add(ExprPtr a, ExprPtr b) { return make_expr(ExprKind::Add, 0, "", std::move(a), std::move(b)); }
ExprPtr sub(ExprPtr a, ExprPtr b) { return add(std::move(a), neg(std::move(b))); }
ExprPtr mul(ExprPtr a, ExprPtr b) { return make_expr(ExprKind::Mul, 0, "", std::move(a), std::move(b)); }
ExprPtr neg(ExprPtr a) { return make_expr(ExprKind::Neg, 0, "", std::move(a), nullptr); }

BoolPtr btrue() {
  static const BoolPtr t = [] {
    auto b = std::make_shared<BoolExpr>();
    b->kind = BoolKind::True;
    return b;
  }();
  return t;
}

BoolPtr bfalse() {
  static const BoolPtr f = [] {
    auto b = std::make_shared<BoolExpr>();
    b->kind = BoolKind::False;
    return b;
  }();
  return f;
}

BoolPtr cmp(CmpOp op, ExprPtr a, ExprPtr b) {
  auto r = std::make_shared<BoolExpr>();
  r->kind = BoolKind::Cmp;
  r->op = op;
  r->lhs = std::move(a);
  r->rhs = std::move(b);
  return r;
}

BoolPtr band(BoolPtr a, BoolPtr b) {
  auto r = std::make_shared<BoolExpr>();
  r->kind = BoolKind::And;
  r->a = std::move(a);
  r->b = std::move(b);
  return r;
}

BoolPtr bnot(BoolPtr a) {
  auto r = std::make_shared<BoolExpr>();
  r->kind = BoolKind::Not;
  r->a = std::move(a);
  return r;
}

ComPtr skip() {
  static const ComPtr s = make_com(ComKind::Skip);
  return s;
}

ComPtr assign(std::string t, ExprPtr e) {
  auto c = std::make_shared<Com>();
  c->kind = ComKind::Assign;
  c->name = std::move(t);
  c->expr = std::move(e);
  return c;
}

ComPtr seq(std::vector<ComPtr> items) {
  auto c = std::make_shared<Com>();
  c->kind = ComKind::Seq;
  c->items = std::move(items);
  return c;
}

ComPtr ifte(BoolPtr b, ComPtr c1, ComPtr c2) {
  auto c = std::make_shared<Com>();
  c->kind = ComKind::If;
  c->cond = std::move(b);
  c->then_branch = std::move(c1);
  c->else_branch = std::move(c2);
  return c;
}

ComPtr write(ObjectId x, ExprPtr e) {
  auto c = std::make_shared<Com>();
  c->kind = ComKind::Write;
  c->name = std::move(x);
  c->expr = std::move(e);
  return c;
}

ComPtr print(ExprPtr e) {
  auto c = std::make_shared<Com>();
  c->kind = ComKind::Print;
  c->expr = std::move(e);
  return c;
}

ComPtr array_read(std::string t, std::string array, ExprPtr index) {
  auto c = std::make_shared<Com>();
  c->kind = ComKind::ArrayRead;
  c->name = std::move(t);
  c->target = std::move(array);
  c->index = std::move(index);
  return c;
}

ComPtr array_write(std::string array, ExprPtr index, ExprPtr e) {
  auto c = std::make_shared<Com>();
  c->kind = ComKind::ArrayWrite;
  c->name = std::move(array);
  c->index = std::move(index);
  c->expr = std::move(e);
  return c;
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::Lit: return a->value == b->value;
    case ExprKind::Param:
    case ExprKind::Temp:
    case ExprKind::Read: return a->name == b->name;
    case ExprKind::Neg: return equal(a->lhs, b->lhs);
    case ExprKind::Add:
    case ExprKind::Mul: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
  return false;
}

bool equal(const BoolPtr& a, const BoolPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case BoolKind::True:
    case BoolKind::False: return true;
    case BoolKind::Cmp: return a->op == b->op && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    case BoolKind::And: return equal(a->a, b->a) && equal(a->b, b->b);
    case BoolKind::Not: return equal(a->a, b->a);
  }
  return false;
}

bool equal(const ComPtr& a, const ComPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case ComKind::Skip: return true;
    case ComKind::Assign:
    case ComKind::Write: return a->name == b->name && equal(a->expr, b->expr);
    case ComKind::Print: return equal(a->expr, b->expr);
    case ComKind::Seq:
      if (a->items.size() != b->items.size()) return false;
      for (std::size_t i = 0; i < a->items.size(); ++i)
        if (!equal(a->items[i], b->items[i])) return false;
      return true;
    case ComKind::If:
      return equal(a->cond, b->cond) && equal(a->then_branch, b->then_branch) &&
             equal(a->else_branch, b->else_branch);
    case ComKind::ArrayRead:
      return a->name == b->name && a->target == b->target && equal(a->index, b->index);
    case ComKind::ArrayWrite:
      return a->name == b->name && equal(a->index, b->index) && equal(a->expr, b->expr);
  }
  return false;
}

bool equal(const Transaction& a, const Transaction& b) {
  return a.params == b.params && a.arrays == b.arrays && equal(a.body, b.body);
}

namespace {
void flatten_into(const ComPtr& c, std::vector<ComPtr>& out) {
  if (c->kind == ComKind::Seq) {
    for (const auto& i : c->items) flatten_into(i, out);
  } else if (c->kind != ComKind::Skip) {
    out.push_back(c);
  }
}
}  // namespace

std::vector<ComPtr> flatten(const ComPtr& c) {
  std::vector<ComPtr> out;
  flatten_into(c, out);
  return out;
}

void collect_reads(const ExprPtr& e, std::set<ObjectId>& out) {
  switch (e->kind) {
    case ExprKind::Read: out.insert(e->name); break;
    case ExprKind::Add:
    case ExprKind::Mul:
      collect_reads(e->lhs, out);
      collect_reads(e->rhs, out);
      break;
    case ExprKind::Neg: collect_reads(e->lhs, out); break;
    default: break;
  }
}

void collect_reads(const BoolPtr& b, std::set<ObjectId>& out) {
  switch (b->kind) {
    case BoolKind::Cmp:
      collect_reads(b->lhs, out);
      collect_reads(b->rhs, out);
      break;
    case BoolKind::And:
      collect_reads(b->a, out);
      collect_reads(b->b, out);
      break;
    case BoolKind::Not: collect_reads(b->a, out); break;
    default: break;
  }
}

namespace {
void rw(const ComPtr& c, ReadWriteSets& s) {
  switch (c->kind) {
    case ComKind::Skip: break;
    case ComKind::Assign:
    case ComKind::Print: collect_reads(c->expr, s.reads); break;
    case ComKind::Write:
      collect_reads(c->expr, s.reads);
      s.writes.insert(c->name);
      break;
    case ComKind::Seq:
      for (const auto& i : c->items) rw(i, s);
      break;
    case ComKind::If:
      collect_reads(c->cond, s.reads);
      rw(c->then_branch, s);
      rw(c->else_branch, s);
      break;
    case ComKind::ArrayRead:
    case ComKind::ArrayWrite:
      throw std::invalid_argument("read_write_sets expects a desugared transaction");
  }
}
}  // namespace

ReadWriteSets read_write_sets(const ComPtr& c) {
  ReadWriteSets s;
  rw(c, s);
  return s;
}

ReadWriteSets read_write_sets(const Transaction& t) { return read_write_sets(t.body); }

bool uses_temp(const ExprPtr& e, const std::string& t) {
  switch (e->kind) {
    case ExprKind::Temp: return e->name == t;
    case ExprKind::Add:
    case ExprKind::Mul: return uses_temp(e->lhs, t) || uses_temp(e->rhs, t);
    case ExprKind::Neg: return uses_temp(e->lhs, t);
    default: return false;
  }
}

bool uses_temp(const BoolPtr& b, const std::string& t) {
  switch (b->kind) {
    case BoolKind::Cmp: return uses_temp(b->lhs, t) || uses_temp(b->rhs, t);
    case BoolKind::And: return uses_temp(b->a, t) || uses_temp(b->b, t);
    case BoolKind::Not: return uses_temp(b->a, t);
    default: return false;
  }
}

int count_ifs(const ComPtr& c) {
  switch (c->kind) {
    case ComKind::Seq: {
      int n = 0;
      for (const auto& i : c->items) n += count_ifs(i);
      return n;
    }
    case ComKind::If: return 1 + count_ifs(c->then_branch) + count_ifs(c->else_branch);
    default: return 0;
  }
}

}  // namespace homeo::lang
