#include "homeo/lang/printer.hpp"

#include <cctype>
#include <sstream>

namespace homeo::lang {

namespace {

// Precedence: 1 sum, 2 product, 3 unary.
std::string expr_str(const ExprPtr& e, int ctx, const PrintStyle& st) {
  switch (e->kind) {
    case ExprKind::Lit: return std::to_string(e->value);
    case ExprKind::Param: return st.param_marker ? "@" + e->name : e->name;
    case ExprKind::Temp: return e->name;
    case ExprKind::Read: return st.bare_objects ? e->name : "read(" + e->name + ")";
    case ExprKind::Add: {
      std::string s = expr_str(e->lhs, 1, st);
      if (e->rhs->kind == ExprKind::Neg)
        s += " - " + expr_str(e->rhs->lhs, 2, st);
      else
        s += " + " + expr_str(e->rhs, 2, st);
      return ctx > 1 ? "(" + s + ")" : s;
    }
    case ExprKind::Mul: {
      std::string s = expr_str(e->lhs, 2, st) + " * " + expr_str(e->rhs, 3, st);
      return ctx > 2 ? "(" + s + ")" : s;
    }
    case ExprKind::Neg: return "-" + expr_str(e->lhs, 3, st);
  }
  return "?";
}

// Precedence: 1 conjunction, 2 negation operand.
std::string bool_str(const BoolPtr& b, int ctx, const PrintStyle& st) {
  switch (b->kind) {
    case BoolKind::True: return "true";
    case BoolKind::False: return "false";
    case BoolKind::Cmp: {
      std::string s = expr_str(b->lhs, 0, st) + " " + to_string(b->op) + " " + expr_str(b->rhs, 0, st);
      return ctx > 1 ? "(" + s + ")" : s;
    }
    case BoolKind::And: {
      std::string s = bool_str(b->a, 1, st) + " && " + bool_str(b->b, 2, st);
      return ctx > 1 ? "(" + s + ")" : s;
    }
    case BoolKind::Not: return "!" + bool_str(b->a, 2, st);
  }
  return "?";
}

void com_lines(const ComPtr& c, int indent, std::ostringstream& out);

void block(const ComPtr& c, int indent, std::ostringstream& out) {
  out << "{\n";
  com_lines(c, indent + 1, out);
  out << "\n" << std::string(2 * indent, ' ') << "}";
}

void com_lines(const ComPtr& c, int indent, std::ostringstream& out) {
  std::string pad(2 * indent, ' ');
  switch (c->kind) {
    case ComKind::Seq:
      for (std::size_t i = 0; i < c->items.size(); ++i) {
        if (i) out << ";\n";
        if (c->items[i]->kind == ComKind::Seq) {
          out << pad;
          block(c->items[i], indent, out);
        } else {
          com_lines(c->items[i], indent, out);
        }
      }
      return;
    case ComKind::If:
      out << pad << "if (" << to_string(c->cond) << ") then ";
      block(c->then_branch, indent, out);
      out << " else ";
      block(c->else_branch, indent, out);
      return;
    default: out << pad << to_line(c); return;
  }
}

}  // namespace

std::string to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "=";
  }
  return "?";
}

std::string to_string(const ExprPtr& e, PrintStyle style) { return expr_str(e, 0, style); }
std::string to_string(const BoolPtr& b, PrintStyle style) { return bool_str(b, 0, style); }

std::string to_line(const ComPtr& c) {
  switch (c->kind) {
    case ComKind::Skip: return "skip";
    case ComKind::Assign: return c->name + " := " + to_string(c->expr);
    case ComKind::Write: return "write(" + c->name + " = " + to_string(c->expr) + ")";
    case ComKind::Print: return "print(" + to_string(c->expr) + ")";
    case ComKind::ArrayRead: return c->name + " := read(" + c->target + "[" + to_string(c->index) + "])";
    case ComKind::ArrayWrite:
      return "write(" + c->name + "[" + to_string(c->index) + "] = " + to_string(c->expr) + ")";
    case ComKind::If:
      return "if (" + to_string(c->cond) + ") then { " + to_line(c->then_branch) + " } else { " +
             to_line(c->else_branch) + " }";
    case ComKind::Seq: {
      std::string s;
      for (std::size_t i = 0; i < c->items.size(); ++i) {
        if (i) s += "; ";
        s += c->items[i]->kind == ComKind::Seq ? "{ " + to_line(c->items[i]) + " }" : to_line(c->items[i]);
      }
      return s;
    }
  }
  return "?";
}

std::string to_line(const std::vector<ComPtr>& cs) {
  if (cs.empty()) return "skip";
  std::string s;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i) s += "; ";
    s += to_line(cs[i]);
  }
  return s;
}

std::string pretty_print(const Transaction& t) {
  std::ostringstream out;
  for (const auto& [a, n] : t.arrays) out << "array " << a << "[" << n << "];\n";
  bool ident = !t.name.empty() && !std::isdigit(static_cast<unsigned char>(t.name[0]));
  for (char ch : t.name) ident = ident && (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_');
  if (ident) out << t.name << " ::= ";
  out << "{\n";
  com_lines(t.body, 1, out);
  out << "\n}(";
  for (std::size_t i = 0; i < t.params.size(); ++i) out << (i ? ", " : "") << t.params[i];
  out << ")\n";
  return out.str();
}

}  // namespace homeo::lang
