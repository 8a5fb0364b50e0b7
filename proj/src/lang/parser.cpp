#include "homeo/lang/parser.hpp"

#include <cctype>
#include <functional>
#include <set>

#include "homeo/common.hpp"

namespace homeo::lang {

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  static const char* multi[] = {"::=", ":=", "<=", ">=", "!=", "==", "&&"};
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, src.substr(i, j - i), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Int, src.substr(i, j - i), l, cl});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* m : multi) {
      std::string s(m);
      if (src.compare(i, s.size(), s) == 0) {
        out.push_back({Tok::Sym, s, l, cl});
        advance(s.size());
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string("{}()[];,=<>+-*!").find(c) != std::string::npos) {
      out.push_back({Tok::Sym, std::string(1, c), l, cl});
      advance(1);
      continue;
    }
    throw SyntaxError(std::to_string(l) + ":" + std::to_string(cl) + ": unexpected character '" +
                      std::string(1, c) + "'");
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

const std::set<std::string> kKeywords = {"skip", "if", "then", "else", "read", "write", "print",
                                         "true", "false", "array", "and", "not"};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  Transaction file(const std::string& fallback_name) {
    Transaction tx;
    tx.name = fallback_name;
    while (is_word("array")) {
      next();
      std::string a = ident("array name");
      expect("[");
      std::int64_t n = integer();
      expect("]");
      expect(";");
      if (n <= 0) fail(prev(), "array bound must be positive");
      tx.arrays[a] = n;
    }
    if (peek().kind == Tok::Ident && !kKeywords.count(peek().text) && peek(1).text == "::=") {
      tx.name = next().text;
      next();
    }
    expect("{");
    tx.body = sequence();
    expect("}");
    expect("(");
    if (!is_sym(")")) {
      for (;;) {
        const Token& tk = peek();
        std::string p = ident("parameter name");
        for (const auto& q : tx.params)
          if (q == p) fail(tk, "duplicate parameter '" + p + "'");
        tx.params.push_back(p);
        if (is_sym(",")) {
          next();
          continue;
        }
        break;
      }
    }
    expect(")");
    if (peek().kind != Tok::End) fail(peek(), "trailing input after transaction");

    std::set<std::string> ps(tx.params.begin(), tx.params.end());
    for (const auto& [name, tk] : assigned_)
      if (ps.count(name)) fail(tk, "parameter '" + name + "' is read-only");
    tx.body = bind_params(tx.body, ps);
    return tx;
  }

 private:
  std::vector<Token> t_;
  std::size_t pos_ = 0;
  std::vector<std::pair<std::string, Token>> assigned_;

  const Token& peek(std::size_t k = 0) const { return t_[std::min(pos_ + k, t_.size() - 1)]; }
  const Token& prev() const { return t_[pos_ == 0 ? 0 : pos_ - 1]; }
  const Token& next() { return t_[pos_ < t_.size() - 1 ? pos_++ : pos_]; }
  bool is_sym(const std::string& s) const { return peek().kind == Tok::Sym && peek().text == s; }
  bool is_word(const std::string& s) const { return peek().kind == Tok::Ident && peek().text == s; }

  [[noreturn]] static void fail(const Token& tk, const std::string& msg) {
    throw SyntaxError(std::to_string(tk.line) + ":" + std::to_string(tk.col) + ": " + msg);
  }

  void expect(const std::string& s) {
    if (!is_sym(s)) {
      fail(peek(), "expected '" + s + "' but found " +
                       (peek().kind == Tok::End ? std::string("end of input") : "'" + peek().text + "'"));
    }
    next();
  }

  void expect_word(const std::string& s) {
    if (!is_word(s)) fail(peek(), "expected '" + s + "'");
    next();
  }

  std::string ident(const char* what) {
    const Token& tk = peek();
    if (tk.kind != Tok::Ident || kKeywords.count(tk.text)) fail(tk, std::string("expected ") + what);
    next();
    return tk.text;
  }

  std::int64_t integer() {
    const Token& tk = peek();
    if (tk.kind != Tok::Int) fail(tk, "expected integer literal");
    next();
    try {
      std::size_t used = 0;
      long long v = std::stoll(tk.text, &used);
      return v;
    } catch (const std::out_of_range&) {
      fail(tk, "integer literal out of range");
    }
  }

  ComPtr sequence() {
    std::vector<ComPtr> items;
    while (!is_sym("}") && peek().kind != Tok::End) {
      items.push_back(command());
      if (is_sym(";")) {
        next();
        continue;
      }
      break;
    }
    if (items.empty()) return skip();
    if (items.size() == 1) return items[0];
    return seq(std::move(items));
  }

  ComPtr command() {
    const Token& tk = peek();
    if (is_sym("{")) {
      next();
      ComPtr c = sequence();
      expect("}");
      return c;
    }
    if (is_word("skip")) {
      next();
      return skip();
    }
    if (is_word("if")) {
      next();
      BoolPtr b = bexp();
      expect_word("then");
      ComPtr c1 = command();
      ComPtr c2 = skip();
      if (is_word("else")) {
        next();
        c2 = command();
      }
      return ifte(b, c1, c2);
    }
    if (is_word("write")) {
      next();
      expect("(");
      std::string x = ident("object name");
      ExprPtr index;
      if (is_sym("[")) {
        next();
        index = expr();
        expect("]");
      }
      expect("=");
      ExprPtr e = expr();
      expect(")");
      return index ? array_write(x, index, e) : write(x, e);
    }
    if (is_word("print")) {
      next();
      expect("(");
      ExprPtr e = expr();
      expect(")");
      return print(e);
    }
    if (tk.kind == Tok::Ident && !kKeywords.count(tk.text) && peek(1).text == ":=") {
      Token at = next();
      next();
      assigned_.push_back({at.text, at});
      if (is_word("read") && peek(1).text == "(" && peek(2).kind == Tok::Ident && peek(3).text == "[") {
        next();
        next();
        std::string a = ident("array name");
        expect("[");
        ExprPtr index = expr();
        expect("]");
        expect(")");
        return array_read(at.text, a, index);
      }
      return assign(at.text, expr());
    }
    fail(tk, tk.kind == Tok::End ? "unexpected end of input" : "unexpected '" + tk.text + "'");
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (is_sym("+")) {
        next();
        e = add(e, term());
      } else if (is_sym("-")) {
        next();
        e = add(e, neg(term()));
      } else {
        return e;
      }
    }
  }

  ExprPtr term() {
    ExprPtr e = unary();
    while (is_sym("*")) {
      next();
      e = mul(e, unary());
    }
    return e;
  }

  ExprPtr unary() {
    if (is_sym("-")) {
      next();
      return neg(unary());
    }
    return primary();
  }

  ExprPtr primary() {
    const Token& tk = peek();
    if (tk.kind == Tok::Int) return lit(integer());
    if (is_sym("(")) {
      next();
      ExprPtr e = expr();
      expect(")");
      return e;
    }
    if (is_word("read")) {
      next();
      expect("(");
      std::string x = ident("object name");
      if (is_sym("[")) fail(peek(), "an array read must be the whole right-hand side of an assignment");
      expect(")");
      return read(x);
    }
    if (tk.kind == Tok::Ident && !kKeywords.count(tk.text)) {
      next();
      return temp(tk.text);  // params are bound after the parameter list is read
    }
    fail(tk, tk.kind == Tok::End ? "unexpected end of input" : "unexpected '" + tk.text + "'");
  }

  BoolPtr bexp() {
    BoolPtr b = bunary();
    while (is_sym("&&") || is_word("and")) {
      next();
      b = band(b, bunary());
    }
    return b;
  }

  BoolPtr bunary() {
    if (is_sym("!") || is_word("not")) {
      next();
      return bnot(bunary());
    }
    return bprimary();
  }

  static bool is_operator(const Token& tk) {
    static const std::set<std::string> ops = {"<", "<=", ">", ">=", "=", "==", "!=", "+", "-", "*"};
    return tk.kind == Tok::Sym && ops.count(tk.text);
  }

  BoolPtr bprimary() {
    if (is_word("true")) {
      next();
      return btrue();
    }
    if (is_word("false")) {
      next();
      return bfalse();
    }
    if (is_sym("(")) {
      std::size_t save = pos_;
      std::size_t save_assigned = assigned_.size();
      try {
        next();
        BoolPtr b = bexp();
        expect(")");
        if (!is_operator(peek())) return b;
      } catch (const SyntaxError&) {
      }
      pos_ = save;
      assigned_.resize(save_assigned);
    }
    ExprPtr a = expr();
    const Token& op = peek();
    if (op.kind != Tok::Sym) fail(op, "expected comparison operator");
    next();
    ExprPtr b = expr();
    if (op.text == "<") return cmp(CmpOp::Lt, a, b);
    if (op.text == "<=") return cmp(CmpOp::Le, a, b);
    if (op.text == "=" || op.text == "==") return cmp(CmpOp::Eq, a, b);
    if (op.text == ">") return cmp(CmpOp::Lt, b, a);
    if (op.text == ">=") return cmp(CmpOp::Le, b, a);
    if (op.text == "!=") return bnot(cmp(CmpOp::Eq, a, b));
    fail(op, "expected comparison operator");
  }

  static ExprPtr bind(const ExprPtr& e, const std::set<std::string>& ps) {
    switch (e->kind) {
      case ExprKind::Temp: return ps.count(e->name) ? param(e->name) : e;
      case ExprKind::Add: return add(bind(e->lhs, ps), bind(e->rhs, ps));
      case ExprKind::Mul: return mul(bind(e->lhs, ps), bind(e->rhs, ps));
      case ExprKind::Neg: return neg(bind(e->lhs, ps));
      default: return e;
    }
  }

  static BoolPtr bind(const BoolPtr& b, const std::set<std::string>& ps) {
    switch (b->kind) {
      case BoolKind::Cmp: return cmp(b->op, bind(b->lhs, ps), bind(b->rhs, ps));
      case BoolKind::And: return band(bind(b->a, ps), bind(b->b, ps));
      case BoolKind::Not: return bnot(bind(b->a, ps));
      default: return b;
    }
  }

  static ComPtr bind_params(const ComPtr& c, const std::set<std::string>& ps) {
    if (ps.empty()) return c;
    switch (c->kind) {
      case ComKind::Skip: return c;
      case ComKind::Assign: return assign(c->name, bind(c->expr, ps));
      case ComKind::Write: return write(c->name, bind(c->expr, ps));
      case ComKind::Print: return print(bind(c->expr, ps));
      case ComKind::Seq: {
        std::vector<ComPtr> items;
        for (const auto& i : c->items) items.push_back(bind_params(i, ps));
        return seq(std::move(items));
      }
      case ComKind::If:
        return ifte(bind(c->cond, ps), bind_params(c->then_branch, ps), bind_params(c->else_branch, ps));
      case ComKind::ArrayRead: return array_read(c->name, c->target, bind(c->index, ps));
      case ComKind::ArrayWrite: return array_write(c->name, bind(c->index, ps), bind(c->expr, ps));
    }
    return c;
  }
};

void check_expr(const ExprPtr& e, const std::set<std::string>& bound) {
  switch (e->kind) {
    case ExprKind::Temp:
      if (!bound.count(e->name)) throw UnboundTemp("temp '" + e->name + "' may be read before assignment");
      break;
    case ExprKind::Add:
    case ExprKind::Mul:
      check_expr(e->lhs, bound);
      check_expr(e->rhs, bound);
      break;
    case ExprKind::Neg: check_expr(e->lhs, bound); break;
    default: break;
  }
}

void check_bool(const BoolPtr& b, const std::set<std::string>& bound) {
  switch (b->kind) {
    case BoolKind::Cmp:
      check_expr(b->lhs, bound);
      check_expr(b->rhs, bound);
      break;
    case BoolKind::And:
      check_bool(b->a, bound);
      check_bool(b->b, bound);
      break;
    case BoolKind::Not: check_bool(b->a, bound); break;
    default: break;
  }
}

// Returns the set of temps definitely assigned after c.
std::set<std::string> check_com(const ComPtr& c, std::set<std::string> bound) {
  switch (c->kind) {
    case ComKind::Skip: return bound;
    case ComKind::Assign:
      check_expr(c->expr, bound);
      bound.insert(c->name);
      return bound;
    case ComKind::Write:
    case ComKind::Print: check_expr(c->expr, bound); return bound;
    case ComKind::Seq:
      for (const auto& i : c->items) bound = check_com(i, std::move(bound));
      return bound;
    case ComKind::If: {
      check_bool(c->cond, bound);
      auto a = check_com(c->then_branch, bound);
      auto b = check_com(c->else_branch, bound);
      std::set<std::string> both;
      for (const auto& t : a)
        if (b.count(t)) both.insert(t);
      return both;
    }
    case ComKind::ArrayRead:
      check_expr(c->index, bound);
      bound.insert(c->name);
      return bound;
    case ComKind::ArrayWrite:
      check_expr(c->index, bound);
      check_expr(c->expr, bound);
      return bound;
  }
  return bound;
}

}  // namespace

void check_temps(const Transaction& t) { check_com(t.body, {}); }

Transaction parse(const std::string& source, const std::string& name) {
  Parser p(lex(source));
  Transaction t = p.file(name);
  check_temps(t);
  return t;
}

}  // namespace homeo::lang
