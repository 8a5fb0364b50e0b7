#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "homeo/lang/ast.hpp"
#include "homeo/lang/database.hpp"

namespace homeo::testing {

// Structured generator for well-formed L transactions: temps are only read
// where definitely assigned, literals are small, products are rare.
struct AstGen {
  std::mt19937_64 rng;
  std::vector<std::string> objects = {"a", "b", "c", "d"};
  int max_params = 2;
  int max_depth = 3;
  bool allow_products = true;
  bool allow_print = true;

  explicit AstGen(std::uint64_t seed) : rng(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
  bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

  std::vector<std::string> params;

  lang::ExprPtr expr(const std::set<std::string>& temps, int depth) {
    int leafs = 4;
    if (depth <= 0 || coin(0.45)) {
      for (;;) {
        switch (pick(leafs)) {
          case 0: return lang::lit(pick(10));
          case 1:
            if (params.empty()) continue;
            return lang::param(params[pick(static_cast<int>(params.size()))]);
          case 2: {
            if (temps.empty()) continue;
            auto it = temps.begin();
            std::advance(it, pick(static_cast<int>(temps.size())));
            return lang::temp(*it);
          }
          default: return lang::read(objects[pick(static_cast<int>(objects.size()))]);
        }
      }
    }
    switch (pick(5)) {
      case 0:
      case 1: return lang::add(expr(temps, depth - 1), expr(temps, depth - 1));
      case 2: return lang::sub(expr(temps, depth - 1), expr(temps, depth - 1));
      case 3:
        if (allow_products && coin(0.2)) return lang::mul(expr(temps, 0), expr(temps, 0));
        return lang::mul(lang::lit(pick(4)), expr(temps, depth - 1));
      default: return lang::neg(expr(temps, depth - 1));
    }
  }

  lang::BoolPtr boolean(const std::set<std::string>& temps, int depth) {
    int r = pick(10);
    if (depth > 0 && r == 0) return lang::band(boolean(temps, depth - 1), boolean(temps, depth - 1));
    if (depth > 0 && r == 1) return lang::bnot(boolean(temps, depth - 1));
    if (r == 2 && coin(0.2)) return coin(0.5) ? lang::btrue() : lang::bfalse();
    lang::CmpOp op = static_cast<lang::CmpOp>(pick(3));
    return lang::cmp(op, expr(temps, 1), expr(temps, 1));
  }

  lang::ComPtr command(std::set<std::string>& temps, int depth) {
    for (;;) {
      int r = pick(10);
      if (r <= 2) {
        std::string t = "t" + std::to_string(pick(4));
        auto e = expr(temps, 2);
        temps.insert(t);
        return lang::assign(t, e);
      }
      if (r <= 5) return lang::write(objects[pick(static_cast<int>(objects.size()))], expr(temps, 2));
      if (r == 6) {
        if (!allow_print) continue;
        return lang::print(expr(temps, 2));
      }
      if (r == 7 && coin(0.3)) return lang::skip();
      if (depth <= 0) continue;
      auto b = boolean(temps, 1);
      std::set<std::string> t1 = temps, t2 = temps;
      auto c1 = block(t1, depth - 1);
      auto c2 = block(t2, depth - 1);
      std::set<std::string> both;
      for (const auto& t : t1)
        if (t2.count(t)) both.insert(t);
      temps = both;
      return lang::ifte(b, c1, c2);
    }
  }

  lang::ComPtr block(std::set<std::string>& temps, int depth) {
    int n = 1 + pick(3);
    if (n == 1) return command(temps, depth);
    std::vector<lang::ComPtr> items;
    for (int i = 0; i < n; ++i) items.push_back(command(temps, depth));
    return lang::seq(std::move(items));
  }

  lang::Transaction transaction() {
    params.clear();
    int np = pick(max_params + 1);
    for (int i = 0; i < np; ++i) params.push_back("p" + std::to_string(i));
    std::set<std::string> temps;
    lang::Transaction t;
    t.name = "R";
    t.params = params;
    t.body = block(temps, max_depth);
    return t;
  }

  std::vector<std::int64_t> param_values(const lang::Transaction& t) {
    std::vector<std::int64_t> v;
    for (std::size_t i = 0; i < t.params.size(); ++i) v.push_back(pick(21) - 10);
    return v;
  }

  lang::Database database() {
    lang::Database db;
    for (const auto& o : objects)
      if (coin(0.9)) db.set(o, pick(41) - 20);
    return db;
  }
};

}  // namespace homeo::testing
