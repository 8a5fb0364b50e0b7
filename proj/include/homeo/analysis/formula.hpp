#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "homeo/lang/ast.hpp"
#include "homeo/lang/database.hpp"

namespace homeo::analysis {

enum class Rel { Lt, Le, Eq, Ne, Gt, Ge };

// Term keys are object ids; parameters appear as "@name".
using Terms = std::map<std::string, std::int64_t>;

std::string param_key(const std::string& p);
bool is_param_key(const std::string& key);

// One conjunct of a guard: either (sum terms) rel bound, or an opaque
// boolean over reads and params that did not linearize.
struct Atom {
  bool linear = true;
  Terms terms;
  Rel rel = Rel::Le;
  std::int64_t bound = 0;
  lang::BoolPtr opaque;
};

struct Guard {
  std::vector<Atom> atoms;  // conjunction; empty means true
  bool is_false = false;
};

// Normalizes raw conjuncts into atoms: linear comparisons get the canonical
// orientation (first coefficient positive), negations are pushed into the
// relation, constant atoms are decided.
Guard normalize(const std::vector<lang::BoolPtr>& conjuncts);
Guard conjoin(const Guard& a, const Guard& b);

// Merges bounds on identical term vectors and drops duplicates.
Guard simplify_guard(const Guard& g);

Rel negate(Rel r);
Rel flip(Rel r);  // relation after multiplying both sides by -1
std::string to_string(Rel r);
std::string to_string(const Atom& a);
std::string to_string(const Guard& g);

struct Valuation {
  const lang::Database& db;
  const std::vector<std::string>& param_names;
  std::span<const std::int64_t> params;
};

std::int64_t eval_terms(const Terms& t, const Valuation& v);
bool compare(std::int64_t lhs, Rel r, std::int64_t bound);
bool holds(const Atom& a, const Valuation& v);
bool holds(const Guard& g, const Valuation& v);

// Exact on contradictory bounds and by Fourier-Motzkin elimination over the
// linear atoms; answers true whenever it cannot decide.
bool check_satisfiable(const Guard& g);

}  // namespace homeo::analysis
