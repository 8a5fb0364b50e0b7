#pragma once

#include <random>
#include <string>
#include <vector>

#include "homeo/lang/database.hpp"
#include "homeo/placement.hpp"
#include "homeo/treaty/treaty.hpp"

namespace homeo::testing {

// Linear global treaty over 2-5 sites that holds on db; clauses mix <=, < and =.
struct RandomTreaty {
  Placement placement;
  treaty::GlobalTreaty gt;
  lang::Database db;
  std::vector<std::string> objects;
};

inline RandomTreaty random_treaty(std::mt19937_64& rng) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  RandomTreaty r;
  r.placement.sites = uni(2, 5);
  int nobj = uni(1, 8);
  for (int i = 0; i < nobj; ++i) {
    std::string o = "o" + std::to_string(i);
    r.objects.push_back(o);
    r.placement.loc[o] = uni(1, r.placement.sites);
    r.db.set(o, uni(-20, 20));
  }
  int nclauses = uni(1, 6);
  for (int k = 0; k < nclauses; ++k) {
    treaty::LinearConstraint c;
    for (const auto& o : r.objects)
      if (uni(0, 1)) {
        int d = uni(-5, 5);
        if (d) c.terms[o] = d;
      }
    if (c.terms.empty()) c.terms[r.objects[0]] = 1;
    std::int64_t v = treaty::eval_terms(c.terms, r.db);
    switch (uni(0, 2)) {
      case 0: c.op = treaty::Op::Le; c.bound = v + uni(0, 6); break;
      case 1: c.op = treaty::Op::Lt; c.bound = v + uni(1, 6); break;
      default: c.op = treaty::Op::Eq; c.bound = v; break;
    }
    r.gt.clauses.push_back(c);
  }
  return r;
}

// db with every object moved by at most spread.
inline lang::Database near(const RandomTreaty& r, std::mt19937_64& rng, int spread) {
  lang::Database d;
  for (const auto& o : r.objects) d.set(o, r.db.get(o) + std::uniform_int_distribution<int>(-spread, spread)(rng));
  return d;
}

}  // namespace homeo::testing
