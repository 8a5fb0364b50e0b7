#include <fstream>
#include <sstream>

#include "doctest.h"
#include "homeo/common.hpp"
#include "homeo/lang/eval.hpp"
#include "homeo/lang/parser.hpp"
#include "homeo/lang/printer.hpp"
#include "homeo/rewrite/delta.hpp"
#include "random_ast.hpp"

using namespace homeo;
using namespace homeo::lang;
using namespace homeo::rewrite;

namespace {

Transaction load(const std::string& name, const std::string& as) {
  std::ifstream in(std::string(HOMEO_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  Transaction t = parse(ss.str(), name);
  t.name = as;
  return t;
}

Placement fig14_placement() {
  Placement p;
  p.sites = 2;
  p.loc = {{"x", 2}};
  p.home = {{"F", 1}};
  return p;
}

}  // namespace

TEST_CASE("remote write becomes a local delta write") {
  Transaction t = load("fig14.hst", "F");
  Placement p = fig14_placement();
  DeltaSchema s = make_delta_schema({t}, p);
  REQUIRE(s.delta("x", 1));
  CHECK(*s.delta("x", 1) == "dx_1");
  CHECK_FALSE(s.delta("x", 2));
  Transaction d = delta_transform(t, 1, p, s);
  CHECK(to_line(d.body) ==
        "x := read(x) + read(dx_1); if (0 < x) then { write(dx_1 = x - 1 - read(x)) } else { write(dx_1 = 10 - "
        "read(x)) }");
  Transaction simple = simplify_remote_reads(d);
  CHECK(to_line(simple.body) ==
        "if (0 < read(x) + read(dx_1)) then { write(dx_1 = read(dx_1) - 1) } else { write(dx_1 = 10 - read(x)) }");
}

TEST_CASE("transactions touching no tracked object are unchanged") {
  Transaction t1 = load("T1.hst", "T1");
  Placement p;
  p.sites = 2;
  p.loc = {{"x", 1}, {"y", 1}};
  p.home = {{"T1", 1}};
  DeltaSchema s = make_delta_schema({t1}, p);
  CHECK(s.deltas.empty());
  Transaction d = delta_transform(t1, 1, p, s);
  CHECK(equal(d, t1));
  CHECK(equal(simplify_remote_reads(d), d));
}

TEST_CASE("wrong site is rejected") {
  Transaction t = load("fig14.hst", "F");
  Placement p = fig14_placement();
  CHECK_THROWS_AS(delta_transform(t, 2, p, make_delta_schema({t}, p)), NotHome);
}

TEST_CASE("delta names avoid user objects") {
  Transaction t = parse("{ write(dx_1 = read(x) + 1) }()", "F");
  Placement p;
  p.sites = 2;
  p.loc = {{"x", 2}, {"dx_1", 1}};
  p.home = {{"F", 1}};
  Transaction w = parse("{ write(x = 3) }()", "G");
  p.home["G"] = 1;
  DeltaSchema s = make_delta_schema({t, w}, p);
  REQUIRE(s.delta("x", 1));
  CHECK(*s.delta("x", 1) != "dx_1");
}

TEST_CASE("replicated reads sum every site's delta") {
  Transaction t = parse("{ v := read(x); if (v > 1) then write(x = v - 1) else write(x = 99) }()", "R");
  Placement p;
  p.sites = 2;
  p.replicated = {"x"};
  p.home = {{"R", 1}};
  DeltaSchema s = make_delta_schema({t}, p);
  CHECK(s.deltas_of("x") == std::vector<ObjectId>{"dx_1", "dx_2"});
  Transaction d = simplify_remote_reads(delta_transform(t, 1, p, s));
  CHECK(to_line(d.body) ==
        "if (1 < read(x) + read(dx_1) + read(dx_2)) then { write(dx_1 = read(dx_1) - 1) } else { write(dx_1 = 99 - "
        "read(x) - read(dx_2)) }");
}

namespace {

std::int64_t logical(const Database& db, const DeltaSchema& s, const ObjectId& x) {
  std::int64_t v = db.get(x);
  for (const auto& d : s.deltas_of(x)) v += db.get(d);
  return v;
}

}  // namespace

TEST_CASE("property: logical values follow untransformed serial execution") {
  testing::AstGen gen(41);
  gen.max_params = 0;
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    int sites = 2 + static_cast<int>(rng() % 3);
    Placement p;
    p.sites = sites;
    for (const auto& o : gen.objects) {
      if (rng() % 3 == 0)
        p.replicated.insert(o);
      else
        p.loc[o] = 1 + static_cast<int>(rng() % sites);
    }
    std::vector<Transaction> txns;
    for (int k = 0; k < 4; ++k) {
      Transaction t = gen.transaction();
      t.name = "T" + std::to_string(k);
      p.home[t.name] = 1 + static_cast<int>(rng() % sites);
      txns.push_back(t);
    }
    DeltaSchema s = make_delta_schema(txns, p);
    std::vector<Transaction> plain, fancy;
    for (const auto& t : txns) {
      Transaction d = delta_transform(t, p.home_of(t.name), p, s);
      plain.push_back(d);
      fancy.push_back(simplify_remote_reads(d));
    }
    Database reference = gen.database();
    Database a = reference, b = reference;
    for (int step = 0; step < 8; ++step) {
      std::size_t k = rng() % txns.size();
      auto r0 = eval(txns[k], {}, reference);
      auto r1 = eval(plain[k], {}, a);
      auto r2 = eval(fancy[k], {}, b);
      CHECK(r1.log == r0.log);
      CHECK(r2.log == r0.log);
      reference = r0.db;
      a = r1.db;
      b = r2.db;
      for (const auto& o : gen.objects) {
        CHECK(logical(a, s, o) == reference.get(o));
        CHECK(logical(b, s, o) == reference.get(o));
      }
    }
  }
}

TEST_CASE("property: transformed writes stay on the home site") {
  testing::AstGen gen(43);
  gen.max_params = 0;
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    Placement p;
    p.sites = 3;
    for (const auto& o : gen.objects) p.loc[o] = 1 + static_cast<int>(rng() % 3);
    Transaction t = gen.transaction();
    p.home[t.name] = 1 + static_cast<int>(rng() % 3);
    DeltaSchema s = make_delta_schema({t}, p);
    for (const auto& [key, d] : s.deltas) p.loc[d] = key.second;
    SiteId home = p.home_of(t.name);
    auto rw = read_write_sets(simplify_remote_reads(delta_transform(t, home, p, s)));
    for (const auto& w : rw.writes) CHECK(p.location(w) == home);
  }
}
