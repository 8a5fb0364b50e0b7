#include <fstream>
#include <sstream>

#include "doctest.h"
#include "homeo/analysis/table.hpp"
#include "homeo/common.hpp"
#include "homeo/lang/parser.hpp"
#include "homeo/treaty/lookahead.hpp"
#include "homeo/treaty/treaty.hpp"
#include "random_ast.hpp"
#include "random_treaty.hpp"

using namespace homeo;
using namespace homeo::lang;
using namespace homeo::analysis;
using namespace homeo::treaty;
using homeo::testing::near;
using homeo::testing::random_treaty;
using homeo::testing::RandomTreaty;

namespace {

Transaction load(const std::string& name) {
  std::ifstream in(std::string(HOMEO_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), name);
}

Placement two_sites() {
  Placement p;
  p.sites = 2;
  p.loc = {{"x", 1}, {"y", 2}};
  p.home = {{"T1", 1}, {"T2", 2}};
  return p;
}

GlobalTreaty worked_treaty() {
  return preprocess(normalize({bnot(cmp(CmpOp::Lt, add(read("x"), read("y")), lit(20)))}), {{"x", 10}, {"y", 13}});
}

std::vector<std::string> lines(const std::vector<LocalTreatyTemplate>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts)
    for (const auto& c : t.clauses) out.push_back(std::to_string(t.site) + ": " + to_string(c));
  return out;
}

JointSymbolicTable worked_joint() { return build_joint_table({build_table(load("T1.hst")), build_table(load("T2.hst"))}); }

std::vector<std::vector<Database>> appendix_sequences() {
  Step step = joint_step(worked_joint());
  Database d0{{"x", 10}, {"y", 13}};
  return {execute_sequence(step, {"T1", "T1", "T2"}, d0), execute_sequence(step, {"T1", "T1", "T1"}, d0),
          execute_sequence(step, {"T1", "T2", "T1"}, d0)};
}

}  // namespace

TEST_CASE("preprocess") {
  GlobalTreaty gt = worked_treaty();
  REQUIRE(gt.clauses.size() == 1);
  CHECK(to_string(gt.clauses[0]) == "-x - y <= -20");
  CHECK(preprocess(normalize({btrue()}), {}).clauses.empty());
  Guard psi = normalize({cmp(CmpOp::Lt, mul(read("x"), read("y")), lit(50)), cmp(CmpOp::Le, read("x"), lit(9))});
  CHECK(to_string(preprocess(psi, {{"x", 3}, {"y", 4}})) == "x = 3 && y = 4 && x <= 9");
  CHECK_THROWS_AS(preprocess(psi, {{"x", 30}, {"y", 4}}), PsiViolated);
}

TEST_CASE("templates for the worked example") {
  auto ts = make_templates(worked_treaty(), two_sites());
  CHECK(lines(ts) == std::vector<std::string>{"1: x + c_y >= 20", "2: c_x + y >= 20"});
  auto none = make_templates(GlobalTreaty{}, two_sites());
  for (const auto& t : none) CHECK(t.clauses.empty());
  Placement bad = two_sites();
  bad.loc.erase("y");
  CHECK_THROWS_AS(make_templates(worked_treaty(), bad), UnplacedObject);
}

TEST_CASE("clause local to one site leaves a constant clause elsewhere") {
  GlobalTreaty gt{{LinearConstraint{{{"x", 2}}, Op::Le, 30}}};
  auto ts = make_templates(gt, two_sites());
  CHECK(lines(ts) == std::vector<std::string>{"1: 2 * x + c1_1 <= 30", "2: c_x <= 30"});
  Database db{{"x", 11}};
  CHECK(check_valid(ts, default_config(ts, gt, db), gt, db));
}

TEST_CASE("default configuration") {
  GlobalTreaty gt = worked_treaty();
  auto ts = make_templates(gt, two_sites());
  Database db{{"x", 10}, {"y", 13}};
  TreatyConfiguration c = default_config(ts, gt, db);
  CHECK(c.assignment == std::map<std::string, std::int64_t>{{"c_x", 7}, {"c_y", 10}});
  CHECK(to_string(ts[0].clauses[0], c.assignment.at("c_y")) == "x >= 10");
  CHECK(to_string(ts[1].clauses[0], c.assignment.at("c_x")) == "y >= 13");
  CHECK(check_valid(ts, c, gt, db));
  CHECK(default_config({}, GlobalTreaty{}, db).assignment.empty());

  GlobalTreaty eq{{LinearConstraint{{{"x", 1}, {"y", 1}}, Op::Eq, 23}}};
  auto te = make_templates(eq, two_sites());
  TreatyConfiguration ce = default_config(te, eq, db);
  CHECK(ce.assignment == std::map<std::string, std::int64_t>{{"c_x", 10}, {"c_y", 13}});
  CHECK(check_valid(te, ce, eq, db));
}

TEST_CASE("a single site keeps the global clause") {
  Placement one;
  one.loc = {{"x", 1}, {"y", 1}};
  GlobalTreaty gt = worked_treaty();
  auto ts = make_templates(gt, one);
  Database db{{"x", 10}, {"y", 13}};
  TreatyConfiguration c = default_config(ts, gt, db);
  REQUIRE(ts.size() == 1);
  CHECK(to_string(ts[0].clauses[0], c.assignment.at(ts[0].clauses[0].config_var)) == "x + y >= 20");
  CHECK(check_valid(ts, c, gt, db));
}

TEST_CASE("validity checks") {
  GlobalTreaty gt = worked_treaty();
  auto ts = make_templates(gt, two_sites());
  Database db{{"x", 10}, {"y", 13}};
  TreatyConfiguration c = default_config(ts, gt, db);
  TreatyConfiguration up = c;
  up.assignment["c_y"] += 1;
  CHECK(check_h1(ts, up, gt));
  GlobalTreaty le{{LinearConstraint{{{"x", 1}, {"y", 1}}, Op::Le, 30}}};
  auto tl = make_templates(le, two_sites());
  TreatyConfiguration cl = default_config(tl, le, db);
  for (auto& [k, v] : cl.assignment) {
    TreatyConfiguration bumped = cl;
    bumped.assignment[k] = v + 1;
    CHECK(check_h1(tl, bumped, le));
    CHECK_FALSE(check_valid(tl, bumped, le, db));  // the bumped site no longer holds on db
  }
  TreatyConfiguration appendix{{{"c_x", 8}, {"c_y", 12}}};
  CHECK(check_valid(ts, appendix, gt, db));
  TreatyConfiguration broken{{{"c_x", 10}, {"c_y", 11}}};  // x >= 9 and y >= 10 allow x + y = 19
  CHECK_FALSE(check_h1(ts, broken, gt));
}

TEST_CASE("executions of fixed sequences") {
  auto seqs = appendix_sequences();
  auto pairs = [](const std::vector<Database>& s) {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (const auto& d : s) out.push_back({d.get("x"), d.get("y")});
    return out;
  };
  CHECK(pairs(seqs[0]) == std::vector<std::pair<std::int64_t, std::int64_t>>{{10, 13}, {9, 13}, {8, 13}, {8, 12}});
  WorkloadModel skips{{WorkloadEntry{"S", 1, {}}}};
  auto j = build_joint_table({[] {
    auto t = build_table(parse("{ skip }()"));
    t.source = "S";
    return t;
  }()});
  auto runs = sample_executions(skips, j, {{"x", 1}}, 3, 2, 7);
  REQUIRE(runs.size() == 2);
  for (const auto& r : runs) {
    REQUIRE(r.size() == 4);
    for (const auto& d : r) CHECK(d == Database{{"x", 1}});
  }
}

TEST_CASE("sampling is seeded and weighted") {
  auto j = worked_joint();
  WorkloadModel m{{WorkloadEntry{"T1", 2, {}}, WorkloadEntry{"T2", 1, {}}}};
  Database d0{{"x", 10}, {"y", 13}};
  CHECK(sample_executions(m, j, d0, 3, 3, 11) == sample_executions(m, j, d0, 3, 3, 11));
  std::mt19937_64 rng(1);
  int first = 0;
  for (int i = 0; i < 30000; ++i) first += pick_weighted({2, 1}, rng) == 0;
  CHECK(first > 19000);
  CHECK(first < 21000);
}

TEST_CASE("soft constraints of the appendix sequences") {
  auto ts = make_templates(worked_treaty(), two_sites());
  auto groups = soft_constraints(ts, appendix_sequences());
  REQUIRE(groups.size() == 3);
  CHECK(to_string(groups[0], ts) == "{c_y >= 12, c_x >= 8}");
  CHECK(to_string(groups[1], ts) == "{c_y >= 13, c_x >= 7}");
  CHECK(to_string(groups[2], ts) == "{c_y >= 12, c_x >= 8}");
  CHECK(soft_constraints(ts, {}).empty());
}

TEST_CASE("optimizer on the appendix example") {
  GlobalTreaty gt = worked_treaty();
  auto ts = make_templates(gt, two_sites());
  Database db{{"x", 10}, {"y", 13}};
  auto groups = soft_constraints(ts, appendix_sequences());
  OptimizeResult r = optimize_config(ts, gt, db, groups);
  CHECK(r.config.assignment == std::map<std::string, std::int64_t>{{"c_x", 8}, {"c_y", 12}});
  CHECK(r.satisfied == std::vector<std::size_t>{0, 2});
  CHECK(satisfied_groups(r.config, groups, ts) == 2);
  CHECK(check_valid(ts, r.config, gt, db));

  CHECK(optimize_config(ts, gt, db, {}).config == default_config(ts, gt, db));

  std::vector<SoftGroup> one{groups[1]};
  OptimizeResult r1 = optimize_config(ts, gt, db, one);
  CHECK(satisfied_groups(r1.config, one, ts) == 1);
  CHECK(check_valid(ts, r1.config, gt, db));
}

TEST_CASE("remote reads are pinned at the object's site") {
  Placement p;
  p.sites = 2;
  p.loc = {{"x", 1}, {"y", 2}, {"z", 2}};
  // T4's rows absorb the read of x into the guard; copying x keeps it in the body
  SymbolicTable t4 = build_table(parse("{ if (read(y) = 1) then write(z = read(x)) else write(z = 0) }()"));
  const Row& row = lookup(t4, Database{{"x", 50}, {"y", 1}});
  GlobalTreaty gt = preprocess(row.guard, Database{{"x", 50}, {"y", 1}});
  auto ts = make_templates(gt, p);
  auto pinned = pin_remote_reads({SiteBody{2, row.body}}, p, ts);
  auto before = lines(ts), after = lines(pinned);
  REQUIRE(after.size() == before.size() + 1);
  const LocalClause* pin = nullptr;
  for (const auto& c : pinned[0].clauses)
    if (!c.origin) pin = &c;
  REQUIRE(pin);
  CHECK(to_string(*pin) == "x = " + pin->config_var);
  // all-local bodies change nothing
  CHECK(lines(pin_remote_reads({SiteBody{1, parse("{ write(x = read(x) + 1) }()").body}}, p, ts)) == before);
  Database db{{"x", 50}, {"y", 1}};
  TreatyConfiguration c = default_config(pinned, gt, db);
  CHECK(check_valid(pinned, c, gt, db));
  CHECK(c.assignment.at(pin->config_var) == 50);
}

TEST_CASE("simplified remote decrement pins the remote base") {
  Placement p;
  p.sites = 2;
  p.loc = {{"x", 2}, {"dx_1", 1}};
  Transaction f = parse(
      "{ if (0 < read(x) + read(dx_1)) then write(dx_1 = read(dx_1) - 1) else write(dx_1 = 10 - read(x)) }()");
  SymbolicTable t = build_table(f);
  const Row& else_row = lookup(t, Database{{"x", 0}});
  auto pinned = pin_remote_reads({SiteBody{1, else_row.body}}, p, make_templates(GlobalTreaty{}, p));
  REQUIRE(pinned[1].clauses.size() == 1);
  CHECK(to_string(pinned[1].clauses[0]) == "x = c_x");
}

TEST_CASE("property: default configuration is valid and local treaties imply the global one") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 300; ++i) {
    RandomTreaty r = random_treaty(rng);
    auto ts = make_templates(r.gt, r.placement);
    TreatyConfiguration c = default_config(ts, r.gt, r.db);
    REQUIRE(check_valid(ts, c, r.gt, r.db));
    for (int k = 0; k < 1000; ++k) {
      Database d = near(r, rng, 3);
      bool local = true;
      for (const auto& t : ts) local = local && holds(t, c, d);
      if (local) CHECK(holds(r.gt, d));
    }
  }
}

TEST_CASE("property: any configuration passing the summation check is sound") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i) {
    RandomTreaty r = random_treaty(rng);
    auto ts = make_templates(r.gt, r.placement);
    TreatyConfiguration c = default_config(ts, r.gt, r.db);
    // move weight between sites of each clause, keeping the sums
    for (std::size_t g = 0; g < r.gt.clauses.size(); ++g) {
      std::vector<const LocalClause*> cs;
      for (const auto& t : ts)
        for (const auto& cl : t.clauses)
          if (cl.origin == g) cs.push_back(&cl);
      int shift = std::uniform_int_distribution<int>(-4, 4)(rng);
      c.assignment[cs[0]->config_var] += cs[0]->sign * shift;
      c.assignment[cs[1]->config_var] -= cs[1]->sign * shift;
    }
    REQUIRE(check_h1(ts, c, r.gt));
    for (int k = 0; k < 1000; ++k) {
      Database d = near(r, rng, 4);
      bool local = true;
      for (const auto& t : ts) local = local && holds(t, c, d);
      if (local) CHECK(holds(r.gt, d));
    }
  }
}

TEST_CASE("property: optimizer never does worse than the default") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 300; ++i) {
    RandomTreaty r = random_treaty(rng);
    auto ts = make_templates(r.gt, r.placement);
    std::vector<std::vector<Database>> seqs;
    for (int s = 0; s < 4; ++s) {
      std::vector<Database> run{r.db};
      for (int k = 0; k < 3; ++k) run.push_back(near(r, rng, 2));
      seqs.push_back(run);
    }
    auto groups = soft_constraints(ts, seqs);
    OptimizeResult o = optimize_config(ts, r.gt, r.db, groups);
    TreatyConfiguration d = default_config(ts, r.gt, r.db);
    CHECK(check_valid(ts, o.config, r.gt, r.db));
    CHECK(satisfied_groups(o.config, groups, ts) >= satisfied_groups(d, groups, ts));
    CHECK(static_cast<int>(o.satisfied.size()) == satisfied_groups(o.config, groups, ts));
  }
}

TEST_CASE("property: preprocessed treaty implies the guard") {
  testing::AstGen gen(31);
  gen.max_params = 0;
  std::mt19937_64 rng(37);
  int tried = 0;
  while (tried < 300) {
    std::vector<BoolPtr> bs;
    for (int k = 0; k < 3; ++k) {
      std::set<std::string> none;
      bs.push_back(gen.boolean(none, 1));
    }
    Guard psi = normalize(bs);
    Database db = gen.database();
    std::vector<std::string> noparams;
    if (!holds(psi, Valuation{db, noparams, {}})) continue;
    ++tried;
    GlobalTreaty gt = preprocess(psi, db);
    CHECK(holds(gt, db));
    for (int k = 0; k < 300; ++k) {
      Database d;
      for (const auto& o : gen.objects) d.set(o, db.get(o) + std::uniform_int_distribution<int>(-3, 3)(rng));
      if (holds(gt, d)) CHECK(holds(psi, Valuation{d, noparams, {}}));
    }
  }
}
