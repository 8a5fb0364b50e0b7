#include <random>

#include "homeo/workload/microbench.hpp"

namespace homeo::workload {

namespace {

using namespace lang;

struct Gen {
  std::mt19937_64 rng;
  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
  int range(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
};

Transaction make(std::string name, ComPtr body) {
  Transaction t;
  t.name = std::move(name);
  t.params = {"p"};
  t.body = std::move(body);
  return t;
}

// kind picks one of the shapes below; x and y are distinct objects.
Transaction shape(int kind, const std::string& name, const std::string& x, const std::string& y, int refill) {
  auto P = [] { return param("p"); };
  switch (kind) {
    case 0:  // counter with refill
      return make(name, seq({assign("v", read(x)),
                             ifte(cmp(CmpOp::Lt, P(), temp("v")), write(x, sub(temp("v"), lit(1))),
                                  write(x, lit(refill)))}));
    case 1:  // guarded transfer
      return make(name, seq({assign("a", read(x)),
                             ifte(cmp(CmpOp::Le, P(), temp("a")),
                                  seq({write(x, sub(temp("a"), P())), assign("b", read(y)),
                                       write(y, add(temp("b"), P()))}),
                                  print(temp("a")))}));
    case 2:  // audit over two objects
      return make(name, seq({assign("a", read(x)), assign("b", read(y)),
                             ifte(cmp(CmpOp::Lt, add(temp("a"), temp("b")), P()), print(add(temp("a"), temp("b"))),
                                  print(sub(temp("a"), temp("b"))))}));
    case 3:  // blind reset
      return make(name, write(x, P()));
    case 4:  // equality test
      return make(name, ifte(cmp(CmpOp::Eq, read(x), P()), write(y, add(read(y), lit(1))), print(read(y))));
    default:  // scaled comparison
      return make(name, seq({assign("a", read(x)),
                             ifte(cmp(CmpOp::Lt, mul(lit(2), temp("a")), add(P(), read(y))),
                                  write(x, add(temp("a"), lit(1))), write(y, sub(read(y), lit(1))))}));
  }
}

int param_for(int kind, Gen& g) {
  switch (kind) {
    case 0: return g.range(0, 6);
    case 1: return g.range(1, 3);
    case 2: return g.range(0, 40);
    case 3: return g.range(0, 20);
    case 4: return g.range(0, 12);
    default: return g.range(0, 30);
  }
}

}  // namespace

protocol::Scenario mixed_scenario(std::uint64_t seed, int sites) {
  Gen g{std::mt19937_64(seed)};
  protocol::Scenario sc;
  sc.placement.sites = sites;
  const int n = g.range(3, 6);
  std::vector<std::string> objs;
  for (int i = 0; i < n; ++i) {
    std::string x = "o" + std::to_string(i);
    objs.push_back(x);
    if (g.below(10) < 3)
      sc.placement.replicated.insert(x);
    else
      sc.placement.loc[x] = g.range(1, sites);
    sc.initial.set(x, g.range(0, 20));
  }
  const int kinds = 6;
  const int ntx = g.range(3, 6);
  for (int t = 0; t < ntx; ++t) {
    int kind = g.below(kinds);
    int a = g.below(n), b = (a + 1 + g.below(n - 1)) % n;
    sc.txns.push_back(shape(kind, "t" + std::to_string(t), objs[a], objs[b], g.range(5, 15)));
    int copies = g.range(1, 3);
    for (int c = 0; c < copies; ++c)
      sc.instances.push_back({static_cast<std::size_t>(t), {param_for(kind, g)}, g.range(1, sites),
                              static_cast<double>(g.range(1, 3))});
  }
  // Every site gets at least one counter so its clients have work.
  for (SiteId s = 1; s <= sites; ++s) {
    bool any = false;
    for (const auto& in : sc.instances) any = any || in.home == s;
    if (any) continue;
    sc.txns.push_back(shape(0, "t" + std::to_string(sc.txns.size()), objs[g.below(n)], objs[0], 10));
    sc.instances.push_back({sc.txns.size() - 1, {g.range(0, 6)}, s, 1.0});
  }

  std::vector<std::vector<std::size_t>> by_site(sites + 1);
  std::vector<std::vector<double>> weights(sites + 1);
  for (std::size_t i = 0; i < sc.instances.size(); ++i) {
    by_site[sc.instances[i].home].push_back(i);
    weights[sc.instances[i].home].push_back(sc.instances[i].weight);
  }
  auto instances = sc.instances;
  sc.sample = [by_site, weights, instances](SiteId s, std::mt19937_64& rng) {
    std::size_t i = by_site[s][treaty::pick_weighted(weights[s], rng)];
    protocol::Request r;
    r.parts = {i};
    r.txn = instances[i].txn;
    r.params = instances[i].params;
    return r;
  };
  return sc;
}

}  // namespace homeo::workload
