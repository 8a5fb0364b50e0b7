#include "homeo/protocol/compiled.hpp"

#include <numeric>

#include "homeo/lang/desugar.hpp"

namespace homeo::protocol {

lang::Transaction bind(const lang::Transaction& t, const std::vector<std::int64_t>& params, std::string name) {
  lang::Transaction out = lang::desugar_arrays(lang::specialize(t, params));
  if (!name.empty()) out.name = std::move(name);
  return out;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a), b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

std::vector<lang::ObjectId> objects_of(const lang::Transaction& t) {
  auto rw = lang::read_write_sets(t);
  std::set<lang::ObjectId> all = rw.reads;
  all.insert(rw.writes.begin(), rw.writes.end());
  return {all.begin(), all.end()};
}

}  // namespace

Compiled::Compiled(const Scenario& s) : scenario_(&s) {
  const int K = s.placement.sites;
  Placement exec = s.placement;
  std::vector<lang::Transaction> originals;
  originals.reserve(s.instances.size());
  for (std::size_t i = 0; i < s.instances.size(); ++i) {
    const Instance& in = s.instances[i];
    if (in.home < 1 || in.home > K) throw ConfigError("instance home site out of range");
    std::string name = s.txns.at(in.txn).name + "#" + std::to_string(i);
    originals.push_back(bind(s.txns[in.txn], in.params, name));
    exec.home[name] = in.home;
  }
  schema_ = rewrite::make_delta_schema(originals, exec);
  base_of_ = schema_.base_of();

  // Every object must be placed; deltas live at their site.
  for (const auto& t : originals)
    for (const auto& x : objects_of(t)) {
      logical_.insert(x);
      if (!s.placement.is_replicated(x)) s.placement.location(x);
    }
  for (const auto& [key, d] : schema_.deltas) owner_[d] = key.second;
  for (const auto& x : logical_) {
    if (s.placement.is_replicated(x) || schema_.tracked(x))
      frozen_.insert(x);
    else
      owner_[x] = s.placement.location(x);
  }
  treaty_placement_.sites = K;
  treaty_placement_.replicated = frozen_;
  treaty_placement_.loc = owner_;

  UnionFind uf(s.instances.size());
  std::map<lang::ObjectId, std::size_t> first_user;
  instances_.resize(s.instances.size());
  for (std::size_t i = 0; i < s.instances.size(); ++i) {
    CompiledInstance& c = instances_[i];
    c.home = s.instances[i].home;
    c.original = std::move(originals[i]);
    c.name = c.original.name;
    c.rewritten = rewrite::simplify_remote_reads(rewrite::delta_transform(c.original, c.home, exec, schema_));
    c.table = analysis::build_table(c.rewritten);
    c.footprint = objects_of(c.original);
    c.touched = objects_of(c.rewritten);
    for (const auto& x : c.footprint) {
      auto [it, fresh] = first_user.try_emplace(x, i);
      if (!fresh) uf.unite(it->second, i);
    }
  }
  std::map<std::size_t, std::size_t> index;
  for (std::size_t i = 0; i < instances_.size(); ++i) {
    auto [it, fresh] = index.try_emplace(uf.find(i), components_.size());
    if (fresh) components_.emplace_back();
    instances_[i].component = it->second;
    components_[it->second].members.push_back(i);
  }
  for (Component& comp : components_) {
    std::set<lang::ObjectId> objs;
    for (std::size_t m : comp.members)
      for (const auto& x : instances_[m].footprint) {
        objs.insert(x);
        for (const auto& d : schema_.deltas_of(x)) objs.insert(d);
      }
    comp.objects.assign(objs.begin(), objs.end());
    for (const auto& x : objs)
      if (frozen_.count(x)) comp.frozen.push_back(x);
  }
}

std::optional<SiteId> Compiled::owner(const lang::ObjectId& x) const {
  auto it = owner_.find(x);
  if (it == owner_.end()) return std::nullopt;
  return it->second;
}

std::int64_t Compiled::logical(const lang::ObjectId& x, const lang::Database& synced,
                               const std::vector<lang::Database>& local) const {
  if (auto o = owner(x)) return local[*o].get(x);
  std::int64_t v = synced.get(x);
  for (const auto& d : schema_.deltas_of(x)) v = checked_add(v, local[*owner(d)].get(d));
  return v;
}

std::vector<lang::ObjectId> Compiled::logical_objects() const { return {logical_.begin(), logical_.end()}; }

const lang::Transaction& Compiled::program(std::size_t txn, const std::vector<std::int64_t>& params) const {
  auto key = std::make_pair(txn, params);
  auto it = programs_.find(key);
  if (it == programs_.end()) it = programs_.emplace(key, bind(scenario_->txns.at(txn), params)).first;
  return it->second;
}

}  // namespace homeo::protocol
