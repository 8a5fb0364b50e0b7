#include "homeo/rewrite/delta.hpp"

#include "homeo/lang/transform.hpp"

namespace homeo::rewrite {

using namespace lang;

bool DeltaSchema::tracked(const ObjectId& x) const {
  auto it = deltas.lower_bound({x, 0});
  return it != deltas.end() && it->first.first == x;
}

std::optional<ObjectId> DeltaSchema::delta(const ObjectId& x, SiteId site) const {
  auto it = deltas.find({x, site});
  if (it == deltas.end()) return std::nullopt;
  return it->second;
}

std::vector<ObjectId> DeltaSchema::deltas_of(const ObjectId& x) const {
  std::vector<ObjectId> out;
  for (auto it = deltas.lower_bound({x, 0}); it != deltas.end() && it->first.first == x; ++it)
    out.push_back(it->second);
  return out;
}

std::map<ObjectId, ObjectId> DeltaSchema::base_of() const {
  std::map<ObjectId, ObjectId> out;
  for (const auto& [key, d] : deltas) out[d] = key.first;
  return out;
}

ObjectId delta_name(const ObjectId& x, SiteId site, const std::set<ObjectId>& taken) {
  ObjectId name = "d" + x + "_" + std::to_string(site);
  while (taken.count(name)) name += "_";
  return name;
}

DeltaSchema make_delta_schema(const std::vector<Transaction>& txns, const Placement& placement) {
  std::set<ObjectId> taken;
  std::map<ObjectId, std::set<SiteId>> writers;
  std::set<ObjectId> remote_written;
  for (const auto& t : txns) {
    auto rw = read_write_sets(t);
    taken.insert(rw.reads.begin(), rw.reads.end());
    taken.insert(rw.writes.begin(), rw.writes.end());
    SiteId home = placement.home_of(t.name);
    for (const auto& x : rw.writes) {
      writers[x].insert(home);
      if (!placement.is_replicated(x) && placement.location(x) != home) remote_written.insert(x);
    }
  }
  for (const auto& [x, s] : placement.loc) taken.insert(x);
  taken.insert(placement.replicated.begin(), placement.replicated.end());

  DeltaSchema schema;
  auto add = [&](const ObjectId& x, SiteId site) {
    ObjectId d = delta_name(x, site, taken);
    taken.insert(d);
    schema.deltas[{x, site}] = d;
  };
  for (const auto& x : placement.replicated)
    for (SiteId i = 1; i <= placement.sites; ++i) add(x, i);
  for (const auto& x : remote_written)
    for (SiteId i : writers[x]) add(x, i);
  return schema;
}

namespace {

struct Rewriter {
  SiteId site;
  const DeltaSchema& schema;
  std::vector<ObjectId> objects;  // tracked objects the transaction touches

  ExprPtr logical(const ObjectId& x) const {
    ExprPtr e = read(x);
    for (const auto& d : schema.deltas_of(x)) e = add(e, read(d));
    return e;
  }

  ExprPtr expr(const ExprPtr& e) const {
    ExprPtr r = e;
    for (const auto& x : objects) r = subst_read(r, x, logical(x));
    return r;
  }

  BoolPtr boolean(const BoolPtr& b) const {
    BoolPtr r = b;
    for (const auto& x : objects) r = subst_read(r, x, logical(x));
    return r;
  }

  ComPtr run(const ComPtr& c) const {
    switch (c->kind) {
      case ComKind::Skip: return c;
      case ComKind::Assign: {
        ExprPtr e = expr(c->expr);
        return e == c->expr ? c : assign(c->name, e);
      }
      case ComKind::Print: {
        ExprPtr e = expr(c->expr);
        return e == c->expr ? c : print(e);
      }
      case ComKind::Write: {
        ExprPtr e = expr(c->expr);
        if (!schema.tracked(c->name)) return e == c->expr ? c : write(c->name, e);
        auto mine = schema.delta(c->name, site);
        if (!mine)
          throw InputError("site " + std::to_string(site) + " writes '" + c->name + "' but has no delta for it");
        // dx_i := e - x - sum_{j != i} dx_j keeps x + sum_j dx_j == e
        ExprPtr v = sub(e, read(c->name));
        for (const auto& d : schema.deltas_of(c->name))
          if (d != *mine) v = sub(v, read(d));
        return write(*mine, v);
      }
      case ComKind::Seq: {
        std::vector<ComPtr> items;
        bool same = true;
        for (const auto& i : c->items) {
          items.push_back(run(i));
          same = same && items.back() == i;
        }
        return same ? c : seq(std::move(items));
      }
      case ComKind::If: {
        BoolPtr b = boolean(c->cond);
        ComPtr t = run(c->then_branch), e = run(c->else_branch);
        return b == c->cond && t == c->then_branch && e == c->else_branch ? c : ifte(b, t, e);
      }
      default: throw std::invalid_argument("delta_transform needs a desugared transaction");
    }
  }
};

}  // namespace

Transaction delta_transform(const Transaction& t, SiteId site, const Placement& placement,
                            const DeltaSchema& schema) {
  SiteId home = placement.home_of(t.name);
  if (home != site)
    throw NotHome("transaction '" + t.name + "' runs on site " + std::to_string(home) + ", not " +
                  std::to_string(site));
  Rewriter r{site, schema, {}};
  auto rw = read_write_sets(t);
  std::set<ObjectId> touched = rw.reads;
  touched.insert(rw.writes.begin(), rw.writes.end());
  for (const auto& x : touched)
    if (schema.tracked(x)) r.objects.push_back(x);
  if (r.objects.empty()) return t;
  Transaction out = t;
  out.body = r.run(t.body);
  return out;
}

Transaction simplify_remote_reads(const Transaction& t) {
  bool changed = false;
  ComPtr c = cancel_terms(inline_temps(t.body), &changed);
  if (!changed) return t;
  Transaction out = t;
  out.body = eliminate_dead_temps(c);
  return out;
}

}  // namespace homeo::rewrite
