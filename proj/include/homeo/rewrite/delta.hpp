#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "homeo/lang/ast.hpp"
#include "homeo/placement.hpp"

namespace homeo::rewrite {

// Per-site delta objects: the logical value of a tracked x is
// x + sum_j dx_j, and site i only ever writes dx_i.
struct DeltaSchema {
  std::map<std::pair<lang::ObjectId, SiteId>, lang::ObjectId> deltas;

  bool tracked(const lang::ObjectId& x) const;
  std::optional<lang::ObjectId> delta(const lang::ObjectId& x, SiteId site) const;
  std::vector<lang::ObjectId> deltas_of(const lang::ObjectId& x) const;  // by site
  std::map<lang::ObjectId, lang::ObjectId> base_of() const;               // delta -> x
};

// Tracks replicated objects (one delta per site) and partitioned objects
// written away from their location (one delta per writing site).
DeltaSchema make_delta_schema(const std::vector<lang::Transaction>& txns, const Placement& placement);

// Delta name for x at site i, fresh against the given names.
lang::ObjectId delta_name(const lang::ObjectId& x, SiteId site, const std::set<lang::ObjectId>& taken);

lang::Transaction delta_transform(const lang::Transaction& t, SiteId site, const Placement& placement,
                                  const DeltaSchema& schema);

// Inlines temps and cancels matched terms; returns the input when nothing cancels.
lang::Transaction simplify_remote_reads(const lang::Transaction& t);

}  // namespace homeo::rewrite
