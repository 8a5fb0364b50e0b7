#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "homeo/analysis/table.hpp"
#include "homeo/protocol/scenario.hpp"
#include "homeo/rewrite/delta.hpp"

namespace homeo::protocol {

struct CompiledInstance {
  std::string name;
  SiteId home = 1;
  lang::Transaction original;   // parameters bound, arrays expanded
  lang::Transaction rewritten;  // delta form at home
  analysis::SymbolicTable table;
  std::vector<lang::ObjectId> footprint;  // logical objects
  std::vector<lang::ObjectId> touched;    // objects of the rewritten form
  std::size_t component = 0;
};

// Instances that share objects, transitively. Rounds are scoped to one.
struct Component {
  std::vector<std::size_t> members;
  std::vector<lang::ObjectId> objects;  // logical objects and their deltas
  std::vector<lang::ObjectId> frozen;   // constant within a round
};

lang::Transaction bind(const lang::Transaction& t, const std::vector<std::int64_t>& params, std::string name = "");

class Compiled {
 public:
  explicit Compiled(const Scenario& s);

  const Scenario& scenario() const { return *scenario_; }
  const CompiledInstance& instance(std::size_t i) const { return instances_[i]; }
  std::size_t instance_count() const { return instances_.size(); }
  const std::vector<Component>& components() const { return components_; }
  const rewrite::DeltaSchema& schema() const { return schema_; }
  // Placement seen by treaties: frozen objects count as replicated.
  const Placement& treaty_placement() const { return treaty_placement_; }

  // Site whose store holds x between synchronizations; none for frozen objects.
  std::optional<SiteId> owner(const lang::ObjectId& x) const;
  bool frozen(const lang::ObjectId& x) const { return frozen_.count(x) != 0; }
  bool is_delta(const lang::ObjectId& x) const { return base_of_.count(x) != 0; }

  // Logical value of x from the synchronized store and per-site stores.
  std::int64_t logical(const lang::ObjectId& x, const lang::Database& synced,
                       const std::vector<lang::Database>& local) const;
  std::vector<lang::ObjectId> logical_objects() const;

  // Whole request program with parameters bound; cached.
  const lang::Transaction& program(std::size_t txn, const std::vector<std::int64_t>& params) const;

 private:
  const Scenario* scenario_;
  std::vector<CompiledInstance> instances_;
  std::vector<Component> components_;
  rewrite::DeltaSchema schema_;
  std::map<lang::ObjectId, lang::ObjectId> base_of_;
  std::map<lang::ObjectId, SiteId> owner_;
  std::set<lang::ObjectId> frozen_;
  std::set<lang::ObjectId> logical_;
  Placement treaty_placement_;
  mutable std::map<std::pair<std::size_t, std::vector<std::int64_t>>, lang::Transaction> programs_;
};

}  // namespace homeo::protocol
