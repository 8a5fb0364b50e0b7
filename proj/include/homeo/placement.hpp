#pragma once

#include <map>
#include <set>
#include <string>

#include "homeo/common.hpp"

namespace homeo {

// Where objects live and where transactions run.
struct Placement {
  int sites = 1;
  std::map<std::string, SiteId> loc;
  std::map<std::string, SiteId> home;  // transaction name -> site
  std::set<std::string> replicated;

  bool is_replicated(const std::string& x) const { return replicated.count(x) != 0; }

  SiteId location(const std::string& x) const {
    auto it = loc.find(x);
    if (it == loc.end()) throw UnplacedObject("object '" + x + "' has no location");
    return it->second;
  }

  SiteId home_of(const std::string& txn) const {
    auto it = home.find(txn);
    if (it == home.end()) throw NotHome("transaction '" + txn + "' has no home site");
    return it->second;
  }

  bool is_local(const std::string& x, SiteId site) const { return is_replicated(x) || location(x) == site; }
};

}  // namespace homeo
