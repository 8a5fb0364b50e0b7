#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "homeo/lang/ast.hpp"

namespace homeo::lang {

// Finite map; absent objects read as 0.
class Database {
 public:
  Database() = default;
  Database(std::initializer_list<std::pair<const ObjectId, std::int64_t>> init) : values_(init) {}

  std::int64_t get(const ObjectId& x) const {
    auto it = values_.find(x);
    return it == values_.end() ? 0 : it->second;
  }
  void set(const ObjectId& x, std::int64_t v) { values_[x] = v; }
  bool contains(const ObjectId& x) const { return values_.count(x) != 0; }

  const std::map<ObjectId, std::int64_t>& entries() const { return values_; }
  std::map<ObjectId, std::int64_t>& entries() { return values_; }

  // Equal as total functions (explicit zeros equal absent entries).
  bool same_values(const Database& o) const;
  bool operator==(const Database& o) const { return same_values(o); }

  std::string to_string() const;

 private:
  std::map<ObjectId, std::int64_t> values_;
};

}  // namespace homeo::lang
