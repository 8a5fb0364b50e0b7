#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "homeo/lang/ast.hpp"

namespace homeo::lang {

// Replaces array reads/writes by if-chains over a_0 .. a_{n-1}. Bounds given
// here extend those declared in the source.
Transaction desugar_arrays(const Transaction& t, const std::map<std::string, std::int64_t>& bounds = {});

// Binds parameters to constants and folds what becomes constant: arithmetic,
// branch conditions, and temps holding constants. Output has no params.
Transaction specialize(const Transaction& t, std::span<const std::int64_t> params);

std::string array_element(const std::string& array, std::int64_t i);

}  // namespace homeo::lang
