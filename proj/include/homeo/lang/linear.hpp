#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "homeo/lang/ast.hpp"

namespace homeo::lang {

// Integer-coefficient linear form over atoms (reads, temps, params).
// Atoms keep first-appearance order.
struct LinearForm {
  std::vector<std::pair<ExprPtr, std::int64_t>> terms;
  std::int64_t constant = 0;
  bool combined = false;  // some atom occurred more than once
};

// nullopt when the expression contains a product of two non-constants.
std::optional<LinearForm> to_linear(const ExprPtr& e);

// Rebuilds "t1 + 2 * t2 - t3 + c" in term order; zero terms dropped.
ExprPtr from_linear(const LinearForm& f);

}  // namespace homeo::lang
