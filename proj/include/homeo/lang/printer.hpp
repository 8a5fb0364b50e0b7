#pragma once

#include <string>

#include "homeo/lang/ast.hpp"

namespace homeo::lang {

struct PrintStyle {
  bool bare_objects = false;   // guards print objects as x instead of read(x)
  bool param_marker = false;   // guards print params as @p
};

std::string to_string(const ExprPtr& e, PrintStyle style = {});
std::string to_string(const BoolPtr& b, PrintStyle style = {});
std::string to_string(CmpOp op);

// Single-line form: "t := read(x); write(x = t + 1)".
std::string to_line(const ComPtr& c);
std::string to_line(const std::vector<ComPtr>& cs);

// Canonical multi-line form; parse(pretty_print(t)) == t.
std::string pretty_print(const Transaction& t);

}  // namespace homeo::lang
