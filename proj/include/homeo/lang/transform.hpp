#pragma once

#include <map>
#include <string>

#include "homeo/lang/ast.hpp"

namespace homeo::lang {

ExprPtr subst_temp(const ExprPtr& e, const std::string& t, const ExprPtr& by);
BoolPtr subst_temp(const BoolPtr& b, const std::string& t, const ExprPtr& by);
ExprPtr subst_read(const ExprPtr& e, const ObjectId& x, const ExprPtr& by);
BoolPtr subst_read(const BoolPtr& b, const ObjectId& x, const ExprPtr& by);
ExprPtr subst_param(const ExprPtr& e, const std::string& p, const ExprPtr& by);
BoolPtr subst_param(const BoolPtr& b, const std::string& p, const ExprPtr& by);

// Forward-substitutes temp definitions into later uses where no intervening
// write touches what they read, then removes assignments left dead.
ComPtr inline_temps(const ComPtr& c);
ComPtr eliminate_dead_temps(const ComPtr& c);

// Replaces each expression by its linear normal form when terms cancel or
// combine; leaves it alone otherwise.
ComPtr cancel_terms(const ComPtr& c, bool* changed = nullptr);
ExprPtr cancel_terms(const ExprPtr& e);

// Folds constant subexpressions (checked arithmetic).
ExprPtr fold(const ExprPtr& e);
BoolPtr fold(const BoolPtr& b);

}  // namespace homeo::lang
