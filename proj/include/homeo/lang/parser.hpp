#pragma once

#include <string>

#include "homeo/lang/ast.hpp"

namespace homeo::lang {

// Surface syntax:
//   [array a[3]; ...] [Name ::=] { c1; c2; ... }(p1, p2)
// with read(x), write(x = e), print(e), t := e, if b then c else c,
// and for arrays t := read(a[i]) / write(a[i] = e).
Transaction parse(const std::string& source, const std::string& name = "");

// Static check that every temp read is assigned on all paths before it.
void check_temps(const Transaction& t);

}  // namespace homeo::lang
