#pragma once

#include <string>
#include <vector>

#include "homeo/lang/ast.hpp"
#include "homeo/lang/database.hpp"
#include "homeo/placement.hpp"
#include "homeo/treaty/lookahead.hpp"

namespace homeo::harness {

// Whole file; InputError when it cannot be read.
std::string read_file(const std::string& path);

// Parses one transaction, named after the file stem unless the source names
// it, with arrays desugared. Errors keep their kind and gain the path.
lang::Transaction load_transaction(const std::string& path);

std::vector<std::string> split(const std::string& s, char sep);

// Line formats, '#' comments, blank lines ignored:
//   placement:  "sites N" | "loc OBJ SITE" | "home TXN SITE" | "replicated OBJ..."
//   database:   "OBJ = VALUE"
//   model:      "TXN WEIGHT [LO:HI ...]"  one uniform range per parameter
Placement parse_placement(const std::string& text);
lang::Database parse_database(const std::string& text);
treaty::WorkloadModel parse_model(const std::string& text);

}  // namespace homeo::harness
