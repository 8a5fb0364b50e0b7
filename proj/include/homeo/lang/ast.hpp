#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace homeo::lang {

using ObjectId = std::string;

struct Expr;
struct BoolExpr;
struct Com;
using ExprPtr = std::shared_ptr<const Expr>;
using BoolPtr = std::shared_ptr<const BoolExpr>;
using ComPtr = std::shared_ptr<const Com>;

enum class ExprKind { Lit, Param, Temp, Read, Add, Mul, Neg };

// Nodes are immutable and shared; rewrites rebuild only the spine they touch.
struct Expr {
  ExprKind kind;
  std::int64_t value = 0;  // Lit
  std::string name;        // Param, Temp, Read
  ExprPtr lhs, rhs;        // Add/Mul use both, Neg uses lhs
};

enum class CmpOp { Lt, Eq, Le };
enum class BoolKind { True, False, Cmp, And, Not };

struct BoolExpr {
  BoolKind kind;
  CmpOp op = CmpOp::Lt;
  ExprPtr lhs, rhs;  // Cmp
  BoolPtr a, b;      // And uses both, Not uses a
};

// ArrayRead / ArrayWrite only exist before desugar_arrays (L++).
enum class ComKind { Skip, Assign, Seq, If, Write, Print, ArrayRead, ArrayWrite };

struct Com {
  ComKind kind;
  std::string name;      // Assign/ArrayRead: temp; Write: object; Array*: array name
  std::string target;    // ArrayRead: array name
  ExprPtr expr;          // Assign, Write, Print, ArrayWrite value
  ExprPtr index;         // Array*
  BoolPtr cond;          // If
  ComPtr then_branch, else_branch;
  std::vector<ComPtr> items;  // Seq
};

struct Transaction {
  std::string name;
  std::vector<std::string> params;
  ComPtr body;
  std::map<std::string, std::int64_t> arrays;  // declared bounds (L++)
};

// builders
ExprPtr lit(std::int64_t v);
ExprPtr param(std::string name);
ExprPtr temp(std::string name);
ExprPtr read(ObjectId x);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr neg(ExprPtr a);

BoolPtr btrue();
BoolPtr bfalse();
BoolPtr cmp(CmpOp op, ExprPtr a, ExprPtr b);
BoolPtr band(BoolPtr a, BoolPtr b);
BoolPtr bnot(BoolPtr a);

ComPtr skip();
ComPtr assign(std::string t, ExprPtr e);
ComPtr seq(std::vector<ComPtr> items);
ComPtr ifte(BoolPtr b, ComPtr c1, ComPtr c2);
ComPtr write(ObjectId x, ExprPtr e);
ComPtr print(ExprPtr e);
ComPtr array_read(std::string t, std::string array, ExprPtr index);
ComPtr array_write(std::string array, ExprPtr index, ExprPtr e);

bool equal(const ExprPtr& a, const ExprPtr& b);
bool equal(const BoolPtr& a, const BoolPtr& b);
bool equal(const ComPtr& a, const ComPtr& b);
bool equal(const Transaction& a, const Transaction& b);

// Flattens nested sequences and drops skips inside them.
std::vector<ComPtr> flatten(const ComPtr& c);

struct ReadWriteSets {
  std::set<ObjectId> reads, writes;
};
ReadWriteSets read_write_sets(const Transaction& t);
ReadWriteSets read_write_sets(const ComPtr& c);
void collect_reads(const ExprPtr& e, std::set<ObjectId>& out);
void collect_reads(const BoolPtr& b, std::set<ObjectId>& out);

bool uses_temp(const ExprPtr& e, const std::string& t);
bool uses_temp(const BoolPtr& b, const std::string& t);

int count_ifs(const ComPtr& c);

}  // namespace homeo::lang
