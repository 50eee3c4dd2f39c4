#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "liftcal/featexp.hpp"
#include "liftcal/value.hpp"

namespace liftcal {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind : uint8_t { Num, Var, Bin };

  Kind kind = Kind::Num;
  int64_t num = 0;
  std::string var;
  ArithOp op = ArithOp::Add;
  ExprPtr lhs;
  ExprPtr rhs;

  static ExprPtr number(int64_t n);
  static ExprPtr variable(std::string name);
  static ExprPtr binary(ArithOp op, ExprPtr lhs, ExprPtr rhs);
};

bool expr_equal(const Expr& a, const Expr& b);
std::string render_expr(const Expr& e);

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Stmt {
  enum class Kind : uint8_t { Skip, Assign, Seq, If, While, IfDef, Lub };

  Kind kind = Kind::Skip;
  int label = -1;
  std::string var;   // Assign
  ExprPtr expr;      // Assign value, If/While condition
  FeatExp guard;     // IfDef
  StmtPtr s0;        // Seq first, If then, While/IfDef body, Lub left
  StmtPtr s1;        // Seq second, If else, Lub right

  static StmtPtr skip();
  static StmtPtr assign(std::string var, ExprPtr e);
  static StmtPtr seq(StmtPtr a, StmtPtr b);
  static StmtPtr if_(ExprPtr cond, StmtPtr then_s, StmtPtr else_s);
  static StmtPtr while_(ExprPtr cond, StmtPtr body);
  static StmtPtr ifdef(FeatExp guard, StmtPtr body);
  static StmtPtr lub(StmtPtr a, StmtPtr b);
};

// Right-nested sequence; skip for an empty list.
StmtPtr seq_of(const std::vector<StmtPtr>& items);
// Items of a (possibly nested) sequence, left to right.
void flatten_seq(const StmtPtr& s, std::vector<StmtPtr>& out);

// Structural equality ignoring labels and Seq association; guards compared
// structurally.
bool stmt_equal(const Stmt& a, const Stmt& b);

// Copy with labels 0..n-1 assigned in preorder.
StmtPtr relabel(const StmtPtr& s);
// Statements indexed by label; s must be labeled.
std::vector<const Stmt*> stmts_by_label(const Stmt& s);
size_t stmt_count(const Stmt& s);
bool contains_ifdef(const Stmt& s);

struct Program {
  FeatureModel model;
  StmtPtr body;
};

Program parse_program(std::string_view text);
// Parses a statement list against a feature space (no header).
StmtPtr parse_stmt(std::string_view text, const FeatureSpace& space);
std::string pretty(const Program& p);
std::string pretty(const Stmt& s);

// Variant derivation for one configuration code of p's feature space.
// Throws SemanticError if code violates the feature model.
StmtPtr preprocess(const Program& p, uint64_t code);
StmtPtr preprocess(const StmtPtr& s, const FeatureSpace& space, uint64_t code);

std::vector<std::string> program_vars(const Program& p);
std::vector<std::string> stmt_vars(const Stmt& s);

} // namespace liftcal
