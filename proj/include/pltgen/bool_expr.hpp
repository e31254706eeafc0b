#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace pltgen {

enum class BoolOp { Const, Var, Not, And, Or, Implies, Requires, Excludes };

/// Boolean expression tree shared by cross-tree constraints, presence
/// conditions, and transition guards. Requires/Excludes are kept as sugar
/// nodes so documents round-trip unchanged.
struct BoolExpr {
  BoolOp op = BoolOp::Const;
  bool value = true;             // Const only
  std::string name;              // Var only
  std::vector<BoolExpr> args;    // composite nodes

  bool operator==(const BoolExpr&) const = default;

  static BoolExpr constant(bool v);
  static BoolExpr var(std::string name);
  static BoolExpr negation(BoolExpr e);
  static BoolExpr conjunction(std::vector<BoolExpr> es);
  static BoolExpr disjunction(std::vector<BoolExpr> es);
  static BoolExpr implication(BoolExpr lhs, BoolExpr rhs);
  static BoolExpr requires_sugar(BoolExpr lhs, BoolExpr rhs);
  static BoolExpr excludes_sugar(BoolExpr lhs, BoolExpr rhs);
};

/// Evaluates under a total variable lookup. The lookup may throw for unknown
/// names; the exception propagates.
bool eval(const BoolExpr& e, const std::function<bool(const std::string&)>& lookup);

/// Evaluates under a map, throwing ValidationError on an unbound variable.
bool eval(const BoolExpr& e, const std::map<std::string, bool>& assignment);

void collect_variables(const BoolExpr& e, std::set<std::string>& out);
std::set<std::string> variables(const BoolExpr& e);

/// Replaces bound variables by constants and folds what became decidable.
/// Unbound variables are left in place.
BoolExpr substitute(const BoolExpr& e, const std::map<std::string, bool>& binding);

/// True if the expression is the constant `v`.
bool is_const(const BoolExpr& e, bool v);

/// Infix rendering used in DOT labels and diagnostics.
std::string to_string(const BoolExpr& e);

}  // namespace pltgen
