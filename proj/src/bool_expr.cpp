#include "pltgen/bool_expr.hpp"

#include "pltgen/errors.hpp"

namespace pltgen {

BoolExpr BoolExpr::constant(bool v) {
  BoolExpr e;
  e.op = BoolOp::Const;
  e.value = v;
  return e;
}

BoolExpr BoolExpr::var(std::string name) {
  BoolExpr e;
  e.op = BoolOp::Var;
  e.name = std::move(name);
  return e;
}

BoolExpr BoolExpr::negation(BoolExpr inner) {
  BoolExpr e;
  e.op = BoolOp::Not;
  e.args.push_back(std::move(inner));
  return e;
}

BoolExpr BoolExpr::conjunction(std::vector<BoolExpr> es) {
  BoolExpr e;
  e.op = BoolOp::And;
  e.args = std::move(es);
  return e;
}

BoolExpr BoolExpr::disjunction(std::vector<BoolExpr> es) {
  BoolExpr e;
  e.op = BoolOp::Or;
  e.args = std::move(es);
  return e;
}

static BoolExpr binary(BoolOp op, BoolExpr lhs, BoolExpr rhs) {
  BoolExpr e;
  e.op = op;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

BoolExpr BoolExpr::implication(BoolExpr lhs, BoolExpr rhs) {
  return binary(BoolOp::Implies, std::move(lhs), std::move(rhs));
}

BoolExpr BoolExpr::requires_sugar(BoolExpr lhs, BoolExpr rhs) {
  return binary(BoolOp::Requires, std::move(lhs), std::move(rhs));
}

BoolExpr BoolExpr::excludes_sugar(BoolExpr lhs, BoolExpr rhs) {
  return binary(BoolOp::Excludes, std::move(lhs), std::move(rhs));
}

bool eval(const BoolExpr& e, const std::function<bool(const std::string&)>& lookup) {
  switch (e.op) {
    case BoolOp::Const:
      return e.value;
    case BoolOp::Var:
      return lookup(e.name);
    case BoolOp::Not:
      return !eval(e.args[0], lookup);
    case BoolOp::And:
      for (const auto& a : e.args)
        if (!eval(a, lookup)) return false;
      return true;
    case BoolOp::Or:
      for (const auto& a : e.args)
        if (eval(a, lookup)) return true;
      return false;
    case BoolOp::Implies:
    case BoolOp::Requires:
      return !eval(e.args[0], lookup) || eval(e.args[1], lookup);
    case BoolOp::Excludes:
      return !(eval(e.args[0], lookup) && eval(e.args[1], lookup));
  }
  throw Error("corrupt expression node");
}

bool eval(const BoolExpr& e, const std::map<std::string, bool>& assignment) {
  return eval(e, [&](const std::string& n) {
    auto it = assignment.find(n);
    if (it == assignment.end())
      throw ValidationError("unbound variable '" + n + "' in expression");
    return it->second;
  });
}

void collect_variables(const BoolExpr& e, std::set<std::string>& out) {
  if (e.op == BoolOp::Var) {
    out.insert(e.name);
    return;
  }
  for (const auto& a : e.args) collect_variables(a, out);
}

std::set<std::string> variables(const BoolExpr& e) {
  std::set<std::string> out;
  collect_variables(e, out);
  return out;
}

bool is_const(const BoolExpr& e, bool v) {
  return e.op == BoolOp::Const && e.value == v;
}

BoolExpr substitute(const BoolExpr& e, const std::map<std::string, bool>& binding) {
  switch (e.op) {
    case BoolOp::Const:
      return e;
    case BoolOp::Var: {
      auto it = binding.find(e.name);
      return it == binding.end() ? e : BoolExpr::constant(it->second);
    }
    case BoolOp::Not: {
      BoolExpr inner = substitute(e.args[0], binding);
      if (inner.op == BoolOp::Const) return BoolExpr::constant(!inner.value);
      return BoolExpr::negation(std::move(inner));
    }
    case BoolOp::And: {
      std::vector<BoolExpr> kept;
      for (const auto& a : e.args) {
        BoolExpr s = substitute(a, binding);
        if (is_const(s, false)) return BoolExpr::constant(false);
        if (is_const(s, true)) continue;
        kept.push_back(std::move(s));
      }
      if (kept.empty()) return BoolExpr::constant(true);
      if (kept.size() == 1) return kept[0];
      return BoolExpr::conjunction(std::move(kept));
    }
    case BoolOp::Or: {
      std::vector<BoolExpr> kept;
      for (const auto& a : e.args) {
        BoolExpr s = substitute(a, binding);
        if (is_const(s, true)) return BoolExpr::constant(true);
        if (is_const(s, false)) continue;
        kept.push_back(std::move(s));
      }
      if (kept.empty()) return BoolExpr::constant(false);
      if (kept.size() == 1) return kept[0];
      return BoolExpr::disjunction(std::move(kept));
    }
    case BoolOp::Implies:
    case BoolOp::Requires: {
      BoolExpr lhs = substitute(e.args[0], binding);
      BoolExpr rhs = substitute(e.args[1], binding);
      if (is_const(lhs, false) || is_const(rhs, true)) return BoolExpr::constant(true);
      if (is_const(lhs, true)) return rhs;
      if (is_const(rhs, false)) {
        if (lhs.op == BoolOp::Const) return BoolExpr::constant(!lhs.value);
        return BoolExpr::negation(std::move(lhs));
      }
      return binary(e.op, std::move(lhs), std::move(rhs));
    }
    case BoolOp::Excludes: {
      BoolExpr lhs = substitute(e.args[0], binding);
      BoolExpr rhs = substitute(e.args[1], binding);
      if (is_const(lhs, false) || is_const(rhs, false)) return BoolExpr::constant(true);
      if (is_const(lhs, true) && is_const(rhs, true)) return BoolExpr::constant(false);
      if (is_const(lhs, true)) return BoolExpr::negation(std::move(rhs));
      if (is_const(rhs, true)) return BoolExpr::negation(std::move(lhs));
      return binary(BoolOp::Excludes, std::move(lhs), std::move(rhs));
    }
  }
  throw Error("corrupt expression node");
}

std::string to_string(const BoolExpr& e) {
  switch (e.op) {
    case BoolOp::Const:
      return e.value ? "true" : "false";
    case BoolOp::Var:
      return e.name;
    case BoolOp::Not:
      return "!" + (e.args[0].op == BoolOp::Var || e.args[0].op == BoolOp::Const
                        ? to_string(e.args[0])
                        : "(" + to_string(e.args[0]) + ")");
    case BoolOp::And:
    case BoolOp::Or: {
      std::string sep = e.op == BoolOp::And ? " && " : " || ";
      std::string out = "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += sep;
        out += to_string(e.args[i]);
      }
      return out + ")";
    }
    case BoolOp::Implies:
      return "(" + to_string(e.args[0]) + " => " + to_string(e.args[1]) + ")";
    case BoolOp::Requires:
      return "requires(" + to_string(e.args[0]) + ", " + to_string(e.args[1]) + ")";
    case BoolOp::Excludes:
      return "excludes(" + to_string(e.args[0]) + ", " + to_string(e.args[1]) + ")";
  }
  return "?";
}

}  // namespace pltgen
