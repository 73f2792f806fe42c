#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "condreal/computing_systems.hpp"

namespace condreal {

// Builtin conditional computing systems for the elementary functions of
// calculus, each satisfying the conditional contract on the function's full
// mathematical domain.  Field operations, abs, sqrt, sin and cos ride on
// uniform systems; reciprocal, ln and exp carry certifying gates:
//   reciprocal/ln: an accepted s certifies |xi| > 1/(s+1),
//   exp:           an accepted s certifies e^xi <= s+1,
//   sqrt:          an accepted s certifies xi > -2/(s+1).
// Supported names: id, negate, abs, reciprocal, sqrt, exp, ln, sin, cos,
// add, sub, mul, div.
ConditionalSystem builtin_system(const std::string& op_name);

// The underlying uniform systems, where one exists:
// id, negate, abs, add, sub, mul, sqrt, sin, cos.
UniformSystem builtin_uniform(const std::string& op_name);

// One k-ary uniform system per exact rational constant.
UniformSystem literal_uniform(const Rat& value, unsigned k);
// k-ary projection onto coordinate i (1-based).
UniformSystem projection_uniform(unsigned k, unsigned i);

// --- expressions ------------------------------------------------------------

struct Expression;
using ExprPtr = std::shared_ptr<const Expression>;

struct Expression {
  enum class Op {
    Literal, Variable,
    Negate, Reciprocal, Sqrt, Exp, Ln, Sin, Cos, Abs,
    Add, Sub, Mul, Div,
  };
  Op op;
  Rat literal;
  std::string variable;
  ExprPtr lhs, rhs;  // unary ops use lhs only

  static ExprPtr lit(Rat v);
  static ExprPtr var(std::string name);
  static ExprPtr unary(Op op, ExprPtr a);
  static ExprPtr binary(Op op, ExprPtr a, ExprPtr b);
};

// Infix grammar: expr := rational | ident | expr (+|-|*|/) expr
//                      | fn '(' expr ')' | '(' expr ')'
// with fn in {neg, recip, sqrt, exp, ln, sin, cos, abs}; standard
// precedence; contiguous NUM/DEN and decimal literals are exact rationals.
ExprPtr parse_expression(const std::string& text);

std::vector<std::string> free_variables(const ExprPtr&);

// Nested composition of builtin systems over the declared parameter list;
// division rewrites to multiplication by a reciprocal.
ConditionalSystem compile_expression(const ExprPtr& expr,
                                     const std::vector<std::string>& params);

// --- compositional evaluation (the CLI path) ---------------------------------

// Per expression node: the least accepted parameter, the index the gate read,
// and the largest index at which the node queried its argument names.
struct TraceLine {
  std::string node_id;  // "<postorder>.<op>"
  Nat s;
  Nat gate_index;
  Nat read_index;
};

struct EvalResult {
  RationalApprox approx;
  std::vector<TraceLine> trace;
};

// Evaluates the expression node by node: each node finds its parameter once
// and then serves every precision query with that parameter (sound: any
// accepted parameter is).  Budget exhaustion reports the failing node.
EvalResult evaluate_expression(const ExprPtr& expr, const std::map<std::string, Rat>& bindings,
                               const Nat& t, const Nat& budget, bool collect_trace);

}  // namespace condreal
