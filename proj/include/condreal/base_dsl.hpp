#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "condreal/errors.hpp"
#include "condreal/nat.hpp"
#include "condreal/sexpr.hpp"

namespace condreal {

// A small total language for the base subrecursive class: initial functions
// (projections, successor, multiplication, modified subtraction, quotient)
// closed under substitution and bounded minimization.  Terms are total by
// construction.  Host-implemented functions enter through Native nodes,
// which must assert totality and carry a monotone majorant.
enum class InitialKind { Proj, Succ, Mul, Monus, Quot };

class BaseFunction;
using BaseFnPtr = std::shared_ptr<const BaseFunction>;

using NativeFn = std::function<Nat(std::span<const Nat>)>;

class BaseFunction {
 public:
  struct Initial {
    InitialKind kind;
    unsigned n = 0, k = 0;  // Proj only: arity n, coordinate k (1-based)
  };
  struct Substitution {
    BaseFnPtr outer;
    std::vector<BaseFnPtr> inners;
  };
  struct BoundedMin {
    BaseFnPtr inner;  // g(xs, y) = least z <= y with inner(xs, z) = 0, else y+1
  };
  struct Native {
    std::string name;
    unsigned arity;
    NativeFn eval;
    NativeFn majorant;  // may be null; then no modulus can pass through here
  };
  using Body = std::variant<Initial, Substitution, BoundedMin, Native>;

  BaseFunction(unsigned arity, Body body, std::optional<std::string> source_text = {})
      : arity_(arity), body_(std::move(body)), source_text_(std::move(source_text)) {}

  unsigned arity() const { return arity_; }
  const Body& body() const { return body_; }
  const std::optional<std::string>& source_text() const { return source_text_; }

  // Sugar tag: terms built by constant(c) remember it so serialization
  // prints (const c) instead of the successor tower.
  std::optional<Nat> const_sugar;

 private:
  unsigned arity_;
  Body body_;
  std::optional<std::string> source_text_;
};

// Structural constructors (arity-checked).
BaseFnPtr bf_proj(unsigned n, unsigned k);
BaseFnPtr bf_succ();
BaseFnPtr bf_mul();
BaseFnPtr bf_monus();
BaseFnPtr bf_quot();
BaseFnPtr bf_subst(BaseFnPtr outer, std::vector<BaseFnPtr> inners);
BaseFnPtr bf_bmin(BaseFnPtr inner);
BaseFnPtr bf_native(const std::string& registered_name);

// Derived terms.  Zero is x monus x; constants are successor towers over it;
// both have arity 1 unless re-based with bf_at_arity.
BaseFnPtr bf_zero();
BaseFnPtr bf_constant(const Nat& c);
// Lifts an arity-1 function to arity n by precomposing with a projection.
BaseFnPtr bf_at_arity(BaseFnPtr unary, unsigned n, unsigned coordinate = 1);

// Exact evaluation and the structural monotone majorant.  majorant_eval
// dominates eval_base pointwise and is monotone in every argument.
Nat eval_base(const BaseFunction& f, std::span<const Nat> args);
Nat majorant_eval(const BaseFunction& f, std::span<const Nat> args);

// The majorant itself, as a base function (used when a continuity modulus
// must be expressible as a term).
BaseFnPtr derive_majorant(const BaseFnPtr& f);

// --- library combinators over terms -------------------------------------

// sg(x) = min(x,1) and its complement, as arity-1 terms.
BaseFnPtr bf_sg();
BaseFnPtr bf_cosg();
// 0 iff both arguments are 0 (arity 2).
BaseFnPtr bf_or2();
// max(x, y), arity 2, via bounded search below (x+1)(y+1).
BaseFnPtr bf_max2();
// x + y, arity 2, via bounded search below (x+1)(y+1).
BaseFnPtr bf_add2();
// For f of arity k+1: the arity-(k+1) functions min_{z<=y} f(xs,z) and
// max_{z<=y} f(xs,z).
BaseFnPtr bounded_min_value(const BaseFnPtr& f);
BaseFnPtr bounded_max_value(const BaseFnPtr& f);

// --- native registry -----------------------------------------------------

struct NativeEntry {
  unsigned arity;
  NativeFn eval;
  NativeFn majorant;  // may be null
  std::string provenance;
};

class NativeRegistry {
 public:
  static NativeRegistry& instance();
  void add(const std::string& name, NativeEntry entry);
  // Resolves a name; understands parametric families such as "lin:A:B"
  // (x -> Ax+B) and "litp:NUM/DEN" (canonical rational name components).
  const NativeEntry& lookup(const std::string& name);
  bool contains(const std::string& name);

 private:
  NativeRegistry();
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Parser / printer for the textual term format:
//   term := (proj N K) | (succ) | (mul) | (monus) | (quot) | (const N)
//         | (subst term term+) | (bmin term) | (native NAME)
BaseFnPtr parse_base_function(const std::string& text);
BaseFnPtr base_function_from_sexpr(const SExpr&);
SExpr base_function_to_sexpr(const BaseFunction&);
std::string write_base_function(const BaseFunction&);

}  // namespace condreal
