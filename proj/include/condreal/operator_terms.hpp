#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "condreal/base_dsl.hpp"
#include "condreal/nat.hpp"
#include "condreal/sexpr.hpp"

namespace condreal {

// A total unary function on naturals, fed to operator terms as an oracle.
// Evaluators must be effectively pure: repeated queries at the same point
// return the same value.
class FunctionOracle {
 public:
  using Fn = std::function<Nat(const Nat&)>;

  FunctionOracle() = default;
  explicit FunctionOracle(Fn eval, Fn majorant = nullptr);

  static FunctionOracle constant(const Nat& s);
  static FunctionOracle identity();
  static FunctionOracle from_base(BaseFnPtr unary);

  Nat operator()(const Nat& x) const;
  bool has_majorant() const;
  Nat majorant_at(const Nat& x) const;

  // A caching view of the same oracle; observationally identical.
  FunctionOracle memoized() const;

  bool valid() const { return impl_ != nullptr; }

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

// A substitutional operator term over n function arguments: the variable x,
// oracle applications f_k(...), and applications of base functions to
// subterms.  Terms are immutable and share structure.
class OperatorTerm {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;
  struct Var {};
  struct Apply {
    unsigned index;  // 1-based oracle slot
    NodePtr arg;
  };
  struct BaseApp {
    BaseFnPtr fn;
    std::vector<NodePtr> args;
  };
  struct Node {
    std::variant<Var, Apply, BaseApp> v;
  };

  OperatorTerm() = default;
  OperatorTerm(unsigned fn_arity, NodePtr root) : fn_arity_(fn_arity), root_(std::move(root)) {}

  unsigned fn_arity() const { return fn_arity_; }
  const NodePtr& root() const { return root_; }

 private:
  unsigned fn_arity_ = 0;
  NodePtr root_;
};

OperatorTerm ot_var(unsigned fn_arity);
OperatorTerm ot_apply(unsigned index, const OperatorTerm& arg);
OperatorTerm ot_base(BaseFnPtr fn, const std::vector<OperatorTerm>& args);
// Constant-valued term (a unary constant applied to the variable).
OperatorTerm ot_const(unsigned fn_arity, const Nat& value);

Nat eval_operator(const OperatorTerm& term, std::span<const FunctionOracle> oracles, const Nat& x);

// Structural substitution: each Apply(j, u) in outer becomes inner_j with its
// variable bound to the substituted u.
OperatorTerm compose_operators(const OperatorTerm& outer, std::span<const OperatorTerm> inners);

// The uniformity bound: for oracles majorized by the monotone g and agreeing
// at all points <= modulus(term, g, x), the term's value at x is fixed.
// Computed by bounding semantics (oracles replaced by g, base functions by
// their majorants); an upper bound, not claimed minimal.
Nat modulus(const OperatorTerm& term, const FunctionOracle& g, const Nat& x);

// Bounding semantics for the whole value: an upper bound of the term's value
// at x under any oracle tuple majorized by g, monotone in g and x.
Nat value_bound(const OperatorTerm& term, const FunctionOracle& g, const Nat& x);

// The modulus itself as a term over the single oracle g: evaluating the
// result on [g] at x equals modulus(term, g, x).
OperatorTerm derive_modulus_term(const OperatorTerm& term);

// --- term surgery (used by lifts, composition and the translations) -------

OperatorTerm substitute_var(const OperatorTerm& term, const OperatorTerm& replacement);
// Bottom-up rewrite of oracle applications: fn(index, rewritten_arg) returns
// the replacement term (not re-traversed) or nullopt to keep the
// application.
OperatorTerm rewrite_applies(
    const OperatorTerm& term, unsigned new_fn_arity,
    const std::function<std::optional<OperatorTerm>(unsigned, const OperatorTerm&)>& fn);
// Replace every Apply(index, u) by value_term, discarding u (the oracle slot
// is bound to a constant function whose value value_term computes).
OperatorTerm substitute_oracle_constant(const OperatorTerm& term, unsigned index,
                                        const OperatorTerm& value_term);
OperatorTerm with_fn_arity(const OperatorTerm& term, unsigned new_fn_arity);
unsigned max_apply_index(const OperatorTerm& term);
bool has_apply(const OperatorTerm& term);

// Textual format: opterm := x | (apply K opterm) | (base BASEFN opterm*).
// The function arity is carried by the enclosing context.
SExpr operator_term_to_sexpr(const OperatorTerm&);
OperatorTerm operator_term_from_sexpr(const SExpr&, unsigned fn_arity);
std::string write_operator_term(const OperatorTerm&);
OperatorTerm parse_operator_term(const std::string& text, unsigned fn_arity);

}  // namespace condreal
