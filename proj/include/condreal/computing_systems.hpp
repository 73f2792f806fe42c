#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "condreal/names.hpp"
#include "condreal/operator_terms.hpp"
#include "condreal/provenance.hpp"

namespace condreal {

// A computing system for a k-ary real function: operator triple (F, G, H)
// over 3k oracles that turns names of the arguments into a name of the
// value.
struct UniformSystem {
  unsigned k = 0;
  OperatorTerm F, G, H;  // function arity 3k each
  std::optional<Provenance> provenance;
};

// A conditional computing system: a gate E over 3k oracles and value
// operators F, G, H over 3k+1 oracles.  For names of a domain point some s
// has E(...)(s) = 0, and every such s makes (F(...,s^), G(...,s^),
// H(...,s^)) a name of the value.
struct ConditionalSystem {
  unsigned k = 0;
  OperatorTerm E;        // function arity 3k
  OperatorTerm F, G, H;  // function arity 3k+1
  // Safe to drive with special names directly (set by normalize_system and
  // asserted by builtins whose gates are sound for arbitrary names).
  bool normalized = false;
  // Diagnostic only: an optional predicate on rational boxes hinting at the
  // domain.  Never consulted by evaluation.
  std::function<bool(std::span<const std::pair<Rat, Rat>>)> domain_hint;
  std::optional<Provenance> provenance;
};

// The 3k oracle tuple behind a list of names, memoized per call site.
std::vector<FunctionOracle> oracles_of_names(std::span<const RealName> names);

// (F(...)(t), G(...)(t), H(...)(t)); within 1/(t+1) of the value whenever the
// system's contract holds for the given names.  Garbage in, garbage out
// outside the domain.
RationalApprox eval_uniform(const UniformSystem& sys, std::span<const RealName> names,
                            const Nat& t);

// Least s <= budget with E(...)(s) = 0; throws BudgetExhaustedError
// otherwise (insufficient budget and out-of-domain are indistinguishable).
Nat find_parameter(const ConditionalSystem& sys, std::span<const RealName> names,
                   const Nat& budget);

RationalApprox eval_conditional(const ConditionalSystem& sys, std::span<const RealName> names,
                                const Nat& t, const Nat& budget);
// Same, with the parameter fixed by the caller (any s accepted by E works).
RationalApprox eval_conditional_at(const ConditionalSystem& sys, std::span<const RealName> names,
                                   const Nat& s, const Nat& t);

// E becomes the identity operator (accepts s = 0 for every input); F, G, H
// ignore the extra argument.
ConditionalSystem uniform_to_conditional(const UniformSystem& sys);

// Composition of real functions at the system level.  The composite
// parameter packs the inner parameters and the outer one by iterated Cantor
// pairing; gates and value operators stay substitutional terms.
ConditionalSystem compose_conditional(const ConditionalSystem& outer,
                                      std::span<const ConditionalSystem> inners);

// Serialization: (uniform-system :k N :F t :G t :H t) and
// (conditional-system :k N :E t :F t :G t :H t [:normalized 1]).
SExpr uniform_system_to_sexpr(const UniformSystem&);
SExpr conditional_system_to_sexpr(const ConditionalSystem&);
UniformSystem uniform_system_from_sexpr(const SExpr&);
ConditionalSystem conditional_system_from_sexpr(const SExpr&);

// Labeled-slot access shared by the file formats.
const SExpr* find_slot(const SExpr& form, const std::string& keyword);
const SExpr& require_slot(const SExpr& form, const std::string& keyword);

}  // namespace condreal
