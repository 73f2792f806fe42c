#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "condreal/base_dsl.hpp"
#include "condreal/names.hpp"
#include "condreal/provenance.hpp"

namespace condreal {

struct TranslationTables;

// Finitary witness of uniform computability: approximations of the
// arguments at precision 1/(d(t)+1), with |xi_i| <= t+1, are mapped by
// f, g, h to an approximation of the value at precision 1/(t+1).
struct TZUniformWitness {
  unsigned k = 0;
  BaseFnPtr d;        // arity 1
  BaseFnPtr f, g, h;  // arity 3k+1
  std::optional<Provenance> provenance;
};

// Finitary witness of conditional computability.  Condition (1): some s0
// exists past which every approximation tuple at precision 1/(d0(s)+1)
// makes e(..., s) vanish.  Condition (2): e-accepted data at precisions
// d0(s) and d(s,t), with |xi_i| <= s+1, is mapped to an approximation of
// the value at precision 1/(t+1).
struct TZConditionalWitness {
  unsigned k = 0;
  BaseFnPtr d0;       // arity 1
  BaseFnPtr d;        // arity 2
  BaseFnPtr e;        // arity 3k+1
  BaseFnPtr f, g, h;  // arity 6k+2
  std::shared_ptr<const TranslationTables> tables;  // set by translations
  std::optional<Provenance> provenance;
};

// Drives a uniform witness from names: t' = max(t, f_i(0), g_i(0), ...)
// bounds |xi_i| <= t'+1, approximations are read at index d(t').
RationalApprox eval_tz_uniform(const TZUniformWitness& w, std::span<const RealName> names,
                               const Nat& t);

// Drives a conditional witness from names: scan s' upward, s = max of all
// f_i(0), g_i(0) and s'; read at d0(s); on e-acceptance read at d(s,t) and
// apply f, g, h to the concatenated data.
RationalApprox eval_tz_conditional(const TZConditionalWitness& w, std::span<const RealName> names,
                                   const Nat& t, const Nat& budget);

// --- adversarial validation ---------------------------------------------------

// Caller-supplied value oracle: a bracket [lo, hi] containing theta(xs) with
// hi - lo <= eps.  Exactly representable values may return a zero-width
// bracket regardless of eps.
struct ValueBracket {
  Rat lo, hi;
};
using PointOracle = std::function<ValueBracket(std::span<const Rat>, const Rat& eps)>;

struct CheckViolation {
  std::string kind;  // "precision" | "acceptance" | "indeterminate"
  Nat s, t;
  std::vector<RationalApprox> approx0, approx1;
  RationalApprox output;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckViolation> violations;
  Nat samples_run = 0;
  std::optional<Nat> s0_estimate;
  std::string note;

  std::string replay_text() const;  // replayable case file, one block per violation
};

// Samples approximations satisfying the witness premises at random
// (including extreme near-boundary data), estimates s0 empirically, and
// checks the precision conclusion exactly.  Condition (1) holds
// existentially and is only ever verified on finitely many parameters; the
// report says so.
CheckReport check_tz_conditional_at_point(const TZConditionalWitness& w, std::span<const Rat> xs,
                                          const PointOracle& oracle, const Nat& t_max,
                                          const Nat& samples, std::uint64_t seed);

// Serialization (component terms only; derived natives resolve through the
// provenance slot handled by the file layer).
SExpr tz_uniform_to_sexpr(const TZUniformWitness&);
SExpr tz_conditional_to_sexpr(const TZConditionalWitness&);
TZUniformWitness tz_uniform_from_sexpr(const SExpr&);
TZConditionalWitness tz_conditional_from_sexpr(const SExpr&);

}  // namespace condreal
