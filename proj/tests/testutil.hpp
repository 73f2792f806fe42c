#pragma once

// Shared test helpers: seeded generators for base functions, operator terms
// and oracles.  Everything is deterministic in the seed.

#include <vector>

#include "condreal/base_dsl.hpp"
#include "condreal/names.hpp"
#include "condreal/operator_terms.hpp"
#include "condreal/rng.hpp"

namespace testutil {

using namespace condreal;

// Random term-backed base function with controlled growth: at most one
// bounded search per path and a cap on the majorant at the all-1000 point,
// so evaluation stays cheap at test scale.
inline BaseFnPtr random_base_function(SplitMix64& rng, unsigned arity, unsigned depth,
                                      bool bmin_allowed = true) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    BaseFnPtr f;
    if (depth == 0 || rng.below(4) == 0) {
      switch (rng.below(3)) {
        case 0: f = bf_proj(arity, 1 + static_cast<unsigned>(rng.below(arity))); break;
        case 1: f = bf_at_arity(bf_constant(rng.below(4)), arity); break;
        default: f = bf_subst(bf_succ(), {bf_proj(arity, 1 + static_cast<unsigned>(rng.below(arity)))});
      }
    } else {
      switch (rng.below(bmin_allowed ? 6 : 5)) {
        case 0: {  // monus of two subterms
          auto a = random_base_function(rng, arity, depth - 1, bmin_allowed);
          auto b = random_base_function(rng, arity, depth - 1, bmin_allowed);
          f = bf_subst(bf_monus(), {a, b});
          break;
        }
        case 1: {  // quotient
          auto a = random_base_function(rng, arity, depth - 1, bmin_allowed);
          auto b = random_base_function(rng, arity, depth - 1, bmin_allowed);
          f = bf_subst(bf_quot(), {a, b});
          break;
        }
        case 2: {  // successor chain
          f = bf_subst(bf_succ(), {random_base_function(rng, arity, depth - 1, bmin_allowed)});
          break;
        }
        case 3: {  // multiplication (growth-limited by the cap below)
          auto a = random_base_function(rng, arity, depth - 1, bmin_allowed);
          auto b = random_base_function(rng, arity, depth - 1, bmin_allowed);
          f = bf_subst(bf_mul(), {a, b});
          break;
        }
        case 4: {  // projection-flavored substitution
          f = random_base_function(rng, arity, depth - 1, bmin_allowed);
          break;
        }
        default: {  // bounded search below a subterm value
          auto inner = random_base_function(rng, arity, depth - 1, false);
          f = bf_bmin(inner);
          break;
        }
      }
    }
    std::vector<Nat> probe(arity, Nat(1000));
    if (majorant_eval(*f, probe) <= 20000) return f;
  }
  return bf_proj(arity, 1);
}

// Random operator term over n oracles with base nodes drawn from the safe
// generator above.
inline OperatorTerm random_operator_term(SplitMix64& rng, unsigned n, unsigned depth) {
  if (depth == 0 || rng.below(4) == 0) return ot_var(n);
  switch (rng.below(3)) {
    case 0:
      return ot_apply(1 + static_cast<unsigned>(rng.below(n)), random_operator_term(rng, n, depth - 1));
    case 1: {
      unsigned arity = 1 + static_cast<unsigned>(rng.below(2));
      BaseFnPtr fn = random_base_function(rng, arity, 2);
      std::vector<OperatorTerm> args;
      for (unsigned i = 0; i < arity; ++i) args.push_back(random_operator_term(rng, n, depth - 1));
      return ot_base(fn, args);
    }
    default:
      return ot_apply(1 + static_cast<unsigned>(rng.below(n)), random_operator_term(rng, n, depth - 1));
  }
}

// A random monotone increasing oracle: x -> a*x + b with small a >= 1.
inline FunctionOracle random_monotone(SplitMix64& rng) {
  Nat a = 1 + rng.below(3), b = rng.below(5);
  auto fn = [a, b](const Nat& x) { return Nat(a * x + b); };
  return FunctionOracle(fn, fn);
}

// A deterministic oracle dominated by g, defined by hashing (seed, x); two
// oracles with the same (seed, cutoff) agree at all points <= cutoff.
inline FunctionOracle dominated_oracle(const FunctionOracle& g, std::uint64_t seed,
                                       std::uint64_t fork, const Nat& cutoff) {
  return FunctionOracle([g, seed, fork, cutoff](const Nat& x) {
    std::uint64_t h = x <= cutoff ? mix_index(seed, x, 11) : mix_index(seed ^ fork, x, 13);
    Nat bound = g(x);
    return Nat(Nat(h) % (bound + 1));
  });
}

inline Rat random_rational(SplitMix64& rng, long lo, long hi, unsigned max_den = 12) {
  Int den = 1 + Int(rng.below(max_den));
  Int num = rng.int_between(Int(lo) * den, Int(hi) * den);
  return Rat(num, den);
}

}  // namespace testutil
