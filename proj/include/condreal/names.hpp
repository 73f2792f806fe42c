#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "condreal/nat.hpp"
#include "condreal/operator_terms.hpp"
#include "condreal/rng.hpp"

namespace condreal {

// A triple of naturals denoting the rational (p - q)/(r + 1).
struct RationalApprox {
  Nat p, q, r;

  Rat value() const { return Rat(Int(p) - Int(q), Int(r) + 1); }
  std::string str() const { return p.str() + ":" + q.str() + ":" + r.str(); }
  static RationalApprox parse(const std::string&);
};

// A name of a real number xi: total unary f, g, h with
// |(f(n)-g(n))/(h(n)+1) - xi| < 1/(n+1) for every n (strict).  The library
// cannot verify this for oracle-backed names; validate_at checks it exactly
// at rational points.
struct RealName {
  FunctionOracle f, g, h;

  RationalApprox at(const Nat& n) const { return {f(n), g(n), h(n)}; }
};

// A name in special form: h is the identity and f(n)*g(n) = 0 for all n.
struct SpecialName {
  FunctionOracle f, g;

  RealName as_name() const { return {f, g, FunctionOracle::identity()}; }
};

// ehelp(p,q,r,n) = floor((n+1)(p monus q)/(r+1) + 1/2), computed exactly.
Nat ehelp(const Nat& p, const Nat& q, const Nat& r, const Nat& n);

// K(f,g,h)(n) = ehelp(f(2n+1), g(2n+1), h(2n+1), n).  The output pair has
// zero products unconditionally; if the input names xi, the output (with the
// identity as third component) names xi as well.
SpecialName apply_K(const RealName& name);

// Canonical name of an exact rational: nearest-integer numerators (ties up),
// identity denominators; approximation error <= 1/(2(n+1)).
RealName name_of_rational(const Rat& value);

RationalApprox approx_from_name(const RealName& name, const Nat& n);

FunctionOracle constant_oracle(const Nat& s);

// All 2k-tuples (x1,y1,...,xk,yk) with |xi - yi - (n+1)*xi_i| < 1 and
// xi*yi = 0; at most 2^k of them.  Canonically sorted.
std::vector<std::vector<Nat>> enumerate_special_prefix(std::span<const Rat> xs, const Nat& n);

// Debug check: does the name satisfy the naming inequality for xi at every
// index up to n_max?
bool validate_at(const RealName& name, const Rat& xi, const Nat& n_max);

// Deterministic, seeded valid names of a rational point: canonical
// approximations perturbed anywhere within the strict 1/(n+1) ball, with
// varying denominators.  Pure per-index streams (no shared state).
RealName sampled_name(const Rat& xi, std::uint64_t seed);
SpecialName sampled_special_name(const Rat& xi, std::uint64_t seed);

// One rational approximation of xi with error strictly below 1/(bound+1).
// With extreme=true the numerator sits at the edge of the open ball on a
// coarse denominator, the adversarial case for precision contracts.
RationalApprox sample_approx_within(const Rat& xi, const Nat& bound, SplitMix64& rng, bool extreme);

}  // namespace condreal
