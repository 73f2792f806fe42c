#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "condreal/computing_systems.hpp"
#include "condreal/tz_witnesses.hpp"

namespace condreal {

// The derived index tables of the conditional characterization:
//   u(x,s)  = (s+2)(x+1)                    the common majorant
//   v(s,y)  = modulus of E under u(.,s) at y
//   v'(s)   = max_{y<=s} v(s,y)
//   d0(s)   = 6 v'(s) + 5
//   w(s,t)  = max of the moduli of F, G, H under u(.,s) at t
//   w'(s,t) = max(v'(s), w(s,t))
//   d(s,t)  = 6 w'(s,t) + 5
// realized both as callable closures and as registered native base
// functions.
struct TranslationTables {
  BaseFnPtr u, v, v_prime, d0, w, w_prime, d;
  std::function<Nat(const Nat&, const Nat&)> u_fn, v_fn, w_fn, w_prime_fn, d_fn;
  std::function<Nat(const Nat&)> v_prime_fn, d0_fn;
};

// Witness -> system (both directions of the conditional characterization).
ConditionalSystem tz_to_operators_conditional(const TZConditionalWitness& w);
TZConditionalWitness operators_to_tz_conditional(const ConditionalSystem& sys,
                                                 std::string* sidecar_json = nullptr);

// Uniform counterparts.
UniformSystem tz_to_operators_uniform(const TZUniformWitness& w);
TZUniformWitness operators_to_tz_uniform(const UniformSystem& sys,
                                         std::string* sidecar_json = nullptr);

// Precomposes every name triple with its special-form image, so the system
// consults inputs only through special names; the result supports a
// per-point bounded parameter search.
ConditionalSystem normalize_system(const ConditionalSystem& sys);

// Effective per-point bound on the accepted parameter over all special
// names of a rational point.
struct SearchBound {
  Nat T;
  Nat explored_depth = 0;
  Nat branch_count = 0;
  // closed branches: the prefix (one 2k-tuple per level) and its accepting s
  std::vector<std::pair<std::vector<std::vector<Nat>>, Nat>> certificate;
};

// Explores the finitely-branching tree of special-name prefixes; a branch
// closes at depth z once some s with modulus(E, c(x+1), s) < z is accepted,
// so every extension agrees.  T is the largest accepting s over closed
// branches.  Requires a system that is sound on special names (see
// ConditionalSystem::normalized).
SearchBound compute_search_bound(const ConditionalSystem& sys, std::span<const Rat> xs,
                                 const Nat& budget);

// Sidecar text mapping emitted components to their construction.
std::string translation_sidecar(const std::string& direction,
                                const std::vector<std::pair<std::string, std::string>>& parts);

}  // namespace condreal
