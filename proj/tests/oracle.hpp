#pragma once

// Test-side reference values: exact-rational brackets with explicit
// remainder bounds for exp, ln, sin, cos and pi.  Written independently of
// the library's evaluation pipeline so the two can check each other.

#include "condreal/nat.hpp"

namespace oracle {

using condreal::Int;
using condreal::Nat;
using condreal::Rat;

struct Bracket {
  Rat lo, hi;
  Rat mid() const { return (lo + hi) / 2; }
  Rat halfwidth() const { return (hi - lo) / 2; }
};

Bracket exp_value(const Rat& x, const Rat& eps);
Bracket ln_value(const Rat& x, const Rat& eps);  // x > 0
Bracket sin_value(const Rat& x, const Rat& eps);
Bracket cos_value(const Rat& x, const Rat& eps);
Bracket pi_value(const Rat& eps);

// Decides |candidate - value| < delta for a bracketed value; tightens the
// bracket if needed.  fn computes the bracket at a requested tolerance.
template <typename F>
bool within(const F& fn, const Rat& candidate, const Rat& delta) {
  Rat eps = delta / 64;
  for (int i = 0; i < 12; ++i) {
    Bracket b = fn(eps);
    Rat dist_lo = condreal::rat_abs(candidate - b.mid()) - b.halfwidth();
    Rat dist_hi = condreal::rat_abs(candidate - b.mid()) + b.halfwidth();
    if (dist_hi < delta) return true;
    if (dist_lo >= delta) return false;
    eps /= 64;
  }
  return false;  // could not separate; treat as a failure loudly
}

}  // namespace oracle
