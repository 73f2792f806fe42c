#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace condreal {

// All core arithmetic is arbitrary precision: precision indices and
// approximation numerators grow without bound, so fixed-width integers are
// not used anywhere below the CLI surface.
using Nat = boost::multiprecision::cpp_int;  // held >= 0 by construction
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// x monus y = max(x - y, 0).
inline Nat monus(const Nat& x, const Nat& y) { return x > y ? Nat(x - y) : Nat(0); }

// floor(x / (y+1)), total on naturals.
inline Nat quot1(const Nat& x, const Nat& y) { return x / (y + 1); }

inline Nat nat_max(const Nat& a, const Nat& b) { return a > b ? a : b; }
inline Nat nat_min(const Nat& a, const Nat& b) { return a < b ? a : b; }
inline Nat nat_abs_diff(const Nat& a, const Nat& b) { return a > b ? Nat(a - b) : Nat(b - a); }

inline Int rat_num(const Rat& x) { return boost::multiprecision::numerator(x); }
inline Int rat_den(const Rat& x) { return boost::multiprecision::denominator(x); }

inline Int floor_div(const Int& a, const Int& b) {
  // b > 0; rounds toward -infinity.
  Int q = a / b, r = a % b;
  if (r != 0 && a < 0) --q;
  return q;
}

inline Int rat_floor(const Rat& x) { return floor_div(rat_num(x), rat_den(x)); }
inline Int rat_ceil(const Rat& x) { return -rat_floor(-x); }

// Nearest integer, ties toward +infinity.
inline Int round_half_up(const Rat& x) { return rat_floor(x + Rat(1, 2)); }

inline Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

// floor(sqrt(n)).
inline Nat isqrt(const Nat& n) { return boost::multiprecision::sqrt(n); }

// Decides base^e <= bound without ever forming a number larger than
// bound * base.
inline bool pow_leq(const Nat& base, const Nat& e, const Nat& bound) {
  Nat acc = 1;
  for (Nat i = 0; i < e; ++i) {
    acc *= base;
    if (acc > bound) return false;
  }
  return acc <= bound;
}

std::string nat_str(const Nat& n);
std::string rat_str(const Rat& x);       // "p/q", integers without "/q"
Rat parse_rational(const std::string&);  // NUM/DEN with optional sign, or decimal literal

}  // namespace condreal
