#pragma once

#include <cstdint>

#include "condreal/nat.hpp"

namespace condreal {

// splitmix64: tiny, deterministic across platforms.  Used wherever seeded
// randomness is part of a contract (samplers, checkers), so identical seeds
// give identical behavior everywhere.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n), n > 0 (modulo bias is irrelevant at test scale).
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  // Uniform in [lo, hi] for arbitrary-precision bounds.
  Nat nat_between(const Nat& lo, const Nat& hi) {
    Nat span = hi - lo + 1;
    Nat acc = 0;
    Nat scale = 1;
    while (scale < span) {
      acc = acc * 0x100000000ULL + Nat(next() & 0xffffffffULL);
      scale *= 0x100000000ULL;
    }
    return lo + acc % span;
  }

  Int int_between(const Int& lo, const Int& hi) { return lo + Int(nat_between(0, Nat(hi - lo))); }

  bool coin() { return (next() & 1) != 0; }
};

// Stateless per-index stream: deterministic oracles can draw a fresh value
// at index n without memoizing.
inline std::uint64_t mix_index(std::uint64_t seed, const Nat& n, std::uint64_t salt) {
  std::uint64_t h = seed ^ (salt * 0x9e3779b97f4a7c15ULL);
  // fold the (possibly huge) index into 64 bits
  Nat m = n;
  while (m > 0) {
    h = (h ^ static_cast<std::uint64_t>(m & 0xffffffffULL)) * 0x100000001b3ULL;
    m >>= 32;
  }
  SplitMix64 s(h);
  return s.next();
}

}  // namespace condreal
