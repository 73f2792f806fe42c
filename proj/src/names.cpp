#include "condreal/names.hpp"

#include <algorithm>

#include "condreal/errors.hpp"

namespace condreal {

RationalApprox RationalApprox::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ':') {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.size() != 3) throw ParseError("expected p:q:r", 0);
  for (const auto& s : parts) {
    if (s.empty()) throw ParseError("expected p:q:r", 0);
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("expected p:q:r", 0);
  }
  return {Nat(parts[0]), Nat(parts[1]), Nat(parts[2])};
}

Nat ehelp(const Nat& p, const Nat& q, const Nat& r, const Nat& n) {
  Nat num = 2 * (n + 1) * monus(p, q) + (r + 1);
  return num / (2 * (r + 1));
}

SpecialName apply_K(const RealName& name) {
  FunctionOracle f = name.f, g = name.g, h = name.h;
  auto forward = [f, g, h](const Nat& n) {
    Nat m = 2 * n + 1;
    return ehelp(f(m), g(m), h(m), n);
  };
  auto backward = [f, g, h](const Nat& n) {
    Nat m = 2 * n + 1;
    return ehelp(g(m), f(m), h(m), n);
  };
  return {FunctionOracle(forward), FunctionOracle(backward)};
}

RealName name_of_rational(const Rat& value) {
  Rat mag = rat_abs(value);
  Nat slope = Nat(rat_ceil(mag)) + 1;
  FunctionOracle numerator(
      [mag](const Nat& n) { return Nat(round_half_up(Rat(Int(n) + 1) * mag)); },
      [slope](const Nat& n) { return Nat((n + 1) * slope); });
  FunctionOracle zero = constant_oracle(0);
  if (value >= 0) return {numerator, zero, FunctionOracle::identity()};
  return {zero, numerator, FunctionOracle::identity()};
}

RationalApprox approx_from_name(const RealName& name, const Nat& n) { return name.at(n); }

FunctionOracle constant_oracle(const Nat& s) { return FunctionOracle::constant(s); }

namespace {

// Integers strictly inside the open interval (center - radius, center + radius).
std::pair<Int, Int> open_interval_ints(const Rat& center, const Rat& radius) {
  Int lo = rat_floor(center - radius) + 1;
  Int hi = rat_ceil(center + radius) - 1;
  return {lo, hi};
}

}  // namespace

std::vector<std::vector<Nat>> enumerate_special_prefix(std::span<const Rat> xs, const Nat& n) {
  std::vector<std::vector<std::pair<Nat, Nat>>> per_coord;
  for (const Rat& xi : xs) {
    auto [lo, hi] = open_interval_ints(Rat(Int(n) + 1) * xi, Rat(1));
    std::vector<std::pair<Nat, Nat>> opts;
    for (Int d = lo; d <= hi; ++d) {
      if (d >= 0)
        opts.emplace_back(Nat(d), Nat(0));
      else
        opts.emplace_back(Nat(0), Nat(-d));
    }
    per_coord.push_back(std::move(opts));
  }
  std::vector<std::vector<Nat>> out;
  if (per_coord.empty()) return out;
  std::vector<std::size_t> idx(per_coord.size(), 0);
  bool done = false;
  while (!done) {
    std::vector<Nat> tuple;
    for (std::size_t i = 0; i < per_coord.size(); ++i) {
      tuple.push_back(per_coord[i][idx[i]].first);
      tuple.push_back(per_coord[i][idx[i]].second);
    }
    out.push_back(std::move(tuple));
    done = true;
    for (std::size_t i = per_coord.size(); i-- > 0;) {
      if (++idx[i] < per_coord[i].size()) {
        done = false;
        break;
      }
      idx[i] = 0;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool validate_at(const RealName& name, const Rat& xi, const Nat& n_max) {
  for (Nat n = 0; n <= n_max; ++n) {
    Rat err = rat_abs(name.at(n).value() - xi);
    if (!(err < Rat(1, Int(n) + 1))) return false;
  }
  return true;
}

RealName sampled_name(const Rat& xi, std::uint64_t seed) {
  // Stateless per-index draws keep the three components consistent without
  // shared memo state.
  auto draw = [xi, seed](const Nat& n) {
    Nat r1 = (n + 1) * (1 + mix_index(seed, n, 1) % 4);  // r+1, a multiple of n+1
    Rat center = Rat(Int(r1)) * xi;
    Rat radius(Int(r1), Int(n) + 1);  // >= 1, so at least two integers fit strictly
    auto [lo, hi] = open_interval_ints(center, radius);
    Int x = lo + Int(Nat(mix_index(seed, n, 2)) % Nat(hi - lo + 1));
    Nat j = mix_index(seed, n, 3) % 3;
    Nat p = (x > 0 ? Nat(x) : Nat(0)) + j;
    Nat q = (x < 0 ? Nat(-x) : Nat(0)) + j;
    return RationalApprox{p, q, r1 - 1};
  };
  return {FunctionOracle([draw](const Nat& n) { return draw(n).p; }),
          FunctionOracle([draw](const Nat& n) { return draw(n).q; }),
          FunctionOracle([draw](const Nat& n) { return draw(n).r; })};
}

SpecialName sampled_special_name(const Rat& xi, std::uint64_t seed) {
  auto draw = [xi, seed](const Nat& n) {
    auto [lo, hi] = open_interval_ints(Rat(Int(n) + 1) * xi, Rat(1));
    Int d = lo + Int(Nat(mix_index(seed, n, 7)) % Nat(hi - lo + 1));
    return d;
  };
  return {FunctionOracle([draw](const Nat& n) {
            Int d = draw(n);
            return d > 0 ? Nat(d) : Nat(0);
          }),
          FunctionOracle([draw](const Nat& n) {
            Int d = draw(n);
            return d < 0 ? Nat(-d) : Nat(0);
          })};
}

RationalApprox sample_approx_within(const Rat& xi, const Nat& bound, SplitMix64& rng,
                                    bool extreme) {
  Nat d1 = bound + 1;
  Nat r1;
  switch (rng.below(4)) {
    case 0: r1 = d1; break;
    case 1: r1 = 2 * d1; break;
    case 2: r1 = d1 * (1 + Nat(rng.below(64))); break;
    default: r1 = d1 * d1; break;
  }
  Rat center = Rat(Int(r1)) * xi;
  Rat radius = Rat(Int(r1), Int(d1));
  auto [lo, hi] = open_interval_ints(center, radius);
  Int x;
  if (extreme) {
    x = rng.coin() ? hi : lo;
  } else {
    x = lo + Int(rng.nat_between(0, Nat(hi - lo)));
  }
  Nat j = rng.below(3);
  Nat p = (x > 0 ? Nat(x) : Nat(0)) + j;
  Nat q = (x < 0 ? Nat(-x) : Nat(0)) + j;
  return {p, q, r1 - 1};
}

}  // namespace condreal
