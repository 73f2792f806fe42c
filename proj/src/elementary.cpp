#include "condreal/elementary.hpp"

#include <cctype>
#include <memory>

#include "condreal/errors.hpp"

namespace condreal {

// ===== certified rational kernels ==========================================
//
// Exact-rational brackets with explicit remainder bounds.  These back the
// native components of the transcendental builtins; the test suite carries
// its own reference implementations.

namespace {

struct Bracket {
  Rat lo, hi;
  Rat width() const { return hi - lo; }
  Rat mid() const { return (lo + hi) / 2; }
};

Rat rat_pow(Rat base, Nat e) {
  Rat acc(1);
  while (e > 0) {
    if ((e & 1) != 0) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

// 2*atanh(z) for 0 <= z < 1/2: 2*sum z^(2j+1)/(2j+1), geometric tail.
Bracket two_atanh(const Rat& z, const Rat& eps) {
  Rat sum(0), term(z), z2 = z * z;
  Nat j = 0;
  while (true) {
    // with `term` = z^(2j+1) still unadded, the remaining doubled sum is
    // at most 2*term/(1-z^2)
    Rat tail = 2 * term / (1 - z2);
    if (tail <= eps && j > 0) {
      Rat lo = 2 * sum;
      return {lo, lo + tail};
    }
    sum += term / Rat(2 * Int(j) + 1);
    term *= z2;
    ++j;
  }
}

Bracket ln2_bracket(const Rat& eps) { return two_atanh(Rat(1, 3), eps); }

Bracket ln_bracket(Rat x, const Rat& eps) {
  if (x <= 0) throw Error("ln_bracket: nonpositive argument");
  Int m = 0;
  while (x >= 2) {
    x /= 2;
    ++m;
  }
  while (x < 1) {
    x *= 2;
    --m;
  }
  Bracket lu = two_atanh((x - 1) / (x + 1), eps / 2);
  if (m == 0) return lu;
  Rat eps_l2 = (eps / 2) / Rat(2 * (m < 0 ? Int(-m) : m));
  Bracket l2 = ln2_bracket(eps_l2);
  Rat mm(m);
  if (m > 0) return {lu.lo + mm * l2.lo, lu.hi + mm * l2.hi};
  return {lu.lo + mm * l2.hi, lu.hi + mm * l2.lo};
}

// e^x for x >= 0 via e^floor(x) * e^frac.
Bracket exp_nonneg(const Rat& x, const Rat& eps) {
  Nat n(rat_floor(x));
  Rat f = x - Rat(Int(n));
  for (Rat tau = eps / 4;; tau /= 16) {
    // e: sum 1/j!, tail after j terms <= 2/(j+1)!
    Rat esum(1), eterm(1);
    Nat j = 1;
    Rat etail;
    while (true) {
      eterm /= Rat(Int(j));
      esum += eterm;
      etail = 2 * eterm / Rat(Int(j) + 1);
      if (etail <= tau) break;
      ++j;
    }
    Bracket eb{esum, esum + etail};
    // e^f: sum f^j/j!, tail after j terms <= 2*f^(j+1)/(j+1)! for f < 1
    Rat fsum(1), fterm(1), ftail(2);
    j = 0;
    while (ftail > tau) {
      ++j;
      fterm *= f / Rat(Int(j));
      fsum += fterm;
      ftail = 2 * fterm * f / Rat(Int(j) + 1);
    }
    Bracket fb{fsum, fsum + ftail};
    Bracket out{rat_pow(eb.lo, n) * fb.lo, rat_pow(eb.hi, n) * fb.hi};
    if (out.width() <= eps) return out;
  }
}

Bracket exp_bracket(const Rat& x, const Rat& eps) {
  if (x >= 0) return exp_nonneg(x, eps);
  // e^x = 1/e^(-x); e^(-x) >= 1, so inversion does not grow the width
  for (Rat tau = eps;; tau /= 4) {
    Bracket b = exp_nonneg(-x, tau);
    Bracket out{1 / b.hi, 1 / b.lo};
    if (out.width() <= eps) return out;
  }
}


Bracket pi_bracket(const Rat& eps) {
  // 16*atan(1/5) - 4*atan(1/239); alternating series, error below the first
  // omitted term
  auto atan_terms = [](const Rat& z, const Rat& tol) {
    Rat sum(0), power(z), z2 = z * z;
    Nat j = 0;
    while (true) {
      Rat term = power / Rat(2 * Int(j) + 1);
      if (term <= tol) return Bracket{sum - term, sum + term};
      if (j % 2 == 0)
        sum += term;
      else
        sum -= term;
      power *= z2;
      ++j;
    }
  };
  Bracket a5 = atan_terms(Rat(1, 5), eps / 64);
  Bracket a239 = atan_terms(Rat(1, 239), eps / 16);
  return {16 * a5.lo - 4 * a239.hi, 16 * a5.hi - 4 * a239.lo};
}

// sin/cos of a reduced argument |m| <= 5, Lagrange remainder |m|^N/N!.
Bracket sin_taylor(const Rat& m, const Rat& tau) {
  Rat sum(0), term(m), m2 = m * m;
  Nat j = 0;
  Rat bound = rat_abs(term);
  while (true) {
    // remainder after degree 2j+1 is |m|^(2j+3)/(2j+3)!
    Rat rem = bound * m2 / Rat((2 * Int(j) + 2) * (2 * Int(j) + 3));
    sum += term;
    if (rem <= tau) return {sum - rem, sum + rem};
    term *= -m2 / Rat((2 * Int(j) + 2) * (2 * Int(j) + 3));
    bound = rat_abs(term);
    ++j;
  }
}

Bracket cos_taylor(const Rat& m, const Rat& tau) {
  Rat sum(0), term(1), m2 = m * m;
  Nat j = 0;
  Rat bound(1);
  while (true) {
    Rat rem = bound * m2 / Rat((2 * Int(j) + 1) * (2 * Int(j) + 2));
    sum += term;
    if (rem <= tau) return {sum - rem, sum + rem};
    term *= -m2 / Rat((2 * Int(j) + 1) * (2 * Int(j) + 2));
    bound = rat_abs(term);
    ++j;
  }
}

Bracket trig_bracket(const Rat& x, const Rat& eps, bool is_sin) {
  Int q = 0;
  Rat w_lo = x, w_hi = x;
  if (rat_abs(x) > 3) {
    q = round_half_up(x / (2 * pi_bracket(Rat(1, 1024)).mid()));
    Rat eps_pi = eps / (8 * Rat(rat_abs(Rat(q)) + 1));
    if (eps_pi > Rat(1, 64)) eps_pi = Rat(1, 64);
    Bracket pi = pi_bracket(eps_pi);
    Rat qq(q);
    if (q >= 0) {
      w_lo = x - 2 * qq * pi.hi;
      w_hi = x - 2 * qq * pi.lo;
    } else {
      w_lo = x - 2 * qq * pi.lo;
      w_hi = x - 2 * qq * pi.hi;
    }
  }
  Rat mid = (w_lo + w_hi) / 2, hw = (w_hi - w_lo) / 2;
  Bracket t = is_sin ? sin_taylor(mid, eps / 4) : cos_taylor(mid, eps / 4);
  // |sin(a)-sin(b)| <= |a-b|, same for cos
  return {t.lo - hw, t.hi + hw};
}

// Scaled rounding: X with |X/(r1) - value| <= 1/(2*r1) + eps_in.
Int round_scaled(const Bracket& b, const Nat& r1) { return round_half_up(b.mid() * Rat(Int(r1))); }

Nat pos_part(const Int& x) { return x > 0 ? Nat(x) : Nat(0); }
Nat neg_part(const Int& x) { return x < 0 ? Nat(-x) : Nat(0); }

Rat approx_value(const Nat& p, const Nat& q, const Nat& r) {
  return Rat(Int(p) - Int(q), Int(r) + 1);
}

}  // namespace

// ===== natives ==============================================================

void register_elementary_natives(NativeRegistry& reg) {
  reg.add("min2", {2, [](std::span<const Nat> a) { return nat_min(a[0], a[1]); },
                   [](std::span<const Nat> a) { return a[0]; }, "binary minimum"});

  // p = a(b+1) + c(d+1), the cross-multiplied numerator of a sum
  NativeFn addnum = [](std::span<const Nat> a) { return Nat(a[0] * (a[1] + 1) + a[2] * (a[3] + 1)); };
  reg.add("add.num", {4, addnum, addnum, "sum numerator"});
  NativeFn addden = [](std::span<const Nat> a) { return Nat(a[0] * a[1] + a[0] + a[1]); };
  reg.add("add.den", {2, addden, addden, "product of denominators, as an index"});

  NativeFn mulidx = [](std::span<const Nat> a) {
    // read index for the product: (t+1)(B1+B2+1) - 1 with Bi = max(f_i(0), g_i(0)) + 1
    return Nat((a[4] + 1) * (nat_max(a[0], a[1]) + nat_max(a[2], a[3]) + 3) - 1);
  };
  reg.add("mul.idx", {5, mulidx, mulidx, "argument index for multiplication"});
  NativeFn mulnum = [](std::span<const Nat> a) { return Nat(a[0] * a[2] + a[1] * a[3]); };
  reg.add("mul.num", {4, mulnum, mulnum, "product numerator"});

  reg.add("recip.gate",
          {4,
           [](std::span<const Nat> a) {
             // accept s iff |f(s)-g(s)|*(s+1) >= 2(h(s)+1): certifies |xi| > 1/(s+1)
             return Nat(nat_abs_diff(a[0], a[1]) * (a[3] + 1) >= 2 * (a[2] + 1) ? 0 : 1);
           },
           [](std::span<const Nat>) { return Nat(1); }, "reciprocal domain gate"});
  NativeFn recipidx = [](std::span<const Nat> a) {
    return Nat(2 * (a[0] + 1) * (a[0] + 1) * (a[1] + 1) - 1);
  };
  reg.add("recip.idx", {2, recipidx, recipidx, "argument index for reciprocal"});
  reg.add("recip.num", {3,
                        [](std::span<const Nat> a) { return a[0] > a[1] ? Nat(a[2] + 1) : Nat(0); },
                        [](std::span<const Nat> a) { return Nat(a[2] + 1); },
                        "reciprocal numerator (one sign side)"});
  reg.add("recip.den", {2, [](std::span<const Nat> a) { return monus(nat_abs_diff(a[0], a[1]), 1); },
                        [](std::span<const Nat> a) { return Nat(a[0] + a[1]); },
                        "reciprocal denominator index"});

  reg.add("sqrt.gate",
          {4,
           [](std::span<const Nat> a) {
             // accept s>=1 iff (g(s) monus f(s))*(s+1) <= h(s)+1: certifies xi > -2/(s+1)
             if (a[3] == 0) return Nat(1);
             return Nat(monus(a[1], a[0]) * (a[3] + 1) <= a[2] + 1 ? 0 : 1);
           },
           [](std::span<const Nat>) { return Nat(1); }, "square-root sign gate"});
  NativeFn sqrtidx = [](std::span<const Nat> a) { return Nat(64 * (a[0] + 1) * (a[0] + 1) - 1); };
  reg.add("sqrt.idx", {1, sqrtidx, sqrtidx, "argument index for square root"});
  reg.add("sqrt.num",
          {4,
           [](std::span<const Nat> a) {
             Nat r1 = 8 * (a[3] + 1);
             return isqrt(monus(a[0], a[1]) * r1 * r1 / (a[2] + 1));
           },
           [](std::span<const Nat> a) { return Nat(isqrt(a[0] * 64 * (a[3] + 1) * (a[3] + 1)) + 1); },
           "square-root numerator"});

  reg.add("exp.gate",
          {4,
           [](std::span<const Nat> a) {
             // c = ceil((f(0) monus g(0))/(h(0)+1)) + 1 bounds xi from above;
             // accept s iff 3^(c+2) <= s+1, certifying e^xi <= s+1
             Nat c = (monus(a[0], a[1]) + a[2]) / (a[2] + 1) + 1;
             return Nat(pow_leq(3, c + 2, a[3] + 1) ? 0 : 1);
           },
           [](std::span<const Nat>) { return Nat(1); }, "exponential growth gate"});
  NativeFn expidx = [](std::span<const Nat> a) { return Nat(6 * (a[0] + 1) * (a[1] + 1) - 1); };
  reg.add("exp.idx", {2, expidx, expidx, "argument index for the exponential"});
  reg.add("exp.p", {5,
                    [](std::span<const Nat> a) {
                      Rat v = approx_value(a[0], a[1], a[2]);
                      Nat r1 = 8 * (a[4] + 1);
                      Bracket b = exp_bracket(v, Rat(1, 16 * (Int(a[4]) + 1)));
                      return pos_part(round_scaled(b, r1));
                    },
                    [](std::span<const Nat> a) {
                      Nat r1 = 8 * (a[4] + 1);
                      Nat pow = 1;
                      for (Nat i = 0; i <= a[0]; ++i) pow *= 3;
                      return Nat(r1 * (pow + 2));
                    },
                    "exponential numerator"});

  reg.add("ln.gate",
          {4,
           [](std::span<const Nat> a) {
             // one-sided: accept s iff (f(s) monus g(s))*(s+1) >= 2(h(s)+1)
             return Nat(monus(a[0], a[1]) * (a[3] + 1) >= 2 * (a[2] + 1) ? 0 : 1);
           },
           [](std::span<const Nat>) { return Nat(1); }, "logarithm domain gate"});
  NativeFn lnidx = [](std::span<const Nat> a) {
    return Nat(4 * (a[0] + 1) * (a[0] + 1) * (a[1] + 1) - 1);
  };
  reg.add("ln.idx", {2, lnidx, lnidx, "argument index for the logarithm"});
  auto ln_scaled = [](std::span<const Nat> a) -> Int {
    Rat v = approx_value(a[0], a[1], a[2]);
    if (v <= 0) return 0;  // outside any certified run; total anyway
    Nat r1 = 8 * (a[4] + 1);
    Bracket b = ln_bracket(v, Rat(1, 16 * (Int(a[4]) + 1)));
    return round_scaled(b, r1);
  };
  reg.add("ln.p", {5, [ln_scaled](std::span<const Nat> a) { return pos_part(ln_scaled(a)); },
                   [](std::span<const Nat> a) { return Nat(8 * (a[4] + 1) * (a[0] + 2)); },
                   "logarithm numerator, positive side"});
  reg.add("ln.q", {5, [ln_scaled](std::span<const Nat> a) { return neg_part(ln_scaled(a)); },
                   [](std::span<const Nat> a) { return Nat(8 * (a[4] + 1) * (a[2] + 2)); },
                   "logarithm numerator, negative side"});

  auto trig_scaled = [](std::span<const Nat> a, bool is_sin) -> Int {
    Rat v = approx_value(a[0], a[1], a[2]);
    Nat r1 = 4 * (a[3] + 1);
    Bracket b = trig_bracket(v, Rat(1, 16 * (Int(a[3]) + 1)), is_sin);
    return round_scaled(b, r1);
  };
  NativeFn trig_maj = [](std::span<const Nat> a) { return Nat(4 * a[3] + 6); };
  reg.add("sin.p", {4, [trig_scaled](std::span<const Nat> a) { return pos_part(trig_scaled(a, true)); },
                    trig_maj, "sine numerator, positive side"});
  reg.add("sin.q", {4, [trig_scaled](std::span<const Nat> a) { return neg_part(trig_scaled(a, true)); },
                    trig_maj, "sine numerator, negative side"});
  reg.add("cos.p", {4, [trig_scaled](std::span<const Nat> a) { return pos_part(trig_scaled(a, false)); },
                    trig_maj, "cosine numerator, positive side"});
  reg.add("cos.q", {4, [trig_scaled](std::span<const Nat> a) { return neg_part(trig_scaled(a, false)); },
                    trig_maj, "cosine numerator, negative side"});
}

// ===== builtin systems ======================================================

namespace {

OperatorTerm reads_at(unsigned slot, const OperatorTerm& index_term) {
  return ot_apply(slot, index_term);
}

UniformSystem make_unary_reads(const std::string& p_native, const std::string& q_native,
                               const OperatorTerm& index_term, const OperatorTerm& den_term,
                               bool pass_t) {
  // F/G = native(f(m), g(m), h(m) [, t]), H = den_term
  UniformSystem sys;
  sys.k = 1;
  OperatorTerm x = ot_var(3);
  std::vector<OperatorTerm> args{reads_at(1, index_term), reads_at(2, index_term),
                                 reads_at(3, index_term)};
  if (pass_t) args.push_back(x);
  sys.F = ot_base(bf_native(p_native), args);
  if (q_native.empty())
    sys.G = ot_const(3, 0);
  else
    sys.G = ot_base(bf_native(q_native), args);
  sys.H = den_term;
  return sys;
}

}  // namespace

UniformSystem builtin_uniform(const std::string& op) {
  if (op == "id") {
    UniformSystem sys;
    sys.k = 1;
    OperatorTerm x = ot_var(3);
    sys.F = ot_apply(1, x);
    sys.G = ot_apply(2, x);
    sys.H = ot_apply(3, x);
    return sys;
  }
  if (op == "negate") {
    UniformSystem sys;
    sys.k = 1;
    OperatorTerm x = ot_var(3);
    sys.F = ot_apply(2, x);
    sys.G = ot_apply(1, x);
    sys.H = ot_apply(3, x);
    return sys;
  }
  if (op == "abs") {
    UniformSystem sys;
    sys.k = 1;
    OperatorTerm x = ot_var(3);
    std::vector<OperatorTerm> fg{ot_apply(1, x), ot_apply(2, x)};
    sys.F = ot_base(bf_native("max2"), fg);
    sys.G = ot_base(bf_native("min2"), fg);
    sys.H = ot_apply(3, x);
    return sys;
  }
  if (op == "add" || op == "sub") {
    UniformSystem sys;
    sys.k = 2;
    OperatorTerm x = ot_var(6);
    OperatorTerm m = ot_base(bf_native("lin:2:1"), {x});  // reads at 2t+1
    auto R = [&](unsigned i) { return ot_apply(i, m); };
    bool flip = op == "sub";
    sys.F = ot_base(bf_native("add.num"), {R(1), R(6), R(flip ? 5 : 4), R(3)});
    sys.G = ot_base(bf_native("add.num"), {R(2), R(6), R(flip ? 4 : 5), R(3)});
    sys.H = ot_base(bf_native("add.den"), {R(3), R(6)});
    return sys;
  }
  if (op == "mul") {
    UniformSystem sys;
    sys.k = 2;
    OperatorTerm x = ot_var(6);
    OperatorTerm c0 = ot_const(6, 0);
    OperatorTerm m = ot_base(bf_native("mul.idx"),
                             {ot_apply(1, c0), ot_apply(2, c0), ot_apply(4, c0), ot_apply(5, c0), x});
    auto R = [&](unsigned i) { return ot_apply(i, m); };
    sys.F = ot_base(bf_native("mul.num"), {R(1), R(2), R(4), R(5)});
    sys.G = ot_base(bf_native("mul.num"), {R(1), R(2), R(5), R(4)});
    sys.H = ot_base(bf_native("add.den"), {R(3), R(6)});
    return sys;
  }
  if (op == "sqrt") {
    OperatorTerm x = ot_var(3);
    OperatorTerm m = ot_base(bf_native("sqrt.idx"), {x});
    return make_unary_reads("sqrt.num", "", m, ot_base(bf_native("lin:8:7"), {x}), true);
  }
  if (op == "sin" || op == "cos") {
    OperatorTerm x = ot_var(3);
    OperatorTerm m = ot_base(bf_native("lin:4:3"), {x});
    return make_unary_reads(op + ".p", op + ".q", m, ot_base(bf_native("lin:4:3"), {x}), true);
  }
  throw Error("no builtin uniform system named '" + op + "'");
}

UniformSystem literal_uniform(const Rat& value, unsigned k) {
  UniformSystem sys;
  sys.k = k;
  OperatorTerm x = ot_var(3 * k);
  std::string lit = rat_str(rat_abs(value));
  if (lit.find('/') == std::string::npos) lit += "/1";
  OperatorTerm numerator = ot_base(bf_native("litp:" + lit), {x});
  OperatorTerm zero = ot_const(3 * k, 0);
  sys.F = value >= 0 ? numerator : zero;
  sys.G = value >= 0 ? zero : numerator;
  sys.H = x;
  return sys;
}

UniformSystem projection_uniform(unsigned k, unsigned i) {
  if (i == 0 || i > k) throw ArityError("projection_uniform: coordinate out of range");
  UniformSystem sys;
  sys.k = k;
  OperatorTerm x = ot_var(3 * k);
  sys.F = ot_apply(3 * (i - 1) + 1, x);
  sys.G = ot_apply(3 * (i - 1) + 2, x);
  sys.H = ot_apply(3 * (i - 1) + 3, x);
  return sys;
}

namespace {

ConditionalSystem gated(const UniformSystem& values, const std::string& gate_native) {
  ConditionalSystem sys;
  sys.k = values.k;
  unsigned n = 3 * values.k;
  OperatorTerm x = ot_var(n);
  sys.E = ot_base(bf_native(gate_native), {ot_apply(1, x), ot_apply(2, x), ot_apply(3, x), x});
  sys.F = with_fn_arity(values.F, n + 1);
  sys.G = with_fn_arity(values.G, n + 1);
  sys.H = with_fn_arity(values.H, n + 1);
  sys.normalized = true;
  return sys;
}

ConditionalSystem reciprocal_system() {
  ConditionalSystem sys;
  sys.k = 1;
  OperatorTerm x3 = ot_var(3);
  sys.E = ot_base(bf_native("recip.gate"),
                  {ot_apply(1, x3), ot_apply(2, x3), ot_apply(3, x3), x3});
  OperatorTerm x = ot_var(4);
  OperatorTerm s_node = ot_apply(4, ot_const(4, 0));
  OperatorTerm m = ot_base(bf_native("recip.idx"), {s_node, x});
  auto R = [&](unsigned i) { return ot_apply(i, m); };
  sys.F = ot_base(bf_native("recip.num"), {R(1), R(2), R(3)});
  sys.G = ot_base(bf_native("recip.num"), {R(2), R(1), R(3)});
  sys.H = ot_base(bf_native("recip.den"), {R(1), R(2)});
  sys.normalized = true;
  sys.domain_hint = [](std::span<const std::pair<Rat, Rat>> box) {
    return !box.empty() && !(box[0].first <= 0 && 0 <= box[0].second);
  };
  return sys;
}

ConditionalSystem exp_system() {
  ConditionalSystem sys;
  sys.k = 1;
  OperatorTerm x3 = ot_var(3);
  OperatorTerm c03 = ot_const(3, 0);
  sys.E = ot_base(bf_native("exp.gate"),
                  {ot_apply(1, c03), ot_apply(2, c03), ot_apply(3, c03), x3});
  OperatorTerm x = ot_var(4);
  OperatorTerm s_node = ot_apply(4, ot_const(4, 0));
  OperatorTerm m = ot_base(bf_native("exp.idx"), {s_node, x});
  auto R = [&](unsigned i) { return ot_apply(i, m); };
  sys.F = ot_base(bf_native("exp.p"), {R(1), R(2), R(3), s_node, x});
  sys.G = ot_const(4, 0);
  sys.H = ot_base(bf_native("lin:8:7"), {x});
  sys.normalized = true;
  return sys;
}

ConditionalSystem ln_system() {
  ConditionalSystem sys;
  sys.k = 1;
  OperatorTerm x3 = ot_var(3);
  sys.E = ot_base(bf_native("ln.gate"),
                  {ot_apply(1, x3), ot_apply(2, x3), ot_apply(3, x3), x3});
  OperatorTerm x = ot_var(4);
  OperatorTerm s_node = ot_apply(4, ot_const(4, 0));
  OperatorTerm m = ot_base(bf_native("ln.idx"), {s_node, x});
  auto R = [&](unsigned i) { return ot_apply(i, m); };
  std::vector<OperatorTerm> args{R(1), R(2), R(3), s_node, x};
  sys.F = ot_base(bf_native("ln.p"), args);
  sys.G = ot_base(bf_native("ln.q"), args);
  sys.H = ot_base(bf_native("lin:8:7"), {x});
  sys.normalized = true;
  sys.domain_hint = [](std::span<const std::pair<Rat, Rat>> box) {
    return !box.empty() && box[0].first > 0;
  };
  return sys;
}

ConditionalSystem lifted(const UniformSystem& sys) {
  ConditionalSystem out = uniform_to_conditional(sys);
  return out;
}

}  // namespace

ConditionalSystem builtin_system(const std::string& op) {
  if (op == "id" || op == "negate" || op == "abs" || op == "add" || op == "sub" || op == "mul" ||
      op == "sin" || op == "cos")
    return lifted(builtin_uniform(op));
  if (op == "sqrt") {
    ConditionalSystem sys = gated(builtin_uniform("sqrt"), "sqrt.gate");
    sys.domain_hint = [](std::span<const std::pair<Rat, Rat>> box) {
      return !box.empty() && box[0].first >= 0;
    };
    return sys;
  }
  if (op == "reciprocal") return reciprocal_system();
  if (op == "exp") return exp_system();
  if (op == "ln") return ln_system();
  if (op == "div") {
    ConditionalSystem mul = builtin_system("mul");
    ConditionalSystem parts[2] = {
        lifted(projection_uniform(2, 1)),
        compose_conditional(builtin_system("reciprocal"), {{lifted(projection_uniform(2, 2))}})};
    return compose_conditional(mul, parts);
  }
  throw Error("no builtin system named '" + op + "'");
}

// ===== expressions ==========================================================

ExprPtr Expression::lit(Rat v) {
  auto e = std::make_shared<Expression>();
  e->op = Op::Literal;
  e->literal = std::move(v);
  return e;
}
ExprPtr Expression::var(std::string name) {
  auto e = std::make_shared<Expression>();
  e->op = Op::Variable;
  e->variable = std::move(name);
  return e;
}
ExprPtr Expression::unary(Op op, ExprPtr a) {
  auto e = std::make_shared<Expression>();
  e->op = op;
  e->lhs = std::move(a);
  return e;
}
ExprPtr Expression::binary(Op op, ExprPtr a, ExprPtr b) {
  if (op == Op::Div)  // div x y is mul x (reciprocal y)
    return binary(Op::Mul, std::move(a), unary(Op::Reciprocal, std::move(b)));
  auto e = std::make_shared<Expression>();
  e->op = op;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

namespace {

struct ExprParser {
  const std::string& text;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  char peek() {
    skip();
    return pos < text.size() ? text[pos] : '\0';
  }

  ExprPtr parse() {
    ExprPtr e = parse_sum();
    skip();
    if (pos != text.size()) throw ParseError("trailing input in expression", pos);
    return e;
  }

  ExprPtr parse_sum() {
    ExprPtr lhs = parse_product();
    while (true) {
      char c = peek();
      if (c == '+' || c == '-') {
        ++pos;
        lhs = Expression::binary(c == '+' ? Expression::Op::Add : Expression::Op::Sub, lhs,
                                 parse_product());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_product() {
    ExprPtr lhs = parse_atom();
    while (true) {
      char c = peek();
      if (c == '*' || c == '/') {
        ++pos;
        lhs = Expression::binary(c == '*' ? Expression::Op::Mul : Expression::Op::Div, lhs,
                                 parse_atom());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_atom() {
    char c = peek();
    if (c == '(') {
      ++pos;
      ExprPtr e = parse_sum();
      if (peek() != ')') throw ParseError("missing ')'", pos);
      ++pos;
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_literal();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    throw ParseError("expected a literal, identifier or '('", pos);
  }

  // Contiguous NUM/DEN or NUM.FRAC is one exact literal; '/' with spacing is
  // division.
  ExprPtr parse_literal() {
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos < text.size() && (text[pos] == '/' || text[pos] == '.') && pos + 1 < text.size() &&
        std::isdigit(static_cast<unsigned char>(text[pos + 1]))) {
      ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    try {
      return Expression::lit(parse_rational(text.substr(start, pos - start)));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), start);
    }
  }

  ExprPtr parse_ident() {
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    std::string name = text.substr(start, pos - start);
    static const std::map<std::string, Expression::Op> fns = {
        {"neg", Expression::Op::Negate}, {"recip", Expression::Op::Reciprocal},
        {"sqrt", Expression::Op::Sqrt},  {"exp", Expression::Op::Exp},
        {"ln", Expression::Op::Ln},      {"sin", Expression::Op::Sin},
        {"cos", Expression::Op::Cos},    {"abs", Expression::Op::Abs}};
    auto it = fns.find(name);
    if (it != fns.end()) {
      if (peek() != '(') throw ParseError("function '" + name + "' needs parentheses", pos);
      ++pos;
      ExprPtr arg = parse_sum();
      if (peek() != ')') throw ParseError("missing ')'", pos);
      ++pos;
      return Expression::unary(it->second, arg);
    }
    return Expression::var(name);
  }
};

void collect_vars(const ExprPtr& e, std::vector<std::string>& out) {
  if (!e) return;
  if (e->op == Expression::Op::Variable) {
    for (const auto& v : out)
      if (v == e->variable) return;
    out.push_back(e->variable);
    return;
  }
  collect_vars(e->lhs, out);
  collect_vars(e->rhs, out);
}

const char* unary_builtin_name(Expression::Op op) {
  switch (op) {
    case Expression::Op::Negate: return "negate";
    case Expression::Op::Reciprocal: return "reciprocal";
    case Expression::Op::Sqrt: return "sqrt";
    case Expression::Op::Exp: return "exp";
    case Expression::Op::Ln: return "ln";
    case Expression::Op::Sin: return "sin";
    case Expression::Op::Cos: return "cos";
    case Expression::Op::Abs: return "abs";
    default: return nullptr;
  }
}

}  // namespace

ExprPtr parse_expression(const std::string& text) {
  ExprParser p{text};
  return p.parse();
}

std::vector<std::string> free_variables(const ExprPtr& e) {
  std::vector<std::string> out;
  collect_vars(e, out);
  return out;
}

ConditionalSystem compile_expression(const ExprPtr& expr, const std::vector<std::string>& params) {
  unsigned k = static_cast<unsigned>(params.size());
  switch (expr->op) {
    case Expression::Op::Literal:
      return uniform_to_conditional(literal_uniform(expr->literal, k));
    case Expression::Op::Variable: {
      for (unsigned i = 0; i < params.size(); ++i)
        if (params[i] == expr->variable)
          return uniform_to_conditional(projection_uniform(k, i + 1));
      throw UnboundVariableError("unbound variable '" + expr->variable + "'");
    }
    case Expression::Op::Add:
    case Expression::Op::Sub:
    case Expression::Op::Mul: {
      ConditionalSystem inner[2] = {compile_expression(expr->lhs, params),
                                    compile_expression(expr->rhs, params)};
      const char* name = expr->op == Expression::Op::Add   ? "add"
                         : expr->op == Expression::Op::Sub ? "sub"
                                                           : "mul";
      return compose_conditional(builtin_system(name), inner);
    }
    case Expression::Op::Div:
      throw Error("unreachable: division rewrites at construction");
    default: {
      ConditionalSystem inner[1] = {compile_expression(expr->lhs, params)};
      return compose_conditional(builtin_system(unary_builtin_name(expr->op)), inner);
    }
  }
}

// ===== compositional evaluation ============================================

namespace {

struct NodeStats {
  Nat gate_reads = 0;   // largest argument index read while searching s
  Nat value_reads = 0;  // largest argument index read while producing output
  int phase = 0;        // 0: gate, 1: value
};

FunctionOracle counted(const FunctionOracle& inner, std::shared_ptr<NodeStats> stats) {
  return FunctionOracle([inner, stats](const Nat& x) {
    Nat& slot = stats->phase == 0 ? stats->gate_reads : stats->value_reads;
    slot = nat_max(slot, x);
    return inner(x);
  });
}

struct NodeOutcome {
  RealName name;
  std::string id;
  std::shared_ptr<NodeStats> stats;
  Nat s;
};

const char* op_tag(const Expression& e) {
  switch (e.op) {
    case Expression::Op::Literal: return "lit";
    case Expression::Op::Variable: return "var";
    case Expression::Op::Add: return "add";
    case Expression::Op::Sub: return "sub";
    case Expression::Op::Mul: return "mul";
    default: return unary_builtin_name(e.op);
  }
}

struct ExprEvaluator {
  const std::map<std::string, Rat>& bindings;
  Nat budget;
  unsigned counter = 0;
  std::vector<NodeOutcome> order;  // postorder

  NodeOutcome eval(const ExprPtr& e) {
    std::vector<NodeOutcome> children;
    if (e->lhs) children.push_back(eval(e->lhs));
    if (e->rhs) children.push_back(eval(e->rhs));

    NodeOutcome out;
    out.stats = std::make_shared<NodeStats>();
    std::string tag = op_tag(*e);
    out.id = std::to_string(counter++) + "." + tag;

    if (e->op == Expression::Op::Literal || e->op == Expression::Op::Variable) {
      Rat value;
      if (e->op == Expression::Op::Literal) {
        value = e->literal;
      } else {
        auto it = bindings.find(e->variable);
        if (it == bindings.end())
          throw UnboundVariableError("unbound variable '" + e->variable + "'");
        value = it->second;
      }
      out.name = name_of_rational(value);
      out.s = 0;
      out.stats->phase = 1;
    } else {
      auto sys = std::make_shared<ConditionalSystem>(builtin_system(tag));
      auto names = std::make_shared<std::vector<RealName>>();
      for (auto& c : children)
        names->push_back({counted(c.name.f.memoized(), out.stats),
                          counted(c.name.g.memoized(), out.stats),
                          counted(c.name.h.memoized(), out.stats)});
      try {
        out.s = find_parameter(*sys, *names, budget);
      } catch (const BudgetExhaustedError&) {
        throw BudgetExhaustedError("node " + out.id + ", parameter scan 0.." + budget.str(),
                                   budget.str());
      }
      out.stats->phase = 1;
      // the node's name: any accepted parameter serves every precision query
      Nat s = out.s;
      out.name = {
          FunctionOracle([sys, names, s](const Nat& n) {
            return eval_conditional_at(*sys, *names, s, n).p;
          }),
          FunctionOracle([sys, names, s](const Nat& n) {
            return eval_conditional_at(*sys, *names, s, n).q;
          }),
          FunctionOracle([sys, names, s](const Nat& n) {
            return eval_conditional_at(*sys, *names, s, n).r;
          })};
    }

    order.push_back(out);
    return out;
  }
};

}  // namespace

EvalResult evaluate_expression(const ExprPtr& expr, const std::map<std::string, Rat>& bindings,
                               const Nat& t, const Nat& budget, bool collect_trace) {
  ExprEvaluator ev{bindings, budget, 0, {}};
  NodeOutcome root = ev.eval(expr);
  EvalResult result;
  result.approx = root.name.at(t);
  if (collect_trace) {
    for (const auto& node : ev.order)
      result.trace.push_back({node.id, node.s, node.stats->gate_reads, node.stats->value_reads});
  }
  return result;
}

}  // namespace condreal
