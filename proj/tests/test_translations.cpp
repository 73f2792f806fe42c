#include <doctest.h>

#include "condreal/elementary.hpp"
#include "condreal/serialize.hpp"
#include "condreal/translations.hpp"
#include "oracle.hpp"
#include "testutil.hpp"

using namespace condreal;

namespace {

const Nat kBudget = 65536;

std::vector<RealName> names_of(std::initializer_list<Rat> xs) {
  std::vector<RealName> out;
  for (const Rat& x : xs) out.push_back(name_of_rational(x));
  return out;
}

bool within(const RationalApprox& a, const Rat& target, const Nat& t) {
  return rat_abs(a.value() - target) < Rat(1, Int(t) + 1);
}

}  // namespace

TEST_CASE("witness-to-system gate instantiates the quoted recipe") {
  TZConditionalWitness w = operators_to_tz_conditional(builtin_system("reciprocal"));
  ConditionalSystem sys = tz_to_operators_conditional(w);
  auto names = names_of({Rat(1, 2)});
  auto oracles = oracles_of_names(names);
  // E(f,g,h)(s') = e(f(d0(s)), g(d0(s)), h(d0(s)), s) with s = max(f(0), g(0), s')
  for (Nat sp = 0; sp <= 6; ++sp) {
    Nat f0 = names[0].f(Nat(0)), g0 = names[0].g(Nat(0));
    Nat s = nat_max(nat_max(f0, g0), sp);
    std::vector<Nat> s_arg{s};
    Nat i0 = eval_base(*w.d0, s_arg);
    std::vector<Nat> args{names[0].f(i0), names[0].g(i0), names[0].h(i0), s};
    CHECK(eval_operator(sys.E, oracles, sp) == eval_base(*w.e, args));
  }
}

TEST_CASE("conditional round-trip: reciprocal") {
  ConditionalSystem recip = builtin_system("reciprocal");
  TZConditionalWitness w = operators_to_tz_conditional(recip);
  ConditionalSystem back = tz_to_operators_conditional(w);

  auto out = eval_conditional(back, names_of({Rat(1, 2)}), 9, kBudget);
  CHECK(within(out, Rat(2), 9));

  SplitMix64 rng(0x1234);
  for (int i = 0; i < 20; ++i) {
    Rat xi = testutil::random_rational(rng, 1, 8);
    if (rng.coin()) xi = -xi;
    Nat t = rng.below(101);
    auto a = eval_conditional(recip, names_of({xi}), t, kBudget);
    auto b = eval_conditional(back, names_of({xi}), t, kBudget);
    auto c = eval_tz_conditional(w, names_of({xi}), t, kBudget);
    REQUIRE(within(a, 1 / xi, t));
    REQUIRE(within(b, 1 / xi, t));
    REQUIRE(within(c, 1 / xi, t));
  }
}

TEST_CASE("normalization preserves behavior and is extensionally idempotent") {
  ConditionalSystem recip = builtin_system("reciprocal");
  ConditionalSystem once = normalize_system(recip);
  CHECK(once.normalized);
  auto out = eval_conditional(once, names_of({Rat(1, 2)}), 9, kBudget);
  CHECK(within(out, Rat(2), 9));

  ConditionalSystem twice = normalize_system(once);
  SplitMix64 rng(0x4242);
  for (int i = 0; i < 12; ++i) {
    Rat xi = testutil::random_rational(rng, 1, 6);
    Nat t = rng.below(60);
    auto o1 = eval_conditional(once, names_of({xi}), t, kBudget);
    auto o2 = eval_conditional(twice, names_of({xi}), t, kBudget);
    REQUIRE(within(o1, 1 / xi, t));
    REQUIRE(within(o2, 1 / xi, t));
  }
}

TEST_CASE("a normalized system depends on names only through their images") {
  ConditionalSystem norm = normalize_system(builtin_system("reciprocal"));
  // two names of 1/2 differing only far out: their special-form images agree
  // on every index the terms can read at small arguments
  RealName a = name_of_rational(Rat(1, 2));
  RealName b = a;
  b.f = FunctionOracle([](const Nat& n) {
    Nat canonical = (n + 2) / 2;  // round((n+1)/2), ties up
    return n >= 1000000 ? Nat(canonical + n) : canonical;
  });
  std::vector<RealName> na{a}, nb{b};
  for (Nat t : {Nat(3), Nat(9), Nat(25)}) {
    auto ra = eval_conditional(norm, na, t, kBudget);
    auto rb = eval_conditional(norm, nb, t, kBudget);
    REQUIRE(ra.p == rb.p);
    REQUIRE(ra.q == rb.q);
    REQUIRE(ra.r == rb.r);
  }
}

TEST_CASE("index tables: closed forms and slack inequalities") {
  TZConditionalWitness w = operators_to_tz_conditional(builtin_system("reciprocal"));
  REQUIRE(w.tables);
  const TranslationTables& tb = *w.tables;
  CHECK(tb.u_fn(3, 1) == 12);  // (s+2)(x+1)

  // lifted-uniform systems have gates with no reads: v' vanishes, d0 = 5
  TZConditionalWitness lifted_w =
      operators_to_tz_conditional(uniform_to_conditional(builtin_uniform("id")));
  CHECK(lifted_w.tables->v_prime_fn(7) == 0);
  CHECK(lifted_w.tables->d0_fn(7) == 5);

  for (Nat s = 0; s <= 12; ++s) {
    Nat vp = tb.v_prime_fn(s);
    CHECK(tb.d0_fn(s) == 6 * vp + 5);
    CHECK(tb.d0_fn(s) >= 2 * vp + 1);
    for (Nat t = 0; t <= 8; ++t) {
      Nat d = tb.d_fn(s, t);
      CHECK(d >= 6 * vp + 5);
      CHECK(d >= 2 * tb.w_prime_fn(s, t) + 1);
    }
  }
}

TEST_CASE("conditional round-trip: exp and ln at reduced scale") {
  for (const char* op : {"exp", "ln"}) {
    ConditionalSystem sys = builtin_system(op);
    TZConditionalWitness w = operators_to_tz_conditional(sys);
    ConditionalSystem back = tz_to_operators_conditional(w);
    std::vector<Rat> points = std::string(op) == "exp"
                                  ? std::vector<Rat>{Rat(0), Rat(1), Rat(-1), Rat(1, 2), Rat(-3, 2),
                                                     Rat(2), Rat(5, 4), Rat(-2), Rat(3, 4), Rat(-1, 3)}
                                  : std::vector<Rat>{Rat(1), Rat(2), Rat(1, 2), Rat(3), Rat(5, 2),
                                                     Rat(1, 3), Rat(4), Rat(7, 4), Rat(2, 3), Rat(9, 2)};
    auto reference = [&](const Rat& xi, const Rat& eps) {
      return std::string(op) == "exp" ? oracle::exp_value(xi, eps) : oracle::ln_value(xi, eps);
    };
    SplitMix64 rng(0x31415);
    for (const Rat& xi : points) {
      for (int rep = 0; rep < 4; ++rep) {
        Nat t = rep == 0 ? Nat(200) : Nat(rng.below(200));
        auto a = eval_conditional(sys, names_of({xi}), t, kBudget);
        auto b = eval_conditional(back, names_of({xi}), t, kBudget);
        auto c = eval_tz_conditional(w, names_of({xi}), t, kBudget);
        Rat delta(1, Int(t) + 1);
        REQUIRE(oracle::within([&](const Rat& e) { return reference(xi, e); }, a.value(), delta));
        REQUIRE(oracle::within([&](const Rat& e) { return reference(xi, e); }, b.value(), delta));
        REQUIRE(oracle::within([&](const Rat& e) { return reference(xi, e); }, c.value(), delta));
      }
    }
  }
}

TEST_CASE("uniform round-trip: addition, multiplication, negation") {
  SplitMix64 rng(0x2718);
  for (const char* op : {"add", "mul", "negate"}) {
    UniformSystem sys = builtin_uniform(op);
    TZUniformWitness w = operators_to_tz_uniform(sys);
    UniformSystem back = tz_to_operators_uniform(w);
    for (int i = 0; i < 20; ++i) {
      Rat a = testutil::random_rational(rng, -9, 9);
      Rat b = testutil::random_rational(rng, -9, 9);
      std::vector<RealName> names;
      names.push_back(name_of_rational(a));
      Rat target = -a;
      if (sys.k == 2) {
        names.push_back(name_of_rational(b));
        target = std::string(op) == "add" ? Rat(a + b) : Rat(a * b);
      }
      Nat t = rng.below(101);
      auto u1 = eval_uniform(sys, names, t);
      auto u2 = eval_uniform(back, names, t);
      auto u3 = eval_tz_uniform(w, names, t);
      REQUIRE(within(u1, target, t));
      REQUIRE(within(u2, target, t));
      REQUIRE(within(u3, target, t));
    }
  }
}

TEST_CASE("uniform round-trip: identity witness reproduces approximations") {
  UniformSystem id_sys = builtin_uniform("id");
  TZUniformWitness w = operators_to_tz_uniform(id_sys);
  UniformSystem back = tz_to_operators_uniform(w);
  SplitMix64 rng(0x1618);
  for (int i = 0; i < 10; ++i) {
    Rat xi = testutil::random_rational(rng, -5, 5);
    Nat t = rng.below(80);
    std::vector<RealName> names{sampled_name(xi, rng.next())};
    REQUIRE(within(eval_uniform(back, names, t), xi, t));
  }
}

TEST_CASE("search bound: frozen value for the reciprocal at one half") {
  ConditionalSystem recip = builtin_system("reciprocal");
  std::vector<Rat> half{Rat(1, 2)};
  SearchBound sb = compute_search_bound(recip, half, kBudget);
  CHECK(sb.T == 3);
  CHECK(sb.branch_count >= 1);
  CHECK(sb.explored_depth >= 3);
  // every closed branch's recorded parameter is within the bound
  for (const auto& [prefix, s] : sb.certificate) CHECK(s <= sb.T);

  // sampled special names accept at some s <= T
  SplitMix64 rng(0x600d);
  for (int i = 0; i < 200; ++i) {
    SpecialName sp = sampled_special_name(Rat(1, 2), rng.next());
    std::vector<RealName> names{sp.as_name()};
    auto oracles = oracles_of_names(names);
    bool accepted = false;
    for (Nat s = 0; s <= sb.T && !accepted; ++s)
      accepted = eval_operator(recip.E, oracles, s) == 0;
    REQUIRE(accepted);
  }
}

TEST_CASE("search bound: identity gates close at the root") {
  ConditionalSystem lifted = uniform_to_conditional(builtin_uniform("add"));
  std::vector<Rat> point{Rat(3, 7), Rat(-2, 5)};
  SearchBound sb = compute_search_bound(lifted, point, kBudget);
  CHECK(sb.T == 0);
  CHECK(sb.branch_count == 1);
  CHECK(sb.explored_depth == 0);
}

TEST_CASE("search bound: out-of-domain points exhaust the budget") {
  ConditionalSystem recip = builtin_system("reciprocal");
  std::vector<Rat> zero{Rat(0)};
  CHECK_THROWS_AS(compute_search_bound(recip, zero, Nat(2000)), BudgetExhaustedError);
}

TEST_CASE("search bound after normalization stays finite") {
  ConditionalSystem norm = normalize_system(builtin_system("reciprocal"));
  std::vector<Rat> half{Rat(1, 2)};
  SearchBound sb = compute_search_bound(norm, half, kBudget);
  SplitMix64 rng(0x57a7);
  for (int i = 0; i < 200; ++i) {
    SpecialName sp = sampled_special_name(Rat(1, 2), rng.next());
    std::vector<RealName> names{sp.as_name()};
    auto oracles = oracles_of_names(names);
    bool accepted = false;
    for (Nat s = 0; s <= sb.T && !accepted; ++s)
      accepted = eval_operator(norm.E, oracles, s) == 0;
    REQUIRE(accepted);
  }
}

TEST_CASE("piecewise rescaled names obey the two-zone inequalities") {
  ConditionalSystem recip = builtin_system("reciprocal");
  TZConditionalWitness w = operators_to_tz_conditional(recip);
  SplitMix64 rng(0x5a5a);
  for (int i = 0; i < 40; ++i) {
    Rat xi = testutil::random_rational(rng, 1, 5);
    Nat s = 2 + rng.below(8), t = rng.below(20);
    Nat i0 = w.tables->d0_fn(s), i1 = w.tables->d_fn(s, t);
    RationalApprox a0 = sample_approx_within(xi, i0, rng, rng.coin());
    RationalApprox a1 = sample_approx_within(xi, i1, rng, rng.coin());
    Rat v1 = a1.value();
    Nat vp = w.tables->v_prime_fn(s);
    for (Nat x = 0; x <= vp + 20; ++x) {
      Nat f1 = x <= vp ? ehelp(a0.p, a0.q, a0.r, x) : ehelp(a1.p, a1.q, a1.r, x);
      Nat g1 = x <= vp ? ehelp(a0.q, a0.p, a0.r, x) : ehelp(a1.q, a1.p, a1.r, x);
      Rat dev = rat_abs(Rat(Int(f1) - Int(g1), Int(x) + 1) - v1);
      if (x <= vp)
        REQUIRE(dev <= Rat(5, 6 * (Int(x) + 1)));
      else
        REQUIRE(dev <= Rat(1, 2 * (Int(x) + 1)));
    }
  }
}

TEST_CASE("translated objects serialize with their construction recipe") {
  ConditionalSystem recip = builtin_system("reciprocal");
  std::string sidecar;
  TZConditionalWitness w = operators_to_tz_conditional(recip, &sidecar);
  CHECK(sidecar.find("cond-to-tz") != std::string::npos);
  CHECK(sidecar.find("6v'(s) + 5") != std::string::npos);

  std::string text = write_object_text(w);
  CHECK(text.find(":source") != std::string::npos);
  TZConditionalWitness back = load_tz_conditional(text);
  CHECK(write_object_text(back) == text);
  auto out = eval_tz_conditional(back, names_of({Rat(1, 2)}), 9, kBudget);
  CHECK(within(out, Rat(2), 9));

  // and one level deeper: the system built back from the witness
  ConditionalSystem sys2 = tz_to_operators_conditional(w);
  std::string text2 = write_object_text(sys2);
  ConditionalSystem back2 = load_conditional_system(text2);
  CHECK(write_object_text(back2) == text2);
  auto out2 = eval_conditional(back2, names_of({Rat(1, 2)}), 9, kBudget);
  CHECK(within(out2, Rat(2), 9));
}

TEST_CASE("translation requires moduli: a majorant-free native fails early") {
  ConditionalSystem sys = builtin_system("reciprocal");
  // the native feeds an oracle application, so its bound is indispensable
  sys.E = ot_apply(1, ot_base(bf_native("nomaj.demo"), {ot_var(3)}));
  sys.normalized = true;
  CHECK_THROWS_AS(operators_to_tz_conditional(sys), MissingMajorantError);
}
