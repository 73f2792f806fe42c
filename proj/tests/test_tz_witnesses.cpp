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

// Exactly tight identity witness, fully term-backed: approximations at
// precision 1/(t+1) pass through unchanged.
TZConditionalWitness tight_identity_witness() {
  TZConditionalWitness w;
  w.k = 1;
  w.d0 = bf_constant(0);
  w.d = bf_proj(2, 2);
  w.e = bf_at_arity(bf_constant(0), 4);
  w.f = bf_proj(8, 4);
  w.g = bf_proj(8, 5);
  w.h = bf_proj(8, 6);
  return w;
}

PointOracle exact_oracle(const Rat& v) {
  return [v](std::span<const Rat>, const Rat&) { return ValueBracket{v, v}; };
}

}  // namespace

TEST_CASE("uniform witness evaluation from translated systems") {
  TZUniformWitness add_w = operators_to_tz_uniform(builtin_uniform("add"));
  auto sum = eval_tz_uniform(add_w, names_of({Rat(1, 3), Rat(1, 6)}), 11);
  CHECK(within(sum, Rat(1, 2), 11));

  TZUniformWitness id_w = operators_to_tz_uniform(builtin_uniform("id"));
  auto z = eval_tz_uniform(id_w, names_of({Rat(0)}), 23);
  CHECK(within(z, Rat(0), 23));

  TZUniformWitness mul_w = operators_to_tz_uniform(builtin_uniform("mul"));
  auto prod = eval_tz_uniform(mul_w, names_of({Rat(2), Rat(3)}), 99);
  CHECK(within(prod, Rat(6), 99));
}

TEST_CASE("conditional witness evaluation from translated systems") {
  TZConditionalWitness recip_w = operators_to_tz_conditional(builtin_system("reciprocal"));
  auto two = eval_tz_conditional(recip_w, names_of({Rat(1, 2)}), 9, kBudget);
  CHECK(within(two, Rat(2), 9));

  // uniform -> conditional -> TZ chain for addition
  TZConditionalWitness add_w =
      operators_to_tz_conditional(uniform_to_conditional(builtin_uniform("add")));
  auto sum = eval_tz_conditional(add_w, names_of({Rat(1, 3), Rat(1, 6)}), 11, kBudget);
  CHECK(within(sum, Rat(1, 2), 11));

  CHECK_THROWS_AS(eval_tz_conditional(recip_w, names_of({Rat(0)}), 5, Nat(300)),
                  BudgetExhaustedError);
}

TEST_CASE("witness evaluation is name-independent within the contract") {
  TZConditionalWitness recip_w = operators_to_tz_conditional(builtin_system("reciprocal"));
  SplitMix64 rng(0x77aa);
  for (int i = 0; i < 8; ++i) {
    Rat xi = testutil::random_rational(rng, 1, 5);
    Nat t = 10 + rng.below(30);
    std::vector<RealName> n1{sampled_name(xi, rng.next())};
    std::vector<RealName> n2{sampled_name(xi, rng.next())};
    auto a = eval_tz_conditional(recip_w, n1, t, kBudget);
    auto b = eval_tz_conditional(recip_w, n2, t, kBudget);
    REQUIRE(within(a, 1 / xi, t));
    REQUIRE(within(b, 1 / xi, t));
  }
}

TEST_CASE("the magnitude of a named real is bounded by its index-0 reads") {
  SplitMix64 rng(0x88bb);
  for (int i = 0; i < 200; ++i) {
    Rat xi = testutil::random_rational(rng, -20, 20);
    RealName n = sampled_name(xi, rng.next());
    Nat bound = nat_max(n.f(Nat(0)), n.g(Nat(0)));
    REQUIRE(rat_abs(xi) < Rat(Int(bound) + 1));
  }
}

TEST_CASE("checker: correct witnesses pass at rational points") {
  TZConditionalWitness recip_w = operators_to_tz_conditional(builtin_system("reciprocal"));
  CheckReport r = check_tz_conditional_at_point(recip_w, std::vector<Rat>{Rat(1, 2)},
                                                exact_oracle(Rat(2)), 50, 200, 7);
  CHECK(r.violations.empty());
  CHECK(r.s0_estimate.has_value());
  CHECK(r.note.find("empirically") != std::string::npos);

  TZConditionalWitness id_w = tight_identity_witness();
  CheckReport rz = check_tz_conditional_at_point(id_w, std::vector<Rat>{Rat(0)},
                                                 exact_oracle(Rat(0)), 50, 200, 7);
  CHECK(rz.violations.empty());

  CheckReport rh = check_tz_conditional_at_point(id_w, std::vector<Rat>{Rat(1, 2)},
                                                 exact_oracle(Rat(1, 2)), 50, 300, 7);
  CHECK(rh.violations.empty());
}

TEST_CASE("checker: a one-notch precision sabotage is caught") {
  TZConditionalWitness w = tight_identity_witness();
  // d(s,t) = t monus 1 instead of t: the checker's near-boundary samples at
  // coarse denominators must cross the tolerance
  w.d = parse_base_function("(subst (monus) (proj 2 2) (subst (const 1) (proj 2 1)))");
  CheckReport r = check_tz_conditional_at_point(w, std::vector<Rat>{Rat(1, 2)},
                                                exact_oracle(Rat(1, 2)), 50, 200, 7);
  CHECK(!r.violations.empty());
  for (const auto& v : r.violations) CHECK(v.kind == "precision");
  std::string replay = r.replay_text();
  CHECK(replay.find("precision") != std::string::npos);
  CHECK(replay.find("output") != std::string::npos);
}

TEST_CASE("checker: translated witnesses at many rational points") {
  SplitMix64 rng(0x99cc);
  TZConditionalWitness recip_w = operators_to_tz_conditional(builtin_system("reciprocal"));
  TZConditionalWitness ln_w = operators_to_tz_conditional(builtin_system("ln"));
  TZConditionalWitness exp_w = operators_to_tz_conditional(builtin_system("exp"));
  TZConditionalWitness add_w =
      operators_to_tz_conditional(uniform_to_conditional(builtin_uniform("add")));
  TZConditionalWitness neg_w =
      operators_to_tz_conditional(uniform_to_conditional(builtin_uniform("negate")));

  auto run = [&](const TZConditionalWitness& w, std::vector<Rat> point, PointOracle oracle) {
    CheckReport r = check_tz_conditional_at_point(w, point, oracle, 40, 500, rng.next());
    CAPTURE(point.front());
    REQUIRE(r.violations.empty());
  };

  for (int i = 0; i < 20; ++i) {
    Rat xi = testutil::random_rational(rng, 1, 5);
    if (rng.coin()) xi = -xi;
    run(recip_w, {xi}, exact_oracle(1 / xi));
  }
  for (int i = 0; i < 20; ++i) {
    Rat xi = testutil::random_rational(rng, 1, 4) + Rat(1, 7);
    run(ln_w, {xi}, [xi](std::span<const Rat>, const Rat& eps) {
      auto b = oracle::ln_value(xi, eps);
      return ValueBracket{b.lo, b.hi};
    });
  }
  for (int i = 0; i < 20; ++i) {
    Rat xi = testutil::random_rational(rng, -2, 2);
    run(exp_w, {xi}, [xi](std::span<const Rat>, const Rat& eps) {
      auto b = oracle::exp_value(xi, eps);
      return ValueBracket{b.lo, b.hi};
    });
  }
  for (int i = 0; i < 20; ++i) {
    Rat a = testutil::random_rational(rng, -6, 6), b = testutil::random_rational(rng, -6, 6);
    run(add_w, {a, b}, exact_oracle(a + b));
  }
  for (int i = 0; i < 20; ++i) {
    Rat a = testutil::random_rational(rng, -6, 6);
    run(neg_w, {a}, exact_oracle(-a));
  }
}

namespace {

// sqrt bracket by integer square roots at a fine power-of-two grid
ValueBracket sqrt_bracket(const Rat& xi, const Rat& eps) {
  Nat scale = 2;
  while (Rat(1, Int(scale)) > eps / 2) scale *= 2;
  Nat grid = Nat(rat_floor(xi * Rat(Int(scale) * Int(scale))));
  Nat root = isqrt(grid);
  return {Rat(Int(root), Int(scale)), Rat(Int(root) + 2, Int(scale))};
}

}  // namespace

TEST_CASE("checker: the remaining builtin witnesses at reduced scale") {
  SplitMix64 rng(0xaacc);
  TZConditionalWitness mul_w =
      operators_to_tz_conditional(uniform_to_conditional(builtin_uniform("mul")));
  TZConditionalWitness id_w2 =
      operators_to_tz_conditional(uniform_to_conditional(builtin_uniform("id")));
  TZConditionalWitness abs_w =
      operators_to_tz_conditional(uniform_to_conditional(builtin_uniform("abs")));
  TZConditionalWitness sub_w =
      operators_to_tz_conditional(uniform_to_conditional(builtin_uniform("sub")));
  TZConditionalWitness sqrt_w = operators_to_tz_conditional(builtin_system("sqrt"));
  TZConditionalWitness sin_w =
      operators_to_tz_conditional(uniform_to_conditional(builtin_uniform("sin")));
  TZConditionalWitness cos_w =
      operators_to_tz_conditional(uniform_to_conditional(builtin_uniform("cos")));

  auto run = [&](const TZConditionalWitness& w, std::vector<Rat> point, PointOracle oracle) {
    CheckReport r = check_tz_conditional_at_point(w, point, oracle, 30, 300, rng.next());
    CAPTURE(point.front());
    REQUIRE(r.violations.empty());
  };
  for (int i = 0; i < 4; ++i) {
    Rat a = testutil::random_rational(rng, -5, 5), b = testutil::random_rational(rng, -5, 5);
    run(mul_w, {a, b}, exact_oracle(a * b));
    run(sub_w, {a, b}, exact_oracle(a - b));
    run(id_w2, {a}, exact_oracle(a));
    run(abs_w, {a}, exact_oracle(rat_abs(a)));
    Rat nn = testutil::random_rational(rng, 0, 6);
    run(sqrt_w, {nn}, [nn](std::span<const Rat>, const Rat& eps) { return sqrt_bracket(nn, eps); });
    run(sin_w, {a}, [a](std::span<const Rat>, const Rat& eps) {
      auto br = oracle::sin_value(a, eps);
      return ValueBracket{br.lo, br.hi};
    });
    run(cos_w, {a}, [a](std::span<const Rat>, const Rat& eps) {
      auto br = oracle::cos_value(a, eps);
      return ValueBracket{br.lo, br.hi};
    });
  }
}

TEST_CASE("witness serialization: term-backed witnesses round-trip bit-exactly") {
  TZConditionalWitness w = tight_identity_witness();
  std::string text = write_object_text(w);
  TZConditionalWitness back = load_tz_conditional(text);
  CHECK(write_object_text(back) == text);
  auto out = eval_tz_conditional(back, names_of({Rat(3, 4)}), 30, kBudget);
  CHECK(within(out, Rat(3, 4), 30));
}

TEST_CASE("witness slot arities are validated") {
  TZConditionalWitness w = tight_identity_witness();
  std::string text = write_object_text(w);
  // swap the binary table for a unary one
  std::string broken = text;
  broken.replace(broken.find("(proj 2 2)"), 10, "(proj 1 1)");
  CHECK_THROWS_AS(load_tz_conditional(broken), ParseError);
}
