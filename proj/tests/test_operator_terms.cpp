#include <doctest.h>

#include "condreal/errors.hpp"
#include "condreal/operator_terms.hpp"
#include "testutil.hpp"

using namespace condreal;

namespace {

Nat ev(const OperatorTerm& t, std::vector<FunctionOracle> oracles, long x) {
  return eval_operator(t, oracles, Nat(x));
}

}  // namespace

TEST_CASE("operator evaluation: the three node kinds") {
  OperatorTerm var = ot_var(1);
  CHECK(ev(var, {FunctionOracle::identity()}, 7) == 7);

  // base(mul, f(x), x) with f = successor at x = 3: 4*3
  OperatorTerm t = ot_base(bf_mul(), {ot_apply(1, ot_var(1)), ot_var(1)});
  FunctionOracle succ([](const Nat& n) { return Nat(n + 1); });
  CHECK(ev(t, {succ}, 3) == 12);

  // f(f(1)) with f = doubling
  OperatorTerm dd = ot_apply(1, ot_apply(1, ot_var(1)));
  FunctionOracle dbl([](const Nat& n) { return Nat(2 * n); });
  CHECK(ev(dd, {dbl}, 1) == 4);

  CHECK_THROWS_AS(eval_operator(dd, std::vector<FunctionOracle>{}, Nat(0)), ArityError);
}

TEST_CASE("composition: structural substitution") {
  // identity absorbs
  OperatorTerm var1 = ot_var(1);
  std::vector<OperatorTerm> inner1{ot_apply(1, ot_var(1))};
  OperatorTerm c1 = compose_operators(var1, inner1);
  CHECK(write_operator_term(c1) == write_operator_term(ot_var(1)));

  // outer = f1(x), inner = f2(x) over two oracles: composes to f2(x)
  OperatorTerm outer = ot_apply(1, ot_var(1));
  std::vector<OperatorTerm> inners{ot_apply(2, ot_var(2))};
  OperatorTerm c2 = compose_operators(outer, inners);
  CHECK(write_operator_term(c2) == write_operator_term(ot_apply(2, ot_var(2))));

  // outer = mul(f1(x), x), inner = x: squaring
  OperatorTerm outer3 = ot_base(bf_mul(), {ot_apply(1, ot_var(1)), ot_var(1)});
  std::vector<OperatorTerm> inners3{ot_var(1)};
  OperatorTerm c3 = compose_operators(outer3, inners3);
  CHECK(write_operator_term(c3) ==
        write_operator_term(ot_base(bf_mul(), {ot_var(1), ot_var(1)})));
}

TEST_CASE("modulus: bounding semantics") {
  FunctionOracle g_lin([](const Nat& x) { return Nat(2 * x + 2); },
                       [](const Nat& x) { return Nat(2 * x + 2); });
  CHECK(modulus(ot_var(1), g_lin, Nat(7)) == 0);

  OperatorTerm dd = ot_apply(1, ot_apply(1, ot_var(1)));
  CHECK(modulus(dd, g_lin, Nat(1)) == 4);  // inner argument 1, outer argument g(1)=4

  OperatorTerm one = ot_apply(1, ot_var(1));
  FunctionOracle g_any([](const Nat& x) { return Nat(5 * x + 3); });
  CHECK(modulus(one, g_any, Nat(9)) == 9);
}

TEST_CASE("continuity: agreement below the modulus fixes the value") {
  SplitMix64 rng(0x11a2);
  int trials = 1000;
  for (int i = 0; i < trials; ++i) {
    unsigned n = 1 + static_cast<unsigned>(rng.below(3));
    OperatorTerm term = testutil::random_operator_term(rng, n, 5);
    FunctionOracle g = testutil::random_monotone(rng);
    Nat x = rng.below(20);
    Nat z = modulus(term, g, x);
    std::uint64_t seed = rng.next(), fork = rng.next() | 1;
    std::vector<FunctionOracle> fs, fs2;
    for (unsigned j = 0; j < n; ++j) {
      fs.push_back(testutil::dominated_oracle(g, seed + j, 0, z));
      fs2.push_back(testutil::dominated_oracle(g, seed + j, fork, z));
    }
    REQUIRE(eval_operator(term, fs, x) == eval_operator(term, fs2, x));
  }
}

TEST_CASE("composition coherence against curried evaluation") {
  SplitMix64 rng(0x22b3);
  for (int i = 0; i < 1000; ++i) {
    unsigned n = 1 + static_cast<unsigned>(rng.below(2));
    unsigned k = 1 + static_cast<unsigned>(rng.below(2));
    OperatorTerm outer = testutil::random_operator_term(rng, k, 3);
    std::vector<OperatorTerm> inners;
    for (unsigned j = 0; j < k; ++j) inners.push_back(testutil::random_operator_term(rng, n, 3));
    OperatorTerm composed = compose_operators(outer, inners);
    std::vector<FunctionOracle> fs;
    std::uint64_t seed = rng.next();
    for (unsigned j = 0; j < n; ++j)
      fs.push_back(FunctionOracle([seed, j](const Nat& x) {
        return Nat(mix_index(seed + j, x, 3) % 50);
      }));
    std::vector<FunctionOracle> curried;
    for (unsigned j = 0; j < k; ++j) {
      OperatorTerm inner = inners[j];
      curried.push_back(
          FunctionOracle([inner, fs](const Nat& x) { return eval_operator(inner, fs, x); }));
    }
    Nat x = rng.below(15);
    REQUIRE(eval_operator(composed, fs, x) == eval_operator(outer, curried, x));
  }
}

TEST_CASE("the modulus is itself a term over the majorant") {
  SplitMix64 rng(0x33c4);
  for (int i = 0; i < 1000; ++i) {
    unsigned n = 1 + static_cast<unsigned>(rng.below(3));
    OperatorTerm term = testutil::random_operator_term(rng, n, 4);
    OperatorTerm omega = derive_modulus_term(term);
    CHECK(omega.fn_arity() == 1);
    FunctionOracle g = testutil::random_monotone(rng);
    Nat x = rng.below(12);
    std::vector<FunctionOracle> gs{g};
    REQUIRE(eval_operator(omega, gs, x) == modulus(term, g, x));
  }
}

TEST_CASE("oracle memoization is observationally invisible") {
  int calls = 0;
  FunctionOracle raw([&calls](const Nat& x) {
    ++calls;
    return Nat(x * x);
  });
  FunctionOracle memo = raw.memoized();
  CHECK(memo(Nat(5)) == 25);
  CHECK(memo(Nat(5)) == 25);
  CHECK(calls == 1);
  CHECK(memo(Nat(6)) == 36);
  CHECK(calls == 2);
}

TEST_CASE("term serialization round-trips bit-exactly") {
  SplitMix64 rng(0x44d5);
  for (int i = 0; i < 300; ++i) {
    unsigned n = 1 + static_cast<unsigned>(rng.below(3));
    OperatorTerm term = testutil::random_operator_term(rng, n, 4);
    std::string text = write_operator_term(term);
    OperatorTerm back = parse_operator_term(text, n);
    CHECK(write_operator_term(back) == text);
  }
  CHECK_THROWS_AS(parse_operator_term("(apply 3 x)", 2), ParseError);
  CHECK_THROWS_AS(parse_operator_term("(base (mul) x)", 1), ParseError);
}

TEST_CASE("value bounds dominate actual values") {
  SplitMix64 rng(0x55e6);
  for (int i = 0; i < 400; ++i) {
    unsigned n = 1 + static_cast<unsigned>(rng.below(2));
    OperatorTerm term = testutil::random_operator_term(rng, n, 4);
    FunctionOracle g = testutil::random_monotone(rng);
    Nat x = rng.below(15);
    std::vector<FunctionOracle> fs;
    std::uint64_t seed = rng.next();
    for (unsigned j = 0; j < n; ++j) fs.push_back(testutil::dominated_oracle(g, seed + j, 0, Nat(0)));
    REQUIRE(value_bound(term, g, x) >= eval_operator(term, fs, x));
  }
}
