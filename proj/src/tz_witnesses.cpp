#include "condreal/tz_witnesses.hpp"

#include <sstream>

#include "condreal/computing_systems.hpp"
#include "condreal/errors.hpp"

namespace condreal {

namespace {

Nat eval1(const BaseFnPtr& f, const Nat& a) {
  std::vector<Nat> args{a};
  return eval_base(*f, args);
}

Nat eval2(const BaseFnPtr& f, const Nat& a, const Nat& b) {
  std::vector<Nat> args{a, b};
  return eval_base(*f, args);
}

void push_reads(std::vector<Nat>& out, std::span<const RealName> names, const Nat& idx) {
  for (const auto& n : names) {
    out.push_back(n.f(idx));
    out.push_back(n.g(idx));
    out.push_back(n.h(idx));
  }
}

Nat zero_reads_max(std::span<const RealName> names) {
  Nat m = 0;
  for (const auto& n : names) m = nat_max(m, nat_max(n.f(0), n.g(0)));
  return m;
}

}  // namespace

RationalApprox eval_tz_uniform(const TZUniformWitness& w, std::span<const RealName> names,
                               const Nat& t) {
  if (names.size() != w.k) throw ArityError("eval_tz_uniform: wrong number of names");
  // |xi_i| < max(f_i(0), g_i(0)) + 1, so t' caps every argument's magnitude
  Nat tp = nat_max(t, zero_reads_max(names));
  Nat idx = eval1(w.d, tp);
  std::vector<Nat> args;
  push_reads(args, names, idx);
  args.push_back(tp);
  return {eval_base(*w.f, args), eval_base(*w.g, args), eval_base(*w.h, args)};
}

RationalApprox eval_tz_conditional(const TZConditionalWitness& w, std::span<const RealName> names,
                                   const Nat& t, const Nat& budget) {
  if (names.size() != w.k) throw ArityError("eval_tz_conditional: wrong number of names");
  Nat floor_s = zero_reads_max(names);
  Nat sp = 0;
  while (sp <= budget) {
    Nat s = nat_max(floor_s, sp);
    Nat i0 = eval1(w.d0, s);
    std::vector<Nat> args0;
    push_reads(args0, names, i0);
    args0.push_back(s);
    if (eval_base(*w.e, args0) == 0) {
      Nat i1 = eval2(w.d, s, t);
      std::vector<Nat> full(args0.begin(), args0.end() - 1);
      push_reads(full, names, i1);
      full.push_back(s);
      full.push_back(t);
      return {eval_base(*w.f, full), eval_base(*w.g, full), eval_base(*w.h, full)};
    }
    // every sp <= s produces the same s; skip the equivalent tests
    sp = nat_max(sp + 1, s + 1);
  }
  throw BudgetExhaustedError("TZ parameter search", budget.str());
}

// --- checker -------------------------------------------------------------------

namespace {

struct OracleCache {
  const PointOracle& oracle;
  std::span<const Rat> xs;

  // Decides |candidate - theta| < delta; retries with a tighter bracket when
  // the answer sits inside the noise band.  Returns +1 (violated: >= delta
  // for every value in the bracket), 0 (satisfied for every value), -1
  // (indeterminate; impossible unless the oracle stops shrinking).
  int violates(const Rat& candidate, const Rat& delta) {
    Rat eps = delta / 1024;
    for (int round = 0; round < 12; ++round) {
      ValueBracket b = oracle(xs, eps);
      if (b.lo > candidate - delta && b.hi < candidate + delta) return 0;
      if (b.hi <= candidate - delta || b.lo >= candidate + delta) return 1;
      eps /= 1024;
    }
    return -1;
  }
};

}  // namespace

CheckReport check_tz_conditional_at_point(const TZConditionalWitness& w, std::span<const Rat> xs,
                                          const PointOracle& oracle, const Nat& t_max,
                                          const Nat& samples, std::uint64_t seed) {
  if (xs.size() != w.k) throw ArityError("check: wrong number of coordinates");
  CheckReport report;
  SplitMix64 rng(seed ^ 0x7a5c3b19d2e4f681ULL);
  OracleCache value{oracle, xs};

  auto sample_tuple = [&](const Nat& precision_index, bool extreme) {
    std::vector<RationalApprox> tuple;
    for (const Rat& xi : xs) tuple.push_back(sample_approx_within(xi, precision_index, rng, extreme));
    return tuple;
  };
  auto flatten = [](const std::vector<RationalApprox>& tuple, std::vector<Nat>& out) {
    for (const auto& a : tuple) {
      out.push_back(a.p);
      out.push_back(a.q);
      out.push_back(a.r);
    }
  };

  // Empirical estimate of the acceptance threshold s0: the start of a run of
  // accepting parameters.  Only finitely many parameters and samples are
  // inspected, so this supports but never proves condition (1).
  const unsigned kRun = 8, kProbes = 12;
  Nat s_cap = 65536;
  Nat run_start = 0, run_len = 0;
  for (Nat s = 0; s <= s_cap && run_len < kRun; ++s) {
    Nat i0 = eval1(w.d0, s);
    bool accepted = true;
    for (unsigned p = 0; p < kProbes && accepted; ++p) {
      std::vector<Nat> args;
      flatten(sample_tuple(i0, p % 2 == 0), args);
      args.push_back(s);
      accepted = eval_base(*w.e, args) == 0;
    }
    if (accepted) {
      if (run_len == 0) run_start = s;
      ++run_len;
    } else {
      run_len = 0;
    }
  }
  if (run_len >= kRun) {
    report.s0_estimate = run_start;
  } else {
    report.violations.push_back({"acceptance", s_cap, 0, {}, {}, {},
                                 "no run of accepting parameters found while scanning s <= " +
                                     s_cap.str()});
  }

  std::ostringstream note;
  note << "condition (1) verified empirically only: acceptance sampled at finitely many "
          "parameters (scan cap "
       << s_cap.str() << "); existence of s0 is not provable from samples";
  report.note = note.str();

  // Condition (2): accepted data at the declared precisions must land within
  // 1/(t+1) of the value.
  Nat s_min = 0;
  for (const Rat& xi : xs) {
    Int need = rat_ceil(rat_abs(xi)) - 1;
    if (need > 0) s_min = nat_max(s_min, Nat(need));
  }
  Nat s_hi = report.s0_estimate ? Nat(*report.s0_estimate + 8) : Nat(64);
  if (s_hi < s_min) s_hi = s_min;

  for (Nat i = 0; i < samples; ++i) {
    report.samples_run += 1;
    Nat s = rng.nat_between(s_min, s_hi);
    Nat i0 = eval1(w.d0, s);
    auto tuple0 = sample_tuple(i0, rng.below(2) == 0);
    std::vector<Nat> args0;
    flatten(tuple0, args0);
    args0.push_back(s);
    if (eval_base(*w.e, args0) != 0) {
      if (report.s0_estimate && s >= *report.s0_estimate) {
        report.violations.push_back({"acceptance", s, 0, tuple0, {}, {},
                                     "e rejected data at precision d0(s) past the empirical s0"});
      }
      continue;  // premise (acceptance) does not hold; nothing to check
    }
    Nat t;
    switch (rng.below(3)) {
      case 0: t = t_max; break;
      case 1: t = rng.nat_between(0, t_max); break;
      default: t = rng.nat_between(0, nat_min(t_max, Nat(8))); break;
    }
    Nat i1 = eval2(w.d, s, t);
    auto tuple1 = sample_tuple(i1, rng.below(2) == 0);
    std::vector<Nat> full(args0.begin(), args0.end() - 1);
    flatten(tuple1, full);
    full.push_back(s);
    full.push_back(t);
    RationalApprox out{eval_base(*w.f, full), eval_base(*w.g, full), eval_base(*w.h, full)};
    int verdict = value.violates(out.value(), Rat(1, Int(t) + 1));
    if (verdict == 0) continue;
    report.violations.push_back(
        {verdict > 0 ? "precision" : "indeterminate", s, t, tuple0, tuple1, out,
         verdict > 0 ? "output misses the value by at least 1/(t+1)"
                     : "oracle could not separate the output from the tolerance"});
  }
  return report;
}

std::string CheckReport::replay_text() const {
  std::ostringstream os;
  os << "violations " << violations.size() << "\n";
  std::size_t idx = 0;
  for (const auto& v : violations) {
    os << "case " << idx++ << "\n";
    os << "  kind " << v.kind << "\n";
    os << "  s " << v.s.str() << "\n";
    os << "  t " << v.t.str() << "\n";
    os << "  approx0";
    for (const auto& a : v.approx0) os << " " << a.str();
    os << "\n  approx1";
    for (const auto& a : v.approx1) os << " " << a.str();
    os << "\n  output " << v.output.str() << "\n";
    os << "  detail " << v.detail << "\n";
  }
  return os.str();
}

// --- serialization ---------------------------------------------------------------

SExpr tz_uniform_to_sexpr(const TZUniformWitness& w) {
  return SExpr::list({SExpr::sym("tz-uniform"), SExpr::sym(":k"), SExpr::num(w.k),
                      SExpr::sym(":d"), base_function_to_sexpr(*w.d), SExpr::sym(":f"),
                      base_function_to_sexpr(*w.f), SExpr::sym(":g"), base_function_to_sexpr(*w.g),
                      SExpr::sym(":h"), base_function_to_sexpr(*w.h)});
}

SExpr tz_conditional_to_sexpr(const TZConditionalWitness& w) {
  return SExpr::list({SExpr::sym("tz-conditional"), SExpr::sym(":k"), SExpr::num(w.k),
                      SExpr::sym(":d0"), base_function_to_sexpr(*w.d0), SExpr::sym(":d"),
                      base_function_to_sexpr(*w.d), SExpr::sym(":e"), base_function_to_sexpr(*w.e),
                      SExpr::sym(":f"), base_function_to_sexpr(*w.f), SExpr::sym(":g"),
                      base_function_to_sexpr(*w.g), SExpr::sym(":h"),
                      base_function_to_sexpr(*w.h)});
}

namespace {

unsigned witness_k(const SExpr& e) {
  const SExpr& k = require_slot(e, ":k");
  if (k.kind != SExpr::Kind::Number) throw ParseError("slot :k must be a number", k.position);
  return static_cast<unsigned>(k.number);
}

BaseFnPtr slot_fn(const SExpr& e, const std::string& name, unsigned arity) {
  BaseFnPtr f = base_function_from_sexpr(require_slot(e, name));
  if (f->arity() != arity)
    throw ParseError("slot " + name + " must have arity " + std::to_string(arity),
                     require_slot(e, name).position);
  return f;
}

}  // namespace

TZUniformWitness tz_uniform_from_sexpr(const SExpr& e) {
  if (!e.is_list() || e.items.empty() || !e.items[0].is_symbol("tz-uniform"))
    throw ParseError("expected (tz-uniform ...)", e.position);
  TZUniformWitness w;
  w.k = witness_k(e);
  w.d = slot_fn(e, ":d", 1);
  w.f = slot_fn(e, ":f", 3 * w.k + 1);
  w.g = slot_fn(e, ":g", 3 * w.k + 1);
  w.h = slot_fn(e, ":h", 3 * w.k + 1);
  return w;
}

TZConditionalWitness tz_conditional_from_sexpr(const SExpr& e) {
  if (!e.is_list() || e.items.empty() || !e.items[0].is_symbol("tz-conditional"))
    throw ParseError("expected (tz-conditional ...)", e.position);
  TZConditionalWitness w;
  w.k = witness_k(e);
  w.d0 = slot_fn(e, ":d0", 1);
  w.d = slot_fn(e, ":d", 2);
  w.e = slot_fn(e, ":e", 3 * w.k + 1);
  w.f = slot_fn(e, ":f", 6 * w.k + 2);
  w.g = slot_fn(e, ":g", 6 * w.k + 2);
  w.h = slot_fn(e, ":h", 6 * w.k + 2);
  return w;
}

}  // namespace condreal
