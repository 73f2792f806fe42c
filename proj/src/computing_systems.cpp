#include "condreal/computing_systems.hpp"

#include <optional>

#include "condreal/errors.hpp"

namespace condreal {

std::vector<FunctionOracle> oracles_of_names(std::span<const RealName> names) {
  std::vector<FunctionOracle> out;
  out.reserve(names.size() * 3);
  for (const auto& n : names) {
    out.push_back(n.f.memoized());
    out.push_back(n.g.memoized());
    out.push_back(n.h.memoized());
  }
  return out;
}

RationalApprox eval_uniform(const UniformSystem& sys, std::span<const RealName> names,
                            const Nat& t) {
  if (names.size() != sys.k) throw ArityError("eval_uniform: wrong number of names");
  auto oracles = oracles_of_names(names);
  return {eval_operator(sys.F, oracles, t), eval_operator(sys.G, oracles, t),
          eval_operator(sys.H, oracles, t)};
}

namespace {

Nat find_parameter_on(const ConditionalSystem& sys, std::span<const FunctionOracle> oracles,
                      const Nat& budget) {
  for (Nat s = 0; s <= budget; ++s)
    if (eval_operator(sys.E, oracles, s) == 0) return s;
  throw BudgetExhaustedError("parameter search", budget.str());
}

}  // namespace

Nat find_parameter(const ConditionalSystem& sys, std::span<const RealName> names,
                   const Nat& budget) {
  if (names.size() != sys.k) throw ArityError("find_parameter: wrong number of names");
  auto oracles = oracles_of_names(names);
  return find_parameter_on(sys, oracles, budget);
}

RationalApprox eval_conditional(const ConditionalSystem& sys, std::span<const RealName> names,
                                const Nat& t, const Nat& budget) {
  if (names.size() != sys.k) throw ArityError("eval_conditional: wrong number of names");
  auto oracles = oracles_of_names(names);
  Nat s = find_parameter_on(sys, oracles, budget);
  oracles.push_back(constant_oracle(s));
  return {eval_operator(sys.F, oracles, t), eval_operator(sys.G, oracles, t),
          eval_operator(sys.H, oracles, t)};
}

RationalApprox eval_conditional_at(const ConditionalSystem& sys, std::span<const RealName> names,
                                   const Nat& s, const Nat& t) {
  if (names.size() != sys.k) throw ArityError("eval_conditional_at: wrong number of names");
  auto oracles = oracles_of_names(names);
  oracles.push_back(constant_oracle(s));
  return {eval_operator(sys.F, oracles, t), eval_operator(sys.G, oracles, t),
          eval_operator(sys.H, oracles, t)};
}

ConditionalSystem uniform_to_conditional(const UniformSystem& sys) {
  ConditionalSystem out;
  out.k = sys.k;
  out.E = ot_var(3 * sys.k);
  out.F = with_fn_arity(sys.F, 3 * sys.k + 1);
  out.G = with_fn_arity(sys.G, 3 * sys.k + 1);
  out.H = with_fn_arity(sys.H, 3 * sys.k + 1);
  // The identity gate accepts s = 0 for every input, so special names need
  // no search at all.
  out.normalized = true;
  return out;
}

// --- composition -------------------------------------------------------------

namespace {

struct ComposeCtx {
  unsigned m, k, work_arity, tmp;
  std::span<const ConditionalSystem> inners;
  BaseFnPtr unfst, unsnd, or2;
  std::vector<std::optional<OperatorTerm>> prep_cache;  // 3m slots

  OperatorTerm s_source() const { return ot_apply(tmp, ot_const(work_arity, 0)); }

  // Decoded parameter components: slot(i) for i = 1..m, slot(0) = the
  // outer's own parameter (innermost right component).
  OperatorTerm slot(unsigned i) const {
    OperatorTerm t = s_source();
    if (i == 0) {
      for (unsigned j = 0; j < m; ++j) t = ot_base(unsnd, {t});
      return t;
    }
    for (unsigned j = 0; j + 1 < i; ++j) t = ot_base(unsnd, {t});
    return ot_base(unfst, {t});
  }

  // Inner value component (F/G/H of inner i) with its parameter slot bound
  // to slot(i); still has its variable free, for binding to the query point.
  const OperatorTerm& prepared(unsigned j) {  // j = 1..3m, outer oracle slot
    auto& cached = prep_cache[j - 1];
    if (!cached) {
      unsigned i = (j - 1) / 3 + 1;
      unsigned c = (j - 1) % 3;
      const ConditionalSystem& inner = inners[i - 1];
      const OperatorTerm& comp = c == 0 ? inner.F : c == 1 ? inner.G : inner.H;
      cached = substitute_oracle_constant(with_fn_arity(comp, work_arity), 3 * k + 1, slot(i));
    }
    return *cached;
  }

  // Replaces every outer oracle application by the prepared inner component
  // bound at the (already rewritten) query point.
  OperatorTerm inline_outer(const OperatorTerm& term) {
    std::unordered_map<const OperatorTerm::Node*, OperatorTerm::NodePtr> memo;
    auto rec = [&](auto&& self, const OperatorTerm::NodePtr& n) -> OperatorTerm::NodePtr {
      auto it = memo.find(n.get());
      if (it != memo.end()) return it->second;
      OperatorTerm::NodePtr out = std::visit(
          [&](const auto& v) -> OperatorTerm::NodePtr {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, OperatorTerm::Var>) {
              return n;
            } else if constexpr (std::is_same_v<T, OperatorTerm::Apply>) {
              auto arg = self(self, v.arg);
              if (v.index <= 3 * m)
                return substitute_var(prepared(v.index), OperatorTerm(work_arity, arg)).root();
              return std::make_shared<OperatorTerm::Node>(
                  OperatorTerm::Node{OperatorTerm::Apply{v.index, arg}});
            } else {
              std::vector<OperatorTerm::NodePtr> args;
              for (const auto& a : v.args) args.push_back(self(self, a));
              return std::make_shared<OperatorTerm::Node>(
                  OperatorTerm::Node{OperatorTerm::BaseApp{v.fn, std::move(args)}});
            }
          },
          n->v);
      memo.emplace(n.get(), out);
      return out;
    };
    return OperatorTerm(work_arity, rec(rec, term.root()));
  }

  OperatorTerm finish(const OperatorTerm& term, const OperatorTerm& s_value,
                      unsigned final_arity) {
    OperatorTerm resolved = substitute_oracle_constant(term, tmp, s_value);
    return with_fn_arity(OperatorTerm(final_arity, resolved.root()), final_arity);
  }
};

}  // namespace

ConditionalSystem compose_conditional(const ConditionalSystem& outer,
                                      std::span<const ConditionalSystem> inners) {
  if (inners.size() != outer.k)
    throw ArityError("compose_conditional: outer is " + std::to_string(outer.k) +
                     "-ary but got " + std::to_string(inners.size()) + " inner systems");
  if (inners.empty()) throw ArityError("compose_conditional: needs at least one inner system");
  unsigned k = inners.front().k;
  for (const auto& s : inners)
    if (s.k != k) throw ArityError("compose_conditional: inner systems disagree on arity");
  unsigned m = outer.k;

  ComposeCtx ctx;
  ctx.m = m;
  ctx.k = k;
  ctx.work_arity = std::max(3 * m + 1, 3 * k + 1) + 1;
  ctx.tmp = ctx.work_arity;
  ctx.inners = inners;
  ctx.unfst = bf_native("cunfst");
  ctx.unsnd = bf_native("cunsnd");
  ctx.or2 = bf_native("or2");
  ctx.prep_cache.resize(3 * m);

  // Gate: all inner gates accept their decoded parameters, and the outer
  // gate accepts its decoded parameter on the inner-produced value names.
  OperatorTerm combined;
  bool first = true;
  for (unsigned i = 1; i <= m; ++i) {
    OperatorTerm part =
        substitute_var(with_fn_arity(inners[i - 1].E, ctx.work_arity), ctx.slot(i));
    combined = first ? part : ot_base(ctx.or2, {combined, part});
    first = false;
  }
  OperatorTerm outer_part = ctx.inline_outer(
      substitute_var(with_fn_arity(outer.E, ctx.work_arity), ctx.slot(0)));
  combined = first ? outer_part : ot_base(ctx.or2, {combined, outer_part});

  ConditionalSystem out;
  out.k = k;
  out.E = ctx.finish(combined, ot_var(3 * k), 3 * k);

  OperatorTerm s_value = ot_apply(3 * k + 1, ot_const(3 * k + 1, 0));
  auto build_value = [&](const OperatorTerm& outer_comp) {
    OperatorTerm t = with_fn_arity(outer_comp, ctx.work_arity);
    t = substitute_oracle_constant(t, 3 * m + 1, ctx.slot(0));
    t = ctx.inline_outer(t);
    return ctx.finish(t, s_value, 3 * k + 1);
  };
  out.F = build_value(outer.F);
  out.G = build_value(outer.G);
  out.H = build_value(outer.H);
  return out;
}

// --- serialization -----------------------------------------------------------

const SExpr* find_slot(const SExpr& form, const std::string& keyword) {
  for (std::size_t i = 1; i + 1 < form.items.size(); i += 2)
    if (form.items[i].is_symbol(keyword)) return &form.items[i + 1];
  return nullptr;
}

const SExpr& require_slot(const SExpr& form, const std::string& keyword) {
  const SExpr* slot = find_slot(form, keyword);
  if (!slot) throw ParseError("missing slot " + keyword, form.position);
  return *slot;
}

SExpr uniform_system_to_sexpr(const UniformSystem& sys) {
  return SExpr::list({SExpr::sym("uniform-system"), SExpr::sym(":k"), SExpr::num(sys.k),
                      SExpr::sym(":F"), operator_term_to_sexpr(sys.F), SExpr::sym(":G"),
                      operator_term_to_sexpr(sys.G), SExpr::sym(":H"),
                      operator_term_to_sexpr(sys.H)});
}

SExpr conditional_system_to_sexpr(const ConditionalSystem& sys) {
  std::vector<SExpr> items{SExpr::sym("conditional-system"), SExpr::sym(":k"), SExpr::num(sys.k),
                           SExpr::sym(":E"), operator_term_to_sexpr(sys.E),
                           SExpr::sym(":F"), operator_term_to_sexpr(sys.F),
                           SExpr::sym(":G"), operator_term_to_sexpr(sys.G),
                           SExpr::sym(":H"), operator_term_to_sexpr(sys.H)};
  if (sys.normalized) {
    items.push_back(SExpr::sym(":normalized"));
    items.push_back(SExpr::num(1));
  }
  return SExpr::list(std::move(items));
}

namespace {

unsigned slot_k(const SExpr& form) {
  const SExpr& k = require_slot(form, ":k");
  if (k.kind != SExpr::Kind::Number) throw ParseError("slot :k must be a number", k.position);
  return static_cast<unsigned>(k.number);
}

}  // namespace

UniformSystem uniform_system_from_sexpr(const SExpr& e) {
  if (!e.is_list() || e.items.empty() || !e.items[0].is_symbol("uniform-system"))
    throw ParseError("expected (uniform-system ...)", e.position);
  UniformSystem sys;
  sys.k = slot_k(e);
  sys.F = operator_term_from_sexpr(require_slot(e, ":F"), 3 * sys.k);
  sys.G = operator_term_from_sexpr(require_slot(e, ":G"), 3 * sys.k);
  sys.H = operator_term_from_sexpr(require_slot(e, ":H"), 3 * sys.k);
  return sys;
}

ConditionalSystem conditional_system_from_sexpr(const SExpr& e) {
  if (!e.is_list() || e.items.empty() || !e.items[0].is_symbol("conditional-system"))
    throw ParseError("expected (conditional-system ...)", e.position);
  ConditionalSystem sys;
  sys.k = slot_k(e);
  sys.E = operator_term_from_sexpr(require_slot(e, ":E"), 3 * sys.k);
  sys.F = operator_term_from_sexpr(require_slot(e, ":F"), 3 * sys.k + 1);
  sys.G = operator_term_from_sexpr(require_slot(e, ":G"), 3 * sys.k + 1);
  sys.H = operator_term_from_sexpr(require_slot(e, ":H"), 3 * sys.k + 1);
  if (const SExpr* n = find_slot(e, ":normalized"))
    sys.normalized = n->kind == SExpr::Kind::Number && n->number == 1;
  return sys;
}

}  // namespace condreal
