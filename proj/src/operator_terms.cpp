#include "condreal/operator_terms.hpp"

#include <map>
#include <mutex>
#include <unordered_map>

#include "condreal/errors.hpp"

namespace condreal {

// --- FunctionOracle ---------------------------------------------------------

struct FunctionOracle::Impl {
  Fn eval;
  Fn majorant;
  // memo state, shared by copies of a memoized oracle
  bool memo = false;
  mutable std::mutex mu;
  mutable std::map<Nat, Nat> cache;
};

FunctionOracle::FunctionOracle(Fn eval, Fn majorant) : impl_(std::make_shared<Impl>()) {
  impl_->eval = std::move(eval);
  impl_->majorant = std::move(majorant);
}

FunctionOracle FunctionOracle::constant(const Nat& s) {
  return FunctionOracle([s](const Nat&) { return s; }, [s](const Nat&) { return s; });
}

FunctionOracle FunctionOracle::identity() {
  return FunctionOracle([](const Nat& x) { return x; }, [](const Nat& x) { return x; });
}

FunctionOracle FunctionOracle::from_base(BaseFnPtr unary) {
  if (unary->arity() != 1) throw ArityError("from_base: oracle must be unary");
  BaseFnPtr fn = std::move(unary);
  return FunctionOracle([fn](const Nat& x) {
    std::vector<Nat> a{x};
    return eval_base(*fn, a);
  });
}

Nat FunctionOracle::operator()(const Nat& x) const {
  if (!impl_) throw Error("empty oracle");
  if (impl_->memo) {
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto it = impl_->cache.find(x);
    if (it != impl_->cache.end()) return it->second;
    Nat v = impl_->eval(x);
    impl_->cache.emplace(x, v);
    return v;
  }
  return impl_->eval(x);
}

bool FunctionOracle::has_majorant() const { return impl_ && impl_->majorant != nullptr; }

Nat FunctionOracle::majorant_at(const Nat& x) const {
  if (!has_majorant()) throw MissingMajorantError("oracle has no majorant");
  return impl_->majorant(x);
}

FunctionOracle FunctionOracle::memoized() const {
  if (!impl_) throw Error("empty oracle");
  FunctionOracle out;
  out.impl_ = std::make_shared<Impl>();
  auto inner = impl_;
  out.impl_->eval = [inner](const Nat& x) { return inner->eval(x); };
  out.impl_->majorant = impl_->majorant;
  out.impl_->memo = true;
  return out;
}

// --- term builders ----------------------------------------------------------

namespace {

using Node = OperatorTerm::Node;
using NodePtr = OperatorTerm::NodePtr;

NodePtr mk(std::variant<OperatorTerm::Var, OperatorTerm::Apply, OperatorTerm::BaseApp> v) {
  return std::make_shared<Node>(Node{std::move(v)});
}

}  // namespace

OperatorTerm ot_var(unsigned fn_arity) { return OperatorTerm(fn_arity, mk(OperatorTerm::Var{})); }

OperatorTerm ot_apply(unsigned index, const OperatorTerm& arg) {
  if (index == 0 || index > arg.fn_arity())
    throw ArityError("apply: oracle index " + std::to_string(index) + " out of range for arity " +
                     std::to_string(arg.fn_arity()));
  return OperatorTerm(arg.fn_arity(), mk(OperatorTerm::Apply{index, arg.root()}));
}

OperatorTerm ot_base(BaseFnPtr fn, const std::vector<OperatorTerm>& args) {
  if (fn->arity() != args.size())
    throw ArityError("base: function arity " + std::to_string(fn->arity()) + " != " +
                     std::to_string(args.size()) + " subterms");
  if (args.empty()) throw ArityError("base: needs at least one subterm");
  unsigned n = args.front().fn_arity();
  std::vector<NodePtr> roots;
  for (const auto& a : args) {
    if (a.fn_arity() != n) throw ArityError("base: subterms disagree on function arity");
    roots.push_back(a.root());
  }
  return OperatorTerm(n, mk(OperatorTerm::BaseApp{std::move(fn), std::move(roots)}));
}

OperatorTerm ot_const(unsigned fn_arity, const Nat& value) {
  return ot_base(bf_constant(value), {ot_var(fn_arity)});
}

// --- evaluation ---------------------------------------------------------------

namespace {

struct EvalCtx {
  std::span<const FunctionOracle> oracles;
  const Nat& x;
  std::unordered_map<const Node*, Nat> memo;

  const Nat& eval(const NodePtr& n) {
    auto it = memo.find(n.get());
    if (it != memo.end()) return it->second;
    Nat v = std::visit(
        [&](const auto& node) -> Nat {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, OperatorTerm::Var>) {
            return x;
          } else if constexpr (std::is_same_v<T, OperatorTerm::Apply>) {
            return oracles[node.index - 1](eval(node.arg));
          } else {
            std::vector<Nat> args;
            args.reserve(node.args.size());
            for (const auto& a : node.args) args.push_back(eval(a));
            return eval_base(*node.fn, args);
          }
        },
        n->v);
    return memo.emplace(n.get(), std::move(v)).first->second;
  }
};

}  // namespace

Nat eval_operator(const OperatorTerm& term, std::span<const FunctionOracle> oracles, const Nat& x) {
  if (oracles.size() != term.fn_arity())
    throw ArityError("eval_operator: expected " + std::to_string(term.fn_arity()) +
                     " oracles, got " + std::to_string(oracles.size()));
  EvalCtx ctx{oracles, x, {}};
  return ctx.eval(term.root());
}

// --- bounding semantics -------------------------------------------------------

namespace {

// Walks the term under bounding semantics.  Bounds are computed lazily: a
// node's own bound is materialized only when some enclosing context needs it
// (every Apply argument does); Apply arguments always feed the modulus
// accumulator.
struct BoundCtx {
  const FunctionOracle& g;
  const Nat& x;
  Nat acc = 0;
  std::unordered_map<const Node*, Nat> bound_memo;
  std::unordered_map<const Node*, bool> visited;

  void visit(const NodePtr& n) {
    auto [it, fresh] = visited.emplace(n.get(), true);
    if (!fresh) return;
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, OperatorTerm::Apply>) {
            acc = nat_max(acc, bound(node.arg));
          } else if constexpr (std::is_same_v<T, OperatorTerm::BaseApp>) {
            for (const auto& a : node.args) visit(a);
          }
        },
        n->v);
  }

  const Nat& bound(const NodePtr& n) {
    auto it = bound_memo.find(n.get());
    if (it != bound_memo.end()) {
      visit(n);
      return it->second;
    }
    Nat v = std::visit(
        [&](const auto& node) -> Nat {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, OperatorTerm::Var>) {
            return x;
          } else if constexpr (std::is_same_v<T, OperatorTerm::Apply>) {
            const Nat& b = bound(node.arg);
            acc = nat_max(acc, b);
            return g(b);
          } else {
            std::vector<Nat> bs;
            bs.reserve(node.args.size());
            for (const auto& a : node.args) bs.push_back(bound(a));
            return majorant_eval(*node.fn, bs);
          }
        },
        n->v);
    visited.emplace(n.get(), true);
    return bound_memo.emplace(n.get(), std::move(v)).first->second;
  }
};

}  // namespace

Nat modulus(const OperatorTerm& term, const FunctionOracle& g, const Nat& x) {
  BoundCtx ctx{g, x, 0, {}, {}};
  ctx.visit(term.root());
  return ctx.acc;
}

Nat value_bound(const OperatorTerm& term, const FunctionOracle& g, const Nat& x) {
  BoundCtx ctx{g, x, 0, {}, {}};
  return ctx.bound(term.root());
}

// --- derived modulus term -------------------------------------------------------

OperatorTerm derive_modulus_term(const OperatorTerm& term) {
  BaseFnPtr max2 = bf_max2();
  OperatorTerm var = ot_var(1);
  OperatorTerm zero = ot_const(1, 0);
  struct Out {
    OperatorTerm bound, acc;
  };
  std::unordered_map<const Node*, Out> memo;
  auto rec = [&](auto&& self, const NodePtr& n) -> Out {
    auto it = memo.find(n.get());
    if (it != memo.end()) return it->second;
    Out out = std::visit(
        [&](const auto& node) -> Out {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, OperatorTerm::Var>) {
            return {var, zero};
          } else if constexpr (std::is_same_v<T, OperatorTerm::Apply>) {
            Out u = self(self, node.arg);
            return {ot_apply(1, u.bound), ot_base(max2, {u.acc, u.bound})};
          } else {
            std::vector<OperatorTerm> bounds;
            OperatorTerm acc = zero;
            bool first = true;
            for (const auto& a : node.args) {
              Out u = self(self, a);
              bounds.push_back(u.bound);
              acc = first ? u.acc : ot_base(max2, {acc, u.acc});
              first = false;
            }
            return {ot_base(derive_majorant(node.fn), bounds), acc};
          }
        },
        n->v);
    memo.emplace(n.get(), out);
    return out;
  };
  return rec(rec, term.root()).acc;
}

// --- term surgery ------------------------------------------------------------

namespace {

// Bottom-up rewrite with sharing.  `fn` sees the node with already-rewritten
// children and may return a replacement root or nullptr to keep it.
template <typename F>
NodePtr rewrite(const NodePtr& root, F&& fn, std::unordered_map<const Node*, NodePtr>& memo) {
  auto it = memo.find(root.get());
  if (it != memo.end()) return it->second;
  NodePtr rebuilt = std::visit(
      [&](const auto& node) -> NodePtr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, OperatorTerm::Var>) {
          return root;
        } else if constexpr (std::is_same_v<T, OperatorTerm::Apply>) {
          NodePtr arg = rewrite(node.arg, fn, memo);
          if (arg == node.arg) return root;
          return mk(OperatorTerm::Apply{node.index, arg});
        } else {
          std::vector<NodePtr> args;
          bool changed = false;
          args.reserve(node.args.size());
          for (const auto& a : node.args) {
            args.push_back(rewrite(a, fn, memo));
            changed |= args.back() != a;
          }
          if (!changed) return root;
          return mk(OperatorTerm::BaseApp{node.fn, std::move(args)});
        }
      },
      root->v);
  NodePtr out = fn(rebuilt);
  if (!out) out = rebuilt;
  memo.emplace(root.get(), out);
  return out;
}

}  // namespace

OperatorTerm substitute_var(const OperatorTerm& term, const OperatorTerm& replacement) {
  if (term.fn_arity() != replacement.fn_arity())
    throw ArityError("substitute_var: function arities differ");
  std::unordered_map<const Node*, NodePtr> memo;
  NodePtr root = rewrite(
      term.root(),
      [&](const NodePtr& n) -> NodePtr {
        if (std::holds_alternative<OperatorTerm::Var>(n->v)) return replacement.root();
        return nullptr;
      },
      memo);
  return OperatorTerm(term.fn_arity(), root);
}

OperatorTerm rewrite_applies(
    const OperatorTerm& term, unsigned new_fn_arity,
    const std::function<std::optional<OperatorTerm>(unsigned, const OperatorTerm&)>& fn) {
  std::unordered_map<const Node*, NodePtr> memo;
  NodePtr root = rewrite(
      term.root(),
      [&](const NodePtr& n) -> NodePtr {
        if (const auto* a = std::get_if<OperatorTerm::Apply>(&n->v)) {
          if (auto repl = fn(a->index, OperatorTerm(new_fn_arity, a->arg))) return repl->root();
        }
        return nullptr;
      },
      memo);
  return OperatorTerm(new_fn_arity, root);
}

OperatorTerm substitute_oracle_constant(const OperatorTerm& term, unsigned index,
                                        const OperatorTerm& value_term) {
  std::unordered_map<const Node*, NodePtr> memo;
  NodePtr root = rewrite(
      term.root(),
      [&](const NodePtr& n) -> NodePtr {
        if (const auto* a = std::get_if<OperatorTerm::Apply>(&n->v); a && a->index == index)
          return value_term.root();
        return nullptr;
      },
      memo);
  return OperatorTerm(value_term.fn_arity(), root);
}

OperatorTerm compose_operators(const OperatorTerm& outer, std::span<const OperatorTerm> inners) {
  if (outer.fn_arity() != inners.size())
    throw ArityError("compose_operators: outer expects " + std::to_string(outer.fn_arity()) +
                     " functions, got " + std::to_string(inners.size()));
  if (inners.empty()) throw ArityError("compose_operators: needs at least one inner operator");
  unsigned n = inners.front().fn_arity();
  for (const auto& t : inners)
    if (t.fn_arity() != n) throw ArityError("compose_operators: inner operators disagree on arity");

  std::unordered_map<const Node*, NodePtr> memo;
  auto rec = [&](auto&& self, const NodePtr& node) -> NodePtr {
    auto it = memo.find(node.get());
    if (it != memo.end()) return it->second;
    NodePtr out = std::visit(
        [&](const auto& v) -> NodePtr {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, OperatorTerm::Var>) {
            return node;
          } else if constexpr (std::is_same_v<T, OperatorTerm::Apply>) {
            NodePtr arg = self(self, v.arg);
            OperatorTerm bound =
                substitute_var(inners[v.index - 1], OperatorTerm(n, arg));
            return bound.root();
          } else {
            std::vector<NodePtr> args;
            args.reserve(v.args.size());
            for (const auto& a : v.args) args.push_back(self(self, a));
            return mk(OperatorTerm::BaseApp{v.fn, std::move(args)});
          }
        },
        node->v);
    memo.emplace(node.get(), out);
    return out;
  };
  return OperatorTerm(n, rec(rec, outer.root()));
}

unsigned max_apply_index(const OperatorTerm& term) {
  unsigned best = 0;
  std::unordered_map<const Node*, bool> seen;
  auto rec = [&](auto&& self, const NodePtr& n) -> void {
    if (!seen.emplace(n.get(), true).second) return;
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, OperatorTerm::Apply>) {
            best = std::max(best, v.index);
            self(self, v.arg);
          } else if constexpr (std::is_same_v<T, OperatorTerm::BaseApp>) {
            for (const auto& a : v.args) self(self, a);
          }
        },
        n->v);
  };
  rec(rec, term.root());
  return best;
}

bool has_apply(const OperatorTerm& term) { return max_apply_index(term) > 0; }

OperatorTerm with_fn_arity(const OperatorTerm& term, unsigned new_fn_arity) {
  if (max_apply_index(term) > new_fn_arity)
    throw ArityError("with_fn_arity: term applies an oracle beyond the new arity");
  return OperatorTerm(new_fn_arity, term.root());
}

// --- serialization -----------------------------------------------------------

SExpr operator_term_to_sexpr(const OperatorTerm& term) {
  auto rec = [&](auto&& self, const NodePtr& n) -> SExpr {
    return std::visit(
        [&](const auto& v) -> SExpr {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, OperatorTerm::Var>) {
            return SExpr::sym("x");
          } else if constexpr (std::is_same_v<T, OperatorTerm::Apply>) {
            return SExpr::list({SExpr::sym("apply"), SExpr::num(v.index), self(self, v.arg)});
          } else {
            std::vector<SExpr> items{SExpr::sym("base"), base_function_to_sexpr(*v.fn)};
            for (const auto& a : v.args) items.push_back(self(self, a));
            return SExpr::list(std::move(items));
          }
        },
        n->v);
  };
  return rec(rec, term.root());
}

OperatorTerm operator_term_from_sexpr(const SExpr& e, unsigned fn_arity) {
  if (e.is_symbol("x")) return ot_var(fn_arity);
  if (!e.is_list() || e.items.empty() || e.items[0].kind != SExpr::Kind::Symbol)
    throw ParseError("expected an operator term", e.position);
  const std::string& op = e.items[0].symbol;
  if (op == "apply") {
    if (e.items.size() != 3 || e.items[1].kind != SExpr::Kind::Number)
      throw ParseError("'apply' expects an index and a subterm", e.position);
    unsigned idx = static_cast<unsigned>(e.items[1].number);
    if (idx == 0 || idx > fn_arity)
      throw ParseError("oracle index out of range for function arity " + std::to_string(fn_arity),
                       e.items[1].position);
    return ot_apply(idx, operator_term_from_sexpr(e.items[2], fn_arity));
  }
  if (op == "base") {
    if (e.items.size() < 3) throw ParseError("'base' expects a base function and subterms", e.position);
    BaseFnPtr fn = base_function_from_sexpr(e.items[1]);
    std::vector<OperatorTerm> args;
    for (std::size_t i = 2; i < e.items.size(); ++i)
      args.push_back(operator_term_from_sexpr(e.items[i], fn_arity));
    try {
      return ot_base(std::move(fn), args);
    } catch (const ArityError& err) {
      throw ParseError(err.what(), e.position);
    }
  }
  throw ParseError("unknown operator-term form '" + op + "'", e.position);
}

std::string write_operator_term(const OperatorTerm& term) {
  return write_sexpr(operator_term_to_sexpr(term));
}

OperatorTerm parse_operator_term(const std::string& text, unsigned fn_arity) {
  return operator_term_from_sexpr(parse_sexpr(text), fn_arity);
}

}  // namespace condreal
