#include "condreal/base_dsl.hpp"

#include <map>
#include <mutex>

namespace condreal {

namespace {

BaseFnPtr make(unsigned arity, BaseFunction::Body body) {
  return std::make_shared<BaseFunction>(arity, std::move(body));
}

unsigned require_same_arity(const std::vector<BaseFnPtr>& fns, const char* what) {
  if (fns.empty()) throw ArityError(std::string(what) + ": needs at least one inner function");
  unsigned a = fns.front()->arity();
  for (const auto& f : fns)
    if (f->arity() != a) throw ArityError(std::string(what) + ": inner functions disagree on arity");
  return a;
}

}  // namespace

BaseFnPtr bf_proj(unsigned n, unsigned k) {
  if (n == 0 || k == 0 || k > n) throw ArityError("proj: need 1 <= k <= n");
  return make(n, BaseFunction::Initial{InitialKind::Proj, n, k});
}
BaseFnPtr bf_succ() { return make(1, BaseFunction::Initial{InitialKind::Succ}); }
BaseFnPtr bf_mul() { return make(2, BaseFunction::Initial{InitialKind::Mul}); }
BaseFnPtr bf_monus() { return make(2, BaseFunction::Initial{InitialKind::Monus}); }
BaseFnPtr bf_quot() { return make(2, BaseFunction::Initial{InitialKind::Quot}); }

BaseFnPtr bf_subst(BaseFnPtr outer, std::vector<BaseFnPtr> inners) {
  unsigned inner_arity = require_same_arity(inners, "subst");
  if (outer->arity() != inners.size())
    throw ArityError("subst: outer arity " + std::to_string(outer->arity()) + " != " +
                     std::to_string(inners.size()) + " inner functions");
  return make(inner_arity, BaseFunction::Substitution{std::move(outer), std::move(inners)});
}

BaseFnPtr bf_bmin(BaseFnPtr inner) {
  if (inner->arity() < 1) throw ArityError("bmin: inner function must have arity >= 1");
  unsigned arity = inner->arity();
  return make(arity, BaseFunction::BoundedMin{std::move(inner)});
}

BaseFnPtr bf_native(const std::string& name) {
  const NativeEntry& e = NativeRegistry::instance().lookup(name);
  return make(e.arity, BaseFunction::Native{name, e.arity, e.eval, e.majorant});
}

BaseFnPtr bf_zero() {
  auto p = bf_proj(1, 1);
  auto z = bf_subst(bf_monus(), {p, p});
  auto out = std::make_shared<BaseFunction>(*z);
  out->const_sugar = Nat(0);
  return out;
}

BaseFnPtr bf_constant(const Nat& c) {
  // Successor tower over zero for small values; a closed-form native for
  // large ones (same observable behavior, bounded node count).
  BaseFnPtr f;
  if (c <= 64) {
    f = bf_zero();
    for (Nat i = 0; i < c; ++i) f = bf_subst(bf_succ(), {f});
  } else {
    f = bf_native("constv:" + c.str());
  }
  auto out = std::make_shared<BaseFunction>(*f);
  out->const_sugar = c;
  return out;
}

BaseFnPtr bf_at_arity(BaseFnPtr unary, unsigned n, unsigned coordinate) {
  if (unary->arity() != 1) throw ArityError("bf_at_arity: expected a unary function");
  if (n == 1 && coordinate == 1) return unary;
  return bf_subst(std::move(unary), {bf_proj(n, coordinate)});
}

Nat eval_base(const BaseFunction& f, std::span<const Nat> args) {
  if (args.size() != f.arity())
    throw ArityError("eval_base: expected " + std::to_string(f.arity()) + " arguments, got " +
                     std::to_string(args.size()));
  if (f.const_sugar) return *f.const_sugar;
  return std::visit(
      [&](const auto& body) -> Nat {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, BaseFunction::Initial>) {
          switch (body.kind) {
            case InitialKind::Proj:
              return args[body.k - 1];
            case InitialKind::Succ:
              return args[0] + 1;
            case InitialKind::Mul:
              return args[0] * args[1];
            case InitialKind::Monus:
              return monus(args[0], args[1]);
            case InitialKind::Quot:
              return quot1(args[0], args[1]);
          }
          throw Error("unreachable");
        } else if constexpr (std::is_same_v<T, BaseFunction::Substitution>) {
          std::vector<Nat> vals;
          vals.reserve(body.inners.size());
          for (const auto& g : body.inners) vals.push_back(eval_base(*g, args));
          return eval_base(*body.outer, vals);
        } else if constexpr (std::is_same_v<T, BaseFunction::BoundedMin>) {
          std::vector<Nat> inner_args(args.begin(), args.end());
          const Nat y = inner_args.back();
          for (Nat z = 0; z <= y; ++z) {
            inner_args.back() = z;
            if (eval_base(*body.inner, inner_args) == 0) return z;
          }
          return y + 1;
        } else {
          return body.eval(args);
        }
      },
      f.body());
}

Nat majorant_eval(const BaseFunction& f, std::span<const Nat> args) {
  if (args.size() != f.arity())
    throw ArityError("majorant_eval: expected " + std::to_string(f.arity()) + " arguments, got " +
                     std::to_string(args.size()));
  // constants are monotone, so a constant is its own majorant
  if (f.const_sugar) return *f.const_sugar;
  return std::visit(
      [&](const auto& body) -> Nat {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, BaseFunction::Initial>) {
          switch (body.kind) {
            case InitialKind::Proj:
              return args[body.k - 1];
            case InitialKind::Succ:
              return args[0] + 1;
            case InitialKind::Mul:
              return args[0] * args[1];
            case InitialKind::Monus:
            case InitialKind::Quot:
              return args[0];
          }
          throw Error("unreachable");
        } else if constexpr (std::is_same_v<T, BaseFunction::Substitution>) {
          std::vector<Nat> vals;
          vals.reserve(body.inners.size());
          for (const auto& g : body.inners) vals.push_back(majorant_eval(*g, args));
          return majorant_eval(*body.outer, vals);
        } else if constexpr (std::is_same_v<T, BaseFunction::BoundedMin>) {
          return args.back() + 1;
        } else {
          if (!body.majorant)
            throw MissingMajorantError("native '" + body.name + "' has no declared majorant");
          return body.majorant(args);
        }
      },
      f.body());
}

BaseFnPtr derive_majorant(const BaseFnPtr& f) {
  if (f->const_sugar) return f;
  return std::visit(
      [&](const auto& body) -> BaseFnPtr {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, BaseFunction::Initial>) {
          switch (body.kind) {
            case InitialKind::Proj:
              return f;
            case InitialKind::Succ:
              return bf_succ();
            case InitialKind::Mul:
              return bf_mul();
            case InitialKind::Monus:
            case InitialKind::Quot:
              return bf_proj(2, 1);
          }
          throw Error("unreachable");
        } else if constexpr (std::is_same_v<T, BaseFunction::Substitution>) {
          std::vector<BaseFnPtr> inners;
          inners.reserve(body.inners.size());
          for (const auto& g : body.inners) inners.push_back(derive_majorant(g));
          return bf_subst(derive_majorant(body.outer), std::move(inners));
        } else if constexpr (std::is_same_v<T, BaseFunction::BoundedMin>) {
          unsigned a = f->arity();
          return bf_subst(bf_succ(), {bf_proj(a, a)});
        } else {
          if (!body.majorant)
            throw MissingMajorantError("native '" + body.name + "' has no declared majorant");
          return bf_native("maj:" + body.name);
        }
      },
      f->body());
}

// --- combinators ----------------------------------------------------------

BaseFnPtr bf_sg() {
  auto p = bf_proj(1, 1);
  return bf_subst(bf_monus(), {p, bf_subst(bf_monus(), {p, bf_constant(1)})});
}

BaseFnPtr bf_cosg() { return bf_subst(bf_monus(), {bf_constant(1), bf_sg()}); }

BaseFnPtr bf_or2() {
  auto c1 = bf_at_arity(bf_constant(1), 2);
  auto cosg_x = bf_subst(bf_cosg(), {bf_proj(2, 1)});
  auto cosg_y = bf_subst(bf_cosg(), {bf_proj(2, 2)});
  return bf_subst(bf_monus(), {c1, bf_subst(bf_mul(), {cosg_x, cosg_y})});
}

namespace {

// (x+1)(y+1) over arity 2, an upper bound for both max(x,y) and x+y.
BaseFnPtr product_of_successors() {
  return bf_subst(bf_mul(), {bf_subst(bf_succ(), {bf_proj(2, 1)}), bf_subst(bf_succ(), {bf_proj(2, 2)})});
}

}  // namespace

BaseFnPtr bf_max2() {
  // least z with z >= x and z >= y, searched below (x+1)(y+1)
  auto test = bf_subst(bf_or2(), {bf_subst(bf_monus(), {bf_proj(3, 1), bf_proj(3, 3)}),
                                  bf_subst(bf_monus(), {bf_proj(3, 2), bf_proj(3, 3)})});
  return bf_subst(bf_bmin(test), {bf_proj(2, 1), bf_proj(2, 2), product_of_successors()});
}

BaseFnPtr bf_add2() {
  // least z with z - x = y and z >= x, searched below (x+1)(y+1)
  auto z_minus_x = bf_subst(bf_monus(), {bf_proj(3, 3), bf_proj(3, 1)});
  auto d1 = bf_subst(bf_monus(), {z_minus_x, bf_proj(3, 2)});
  auto d2 = bf_subst(bf_monus(), {bf_proj(3, 2), z_minus_x});
  auto d3 = bf_subst(bf_monus(), {bf_proj(3, 1), bf_proj(3, 3)});
  auto test = bf_subst(bf_or2(), {bf_subst(bf_or2(), {d1, d2}), d3});
  return bf_subst(bf_bmin(test), {bf_proj(2, 1), bf_proj(2, 2), product_of_successors()});
}

BaseFnPtr bounded_min_value(const BaseFnPtr& f) {
  unsigned k = f->arity() - 1;  // f : (xs, z), result : (xs, y)
  unsigned a2 = k + 2;
  auto projs = [&](unsigned arity, std::initializer_list<unsigned> ks) {
    std::vector<BaseFnPtr> out;
    for (unsigned j : ks) out.push_back(bf_proj(arity, j));
    return out;
  };
  // u(xs, w, z) = f(xs, z) monus w; bmin(u)(xs, w, y) finds least z<=y with f<=w
  std::vector<BaseFnPtr> f_args;
  for (unsigned j = 1; j <= k; ++j) f_args.push_back(bf_proj(a2, j));
  f_args.push_back(bf_proj(a2, a2));
  auto u = bf_subst(bf_monus(), {bf_subst(f, f_args), bf_proj(a2, k + 1)});
  auto found = bf_bmin(u);  // (xs, w, y)
  // I(xs, y, w) = found(xs, w, y) monus y : zero iff some z <= y has f <= w
  std::vector<BaseFnPtr> found_args;
  for (unsigned j = 1; j <= k; ++j) found_args.push_back(bf_proj(a2, j));
  found_args.push_back(bf_proj(a2, a2));
  found_args.push_back(bf_proj(a2, k + 1));
  auto indicator = bf_subst(bf_monus(), {bf_subst(found, found_args), bf_proj(a2, k + 1)});
  // min(xs, y) = least w <= f(xs, 0) with I(xs, y, w) = 0
  unsigned a1 = k + 1;
  std::vector<BaseFnPtr> outer_args;
  for (unsigned j = 1; j <= k; ++j) outer_args.push_back(bf_proj(a1, j));
  outer_args.push_back(bf_proj(a1, k + 1));
  std::vector<BaseFnPtr> f_at_zero;
  for (unsigned j = 1; j <= k; ++j) f_at_zero.push_back(bf_proj(a1, j));
  f_at_zero.push_back(bf_at_arity(bf_constant(0), a1));
  outer_args.push_back(bf_subst(f, f_at_zero));
  (void)projs;
  return bf_subst(bf_bmin(indicator), outer_args);
}

BaseFnPtr bounded_max_value(const BaseFnPtr& f) {
  unsigned k = f->arity() - 1;
  unsigned a2 = k + 2;
  // u(xs, w, z) = cosg(f(xs, z) monus w): zero iff f(xs, z) > w
  std::vector<BaseFnPtr> f_args;
  for (unsigned j = 1; j <= k; ++j) f_args.push_back(bf_proj(a2, j));
  f_args.push_back(bf_proj(a2, a2));
  auto u = bf_subst(bf_cosg(), {bf_subst(bf_monus(), {bf_subst(f, f_args), bf_proj(a2, k + 1)})});
  auto first_above = bf_bmin(u);  // (xs, w, y): y+1 when no z <= y exceeds w
  // J(xs, y, w) = (y+1) monus first_above(xs, w, y): zero iff none above
  std::vector<BaseFnPtr> fa_args;
  for (unsigned j = 1; j <= k; ++j) fa_args.push_back(bf_proj(a2, j));
  fa_args.push_back(bf_proj(a2, a2));
  fa_args.push_back(bf_proj(a2, k + 1));
  auto none_above = bf_subst(
      bf_monus(), {bf_subst(bf_succ(), {bf_proj(a2, k + 1)}), bf_subst(first_above, fa_args)});
  // max(xs, y) = least w <= majorant_f(xs, y) with J(xs, y, w) = 0
  unsigned a1 = k + 1;
  std::vector<BaseFnPtr> outer_args;
  for (unsigned j = 1; j <= a1; ++j) outer_args.push_back(bf_proj(a1, j));
  std::vector<BaseFnPtr> maj_args;
  for (unsigned j = 1; j <= a1; ++j) maj_args.push_back(bf_proj(a1, j));
  outer_args.push_back(bf_subst(derive_majorant(f), maj_args));
  return bf_subst(bf_bmin(none_above), outer_args);
}

// --- native registry -------------------------------------------------------

void register_core_natives(NativeRegistry&);
void register_elementary_natives(NativeRegistry&);
void register_translation_natives(NativeRegistry&);

struct NativeRegistry::Impl {
  std::mutex mu;
  std::map<std::string, NativeEntry> entries;
};

NativeRegistry::NativeRegistry() : impl_(std::make_unique<Impl>()) {}

NativeRegistry& NativeRegistry::instance() {
  static NativeRegistry reg;
  static std::once_flag once;
  std::call_once(once, [] {
    register_core_natives(reg);
    register_elementary_natives(reg);
    register_translation_natives(reg);
  });
  return reg;
}

void NativeRegistry::add(const std::string& name, NativeEntry entry) {
  std::lock_guard<std::mutex> lock(impl_->mu);
  impl_->entries[name] = std::move(entry);
}

bool NativeRegistry::contains(const std::string& name) {
  try {
    lookup(name);
    return true;
  } catch (const UnknownNativeError&) {
    return false;
  }
}

namespace {

std::optional<NativeEntry> parametric_native(const std::string& name) {
  auto split = [&](char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= name.size(); ++i) {
      if (i == name.size() || name[i] == sep) {
        parts.push_back(name.substr(start, i - start));
        start = i + 1;
      }
    }
    return parts;
  };
  auto parts = split(':');
  if (parts.size() == 3 && parts[0] == "lin") {
    // x -> Ax + B, its own majorant
    Nat a(parts[1]), b(parts[2]);
    NativeFn fn = [a, b](std::span<const Nat> xs) { return Nat(a * xs[0] + b); };
    return NativeEntry{1, fn, fn, "affine map"};
  }
  if (parts.size() == 2 && parts[0] == "constv") {
    Nat c(parts[1]);
    return NativeEntry{1, [c](std::span<const Nat>) { return c; },
                       [c](std::span<const Nat> xs) { return Nat(xs[0] + c); },
                       "large constant"};
  }
  if (parts.size() == 2 && parts[0] == "litp") {
    // numerator stream of the canonical name of a nonnegative rational:
    // n -> round((n+1) * NUM/DEN), ties up
    std::size_t slash = parts[1].find('/');
    if (slash == std::string::npos) return std::nullopt;
    Nat num(parts[1].substr(0, slash)), den(parts[1].substr(slash + 1));
    if (den == 0) return std::nullopt;
    Nat slope = num / den + 2;
    return NativeEntry{1,
                       [num, den](std::span<const Nat> xs) {
                         return Nat((2 * (xs[0] + 1) * num + den) / (2 * den));
                       },
                       [slope](std::span<const Nat> xs) { return Nat((xs[0] + 1) * slope); },
                       "canonical rational numerator stream"};
  }
  if (parts.size() >= 2 && parts[0] == "maj") {
    // majorant of a registered native; a majorant majorizes itself
    std::string inner = name.substr(4);
    const NativeEntry& e = NativeRegistry::instance().lookup(inner);
    if (!e.majorant)
      throw MissingMajorantError("native '" + inner + "' has no declared majorant");
    return NativeEntry{e.arity, e.majorant, e.majorant, "majorant of " + inner};
  }
  return std::nullopt;
}

}  // namespace

const NativeEntry& NativeRegistry::lookup(const std::string& name) {
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto it = impl_->entries.find(name);
    if (it != impl_->entries.end()) return it->second;
  }
  if (auto made = parametric_native(name)) {
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto [it, _] = impl_->entries.emplace(name, std::move(*made));
    return it->second;
  }
  throw UnknownNativeError("unknown native function '" + name + "'");
}

void register_core_natives(NativeRegistry& reg) {
  reg.add("max2", {2, [](std::span<const Nat> a) { return nat_max(a[0], a[1]); },
                   [](std::span<const Nat> a) { return nat_max(a[0], a[1]); }, "binary maximum"});
  reg.add("or2", {2,
                  [](std::span<const Nat> a) { return Nat(a[0] != 0 || a[1] != 0 ? 1 : 0); },
                  [](std::span<const Nat>) { return Nat(1); },
                  "zero iff both arguments are zero"});
  reg.add("ehelp",
          {4,
           [](std::span<const Nat> a) {
             // floor((n+1)(p monus q)/(r+1) + 1/2)
             const Nat &p = a[0], &q = a[1], &r = a[2], &n = a[3];
             Nat num = (n + 1) * monus(p, q) * 2 + (r + 1);
             return Nat(num / (2 * (r + 1)));
           },
           [](std::span<const Nat> a) { return Nat((a[3] + 1) * a[0] + 1); },
           "rounded rescaling of a rational approximation"});
  reg.add("cpair", {2,
                    [](std::span<const Nat> a) {
                      Nat s = a[0] + a[1];
                      return Nat(s * (s + 1) / 2 + a[1]);
                    },
                    [](std::span<const Nat> a) {
                      Nat s = a[0] + a[1];
                      return Nat(s * (s + 1) / 2 + a[1]);
                    },
                    "Cantor pairing"});
  auto unpair = [](const Nat& c) {
    Nat w = (isqrt(8 * c + 1) - 1) / 2;
    Nat b = c - w * (w + 1) / 2;
    return std::pair<Nat, Nat>(w - b, b);
  };
  reg.add("cunfst", {1, [unpair](std::span<const Nat> a) { return unpair(a[0]).first; },
                     [](std::span<const Nat> a) { return a[0]; }, "Cantor unpairing, left"});
  reg.add("cunsnd", {1, [unpair](std::span<const Nat> a) { return unpair(a[0]).second; },
                     [](std::span<const Nat> a) { return a[0]; }, "Cantor unpairing, right"});
  reg.add("nomaj.demo",
          {1, [](std::span<const Nat> a) { return a[0]; }, nullptr,
           "identity without a declared majorant (exercises the missing-majorant path)"});
}

// --- parser / printer --------------------------------------------------------

namespace {

unsigned small_nat(const SExpr& e, const char* what) {
  if (e.kind != SExpr::Kind::Number) throw ParseError(std::string("expected a number for ") + what, e.position);
  if (e.number > 1000000) throw ParseError(std::string(what) + " out of range", e.position);
  return static_cast<unsigned>(e.number);
}

}  // namespace

BaseFnPtr base_function_from_sexpr(const SExpr& e) {
  if (!e.is_list() || e.items.empty() || e.items[0].kind != SExpr::Kind::Symbol)
    throw ParseError("expected a base-function form (op ...)", e.position);
  const std::string& op = e.items[0].symbol;
  auto argc = [&](std::size_t n) {
    if (e.items.size() != n + 1)
      throw ParseError("'" + op + "' expects " + std::to_string(n) + " arguments", e.position);
  };
  try {
    if (op == "proj") {
      argc(2);
      return bf_proj(small_nat(e.items[1], "proj arity"), small_nat(e.items[2], "proj index"));
    }
    if (op == "succ") { argc(0); return bf_succ(); }
    if (op == "mul") { argc(0); return bf_mul(); }
    if (op == "monus") { argc(0); return bf_monus(); }
    if (op == "quot") { argc(0); return bf_quot(); }
    if (op == "const") {
      argc(1);
      if (e.items[1].kind != SExpr::Kind::Number)
        throw ParseError("expected a number for const", e.items[1].position);
      return bf_constant(e.items[1].number);
    }
    if (op == "subst") {
      if (e.items.size() < 3) throw ParseError("'subst' expects an outer term and at least one inner term", e.position);
      BaseFnPtr outer = base_function_from_sexpr(e.items[1]);
      std::vector<BaseFnPtr> inners;
      for (std::size_t i = 2; i < e.items.size(); ++i) inners.push_back(base_function_from_sexpr(e.items[i]));
      return bf_subst(std::move(outer), std::move(inners));
    }
    if (op == "bmin") {
      argc(1);
      return bf_bmin(base_function_from_sexpr(e.items[1]));
    }
    if (op == "native") {
      argc(1);
      if (e.items[1].kind != SExpr::Kind::Symbol)
        throw ParseError("expected a native name", e.items[1].position);
      return bf_native(e.items[1].symbol);
    }
  } catch (const ArityError& err) {
    throw ParseError(std::string("arity mismatch in '") + op + "': " + err.what(), e.position);
  }
  throw ParseError("unknown base-function form '" + op + "'", e.position);
}

BaseFnPtr parse_base_function(const std::string& text) {
  SExpr e = parse_sexpr(text);
  BaseFnPtr f = base_function_from_sexpr(e);
  auto out = std::make_shared<BaseFunction>(f->arity(), f->body(), text);
  out->const_sugar = f->const_sugar;
  return out;
}

SExpr base_function_to_sexpr(const BaseFunction& f) {
  if (f.const_sugar) return SExpr::list({SExpr::sym("const"), SExpr::num(*f.const_sugar)});
  return std::visit(
      [&](const auto& body) -> SExpr {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, BaseFunction::Initial>) {
          switch (body.kind) {
            case InitialKind::Proj:
              return SExpr::list({SExpr::sym("proj"), SExpr::num(body.n), SExpr::num(body.k)});
            case InitialKind::Succ:
              return SExpr::list({SExpr::sym("succ")});
            case InitialKind::Mul:
              return SExpr::list({SExpr::sym("mul")});
            case InitialKind::Monus:
              return SExpr::list({SExpr::sym("monus")});
            case InitialKind::Quot:
              return SExpr::list({SExpr::sym("quot")});
          }
          throw Error("unreachable");
        } else if constexpr (std::is_same_v<T, BaseFunction::Substitution>) {
          std::vector<SExpr> items{SExpr::sym("subst"), base_function_to_sexpr(*body.outer)};
          for (const auto& g : body.inners) items.push_back(base_function_to_sexpr(*g));
          return SExpr::list(std::move(items));
        } else if constexpr (std::is_same_v<T, BaseFunction::BoundedMin>) {
          return SExpr::list({SExpr::sym("bmin"), base_function_to_sexpr(*body.inner)});
        } else {
          return SExpr::list({SExpr::sym("native"), SExpr::sym(body.name)});
        }
      },
      f.body());
}

std::string write_base_function(const BaseFunction& f) { return write_sexpr(base_function_to_sexpr(f)); }

}  // namespace condreal
