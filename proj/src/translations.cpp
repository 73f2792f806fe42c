#include "condreal/translations.hpp"

#include <json.hpp>

#include <map>
#include <mutex>
#include <sstream>

#include "condreal/errors.hpp"
#include "condreal/serialize.hpp"

namespace condreal {

void register_translation_natives(NativeRegistry&) {
  // Translation components are registered at construction time under
  // content-hashed names; nothing is registered statically.
}

namespace {

std::string hash_tag(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

FunctionOracle common_majorant(const Nat& s) {
  // u(x, s) = (s+2)(x+1), the single monotone bound used for all oracles
  Nat ss = s;
  auto fn = [ss](const Nat& x) { return Nat((ss + 2) * (x + 1)); };
  return FunctionOracle(fn, fn);
}

// lambda x. 2x+1, term-backed (used to rewrite reads through the special-form
// image).
BaseFnPtr double_plus_one() {
  return bf_subst(bf_succ(),
                  {bf_subst(bf_mul(), {bf_at_arity(bf_constant(2), 1), bf_proj(1, 1)})});
}

// Precompose the name slots of a term with their special-form images:
// f-reads become ehelp(f(2u+1), g(2u+1), h(2u+1), u), g-reads the mirror
// image, h-reads the identity.  The extra slot, when present, is untouched.
OperatorTerm k_precompose(const OperatorTerm& term, unsigned k, bool has_extra) {
  unsigned arity = 3 * k + (has_extra ? 1 : 0);
  BaseFnPtr eh = bf_native("ehelp");
  BaseFnPtr dbl = double_plus_one();
  return rewrite_applies(
      term, arity,
      [&](unsigned idx, const OperatorTerm& u) -> std::optional<OperatorTerm> {
        if (has_extra && idx == 3 * k + 1) return std::nullopt;
        unsigned coord = (idx - 1) / 3;
        unsigned slot = (idx - 1) % 3;
        if (slot == 2) return u;  // the image's third component is the identity
        OperatorTerm du = ot_base(dbl, {u});
        unsigned fs = 3 * coord + 1, gs = 3 * coord + 2, hs = 3 * coord + 3;
        OperatorTerm first = ot_apply(slot == 0 ? fs : gs, du);
        OperatorTerm second = ot_apply(slot == 0 ? gs : fs, du);
        return ot_base(eh, {first, second, ot_apply(hs, du), u});
      });
}

OperatorTerm fold_max(const std::vector<OperatorTerm>& parts) {
  BaseFnPtr max2 = bf_native("max2");
  OperatorTerm acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = ot_base(max2, {acc, parts[i]});
  return acc;
}

std::vector<FunctionOracle> ehelp_oracles(std::span<const Nat> flat, unsigned k) {
  // flat = p1,q1,r1,...,pk,qk,rk; each coordinate yields the zero-product
  // pair of rescaled streams plus the identity.
  std::vector<FunctionOracle> out;
  for (unsigned i = 0; i < k; ++i) {
    Nat p = flat[3 * i], q = flat[3 * i + 1], r = flat[3 * i + 2];
    out.push_back(FunctionOracle([p, q, r](const Nat& x) { return ehelp(p, q, r, x); }));
    out.push_back(FunctionOracle([p, q, r](const Nat& x) { return ehelp(q, p, r, x); }));
    out.push_back(FunctionOracle::identity());
  }
  return out;
}

Nat max_of(std::span<const Nat> xs) {
  Nat m = 0;
  for (const Nat& x : xs) m = nat_max(m, x);
  return m;
}

struct TableState {
  OperatorTerm E, F, G, H;  // normalized
  unsigned k;
  std::mutex mu;
  std::map<Nat, Nat> v_prime_memo;
  std::map<std::pair<Nat, Nat>, Nat> w_memo;

  Nat v(const Nat& s, const Nat& y) { return modulus(E, common_majorant(s), y); }

  Nat v_prime(const Nat& s) {
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = v_prime_memo.find(s);
      if (it != v_prime_memo.end()) return it->second;
    }
    Nat best = 0;
    for (Nat y = 0; y <= s; ++y) best = nat_max(best, v(s, y));
    std::lock_guard<std::mutex> lock(mu);
    return v_prime_memo.emplace(s, best).first->second;
  }

  Nat d0(const Nat& s) {
    Nat vp = v_prime(s);
    Nat out = 6 * vp + 5;
    if (out < 2 * vp + 1) throw Error("table invariant d0 >= 2v'+1 broken");
    return out;
  }

  Nat w(const Nat& s, const Nat& t) {
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = w_memo.find({s, t});
      if (it != w_memo.end()) return it->second;
    }
    FunctionOracle g = common_majorant(s);
    Nat out = nat_max(modulus(F, g, t), nat_max(modulus(G, g, t), modulus(H, g, t)));
    std::lock_guard<std::mutex> lock(mu);
    return w_memo.emplace(std::make_pair(s, t), out).first->second;
  }

  Nat w_prime(const Nat& s, const Nat& t) { return nat_max(v_prime(s), w(s, t)); }

  Nat d(const Nat& s, const Nat& t) {
    Nat vp = v_prime(s), wp = w_prime(s, t);
    Nat out = 6 * wp + 5;
    if (out < 6 * vp + 5 || out < 2 * wp + 1)
      throw Error("table invariant d >= max(6v'+5, 2w'+1) broken");
    return out;
  }

  // The gate evaluated through rescaled streams: min over x <= s, stopping
  // at the first zero.
  Nat e_value(std::span<const Nat> flat, const Nat& s) {
    auto oracles = ehelp_oracles(flat, k);
    Nat best;
    bool first = true;
    for (Nat x = 0; x <= s; ++x) {
      Nat val = eval_operator(E, oracles, x);
      if (val == 0) return 0;
      if (first || val < best) best = val;
      first = false;
    }
    return best;
  }

  // Least accepted x <= s, else s+1.
  Nat b_value(std::span<const Nat> flat, const Nat& s) {
    auto oracles = ehelp_oracles(flat, k);
    for (Nat x = 0; x <= s; ++x)
      if (eval_operator(E, oracles, x) == 0) return x;
    return s + 1;
  }

  // Applies a value operator to the piecewise names built from both data
  // sets: rescaled coarse data up to v'(s), rescaled fine data beyond.
  Nat value(const OperatorTerm& component, std::span<const Nat> args) {
    // args = p0 (3k), p1 (3k), s, t
    Nat s = args[6 * k], t = args[6 * k + 1];
    Nat vp = v_prime(s);
    std::vector<Nat> flat0(args.begin(), args.begin() + 3 * k);
    std::vector<Nat> flat1(args.begin() + 3 * k, args.begin() + 6 * k);
    std::vector<FunctionOracle> oracles;
    for (unsigned i = 0; i < k; ++i) {
      Nat p0 = flat0[3 * i], q0 = flat0[3 * i + 1], r0 = flat0[3 * i + 2];
      Nat p1 = flat1[3 * i], q1 = flat1[3 * i + 1], r1 = flat1[3 * i + 2];
      oracles.push_back(FunctionOracle([p0, q0, r0, p1, q1, r1, vp](const Nat& x) {
        return x <= vp ? ehelp(p0, q0, r0, x) : ehelp(p1, q1, r1, x);
      }));
      oracles.push_back(FunctionOracle([p0, q0, r0, p1, q1, r1, vp](const Nat& x) {
        return x <= vp ? ehelp(q0, p0, r0, x) : ehelp(q1, p1, r1, x);
      }));
      oracles.push_back(FunctionOracle::identity());
    }
    std::vector<Nat> head(args.begin(), args.begin() + 3 * k);
    oracles.push_back(constant_oracle(b_value(head, s)));
    return eval_operator(component, oracles, t);
  }
};

}  // namespace

std::string translation_sidecar(const std::string& direction,
                                const std::vector<std::pair<std::string, std::string>>& parts) {
  nlohmann::json j;
  j["direction"] = direction;
  nlohmann::json comp = nlohmann::json::object();
  for (const auto& [name, formula] : parts) comp[name] = formula;
  j["components"] = comp;
  return j.dump(2) + "\n";
}

ConditionalSystem normalize_system(const ConditionalSystem& sys) {
  ConditionalSystem out;
  out.k = sys.k;
  out.E = k_precompose(sys.E, sys.k, false);
  out.F = k_precompose(sys.F, sys.k, true);
  out.G = k_precompose(sys.G, sys.k, true);
  out.H = k_precompose(sys.H, sys.k, true);
  out.normalized = true;
  out.domain_hint = sys.domain_hint;
  out.provenance = sys.provenance;
  return out;
}

ConditionalSystem tz_to_operators_conditional(const TZConditionalWitness& w) {
  unsigned k = w.k;
  ConditionalSystem out;
  out.k = k;
  {
    unsigned n = 3 * k;
    OperatorTerm c0 = ot_const(n, 0);
    std::vector<OperatorTerm> parts;
    for (unsigned i = 0; i < k; ++i) {
      parts.push_back(ot_apply(3 * i + 1, c0));
      parts.push_back(ot_apply(3 * i + 2, c0));
    }
    parts.push_back(ot_var(n));
    OperatorTerm s_term = fold_max(parts);
    OperatorTerm d0s = ot_base(w.d0, {s_term});
    std::vector<OperatorTerm> args;
    for (unsigned j = 1; j <= n; ++j) args.push_back(ot_apply(j, d0s));
    args.push_back(s_term);
    out.E = ot_base(w.e, args);
  }
  auto build_value = [&](const BaseFnPtr& comp) {
    unsigned n = 3 * k + 1;
    OperatorTerm c0 = ot_const(n, 0);
    std::vector<OperatorTerm> parts;
    for (unsigned i = 0; i < k; ++i) {
      parts.push_back(ot_apply(3 * i + 1, c0));
      parts.push_back(ot_apply(3 * i + 2, c0));
    }
    parts.push_back(ot_apply(n, ot_var(n)));  // the packed parameter, read at t
    OperatorTerm s_term = fold_max(parts);
    OperatorTerm d0s = ot_base(w.d0, {s_term});
    OperatorTerm dst = ot_base(w.d, {s_term, ot_var(n)});
    std::vector<OperatorTerm> args;
    for (unsigned j = 1; j <= 3 * k; ++j) args.push_back(ot_apply(j, d0s));
    for (unsigned j = 1; j <= 3 * k; ++j) args.push_back(ot_apply(j, dst));
    args.push_back(s_term);
    args.push_back(ot_var(n));
    return ot_base(comp, args);
  };
  out.F = build_value(w.f);
  out.G = build_value(w.g);
  out.H = build_value(w.h);
  out.provenance = Provenance{"tz-to-cond", write_object_text(w)};
  return out;
}

TZConditionalWitness operators_to_tz_conditional(const ConditionalSystem& sys,
                                                 std::string* sidecar_json) {
  unsigned k = sys.k;
  ConditionalSystem n = sys.normalized ? sys : normalize_system(sys);

  // moduli must be available for all four terms; probe now so a native
  // without a majorant fails here, not mid-evaluation
  {
    FunctionOracle probe = common_majorant(0);
    modulus(n.E, probe, 0);
    modulus(n.F, probe, 0);
    modulus(n.G, probe, 0);
    modulus(n.H, probe, 0);
  }

  auto st = std::make_shared<TableState>();
  st->E = n.E;
  st->F = n.F;
  st->G = n.G;
  st->H = n.H;
  st->k = k;

  std::string source = write_object_text(sys);
  std::string prefix = "tzc." + hash_tag(source + "|cond-to-tz") + ".";
  NativeRegistry& reg = NativeRegistry::instance();

  NativeFn u_fn = [](std::span<const Nat> a) { return Nat((a[1] + 2) * (a[0] + 1)); };
  reg.add(prefix + "u", {2, u_fn, u_fn, "u(x,s) = (s+2)(x+1)"});
  NativeFn v_fn = [st](std::span<const Nat> a) { return st->v(a[0], a[1]); };
  reg.add(prefix + "v", {2, v_fn, v_fn, "v(s,y): modulus of the gate under u(.,s) at y"});
  NativeFn vp_fn = [st](std::span<const Nat> a) { return st->v_prime(a[0]); };
  reg.add(prefix + "vp", {1, vp_fn, vp_fn, "v'(s) = max_{y<=s} v(s,y)"});
  NativeFn d0_fn = [st](std::span<const Nat> a) { return st->d0(a[0]); };
  reg.add(prefix + "d0", {1, d0_fn, d0_fn, "d0(s) = 6v'(s) + 5"});
  NativeFn w_fn = [st](std::span<const Nat> a) { return st->w(a[0], a[1]); };
  reg.add(prefix + "w", {2, w_fn, w_fn, "w(s,t): max modulus of the value operators"});
  NativeFn wp_fn = [st](std::span<const Nat> a) { return st->w_prime(a[0], a[1]); };
  reg.add(prefix + "wp", {2, wp_fn, wp_fn, "w'(s,t) = max(v'(s), w(s,t))"});
  NativeFn d_fn = [st](std::span<const Nat> a) { return st->d(a[0], a[1]); };
  reg.add(prefix + "d", {2, d_fn, d_fn, "d(s,t) = 6w'(s,t) + 5"});

  unsigned ea = 3 * k + 1, fa = 6 * k + 2;
  reg.add(prefix + "e",
          {ea,
           [st, k](std::span<const Nat> a) { return st->e_value(a.subspan(0, 3 * k), a[3 * k]); },
           [st](std::span<const Nat> a) {
             // min over accepted x is at most the value at x = 0, which the
             // bounding semantics dominates for any rescaled input stream
             Nat p = max_of(a.subspan(0, a.size() - 1));
             FunctionOracle g([p](const Nat& x) { return Nat((p + 1) * (x + 1)); });
             return value_bound(st->E, g, 0);
           },
           "e: min over x<=s of the gate on rescaled data"});
  reg.add(prefix + "b",
          {ea,
           [st, k](std::span<const Nat> a) { return st->b_value(a.subspan(0, 3 * k), a[3 * k]); },
           [](std::span<const Nat> a) { return Nat(a[a.size() - 1] + 1); },
           "b: least accepted parameter below s"});

  auto add_value = [&](const char* name, const OperatorTerm& comp, const std::string& doc) {
    OperatorTerm term = comp;
    reg.add(prefix + name,
            {fa, [st, term](std::span<const Nat> a) { return st->value(term, a); },
             [st, term](std::span<const Nat> a) {
               Nat s = a[a.size() - 2], t = a[a.size() - 1];
               Nat p = max_of(a.subspan(0, a.size() - 2));
               Nat floor_v = s + 1;
               FunctionOracle g([p, floor_v](const Nat& x) {
                 return nat_max(Nat((p + 1) * (x + 1)), floor_v);
               });
               return value_bound(term, g, t);
             },
             doc});
  };
  add_value("f", n.F, "f: value operator on the piecewise-rescaled names");
  add_value("g", n.G, "g: value operator on the piecewise-rescaled names");
  add_value("h", n.H, "h: value operator on the piecewise-rescaled names");

  auto tables = std::make_shared<TranslationTables>();
  tables->u = bf_native(prefix + "u");
  tables->v = bf_native(prefix + "v");
  tables->v_prime = bf_native(prefix + "vp");
  tables->d0 = bf_native(prefix + "d0");
  tables->w = bf_native(prefix + "w");
  tables->w_prime = bf_native(prefix + "wp");
  tables->d = bf_native(prefix + "d");
  tables->u_fn = [](const Nat& x, const Nat& s) { return Nat((s + 2) * (x + 1)); };
  tables->v_fn = [st](const Nat& s, const Nat& y) { return st->v(s, y); };
  tables->v_prime_fn = [st](const Nat& s) { return st->v_prime(s); };
  tables->d0_fn = [st](const Nat& s) { return st->d0(s); };
  tables->w_fn = [st](const Nat& s, const Nat& t) { return st->w(s, t); };
  tables->w_prime_fn = [st](const Nat& s, const Nat& t) { return st->w_prime(s, t); };
  tables->d_fn = [st](const Nat& s, const Nat& t) { return st->d(s, t); };

  TZConditionalWitness w;
  w.k = k;
  w.d0 = bf_native(prefix + "d0");
  w.d = bf_native(prefix + "d");
  w.e = bf_native(prefix + "e");
  w.f = bf_native(prefix + "f");
  w.g = bf_native(prefix + "g");
  w.h = bf_native(prefix + "h");
  w.tables = tables;
  w.provenance = Provenance{"cond-to-tz", source};

  if (sidecar_json) {
    *sidecar_json = translation_sidecar(
        "cond-to-tz",
        {{prefix + "u", "u(x,s) = (s+2)(x+1)"},
         {prefix + "v", "v(s,y) = modulus of the gate under u(.,s) at y"},
         {prefix + "vp", "v'(s) = max over y <= s of v(s,y)"},
         {prefix + "d0", "d0(s) = 6v'(s) + 5"},
         {prefix + "w", "w(s,t) = max of the three value-operator moduli under u(.,s) at t"},
         {prefix + "wp", "w'(s,t) = max(v'(s), w(s,t))"},
         {prefix + "d", "d(s,t) = 6w'(s,t) + 5"},
         {prefix + "b", "b(data,s) = least x <= s accepted by the gate on rescaled data"},
         {prefix + "e", "e(data,s) = min over x <= s of the gate on rescaled data"},
         {prefix + "f", "f = F on the piecewise-rescaled names, switching at v'(s)"},
         {prefix + "g", "g = G on the piecewise-rescaled names, switching at v'(s)"},
         {prefix + "h", "h = H on the piecewise-rescaled names, switching at v'(s)"}});
  }
  return w;
}

// --- uniform direction -----------------------------------------------------

UniformSystem tz_to_operators_uniform(const TZUniformWitness& w) {
  unsigned k = w.k;
  UniformSystem out;
  out.k = k;
  auto build = [&](const BaseFnPtr& comp) {
    unsigned n = 3 * k;
    OperatorTerm c0 = ot_const(n, 0);
    std::vector<OperatorTerm> parts{ot_var(n)};
    for (unsigned i = 0; i < k; ++i) {
      parts.push_back(ot_apply(3 * i + 1, c0));
      parts.push_back(ot_apply(3 * i + 2, c0));
    }
    OperatorTerm tp = fold_max(parts);
    OperatorTerm dt = ot_base(w.d, {tp});
    std::vector<OperatorTerm> args;
    for (unsigned j = 1; j <= n; ++j) args.push_back(ot_apply(j, dt));
    args.push_back(tp);
    return ot_base(comp, args);
  };
  out.F = build(w.f);
  out.G = build(w.g);
  out.H = build(w.h);
  out.provenance = Provenance{"tz-to-unif", write_object_text(w)};
  return out;
}

TZUniformWitness operators_to_tz_uniform(const UniformSystem& sys, std::string* sidecar_json) {
  unsigned k = sys.k;
  UniformSystem n;
  n.k = k;
  n.F = k_precompose(sys.F, k, false);
  n.G = k_precompose(sys.G, k, false);
  n.H = k_precompose(sys.H, k, false);

  {
    FunctionOracle probe = common_majorant(0);
    modulus(n.F, probe, 0);
    modulus(n.G, probe, 0);
    modulus(n.H, probe, 0);
  }

  std::string source = write_object_text(sys);
  std::string prefix = "tzu." + hash_tag(source + "|unif-to-tz") + ".";
  NativeRegistry& reg = NativeRegistry::instance();

  struct UState {
    OperatorTerm F, G, H;
    unsigned k;
  };
  auto st = std::make_shared<UState>(UState{n.F, n.G, n.H, k});

  NativeFn d_fn = [st](std::span<const Nat> a) {
    FunctionOracle g = common_majorant(a[0]);
    Nat w = nat_max(modulus(st->F, g, a[0]), nat_max(modulus(st->G, g, a[0]), modulus(st->H, g, a[0])));
    return Nat(2 * w + 1);
  };
  reg.add(prefix + "d", {1, d_fn, d_fn, "d(t) = 2w(t)+1, w the max value-operator modulus"});

  auto add_value = [&](const char* name, const OperatorTerm& comp) {
    OperatorTerm term = comp;
    unsigned kk = k;
    reg.add(prefix + name,
            {3 * k + 1,
             [term, kk](std::span<const Nat> a) {
               auto oracles = ehelp_oracles(a.subspan(0, 3 * kk), kk);
               return eval_operator(term, oracles, a[3 * kk]);
             },
             [term](std::span<const Nat> a) {
               Nat p = max_of(a.subspan(0, a.size() - 1));
               FunctionOracle g([p](const Nat& x) { return Nat((p + 1) * (x + 1)); });
               return value_bound(term, g, a[a.size() - 1]);
             },
             "value operator on rescaled data"});
  };
  add_value("f", n.F);
  add_value("g", n.G);
  add_value("h", n.H);

  TZUniformWitness w;
  w.k = k;
  w.d = bf_native(prefix + "d");
  w.f = bf_native(prefix + "f");
  w.g = bf_native(prefix + "g");
  w.h = bf_native(prefix + "h");
  w.provenance = Provenance{"unif-to-tz", source};

  if (sidecar_json) {
    *sidecar_json = translation_sidecar(
        "unif-to-tz", {{prefix + "d", "d(t) = 2w(t)+1 with w(t) the max value-operator modulus "
                                      "under (t+2)(x+1)"},
                       {prefix + "f", "f = F on the rescaled data streams"},
                       {prefix + "g", "g = G on the rescaled data streams"},
                       {prefix + "h", "h = H on the rescaled data streams"}});
  }
  return w;
}

// --- effective search bound ---------------------------------------------------

SearchBound compute_search_bound(const ConditionalSystem& sys, std::span<const Rat> xs,
                                 const Nat& budget) {
  if (xs.size() != sys.k) throw ArityError("compute_search_bound: wrong number of coordinates");
  unsigned k = sys.k;
  Nat c = 1;
  for (const Rat& xi : xs) {
    Int b = rat_ceil(rat_abs(xi)) + 1;
    c = nat_max(c, Nat(b));
  }
  // every special name of the point (and the identity) stays below c(x+1)
  FunctionOracle g([c](const Nat& x) { return Nat(c * (x + 1)); },
                   [c](const Nat& x) { return Nat(c * (x + 1)); });
  bool gated = has_apply(sys.E);

  SearchBound out;
  out.T = 0;
  std::map<Nat, Nat> mod_memo;
  auto modulus_at = [&](const Nat& s) {
    auto it = mod_memo.find(s);
    if (it != mod_memo.end()) return it->second;
    Nat m = modulus(sys.E, g, s);
    return mod_memo.emplace(s, m).first->second;
  };

  std::vector<std::vector<Nat>> prefix;
  std::vector<std::vector<std::vector<Nat>>> levels;
  Nat nodes = 0;

  std::vector<FunctionOracle> oracles;
  for (unsigned i = 0; i < k; ++i) {
    oracles.push_back(FunctionOracle([&prefix, i](const Nat& x) {
      std::size_t n = static_cast<std::size_t>(x);
      if (n >= prefix.size()) throw Error("internal: read past the explored prefix");
      return prefix[n][2 * i];
    }));
    oracles.push_back(FunctionOracle([&prefix, i](const Nat& x) {
      std::size_t n = static_cast<std::size_t>(x);
      if (n >= prefix.size()) throw Error("internal: read past the explored prefix");
      return prefix[n][2 * i + 1];
    }));
    oracles.push_back(FunctionOracle::identity());
  }

  auto rec = [&](auto&& self, const Nat& s_from) -> void {
    if (++nodes > budget) throw BudgetExhaustedError("search-bound exploration", budget.str());
    Nat z(prefix.size());
    if (z > out.explored_depth) out.explored_depth = z;
    // test only parameters that this depth newly determines; shallower ones
    // were already rejected along this branch
    Nat s = s_from;
    while (true) {
      if (s > budget) throw BudgetExhaustedError("search-bound parameter scan", budget.str());
      if (gated && !(modulus_at(s) < z)) break;
      if (eval_operator(sys.E, oracles, s) == 0) {
        out.certificate.emplace_back(prefix, s);
        out.branch_count += 1;
        out.T = nat_max(out.T, s);
        return;
      }
      ++s;
    }
    std::size_t depth = prefix.size();
    if (levels.size() <= depth) levels.push_back(enumerate_special_prefix(xs, Nat(depth)));
    for (const auto& tuple : levels[depth]) {
      prefix.push_back(tuple);
      self(self, s);
      prefix.pop_back();
    }
  };
  rec(rec, Nat(0));
  return out;
}

}  // namespace condreal
