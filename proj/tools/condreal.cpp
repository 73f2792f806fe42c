// Command-line front end: expression evaluation to a requested precision,
// witness/system translation, search-bound computation, witness checking and
// DSL validation.  All output is deterministic for a fixed invocation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "condreal/elementary.hpp"
#include "condreal/errors.hpp"
#include "condreal/serialize.hpp"
#include "condreal/translations.hpp"

using namespace condreal;

namespace {

constexpr int kExitParse = 1;
constexpr int kExitUnbound = 2;
constexpr int kExitBudget = 3;
constexpr int kExitMissing = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

// Least t with 1/(t+1) <= eps.
Nat eps_to_t(const Rat& eps) {
  if (eps <= 0) throw Error("--eps must be positive");
  Int t1 = rat_ceil(1 / eps);
  return t1 >= 1 ? Nat(t1 - 1) : Nat(0);
}

std::string decimal_render(const Rat& x, unsigned digits) {
  Int num = rat_num(x), den = rat_den(x);
  bool neg = num < 0;
  if (neg) num = -num;
  Int scale = 1;
  for (unsigned i = 0; i < digits; ++i) scale *= 10;
  Int scaled = num * scale;
  Int q = scaled / den, r = scaled % den;
  if (2 * r >= den) ++q;  // round to nearest, ties away from zero
  Int whole = q / scale, frac = q % scale;
  std::string fs = frac.str();
  while (fs.size() < digits) fs = "0" + fs;
  std::string out = (neg && q != 0 ? "-" : "") + whole.str();
  if (digits > 0) out += "." + fs;
  return out;
}

struct Format {
  bool decimal = false;
  unsigned digits = 6;
};

Format parse_format(const std::string& spec) {
  if (spec == "rational") return {};
  if (spec.rfind("decimal:", 0) == 0) {
    Format f;
    f.decimal = true;
    f.digits = static_cast<unsigned>(std::stoul(spec.substr(8)));
    return f;
  }
  throw Error("unknown --format '" + spec + "' (rational | decimal:D)");
}

std::string render_result(const RationalApprox& approx, const Nat& t, const Format& fmt) {
  std::string bound = " (± 1/" + Nat(t + 1).str() + ")";
  if (fmt.decimal) return decimal_render(approx.value(), fmt.digits) + bound;
  return rat_str(approx.value()) + bound;
}

std::vector<Rat> parse_point(const std::string& text) {
  std::vector<Rat> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      out.push_back(parse_rational(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"exact real arithmetic through conditional computing systems"};
  app.require_subcommand(1);

  // --- eval ---
  auto* eval = app.add_subcommand("eval", "evaluate an expression to a requested precision");
  std::string expr_text;
  std::vector<std::string> var_specs;
  std::string t_spec, eps_spec, format_spec = "rational";
  std::string budget_spec = "65536", seed_spec = "0";
  bool trace = false;
  eval->add_option("expr", expr_text)->required();
  eval->add_option("--var", var_specs, "binding name=RATIONAL (repeatable)");
  eval->add_option("--t", t_spec, "precision index: result within 1/(t+1)");
  eval->add_option("--eps", eps_spec, "precision as a positive rational");
  eval->add_option("--budget", budget_spec);
  eval->add_option("--seed", seed_spec);
  eval->add_option("--format", format_spec, "rational | decimal:D");
  eval->add_flag("--trace", trace, "print per-node parameter and touched indices");

  // --- translate ---
  auto* translate = app.add_subcommand("translate", "convert between systems and witnesses");
  std::string direction, in_path, out_path, sidecar_path;
  translate->add_option("direction", direction)
      ->required()
      ->check(CLI::IsMember({"cond-to-tz", "tz-to-cond", "unif-to-tz", "tz-to-unif",
                             "unif-to-cond", "normalize"}));
  translate->add_option("input", in_path)->required();
  translate->add_option("output", out_path)->required();
  translate->add_option("--sidecar", sidecar_path, "provenance sidecar path");

  // --- bound ---
  auto* bound = app.add_subcommand("bound", "per-point parameter bound over special names");
  std::string bound_file, bound_point, bound_budget = "65536";
  bound->add_option("system", bound_file)->required();
  bound->add_option("--point", bound_point)->required();
  bound->add_option("--budget", bound_budget);

  // --- check ---
  auto* check = app.add_subcommand("check", "adversarial validation of a conditional witness");
  std::string check_file, check_point, tmax_spec = "50", samples_spec = "200";
  std::string check_seed = "0", oracle_value, oracle_expr, replay_out;
  check->add_option("witness", check_file)->required();
  check->add_option("--point", check_point)->required();
  check->add_option("--t-max", tmax_spec);
  check->add_option("--samples", samples_spec);
  check->add_option("--seed", check_seed);
  check->add_option("--oracle-value", oracle_value, "exact rational value at the point");
  check->add_option("--oracle-expr", oracle_expr, "expression giving the value (vars x1..xk)");
  check->add_option("--replay-out", replay_out, "replay file for violations");

  // --- parse-base ---
  auto* parse_base = app.add_subcommand("parse-base", "validate a base-DSL term");
  std::string term_arg, eval_args, majorant_args;
  parse_base->add_option("term", term_arg, "term text, or a file containing it")->required();
  parse_base->add_option("--eval", eval_args, "comma-separated naturals to evaluate at");
  parse_base->add_option("--majorant", majorant_args, "evaluate the majorant instead");

  // --- export-builtin ---
  auto* exportb = app.add_subcommand("export-builtin", "write a builtin system to a file");
  std::string builtin_name, export_path;
  bool export_uniform = false;
  exportb->add_option("name", builtin_name)->required();
  exportb->add_option("output", export_path)->required();
  exportb->add_flag("--uniform", export_uniform, "export the uniform system instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  if (eval->parsed()) {
    if (t_spec.empty() == eps_spec.empty())
      throw Error("exactly one of --t and --eps is required");
    Nat t = t_spec.empty() ? eps_to_t(parse_rational(eps_spec)) : Nat(t_spec);
    Nat budget(budget_spec);
    Format fmt = parse_format(format_spec);
    std::map<std::string, Rat> bindings;
    for (const auto& spec : var_specs) {
      std::size_t eq = spec.find('=');
      if (eq == std::string::npos) throw Error("--var expects name=RATIONAL");
      bindings[spec.substr(0, eq)] = parse_rational(spec.substr(eq + 1));
    }
    ExprPtr expr = parse_expression(expr_text);
    EvalResult result = evaluate_expression(expr, bindings, t, budget, trace);
    for (const auto& line : result.trace)
      std::cout << "node=" << line.node_id << " s=" << line.s.str()
                << " d0=" << line.gate_index.str() << " d=" << line.read_index.str() << "\n";
    std::cout << render_result(result.approx, t, fmt) << "\n";
    return 0;
  }

  if (translate->parsed()) {
    std::string text = read_file(in_path);
    std::string out_text, sidecar;
    if (direction == "cond-to-tz") {
      out_text = write_object_text(operators_to_tz_conditional(load_conditional_system(text), &sidecar));
    } else if (direction == "tz-to-cond") {
      out_text = write_object_text(tz_to_operators_conditional(load_tz_conditional(text)));
    } else if (direction == "unif-to-tz") {
      out_text = write_object_text(operators_to_tz_uniform(load_uniform_system(text), &sidecar));
    } else if (direction == "tz-to-unif") {
      out_text = write_object_text(tz_to_operators_uniform(load_tz_uniform(text)));
    } else if (direction == "unif-to-cond") {
      out_text = write_object_text(uniform_to_conditional(load_uniform_system(text)));
    } else {  // normalize
      out_text = write_object_text(normalize_system(load_conditional_system(text)));
    }
    write_file(out_path, out_text + "\n");
    if (!sidecar.empty()) {
      std::string sc = sidecar_path.empty() ? out_path + ".provenance.json" : sidecar_path;
      write_file(sc, sidecar);
    }
    std::cout << "wrote " << out_path << "\n";
    return 0;
  }

  if (bound->parsed()) {
    ConditionalSystem sys = load_conditional_system(read_file(bound_file));
    if (!sys.normalized) {
      std::cout << "notice: input not marked normalized; normalizing first\n";
      sys = normalize_system(sys);
    }
    std::vector<Rat> point = parse_point(bound_point);
    SearchBound sb = compute_search_bound(sys, point, Nat(bound_budget));
    std::cout << "T = " << sb.T.str() << "\n";
    std::cout << "explored depth = " << sb.explored_depth.str() << "\n";
    std::cout << "closed branches = " << sb.branch_count.str() << "\n";
    return 0;
  }

  if (check->parsed()) {
    TZConditionalWitness w = load_tz_conditional(read_file(check_file));
    std::vector<Rat> point = parse_point(check_point);
    PointOracle oracle;
    if (!oracle_value.empty()) {
      Rat v = parse_rational(oracle_value);
      oracle = [v](std::span<const Rat>, const Rat&) { return ValueBracket{v, v}; };
    } else if (!oracle_expr.empty()) {
      ExprPtr expr = parse_expression(oracle_expr);
      oracle = [expr](std::span<const Rat> xs, const Rat& eps) {
        std::map<std::string, Rat> bindings;
        for (std::size_t i = 0; i < xs.size(); ++i)
          bindings["x" + std::to_string(i + 1)] = xs[i];
        Rat e = eps > 0 ? eps : Rat(1, 1000000);
        Nat t = eps_to_t(e / 2);
        Rat mid = evaluate_expression(expr, bindings, t, Nat(65536), false).approx.value();
        Rat half(1, Int(t) + 1);
        return ValueBracket{mid - half, mid + half};
      };
    } else {
      throw Error("one of --oracle-value or --oracle-expr is required");
    }
    CheckReport report =
        check_tz_conditional_at_point(w, point, oracle, Nat(tmax_spec), Nat(samples_spec),
                                      std::stoull(check_seed));
    std::cout << "point = " << check_point << "\n";
    std::cout << "t-max = " << tmax_spec << ", samples = " << samples_spec
              << ", seed = " << check_seed << "\n";
    std::cout << "s0 estimate = "
              << (report.s0_estimate ? report.s0_estimate->str() : std::string("none")) << "\n";
    std::cout << "note: " << report.note << "\n";
    std::cout << report.violations.size() << " violations\n";
    if (!report.violations.empty()) {
      std::string rp = replay_out.empty() ? check_file + ".replay.txt" : replay_out;
      write_file(rp, report.replay_text());
      std::cout << "replay file: " << rp << "\n";
      return 5;
    }
    return 0;
  }

  if (parse_base->parsed()) {
    std::string text = term_arg;
    if (!text.empty() && text[0] != '(') text = read_file(term_arg);
    BaseFnPtr f = parse_base_function(text);
    std::cout << "arity " << f->arity() << "\n";
    std::cout << write_base_function(*f) << "\n";
    auto run_at = [&](const std::string& spec, bool majorant) {
      std::vector<Nat> args;
      std::size_t start = 0;
      for (std::size_t i = 0; i <= spec.size(); ++i) {
        if (i == spec.size() || spec[i] == ',') {
          args.push_back(Nat(spec.substr(start, i - start)));
          start = i + 1;
        }
      }
      Nat v = majorant ? majorant_eval(*f, args) : eval_base(*f, args);
      std::cout << (majorant ? "majorant " : "value ") << v.str() << "\n";
    };
    if (!eval_args.empty()) run_at(eval_args, false);
    if (!majorant_args.empty()) run_at(majorant_args, true);
    return 0;
  }

  if (exportb->parsed()) {
    std::string text = export_uniform ? write_object_text(builtin_uniform(builtin_name))
                                      : write_object_text(builtin_system(builtin_name));
    write_file(export_path, text + "\n");
    std::cout << "wrote " << export_path << "\n";
    return 0;
  }

  return kExitParse;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const BudgetExhaustedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const UnboundVariableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnbound;
  } catch (const MissingMajorantError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMissing;
  } catch (const UnknownNativeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMissing;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
}
