#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmlab/arith.hpp"
#include "qmlab/cmtaylor.hpp"
#include "qmlab/formspec.hpp"
#include "qmlab/modpoly.hpp"
#include "qmlab/qmpoly.hpp"
#include "qmlab/ssing.hpp"

using namespace qmlab;

namespace {

// Rationals in machine output are "num/den" strings (never floats).
std::string rat_str(const BigRational& x) { return x.get_str(); }

std::string factored_str(const BigRational& x) {
  if (x == 0) return "0";
  std::string s = factor_bounded(numerator(x)).to_string();
  if (denominator(x) != 1) s += " / (" + factor_bounded(denominator(x)).to_string() + ")";
  return s;
}

// --form NAME_OR_LITERAL with optional --form-deriv NAME:n shorthand.
QMPoly resolve_form_flags(const std::string& form, const std::string& form_deriv, int derive_n_flag) {
  if (!form.empty() && !form_deriv.empty())
    throw CLI::ValidationError("--form and --form-deriv are mutually exclusive");
  std::string base = form;
  int order = derive_n_flag;
  if (!form_deriv.empty()) {
    auto colon = form_deriv.rfind(':');
    if (colon == std::string::npos)
      throw CLI::ValidationError("--form-deriv expects NAME:n, e.g. E4:5");
    base = form_deriv.substr(0, colon);
    try {
      size_t used = 0;
      order = std::stoi(form_deriv.substr(colon + 1), &used);
      if (used != form_deriv.size() - colon - 1 || order < 0) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw CLI::ValidationError("--form-deriv expects a nonnegative derivative order after ':'");
    }
  }
  if (base.empty()) throw CLI::ValidationError("a form is required (--form or --form-deriv)");
  return derive_n(resolve_form(base), order);
}

long require_prime(long p) {
  if (p < 5 || !is_prime(BigInt(p)))
    throw CLI::ValidationError("--p must be a prime >= 5, got " + std::to_string(p));
  return p;
}

struct TaylorConfig {
  std::string form, point;
  int n = -1, n_from = -1, n_to = -1;
  std::vector<long> primes;
};

int run_taylor(const TaylorConfig& cfg, const std::string& registry_path) {
  if ((cfg.n >= 0) == (cfg.n_from >= 0))
    throw CLI::ValidationError("taylor needs exactly one of --n or --n-from/--n-to");
  int lo = cfg.n >= 0 ? cfg.n : cfg.n_from;
  int hi = cfg.n >= 0 ? cfg.n : cfg.n_to;
  if (hi < lo) throw CLI::ValidationError("--n-to must be >= --n-from");
  for (long p : cfg.primes)
    if (p < 2 || !is_prime(BigInt(p)))
      throw CLI::ValidationError("--primes entries must be prime, got " + std::to_string(p));
  QMPoly f = resolve_form(cfg.form);
  const std::vector<CMPoint> points = effective_registry(registry_path);
  const CMPoint& pt = find_point(points, cfg.point);
  DerivativeChain chain(f);
  chain.advance_to(lo);
  for (int n = lo;; ++n) {
    TaylorCoeff t = chain.value_at(pt);
    nlohmann::ordered_json row;
    row["form"] = cfg.form;
    row["weight"] = f.weight();
    row["point"] = pt.name;
    row["n"] = n;
    row["value"] = rat_str(t.value);
    row["factored"] = factored_str(t.value);
    if (!cfg.primes.empty()) {
      nlohmann::ordered_json vals;
      for (long p : cfg.primes) {
        auto v = padic_valuation(t.value, BigInt(p));
        if (v)
          vals[std::to_string(p)] = *v;
        else
          vals[std::to_string(p)] = "inf";
      }
      row["valuations"] = vals;
    }
    std::cout << row.dump() << "\n";
    if (n == hi) break;
    chain.advance();
  }
  return 0;
}

struct SweepConfig {
  std::string form, point, mode = "weak", out;
  long p = 0;
  int m = 0, n_from = -1, n_to = -1;
};

int run_sweep(const SweepConfig& cfg, const std::string& registry_path) {
  QMPoly f = resolve_form(cfg.form);
  const std::vector<CMPoint> points = effective_registry(registry_path);
  const CMPoint& pt = find_point(points, cfg.point);
  Report report = sweep(f, cfg.form, pt, require_prime(cfg.p), cfg.m, cfg.n_from, cfg.n_to,
                        sweep_mode_from_string(cfg.mode));
  for (const auto& note : report.hypothesis_notes) std::cerr << "note: " << note << "\n";
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) throw CLI::ValidationError("cannot open --out file '" + cfg.out + "'");
    out = &file;
  }
  for (const auto& row : report.rows) *out << row_to_json(row) << "\n";
  if (!report.all_pass()) {
    std::cerr << report.failure_count() << " of " << report.rows.size()
              << " rows fail the required bound\n";
    return 1;
  }
  return 0;
}

struct FiltrationConfig {
  std::string form;
  long p = 0;
  int m = 1;
  bool json = false;
};

int run_filtration(const FiltrationConfig& cfg) {
  QMPoly f = resolve_form(cfg.form);
  ModPoly reduced = reduce_poly(f, require_prime(cfg.p), cfg.m);
  int w = filtration(reduced);
  if (!cfg.json) {
    std::cout << w << "\n";
    return 0;
  }
  nlohmann::ordered_json row;
  row["form"] = cfg.form;
  row["weight"] = f.weight();
  row["p"] = cfg.p;
  row["m"] = cfg.m;
  row["filtration"] = w;
  std::cout << row.dump() << "\n";
  return 0;
}

struct ValuationConfig {
  std::string form, form_deriv;
  int derive = 0;
  long p = 0;
  bool json = false;
};

int run_valuation(const ValuationConfig& cfg) {
  QMPoly f = resolve_form_flags(cfg.form, cfg.form_deriv, cfg.derive);
  auto v = ideal_valuation(f, require_prime(cfg.p));
  std::string shown = v ? std::to_string(*v) : "inf";
  if (!cfg.json) {
    std::cout << shown << "\n";
    return 0;
  }
  nlohmann::ordered_json row;
  row["form"] = cfg.form.empty() ? cfg.form_deriv : cfg.form;
  row["weight"] = f.weight();
  row["p"] = cfg.p;
  if (v)
    row["valuation"] = *v;
  else
    row["valuation"] = "inf";
  std::cout << row.dump() << "\n";
  return 0;
}

struct SSPolyConfig {
  long p = 0;
  bool json = false;
};

int run_sspoly(const SSPolyConfig& cfg) {
  SSPoly ss = ss_poly(require_prime(cfg.p));
  if (!cfg.json) {
    std::cout << ss.to_string() << "\n";
    return 0;
  }
  KZDecomposition kz = kz_decompose(cfg.p);
  nlohmann::ordered_json row;
  row["p"] = ss.p;
  row["poly"] = ss.to_string();
  row["coeffs"] = ss.coeffs;
  row["roots"] = ss.roots();
  row["kz_n"] = kz.n;
  row["kz_delta"] = kz.delta;
  row["kz_epsilon"] = kz.epsilon;
  std::cout << row.dump() << "\n";
  return 0;
}

int run_registry_list(const std::string& registry_path) {
  for (const auto& pt : effective_registry(registry_path)) {
    nlohmann::ordered_json row;
    row["name"] = pt.name;
    row["d"] = pt.d;
    row["pstar"] = rat_str(pt.pstar);
    row["q"] = rat_str(pt.q);
    row["r"] = rat_str(pt.r);
    row["omega_decimal"] = pt.omega_decimal;
    row["scale_note"] = pt.scale_note;
    std::cout << row.dump() << "\n";
  }
  return 0;
}

int run_registry_validate(const std::string& registry_path) {
  if (registry_path.empty())
    throw CLI::ValidationError("registry validate requires --registry (or QMLAB_REGISTRY)");
  std::vector<CMPoint> points = load_registry_file(registry_path);  // throws on invalid
  std::cerr << "ok: " << points.size() << " valid point" << (points.size() == 1 ? "" : "s")
            << " in " << registry_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qmlab: exact calculus of quasimodular forms - CM Taylor coefficients,\n"
      "p-adic congruence sweeps, mod-p^m filtrations, ideal valuations, and\n"
      "supersingular polynomials. Machine output is UTF-8 JSON-lines; rationals\n"
      "are \"num/den\" strings. Exit codes: 0 all-pass, 1 a required sweep row\n"
      "failed, 2 usage or configuration error."};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  std::string registry_path;
  app.add_option("--registry", registry_path,
                 "CM-point registry JSON file overlaying the shipped points "
                 "(env: QMLAB_REGISTRY)");

  TaylorConfig taylor_cfg;
  CLI::App* taylor = app.add_subcommand(
      "taylor", "Taylor coefficients t_f(tau; n): exact value, bounded factorization, "
                "optional p-adic valuations (JSON-lines)");
  taylor->add_option("--form", taylor_cfg.form, "form name or P,Q,R literal")->required();
  taylor->add_option("--point", taylor_cfg.point, "CM point name")->required();
  taylor->add_option("--n", taylor_cfg.n, "single derivative order");
  taylor->add_option("--n-from", taylor_cfg.n_from, "range start");
  taylor->add_option("--n-to", taylor_cfg.n_to, "range end (inclusive)");
  taylor->add_option("--primes", taylor_cfg.primes, "primes to report valuations for")
      ->delimiter(',');

  SweepConfig sweep_cfg;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "valuation sweep of t_f(tau; n) against the mode's bound (JSON-lines; "
               "exit 1 if a required row fails)");
  sweep_cmd->add_option("--form", sweep_cfg.form, "form name or literal")->required();
  sweep_cmd->add_option("--point", sweep_cfg.point, "CM point name")->required();
  sweep_cmd->add_option("--p", sweep_cfg.p, "prime >= 5")->required();
  sweep_cmd->add_option("--m", sweep_cfg.m, "target power of p")->required();
  sweep_cmd->add_option("--n-from", sweep_cfg.n_from, "range start")->required();
  sweep_cmd->add_option("--n-to", sweep_cfg.n_to, "range end (inclusive)")->required();
  sweep_cmd->add_option("--mode", sweep_cfg.mode, "weak | sharp | conjecture (default weak)");
  sweep_cmd->add_option("--out", sweep_cfg.out, "write rows to this file instead of stdout");

  FiltrationConfig filt_cfg;
  CLI::App* filt = app.add_subcommand("filtration",
                                      "filtration weight of a form reduced mod p^m");
  filt->add_option("--form", filt_cfg.form, "form name or literal")->required();
  filt->add_option("--p", filt_cfg.p, "prime >= 5")->required();
  filt->add_option("--m", filt_cfg.m, "power of p (default 1)");
  filt->add_flag("--json", filt_cfg.json, "emit a JSON row instead of the bare value");

  ValuationConfig val_cfg;
  CLI::App* val = app.add_subcommand(
      "valuation", "largest n with f in (A^p, p)^n; \"inf\" for the zero form");
  val->add_option("--form", val_cfg.form, "form name or literal");
  val->add_option("--form-deriv", val_cfg.form_deriv,
                  "NAME:n, the n-th Ramanujan derivative of a named form (e.g. E4:5)");
  val->add_option("--derive", val_cfg.derive, "apply D^n to --form first (default 0)");
  val->add_option("--p", val_cfg.p, "prime >= 5")->required();
  val->add_flag("--json", val_cfg.json, "emit a JSON row instead of the bare value");

  SSPolyConfig ss_cfg;
  CLI::App* ss = app.add_subcommand("sspoly", "supersingular polynomial ss_p(j) over F_p");
  ss->add_option("--p", ss_cfg.p, "prime >= 5")->required();
  ss->add_flag("--json", ss_cfg.json, "emit a JSON row with coefficients, roots and the "
                                      "Kaneko-Zagier shape");

  CLI::App* reg = app.add_subcommand("registry", "list or validate CM-point registries");
  reg->require_subcommand(1);
  CLI::App* reg_list = reg->add_subcommand("list", "print the effective registry (JSON-lines)");
  CLI::App* reg_validate =
      reg->add_subcommand("validate", "check a registry file (exit 0 valid, 2 invalid)");

  int exit_code = 0;
  taylor->callback([&] { exit_code = run_taylor(taylor_cfg, registry_path); });
  sweep_cmd->callback([&] { exit_code = run_sweep(sweep_cfg, registry_path); });
  filt->callback([&] { exit_code = run_filtration(filt_cfg); });
  val->callback([&] { exit_code = run_valuation(val_cfg); });
  ss->callback([&] { exit_code = run_sspoly(ss_cfg); });
  reg_list->callback([&] { exit_code = run_registry_list(registry_path); });
  reg_validate->callback([&] { exit_code = run_registry_validate(registry_path); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
