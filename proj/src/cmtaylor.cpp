#include "qmlab/cmtaylor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace qmlab {

namespace {

void check_discriminant(int d) {
  if (d <= 0 || (d % 4 != 0 && d % 4 != 3))
    throw std::invalid_argument("kronecker_chi: -" + std::to_string(d) +
                                " is not congruent to 0 or 1 mod 4");
}

}  // namespace

int kronecker_chi(int d, const BigInt& j) {
  check_discriminant(d);
  return mpz_si_kronecker(-static_cast<long>(d), j.get_mpz_t());
}

ClassData class_data(int d) {
  check_discriminant(d);
  int h = 0;
  for (int a = 1; 3 * a * a <= d; ++a)
    for (int b = -a; b <= a; ++b) {
      if ((b * b + d) % (4 * a) != 0) continue;
      int c = (b * b + d) / (4 * a);
      if (c < a) continue;
      if (b < 0 && (-b == a || a == c)) continue;  // avoid double-counting (a,-b,c)
      if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
      ++h;
    }
  int w = d == 3 ? 6 : d == 4 ? 4 : 2;
  return ClassData{h, w};
}

double chowla_selberg(int d) {
  ClassData cd = class_data(d);
  double s = 0.0;
  for (int j = 1; j < d; ++j) {
    int chi = kronecker_chi(d, BigInt(j));
    if (chi != 0) s += chi * std::lgamma(static_cast<double>(j) / d);
  }
  double pi = std::acos(-1.0);
  return std::exp(s * cd.w / (4.0 * cd.h)) / std::sqrt(2.0 * pi * d);
}

bool legendre_applicable(int d, long p) { return kronecker_chi(d, BigInt(p)) <= 0; }

void check_z16(const BigRational& x, const std::string& what) {
  BigInt den = denominator(x);
  BigInt stripped;
  mpz_remove(stripped.get_mpz_t(), den.get_mpz_t(), BigInt(2).get_mpz_t());
  mpz_remove(stripped.get_mpz_t(), stripped.get_mpz_t(), BigInt(3).get_mpz_t());
  if (stripped != 1)
    throw std::domain_error(what + ": value " + x.get_str() +
                            " has a denominator prime factor other than 2 and 3");
}

namespace {

std::array<BigRational, 3> triple_of(const CMPoint& pt) { return {pt.pstar, pt.q, pt.r}; }

TaylorCoeff checked_value(const QMPoly& dnf, const CMPoint& pt, int n) {
  BigRational v = evaluate(phi(dnf), triple_of(pt));
  check_z16(v, "taylor_coeff(" + pt.name + "; n=" + std::to_string(n) + ")");
  return TaylorCoeff{n, v};
}

}  // namespace

TaylorCoeff taylor_coeff(const QMPoly& f, const CMPoint& pt, int n) {
  if (n < 0) throw std::invalid_argument("taylor_coeff: negative n");
  return checked_value(derive_n(f, n), pt, n);
}

DerivativeChain::DerivativeChain(QMPoly f) : cur_(std::move(f)) {
  if (cur_.kind() != VarKind::holo)
    throw std::invalid_argument("DerivativeChain: starred input");
}

void DerivativeChain::advance() {
  cur_ = derive(cur_);
  ++n_;
}

void DerivativeChain::advance_to(int n) {
  if (n < n_) throw std::invalid_argument("DerivativeChain: cannot rewind");
  while (n_ < n) advance();
}

TaylorCoeff DerivativeChain::value_at(const CMPoint& pt) const {
  return checked_value(cur_, pt, n_);
}

QMPoly nonholo_eq56(const QMPoly& f, int n) {
  if (f.kind() != VarKind::holo || !f.is_pfree())
    throw std::invalid_argument("nonholo_eq56: input must be a P-free holomorphic-kind form");
  if (n < 0) throw std::invalid_argument("nonholo_eq56: negative n");
  int k = f.weight();
  std::vector<QMPoly> chain{f};
  chain.reserve(n + 1);
  for (int j = 0; j < n; ++j) chain.push_back(derive(chain.back()));

  // Key: (P*-exponent, P-exponent, Q-exponent, R-exponent). The holomorphic
  // P entries must cancel to zero in the final sum.
  std::map<std::array<int, 4>, BigRational> acc;
  BigInt twelve_r(1);
  for (int r = 0; r <= n; ++r) {
    BigInt outer = binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(r)) *
                   falling_factorial(static_cast<unsigned long>(k + n - 1),
                                     static_cast<unsigned long>(r));
    const QMPoly& base = chain[n - r];
    for (int s = 0; s <= r; ++s) {
      BigInt num = outer * binomial(static_cast<unsigned long>(r), static_cast<unsigned long>(s));
      if ((r - s) % 2 != 0) num = -num;
      BigRational scale = make_rational(num, twelve_r);
      for (const auto& [mon, c] : base.terms())
        acc[{s, mon.a + (r - s), mon.b, mon.c}] += scale * c;
    }
    twelve_r *= 12;
  }

  std::vector<std::pair<Monomial, BigRational>> terms;
  for (const auto& [key, c] : acc) {
    if (c == 0) continue;
    if (key[1] != 0)
      throw std::logic_error("nonholo_eq56: holomorphic P failed to cancel");
    terms.emplace_back(Monomial{key[0], key[2], key[3]}, c);
  }
  return QMPoly::from_terms(k + 2 * n, VarKind::star, std::move(terms));
}

QMPoly nonholo_derive(const QMPoly& f) {
  if (f.kind() == VarKind::star) return phi(derive(unphi(f)));
  if (!f.is_pfree())
    throw std::invalid_argument("nonholo_derive: holomorphic-kind input must be P-free");
  return phi(derive(f));
}

SweepMode sweep_mode_from_string(const std::string& s) {
  if (s == "weak") return SweepMode::weak;
  if (s == "sharp") return SweepMode::sharp;
  if (s == "conjecture") return SweepMode::conjecture;
  throw std::invalid_argument("unknown sweep mode '" + s + "' (weak, sharp, conjecture)");
}

std::string to_string(SweepMode mode) {
  switch (mode) {
    case SweepMode::weak: return "weak";
    case SweepMode::sharp: return "sharp";
    case SweepMode::conjecture: return "conjecture";
  }
  throw std::logic_error("to_string(SweepMode)");
}

long sweep_threshold(SweepMode mode, long p, int m) {
  long factor = mode == SweepMode::weak ? m - 1 : (m + 1) / 2;
  return factor * p * p;
}

bool Report::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.pass; });
}

int Report::failure_count() const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(),
                                        [](const SweepRow& r) { return !r.pass; }));
}

std::string row_to_json(const SweepRow& row) {
  nlohmann::ordered_json j;
  j["form"] = row.form;
  j["point"] = row.point;
  j["p"] = row.p;
  j["m"] = row.m;
  j["n"] = row.n;
  if (row.valuation)
    j["valuation"] = *row.valuation;
  else
    j["valuation"] = "inf";
  j["bound"] = row.bound;
  j["required"] = row.required;
  j["pass"] = row.pass;
  j["mode"] = row.mode;
  return j.dump();
}

Report sweep(const QMPoly& f, const std::string& form_name, const CMPoint& pt, long p, int m,
             int n_from, int n_to, SweepMode mode) {
  if (f.kind() != VarKind::holo || !f.is_pfree())
    throw std::invalid_argument("sweep: form must be P-free (modular)");
  if (f.is_zero()) throw std::invalid_argument("sweep: zero form");
  if (p < 5 || !is_prime(BigInt(p))) throw std::invalid_argument("sweep: p must be a prime >= 5");
  if (m < 1) throw std::invalid_argument("sweep: m must be >= 1");
  if (n_from < 0 || n_from > n_to) throw std::invalid_argument("sweep: bad n range");

  int k = f.weight();
  Report report;
  std::string chi_msg = "chi_{-" + std::to_string(pt.d) + "}(" + std::to_string(p) +
                        ") = " + std::to_string(kronecker_chi(pt.d, BigInt(p)));
  bool inert_or_ramified = legendre_applicable(pt.d, p);
  switch (mode) {
    case SweepMode::weak:
      if (!inert_or_ramified)
        throw std::invalid_argument("sweep(weak): hypothesis chi_{-d}(p) in {0,-1} fails: " +
                                    chi_msg);
      if (m <= 1)
        throw std::invalid_argument("sweep(weak): hypothesis m > 1 fails: m = " +
                                    std::to_string(m));
      break;
    case SweepMode::sharp:
      if (!inert_or_ramified)
        throw std::invalid_argument("sweep(sharp): hypothesis chi_{-d}(p) in {0,-1} fails: " +
                                    chi_msg);
      if (m > k - 2)
        throw std::invalid_argument("sweep(sharp): hypothesis m <= k-2 fails: m = " +
                                    std::to_string(m) + ", k = " + std::to_string(k));
      if (p < 2 * k - 2)
        throw std::invalid_argument("sweep(sharp): hypothesis p >= 2k-2 fails: p = " +
                                    std::to_string(p) + ", k = " + std::to_string(k));
      break;
    case SweepMode::conjecture:
      if (!inert_or_ramified)
        report.hypothesis_notes.push_back(
            chi_msg + ": inert-or-ramified hypothesis fails; rows computed as a necessity probe");
      break;
  }

  long threshold = sweep_threshold(mode, p, m);
  BigInt bp(p);
  DerivativeChain chain(f);
  chain.advance_to(n_from);
  for (int n = n_from;; ++n) {
    TaylorCoeff t = chain.value_at(pt);
    SweepRow row;
    row.form = form_name;
    row.point = pt.name;
    row.p = p;
    row.m = m;
    row.n = n;
    row.valuation = padic_valuation(t.value, bp);
    row.bound = m;
    row.required = n >= threshold;
    row.pass = !row.required || !row.valuation || *row.valuation >= m;
    row.mode = to_string(mode);
    report.rows.push_back(std::move(row));
    if (n == n_to) break;
    chain.advance();
  }
  return report;
}

const std::vector<CMPoint>& shipped_points() {
  static const std::vector<CMPoint> points = {
      CMPoint{"i", 4, BigRational(0), BigRational(12), BigRational(0), "0.590170299508048",
              "Omega_tau = Omega*_{-4}"},
      CMPoint{"tau7", 7, BigRational(3), BigRational(105), BigRational(1323), "0.307696114486339",
              "Omega_tau = Omega*_{-7} / 7^(1/4), which makes the triple rational integers"},
  };
  return points;
}

namespace {

BigRational registry_rational(const nlohmann::json& obj, const std::string& key,
                              const std::string& where) {
  if (!obj.contains(key)) throw std::invalid_argument(where + ": missing key \"" + key + "\"");
  const auto& v = obj.at(key);
  if (!v.is_string())
    throw std::invalid_argument(where + ": key \"" + key +
                                "\" must be a rational string like \"3\" or \"105/2\"");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const std::exception& e) {
    throw std::invalid_argument(where + ": key \"" + key + "\": " + e.what());
  }
}

CMPoint point_from_json(const nlohmann::json& obj, size_t index) {
  std::string where = "registry entry #" + std::to_string(index);
  if (!obj.is_object()) throw std::invalid_argument(where + ": not a JSON object");
  static const std::vector<std::string> known = {"name", "d",             "pstar",     "q",
                                                 "r",    "omega_decimal", "scale_note"};
  for (const auto& [key, value] : obj.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument(where + ": unknown key \"" + key + "\"");
  if (!obj.contains("name") || !obj.at("name").is_string() ||
      obj.at("name").get<std::string>().empty())
    throw std::invalid_argument(where + ": missing or empty \"name\"");
  CMPoint pt;
  pt.name = obj.at("name").get<std::string>();
  where = "registry point \"" + pt.name + "\"";
  if (!obj.contains("d") || !obj.at("d").is_number_integer())
    throw std::invalid_argument(where + ": missing integer \"d\"");
  pt.d = obj.at("d").get<int>();
  if (pt.d <= 0 || (pt.d % 4 != 0 && pt.d % 4 != 3))
    throw std::invalid_argument(where + ": -d must be congruent to 0 or 1 mod 4");
  pt.pstar = registry_rational(obj, "pstar", where);
  pt.q = registry_rational(obj, "q", where);
  pt.r = registry_rational(obj, "r", where);
  if (obj.contains("omega_decimal")) {
    if (!obj.at("omega_decimal").is_string())
      throw std::invalid_argument(where + ": \"omega_decimal\" must be a string");
    pt.omega_decimal = obj.at("omega_decimal").get<std::string>();
  }
  if (obj.contains("scale_note")) {
    if (!obj.at("scale_note").is_string())
      throw std::invalid_argument(where + ": \"scale_note\" must be a string");
    pt.scale_note = obj.at("scale_note").get<std::string>();
  }
  check_z16(pt.pstar, where + ": pstar");
  check_z16(pt.q, where + ": q");
  check_z16(pt.r, where + ": r");
  return pt;
}

}  // namespace

std::vector<CMPoint> load_registry_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("registry file '" + path + "' cannot be opened");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    throw std::invalid_argument("registry file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_array())
    throw std::invalid_argument("registry file '" + path + "' must be a JSON array of points");
  std::vector<CMPoint> points;
  for (size_t i = 0; i < doc.size(); ++i) {
    CMPoint pt = point_from_json(doc.at(i), i);
    for (const auto& prev : points)
      if (prev.name == pt.name)
        throw std::invalid_argument("registry file '" + path + "' defines point \"" + pt.name +
                                    "\" twice");
    points.push_back(std::move(pt));
  }
  return points;
}

std::vector<CMPoint> effective_registry(const std::string& registry_path_or_empty) {
  std::string path = registry_path_or_empty;
  if (path.empty())
    if (const char* env = std::getenv("QMLAB_REGISTRY")) path = env;
  std::vector<CMPoint> points = shipped_points();
  if (path.empty()) return points;
  for (auto& loaded : load_registry_file(path)) {
    auto hit = std::find_if(points.begin(), points.end(),
                            [&](const CMPoint& p) { return p.name == loaded.name; });
    if (hit != points.end())
      *hit = std::move(loaded);  // file overrides a shipped point of the same name
    else
      points.push_back(std::move(loaded));
  }
  return points;
}

const CMPoint& find_point(const std::vector<CMPoint>& points, const std::string& name) {
  for (const auto& pt : points)
    if (pt.name == name) return pt;
  std::string names;
  for (const auto& pt : points) names += (names.empty() ? "" : ", ") + pt.name;
  throw std::invalid_argument("unknown CM point '" + name + "' (available: " + names + ")");
}

}  // namespace qmlab
