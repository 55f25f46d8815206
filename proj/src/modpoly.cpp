#include "qmlab/modpoly.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "linalg.hpp"

namespace qmlab {

namespace {

using ModTerm = std::pair<Monomial, BigInt>;

BigInt pow_long(long base, long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
  return r;
}

std::string monomial_name(const Monomial& m) {
  std::string s;
  auto piece = [&s](const char* v, int e) {
    if (e == 0) return;
    if (!s.empty()) s += "*";
    s += v;
    if (e > 1) s += "^" + std::to_string(e);
  };
  piece("P", m.a);
  piece("Q", m.b);
  piece("R", m.c);
  return s.empty() ? "1" : s;
}

std::vector<ModTerm> normalize(std::vector<ModTerm> terms, const BigInt& modulus) {
  std::sort(terms.begin(), terms.end(),
            [](const ModTerm& x, const ModTerm& y) { return y.first < x.first; });
  std::vector<ModTerm> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().first == t.first)
      out.back().second += t.second;
    else
      out.push_back(std::move(t));
    mpz_mod(out.back().second.get_mpz_t(), out.back().second.get_mpz_t(), modulus.get_mpz_t());
    if (out.back().second == 0) out.pop_back();
  }
  return out;
}

void check_same_ring(const ModPoly& f, const ModPoly& g, const char* op) {
  if (f.p() != g.p() || f.m() != g.m())
    throw std::invalid_argument(std::string(op) + ": mixed moduli");
}

// Weight-w monomials in (Q, R), descending.
std::vector<Monomial> pfree_monomials(int weight) {
  std::vector<Monomial> out;
  for (int b = weight / 4; b >= 0; --b) {
    int rest = weight - 4 * b;
    if (rest >= 0 && rest % 6 == 0) out.push_back(Monomial{0, b, rest / 6});
  }
  return out;
}

// Exact division G = F / D in F_p[Q, R] for weight-homogeneous P-free F, D
// (D nonzero mod p), as a graded linear solve: unknowns are the monomials of
// weight w(F) - w(D), equations match every monomial of weight w(F).
// Multiplication by D is injective (domain), so the system has full column
// rank; inconsistency means D does not divide F.
std::optional<std::vector<ModTerm>> divide_pfree_modp(const std::vector<ModTerm>& F, int wF,
                                                      const std::vector<ModTerm>& D, int wD,
                                                      const BigInt& p) {
  int wG = wF - wD;
  if (wG < 0) return std::nullopt;
  std::vector<Monomial> unknowns = pfree_monomials(wG);
  std::vector<Monomial> eqs = pfree_monomials(wF);
  if (unknowns.empty()) return std::nullopt;
  std::map<Monomial, size_t> eq_index;
  for (size_t i = 0; i < eqs.size(); ++i) eq_index[eqs[i]] = i;
  std::vector<std::vector<BigInt>> M(eqs.size(), std::vector<BigInt>(unknowns.size(), BigInt(0)));
  for (size_t u = 0; u < unknowns.size(); ++u)
    for (const auto& [dm, dc] : D) {
      Monomial prod{0, unknowns[u].b + dm.b, unknowns[u].c + dm.c};
      M[eq_index.at(prod)][u] = dc % p;
    }
  std::vector<BigInt> rhs(eqs.size(), BigInt(0));
  for (const auto& [fm, fc] : F) rhs[eq_index.at(fm)] = fc % p;
  auto sol = linalg::modp_solve(std::move(M), std::move(rhs), p);
  if (!sol) return std::nullopt;
  std::vector<ModTerm> out;
  for (size_t u = 0; u < unknowns.size(); ++u)
    if ((*sol)[u] != 0) out.emplace_back(unknowns[u], (*sol)[u]);
  return out;
}

// Split F into P-degree slices: slice[a] is the P-free part multiplying P^a.
std::map<int, std::vector<ModTerm>> p_slices(const ModPoly& F) {
  std::map<int, std::vector<ModTerm>> slices;
  for (const auto& [m, c] : F.terms()) slices[m.a].emplace_back(Monomial{0, m.b, m.c}, c);
  return slices;
}

// Quotient of F by divisor (P-free, nonzero mod p) in F_p[P, Q, R]:
// independent per-P-degree slice divisions. nullopt when any slice fails.
std::optional<ModPoly> divide_modp(const ModPoly& F, const ModPoly& divisor) {
  int wD = divisor.weight();
  BigInt p(F.p());
  if (F.is_zero()) return ModPoly(F.p(), 1, std::max(F.weight() - wD, 0));
  std::vector<ModTerm> quotient_terms;
  for (auto& [a, slice] : p_slices(F)) {
    int wSlice = F.weight() - 2 * a;
    auto g = divide_pfree_modp(slice, wSlice, divisor.terms(), wD, p);
    if (!g) return std::nullopt;
    for (auto& [m, c] : *g) quotient_terms.emplace_back(Monomial{a, m.b, m.c}, c);
  }
  return ModPoly::from_terms(F.p(), 1, F.weight() - wD, std::move(quotient_terms));
}

ModPoly reduce_mod_p(const ModPoly& F) {
  if (F.m() == 1) return F;
  std::vector<ModTerm> terms(F.terms().begin(), F.terms().end());
  return ModPoly::from_terms(F.p(), 1, F.weight(), std::move(terms));
}

ModPoly pow_mod(const ModPoly& base, int e) {
  ModPoly acc = ModPoly::from_terms(base.p(), base.m(), 0, {{Monomial{}, BigInt(1)}});
  ModPoly b = base;
  int w = base.weight();
  while (e > 0) {
    if (e & 1) acc = acc * b;
    e >>= 1;
    if (e > 0) b = b * b;
  }
  (void)w;
  return acc;
}

}  // namespace

ModPoly::ModPoly(long p, int m, int weight)
    : p_(p), m_(m), modulus_(pow_long(p, m)), weight_(weight) {
  if (p_ < 5 || !is_prime(BigInt(p_))) throw std::invalid_argument("ModPoly: p must be a prime >= 5");
  if (m_ < 1) throw std::invalid_argument("ModPoly: m must be >= 1");
}

ModPoly ModPoly::from_terms(long p, int m, int weight, std::vector<ModTerm> terms) {
  ModPoly f(p, m, weight);
  for (const auto& [mon, c] : terms) {
    if (mon.a < 0 || mon.b < 0 || mon.c < 0)
      throw std::invalid_argument("ModPoly: negative exponent");
    if (mon.weight() != weight)
      throw std::invalid_argument("ModPoly: term of weight " + std::to_string(mon.weight()) +
                                  " in a weight-" + std::to_string(weight) + " polynomial");
  }
  f.terms_ = normalize(std::move(terms), f.modulus_);
  return f;
}

bool ModPoly::is_pfree() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const ModTerm& t) { return t.first.a == 0; });
}

BigInt ModPoly::coeff(Monomial mon) const {
  for (const auto& [mm, c] : terms_)
    if (mm == mon) return c;
  return 0;
}

ModPoly operator+(const ModPoly& f, const ModPoly& g) {
  check_same_ring(f, g, "operator+");
  if (!f.is_zero() && !g.is_zero() && f.weight() != g.weight())
    throw std::invalid_argument("operator+: weights differ");
  std::vector<ModTerm> terms(f.terms_.begin(), f.terms_.end());
  terms.insert(terms.end(), g.terms_.begin(), g.terms_.end());
  return ModPoly::from_terms(f.p_, f.m_, f.is_zero() ? g.weight() : f.weight(),
                             std::move(terms));
}

ModPoly operator-(const ModPoly& f, const ModPoly& g) {
  check_same_ring(f, g, "operator-");
  if (!f.is_zero() && !g.is_zero() && f.weight() != g.weight())
    throw std::invalid_argument("operator-: weights differ");
  std::vector<ModTerm> terms(f.terms_.begin(), f.terms_.end());
  for (const auto& [m, c] : g.terms_) terms.emplace_back(m, f.modulus_ - c);
  return ModPoly::from_terms(f.p_, f.m_, f.is_zero() ? g.weight() : f.weight(),
                             std::move(terms));
}

ModPoly operator*(const ModPoly& f, const ModPoly& g) {
  check_same_ring(f, g, "operator*");
  std::vector<ModTerm> terms;
  terms.reserve(f.terms_.size() * g.terms_.size());
  for (const auto& [mf, cf] : f.terms_)
    for (const auto& [mg, cg] : g.terms_)
      terms.emplace_back(Monomial{mf.a + mg.a, mf.b + mg.b, mf.c + mg.c}, cf * cg);
  return ModPoly::from_terms(f.p_, f.m_, f.weight_ + g.weight_, std::move(terms));
}

bool operator==(const ModPoly& f, const ModPoly& g) {
  check_same_ring(f, g, "operator==");
  if (f.is_zero() && g.is_zero()) return true;
  return f.weight_ == g.weight_ && f.terms_ == g.terms_;
}

ModPoly reduce_poly(const QMPoly& f, long p, int m) {
  if (f.kind() == VarKind::star) throw std::invalid_argument("reduce_poly: starred input");
  ModPoly out(p, m, f.weight());
  BigInt modulus = out.modulus();
  BigInt bp(p);
  std::vector<ModTerm> terms;
  terms.reserve(f.terms().size());
  for (const auto& [mon, c] : f.terms()) {
    if (mpz_divisible_p(denominator(c).get_mpz_t(), bp.get_mpz_t()))
      throw std::invalid_argument("reduce_poly: denominator of the " + monomial_name(mon) +
                                  " coefficient is divisible by " + std::to_string(p));
    BigInt inv;
    if (mpz_invert(inv.get_mpz_t(), denominator(c).get_mpz_t(), modulus.get_mpz_t()) == 0)
      throw std::invalid_argument("reduce_poly: denominator of the " + monomial_name(mon) +
                                  " coefficient not invertible mod p^m");
    terms.emplace_back(mon, numerator(c) * inv);
  }
  return ModPoly::from_terms(p, m, f.weight(), std::move(terms));
}

QMPoly lift_poly(const ModPoly& f) {
  std::vector<std::pair<Monomial, BigRational>> terms;
  terms.reserve(f.terms().size());
  for (const auto& [m, c] : f.terms()) terms.emplace_back(m, BigRational(c));
  return QMPoly::from_terms(f.weight(), VarKind::holo, std::move(terms));
}

std::optional<ModPoly> divides_Apow(const ModPoly& F, int t) {
  if (t < 0) throw std::invalid_argument("divides_Apow: negative power");
  if (t == 0) return F;
  long p = F.p();
  int m = F.m();
  QMPoly A = eisenstein_poly(static_cast<unsigned>(p - 1));
  ModPoly At_mod_p = pow_mod(reduce_poly(A, p, 1), t);
  if (m == 1) return divide_modp(F, At_mod_p);

  // Hensel staging: write the quotient G = sum_s p^s G_s with digits G_s in
  // [0, p). Stage s solves the mod-p division of the current residual and is
  // forced (the digit is unique), so any stage failure proves F is not
  // divisible by A^t mod p^m.
  ModPoly At_full = pow_mod(reduce_poly(A, p, m), t);
  int wG = F.weight() - t * static_cast<int>(p - 1);
  if (wG < 0) return F.is_zero() ? std::optional<ModPoly>(ModPoly(p, m, 0)) : std::nullopt;
  ModPoly residual = F;  // mod p^{m - s} at stage s, tracked in full modulus
  ModPoly G(p, m, wG);
  BigInt pk(1);           // p^s
  BigInt bp(p);
  for (int s = 0; s < m; ++s) {
    ModPoly digit(p, 1, wG);
    if (!residual.is_zero()) {
      ModPoly rbar = reduce_mod_p(residual);
      if (!rbar.is_zero()) {
        auto d = divide_modp(rbar, At_mod_p);
        if (!d) return std::nullopt;
        digit = *d;
      }
    }
    if (!digit.is_zero()) {
      std::vector<ModTerm> scaled;
      for (const auto& [mon, c] : digit.terms()) scaled.emplace_back(mon, c * pk);
      G = G + ModPoly::from_terms(p, m, wG, std::move(scaled));
    }
    if (s + 1 == m) break;
    // residual := (residual - A^t * digit) / p, exact by construction.
    ModPoly digit_full = ModPoly::from_terms(p, m, wG,
                                             {digit.terms().begin(), digit.terms().end()});
    ModPoly diff = residual - At_full * digit_full;
    std::vector<ModTerm> divided;
    for (const auto& [mon, c] : diff.terms()) {
      if (!mpz_divisible_p(c.get_mpz_t(), bp.get_mpz_t()))
        throw std::logic_error("divides_Apow: stage residual not divisible by p");
      divided.emplace_back(mon, c / bp);
    }
    residual = ModPoly::from_terms(p, m, F.weight(), std::move(divided));
    pk *= bp;
  }
  if (!(At_full * G == F)) return std::nullopt;
  return G;
}

int filtration(const ModPoly& F) {
  if (F.is_zero()) throw std::invalid_argument("filtration: zero polynomial");
  if (!F.is_pfree()) throw std::invalid_argument("filtration: input must be P-free");
  long p = F.p();
  int step = 1;
  for (int i = 1; i < F.m(); ++i) step *= static_cast<int>(p);  // p^{m-1}
  int k = F.weight();
  ModPoly cur = F;
  while (true) {
    auto q = divides_Apow(cur, step);
    if (!q) return k;
    cur = *q;
    k -= step * static_cast<int>(p - 1);
    if (cur.is_zero() || cur.weight() == 0) return k;
  }
}

namespace {

bool numerators_divisible(const QMPoly& f, const BigInt& p) {
  for (const auto& [m, c] : f.terms())
    if (!mpz_divisible_p(numerator(c).get_mpz_t(), p.get_mpz_t())) return false;
  return true;
}

}  // namespace

bool ideal_member(const QMPoly& f, long p, int n) {
  if (n <= 0 || f.is_zero()) return true;
  BigInt bp(p);
  for (const auto& [m, c] : f.terms())
    if (mpz_divisible_p(denominator(c).get_mpz_t(), bp.get_mpz_t()))
      throw std::invalid_argument("ideal_member: coefficient denominator divisible by p");
  if (numerators_divisible(f, bp))
    return ideal_member(make_rational(1, p) * f, p, n - 1);
  ModPoly fbar = reduce_poly(f, p, 1);
  long t = static_cast<long>(p) * n;
  auto q = divides_Apow(fbar, static_cast<int>(t));
  if (!q) return false;
  QMPoly g = lift_poly(*q);
  QMPoly Apn = poly_pow(eisenstein_poly(static_cast<unsigned>(p - 1)), static_cast<unsigned>(t));
  QMPoly rest = make_rational(1, p) * (f - Apn * g);
  return ideal_member(rest, p, n - 1);
}

std::optional<int> ideal_valuation(const QMPoly& f, long p) {
  if (!is_prime(BigInt(p)) || p < 5)
    throw std::invalid_argument("ideal_valuation: p must be a prime >= 5");
  if (f.kind() == VarKind::star) throw std::invalid_argument("ideal_valuation: starred input");
  if (f.is_zero()) return std::nullopt;
  BigInt bp(p);
  long c_min = -1;
  for (const auto& [m, c] : f.terms()) {
    auto v = padic_valuation(c, bp);
    if (*v < 0) throw std::invalid_argument("ideal_valuation: coefficient denominator divisible by p");
    if (c_min < 0 || *v < c_min) c_min = *v;
  }
  long cap = c_min + f.weight() / (p * (p - 1)) + 1;
  int v = 0;
  while (v < cap && ideal_member(f, p, v + 1)) ++v;
  return v;
}

}  // namespace qmlab
