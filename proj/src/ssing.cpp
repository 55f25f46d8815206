#include "qmlab/ssing.hpp"

#include <algorithm>
#include <stdexcept>

#include "linalg.hpp"
#include "qmlab/parallel.hpp"

namespace qmlab {

namespace {

long expmod(long base, long e, long p) {
  long long r = 1, b = ((base % p) + p) % p;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<long>(r);
}

long invmod(long a, long p) { return expmod(a, p - 2, p); }

void check_prime(long p, const char* who) {
  if (p < 5 || !is_prime(BigInt(p)))
    throw std::invalid_argument(std::string(who) + ": p must be a prime >= 5");
}

}  // namespace

KZDecomposition kz_decompose(long p) {
  check_prime(p, "kz_decompose");
  long rem = (p - 1) % 12;
  int delta, epsilon;
  switch (rem) {
    case 0: delta = 0; epsilon = 0; break;
    case 4: delta = 1; epsilon = 0; break;
    case 6: delta = 0; epsilon = 1; break;
    case 10: delta = 1; epsilon = 1; break;
    default: throw std::logic_error("kz_decompose: impossible residue");
  }
  int n = static_cast<int>((p - 1 - 4 * delta - 6 * epsilon) / 12);

  QMPoly A = eisenstein_poly(static_cast<unsigned>(p - 1));
  // Divide out the forced monomial Q^delta R^epsilon.
  std::vector<std::pair<Monomial, BigRational>> reduced;
  for (const auto& [m, c] : A.terms()) {
    if (m.b < delta || m.c < epsilon)
      throw std::logic_error("kz_decompose: Q^delta R^epsilon does not divide E_{p-1}");
    reduced.emplace_back(Monomial{m.a, m.b - delta, m.c - epsilon}, c);
  }
  QMPoly G = QMPoly::from_terms(12 * n, VarKind::holo, std::move(reduced));

  // G = sum_i a_i Q^{3i} Delta^{n-i}: both the basis and the weight-12n
  // monomials Q^{3(n-u)} R^{2u} number n+1, so the system is square.
  QMPoly delta_p = delta_poly();
  std::vector<QMPoly> basis;
  for (int i = 0; i <= n; ++i)
    basis.push_back(poly_pow(QMPoly::Q(), 3 * static_cast<unsigned>(i)) *
                    poly_pow(delta_p, static_cast<unsigned>(n - i)));
  std::vector<std::vector<BigRational>> M(n + 1, std::vector<BigRational>(n + 1, BigRational(0)));
  std::vector<BigRational> rhs(n + 1, BigRational(0));
  auto row_of = [&](const Monomial& m) {
    if (m.a != 0 || m.c % 2 != 0 || m.b != 3 * (n - m.c / 2))
      throw std::logic_error("kz_decompose: unexpected monomial shape");
    return m.c / 2;
  };
  for (int i = 0; i <= n; ++i)
    for (const auto& [m, c] : basis[i].terms()) M[row_of(m)][i] = c;
  for (const auto& [m, c] : G.terms()) rhs[row_of(m)] = c;
  auto sol = linalg::rational_solve(std::move(M), std::move(rhs));
  if (!sol) throw std::logic_error("kz_decompose: decomposition system inconsistent");

  KZDecomposition out;
  out.p = p;
  out.n = n;
  out.delta = delta;
  out.epsilon = epsilon;
  out.ftilde = std::move(*sol);

  QMPoly back(12 * n, VarKind::holo);
  for (int i = 0; i <= n; ++i) back = back + out.ftilde[i] * basis[i];
  QMPoly mono = poly_pow(QMPoly::Q(), static_cast<unsigned>(delta)) *
                poly_pow(QMPoly::R(), static_cast<unsigned>(epsilon));
  if (!(mono * back == A)) throw std::logic_error("kz_decompose: multiply-back check failed");
  return out;
}

long SSPoly::eval(long j) const {
  long long acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = (acc * j + *it) % p;
  return static_cast<long>(acc);
}

std::vector<long> SSPoly::roots() const {
  std::vector<long> out;
  for (long j = 0; j < p; ++j)
    if (eval(j) == 0) out.push_back(j);
  return out;
}

std::string SSPoly::to_string() const {
  std::string s;
  for (int e = degree(); e >= 0; --e) {
    long c = coeffs[e];
    if (c == 0 && !(degree() == 0 && e == 0)) continue;
    if (!s.empty()) s += " + ";
    if (e == 0 || c != 1) s += std::to_string(c);
    if (e > 0 && c != 1) s += "*";
    if (e >= 1) s += "j";
    if (e >= 2) s += "^" + std::to_string(e);
  }
  return s + " (mod " + std::to_string(p) + ")";
}

SSPoly ss_poly(long p) {
  KZDecomposition kz = kz_decompose(p);
  BigInt bp(p);
  std::vector<long> f(kz.ftilde.size());
  for (size_t i = 0; i < f.size(); ++i) {
    BigInt num = numerator(kz.ftilde[i]) % bp;
    BigInt den = denominator(kz.ftilde[i]) % bp;
    if (den == 0) throw std::logic_error("ss_poly: coefficient denominator divisible by p");
    long numl = ((num.get_si() % p) + p) % p;
    long denl = ((den.get_si() % p) + p) % p;
    f[i] = numl * invmod(denl, p) % p;
  }
  if (f.back() == 0) throw std::logic_error("ss_poly: ftilde leading coefficient vanishes mod p");
  // Multiply by j^delta (j - 1728)^epsilon in F_p[j].
  std::vector<long> coeffs(kz.delta, 0);
  coeffs.insert(coeffs.end(), f.begin(), f.end());
  if (kz.epsilon) {
    long c1728 = ((1728 % p) + p) % p;
    std::vector<long> shifted(coeffs.size() + 1, 0);
    for (size_t i = 0; i < coeffs.size(); ++i) {
      shifted[i + 1] = (shifted[i + 1] + coeffs[i]) % p;
      shifted[i] = (shifted[i] + (p - c1728) * coeffs[i]) % p;
    }
    coeffs = std::move(shifted);
  }
  long leadinv = invmod(coeffs.back(), p);
  for (auto& c : coeffs) c = c * leadinv % p;
  return SSPoly{p, std::move(coeffs)};
}

namespace {

// chi table: chi[x] = Legendre symbol (x | p) as -1/0/+1.
std::vector<int> legendre_table(long p) {
  std::vector<int> chi(p, -1);
  chi[0] = 0;
  for (long x = 1; x < p; ++x) chi[x * x % p] = 1;
  return chi;
}

// a_p = 0 test for one j-invariant via full point count.
bool is_ss_j(long j, long p, const std::vector<int>& chi) {
  long a, b;
  long j1728 = 1728 % p;
  if (j == 0) {
    a = 0;
    b = 1;
  } else if (j == j1728) {
    a = 1;
    b = 0;
  } else {
    a = 27 * j % p * invmod(4 * ((j1728 - j + p) % p) % p, p) % p;
    b = a;
  }
  long long s = 0;
  for (long x = 0; x < p; ++x) s += chi[(x * x % p * x + a * x + b) % p];
  return s == 0;  // #E = p + 1 + s; Hasse forces a_p = 0 exactly when s = 0
}

}  // namespace

std::vector<long> brute_force_supersingular_serial(long p) {
  check_prime(p, "brute_force_supersingular");
  if (p > 1000)
    throw std::invalid_argument("brute_force_supersingular: p must be a prime in [5, 1000]");
  std::vector<int> chi = legendre_table(p);
  std::vector<long> out;
  for (long j = 0; j < p; ++j)
    if (is_ss_j(j, p, chi)) out.push_back(j);
  return out;
}

std::vector<long> brute_force_supersingular_parallel(long p) {
  check_prime(p, "brute_force_supersingular");
  if (p > 1000)
    throw std::invalid_argument("brute_force_supersingular: p must be a prime in [5, 1000]");
  std::vector<int> chi = legendre_table(p);
  std::vector<char> hit(p, 0);
  const int nthreads = parallel::max_threads();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nthreads)
#endif
  for (long j = 0; j < p; ++j) hit[j] = is_ss_j(j, p, chi) ? 1 : 0;
  (void)nthreads;
  std::vector<long> out;
  for (long j = 0; j < p; ++j)
    if (hit[j]) out.push_back(j);
  return out;
}

std::vector<long> brute_force_supersingular(long p) {
  if (parallel::enabled() && p >= 101) return brute_force_supersingular_parallel(p);
  return brute_force_supersingular_serial(p);
}

BigRational j_invariant(const BigRational& q, const BigRational& r) {
  BigRational q3 = q * q * q;
  BigRational disc = q3 - r * r;
  if (disc == 0) throw std::invalid_argument("j_invariant: Q^3 == R^2 (degenerate point)");
  return BigRational(1728) * q3 / disc;
}

}  // namespace qmlab
