#include "qmlab/arith.hpp"

#include <mutex>
#include <sstream>
#include <stdexcept>

namespace qmlab {

BigRational make_rational(BigInt num, BigInt den) {
  if (den == 0) throw std::invalid_argument("make_rational: zero denominator");
  BigRational r(std::move(num), std::move(den));
  r.canonicalize();
  return r;
}

BigRational parse_rational(const std::string& text) {
  BigRational r;
  if (r.set_str(text, 10) != 0)
    throw std::invalid_argument("parse_rational: malformed rational '" + text + "'");
  if (r.get_den() == 0)
    throw std::invalid_argument("parse_rational: zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

namespace {

// Denominator predicted by von Staudt-Clausen: product of primes q with
// (q-1) | k. Used as a self-check on every bernoulli() result.
BigInt vsc_denominator(unsigned k) {
  if (k == 0) return 1;
  BigInt d = 1;
  for (unsigned q = 2; q <= k + 1; ++q) {
    if (k % (q - 1) != 0) continue;
    if (!is_prime(BigInt(q))) continue;
    d *= q;
  }
  return d;
}

std::mutex bernoulli_mutex;
// memo[k] = B_k for all k (odd entries beyond B_1 are zero; B_1 = -1/2 is
// needed internally by the recurrence but never returned).
std::vector<BigRational> bernoulli_memo;

void extend_bernoulli_memo(unsigned k) {
  if (bernoulli_memo.empty()) bernoulli_memo.emplace_back(1);
  // sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1.
  for (unsigned m = bernoulli_memo.size(); m <= k; ++m) {
    BigRational acc(0);
    for (unsigned j = 0; j < m; ++j)
      acc += BigRational(binomial(m + 1, j)) * bernoulli_memo[j];
    bernoulli_memo.push_back(-acc / BigRational(BigInt(m) + 1));
  }
}

}  // namespace

BigRational bernoulli(unsigned k) {
  if (k % 2 != 0)
    throw std::invalid_argument("bernoulli: odd index " + std::to_string(k) + " rejected");
  std::lock_guard<std::mutex> lock(bernoulli_mutex);
  extend_bernoulli_memo(k);
  const BigRational& b = bernoulli_memo[k];
  if (denominator(b) != vsc_denominator(k))
    throw std::logic_error("bernoulli: von Staudt-Clausen denominator check failed at k=" +
                           std::to_string(k));
  return b;
}

long padic_valuation(const BigInt& n, const BigInt& p) {
  if (n == 0) throw std::invalid_argument("padic_valuation: zero integer");
  if (p < 2) throw std::invalid_argument("padic_valuation: p must be prime");
  BigInt rest;
  return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

std::optional<long> padic_valuation(const BigRational& x, const BigInt& p) {
  if (x == 0) return std::nullopt;
  return padic_valuation(numerator(x), p) - padic_valuation(denominator(x), p);
}

BigInt binomial(unsigned long n, unsigned long k) {
  if (k > n) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

BigInt falling_factorial(unsigned long n, unsigned long r) {
  BigInt acc = 1;
  for (unsigned long i = 0; i < r; ++i) acc *= BigInt(n - i);
  return acc;
}

BigInt FactorList::value() const {
  BigInt v = cofactor;
  for (const auto& [p, e] : factors)
    for (int i = 0; i < e; ++i) v *= p;
  return sign < 0 ? BigInt(-v) : v;
}

std::string FactorList::to_string() const {
  std::ostringstream out;
  if (sign < 0) out << "-";
  bool first = true;
  for (const auto& [p, e] : factors) {
    if (!first) out << " * ";
    first = false;
    out << p;
    if (e > 1) out << "^" << e;
  }
  if (cofactor != 1 || first) {
    if (!first) out << " * ";
    out << cofactor;
  }
  return out.str();
}

FactorList factor_bounded(const BigInt& n, const BigInt& bound) {
  if (n == 0) throw std::invalid_argument("factor_bounded: zero input");
  FactorList out;
  BigInt rest = n;
  if (rest < 0) {
    out.sign = -1;
    rest = -rest;
  }
  BigInt p = 2;
  while (p <= bound && p * p <= rest) {
    if (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
      int e = 0;
      while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
        rest /= p;
        ++e;
      }
      out.factors.emplace_back(p, e);
    }
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
  }
  // rest is either 1, a prime <= bound^2, or has all prime factors > bound.
  if (rest != 1 && rest <= bound) {
    out.factors.emplace_back(rest, 1);
    rest = 1;
  }
  out.cofactor = rest;
  return out;
}

bool is_prime(const BigInt& n) {
  if (n < 2) return false;  // mpz_probab_prime_p accepts negated primes
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

}  // namespace qmlab
