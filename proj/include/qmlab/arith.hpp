#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qmlab {

// Exact arithmetic base types. BigRational is always in canonical form:
// fully reduced, positive denominator, zero represented as 0/1.
using BigInt = mpz_class;
using BigRational = mpq_class;

// num/den reduced to canonical form; den must be nonzero.
BigRational make_rational(BigInt num, BigInt den);

inline const BigInt& numerator(const BigRational& x) { return x.get_num(); }
inline const BigInt& denominator(const BigRational& x) { return x.get_den(); }

// Parses "num" or "num/den" with optional leading sign. Throws on malformed
// input or zero denominator.
BigRational parse_rational(const std::string& text);

// Bernoulli number B_k for even k >= 0 (B_0 = 1, B_2 = 1/6, ...). Odd k is
// rejected: B_1 is convention-dependent and never needed here, higher odd
// Bernoulli numbers vanish. Memoized; safe to call concurrently.
// Every returned value is checked against the von Staudt-Clausen theorem:
// denominator(B_k) = product of primes q with (q-1) | k.
BigRational bernoulli(unsigned k);

// v_p(x) for prime p: valuation of the numerator minus valuation of the
// denominator. x == 0 returns nullopt, meaning +infinity.
std::optional<long> padic_valuation(const BigRational& x, const BigInt& p);

// v_p(n) for nonzero integer n.
long padic_valuation(const BigInt& n, const BigInt& p);

// Binomial coefficient C(n, k); 0 when k > n.
BigInt binomial(unsigned long n, unsigned long k);

// Falling factorial n * (n-1) * ... * (n-r+1); 1 when r == 0.
BigInt falling_factorial(unsigned long n, unsigned long r);

// Result of bounded trial division: sign * prod(p_i^e_i) * cofactor == n,
// primes in increasing order, cofactor free of prime factors <= bound
// (cofactor 1 when the factorization is complete; it may be composite).
struct FactorList {
  int sign = 1;
  std::vector<std::pair<BigInt, int>> factors;
  BigInt cofactor = 1;

  BigInt value() const;
  std::string to_string() const;
};

// Trial division of nonzero n by all primes up to bound (default 10^6).
FactorList factor_bounded(const BigInt& n, const BigInt& bound = BigInt(1000000));

// Deterministic primality check (GMP probabilistic test is deterministic far
// beyond any input used here; documented cutover irrelevant below 2^64).
bool is_prime(const BigInt& n);

}  // namespace qmlab
