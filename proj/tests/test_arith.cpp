#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <thread>

#include "doctest.h"
#include "qmlab/arith.hpp"

using namespace qmlab;

TEST_CASE("rational construction is canonical") {
  CHECK(make_rational(2, -4) == BigRational(-1, 2));
  CHECK(make_rational(0, 7) == 0);
  CHECK(denominator(make_rational(6, 3)) == 1);
  CHECK_THROWS_AS(make_rational(1, 0), std::invalid_argument);

  CHECK(parse_rational("3/4") == BigRational(3, 4));
  CHECK(parse_rational("-7") == -7);
  CHECK(parse_rational("0") == 0);
  CHECK(parse_rational("-10/4") == BigRational(-5, 2));
  CHECK_THROWS_AS(parse_rational("a/b"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("bernoulli numbers match the classical table") {
  CHECK(bernoulli(0) == 1);
  CHECK(bernoulli(2) == BigRational(1, 6));
  CHECK(bernoulli(4) == BigRational(-1, 30));
  CHECK(bernoulli(6) == BigRational(1, 42));
  CHECK(bernoulli(8) == BigRational(-1, 30));
  CHECK(bernoulli(10) == BigRational(5, 66));
  CHECK(bernoulli(12) == BigRational(-691, 2730));
  CHECK(bernoulli(14) == BigRational(7, 6));
  CHECK(bernoulli(16) == BigRational(-3617, 510));
  CHECK(bernoulli(18) == BigRational(43867, 798));
  CHECK(bernoulli(20) == BigRational(-174611, 330));
  CHECK(bernoulli(30) == make_rational(BigInt("8615841276005"), 14322));
  CHECK_THROWS_AS(bernoulli(3), std::invalid_argument);
  CHECK_THROWS_AS(bernoulli(13), std::invalid_argument);
}

TEST_CASE("bernoulli denominators obey von Staudt-Clausen up to k = 60") {
  for (unsigned k = 2; k <= 60; k += 2) {
    BigInt expected = 1;
    for (unsigned q = 2; q <= k + 1; ++q)
      if (k % (q - 1) == 0 && is_prime(BigInt(q))) expected *= q;
    CHECK(denominator(bernoulli(k)) == expected);
  }
}

TEST_CASE("bernoulli is safe to call from several threads") {
  std::vector<std::thread> workers;
  std::vector<int> bad(4, 0);
  for (int t = 0; t < 4; ++t)
    workers.emplace_back([&bad, t] {
      for (unsigned k = 0; k <= 40; k += 2)
        if (denominator(bernoulli(k)) <= 0) bad[t] = 1;
    });
  for (auto& w : workers) w.join();
  for (int b : bad) CHECK(b == 0);
}

TEST_CASE("p-adic valuation") {
  BigInt p5(5), p2(2), p3(3);
  CHECK(padic_valuation(BigInt(50), p5) == 2);
  CHECK(padic_valuation(BigInt(-125), p5) == 3);
  CHECK(padic_valuation(BigInt(7), p5) == 0);
  CHECK(*padic_valuation(BigRational(-27, 8), p3) == 3);
  CHECK(*padic_valuation(BigRational(-27, 8), p2) == -3);
  CHECK(!padic_valuation(BigRational(0), p5).has_value());

  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(-500, 500), den(1, 500);
  for (int i = 0; i < 200; ++i) {
    BigRational x = make_rational(num(rng), den(rng));
    BigRational y = make_rational(num(rng), den(rng));
    if (x == 0 || y == 0) continue;
    CHECK(*padic_valuation(x * y, p5) == *padic_valuation(x, p5) + *padic_valuation(y, p5));
    auto vsum = padic_valuation(x + y, p5);
    long lo = std::min(*padic_valuation(x, p5), *padic_valuation(y, p5));
    if (vsum) CHECK(*vsum >= lo);
  }
}

TEST_CASE("binomial and falling factorial") {
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(5, 7) == 0);
  CHECK(binomial(50, 25) == BigInt("126410606437752"));
  for (unsigned long n = 0; n <= 25; ++n)
    for (unsigned long k = 0; k <= n; ++k) {
      // product formula oracle: C(n,k) = prod (n-i)/(i+1)
      BigRational acc(1);
      for (unsigned long i = 0; i < k; ++i) acc *= make_rational(BigInt(n - i), BigInt(i + 1));
      CHECK(BigRational(binomial(n, k)) == acc);
    }
  CHECK(falling_factorial(10, 3) == 720);
  CHECK(falling_factorial(10, 0) == 1);
  for (unsigned long n = 0; n <= 20; ++n)
    for (unsigned long r = 0; r <= n; ++r) {
      BigInt fact = 1;
      for (unsigned long i = 2; i <= r; ++i) fact *= i;
      CHECK(falling_factorial(n, r) == binomial(n, r) * fact);
    }
}

TEST_CASE("bounded factorization multiplies back") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> small(1, 1000000);
  for (int i = 0; i < 1000; ++i) {
    BigInt n = BigInt(small(rng)) * BigInt(small(rng));
    if (i % 2) n = -n;
    FactorList f = factor_bounded(n);
    CHECK(f.value() == n);
    CHECK(f.cofactor == 1);  // all prime factors <= 10^6 here
  }
  CHECK_THROWS_AS(factor_bounded(BigInt(0)), std::invalid_argument);
}

TEST_CASE("factorization display") {
  FactorList f = factor_bounded(BigInt(-592704));
  CHECK(f.sign == -1);
  CHECK(f.to_string() == "-2^6 * 3^3 * 7^3");
  CHECK(f.value() == -592704);

  CHECK(factor_bounded(BigInt(1)).to_string() == "1");
  CHECK(factor_bounded(BigInt(-1)).to_string() == "-1");
  CHECK(factor_bounded(BigInt(97)).to_string() == "97");

  // Two primes above the bound stay composite in the cofactor.
  BigInt p1("1000003"), p2("1000033");
  FactorList big = factor_bounded(p1 * p2 * 12);
  CHECK(big.value() == p1 * p2 * 12);
  CHECK(big.cofactor == p1 * p2);
  CHECK(big.to_string() == "2^2 * 3 * 1000036000099");
}

TEST_CASE("primality") {
  for (long p : {2, 3, 5, 7, 11, 13, 97, 101, 691, 999983}) CHECK(is_prime(BigInt(p)));
  for (long c : {1, 4, 6, 9, 91, 1000001}) CHECK(!is_prime(BigInt(c)));
  CHECK(!is_prime(BigInt(-5)));
}
