#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "qmlab/qseries.hpp"

using namespace qmlab;

namespace {

QSeries from_longs(std::initializer_list<long> v) {
  std::vector<BigRational> c;
  for (long x : v) c.emplace_back(x);
  return QSeries(std::move(c));
}

}  // namespace

TEST_CASE("divisor sums") {
  CHECK(sigma(1, 1) == 1);
  CHECK(sigma(1, 6) == 12);
  CHECK(sigma(3, 4) == 73);
  CHECK(sigma(3, 1) == 1);
  CHECK(sigma(5, 2) == 33);
  CHECK(sigma(0, 12) == 6);  // number of divisors
}

TEST_CASE("eisenstein q-expansions match the classical tables") {
  QSeries e2 = eisenstein_qexp(2, 5);
  CHECK(e2.coeffs() == std::vector<BigRational>{1, -24, -72, -96, -168});

  QSeries e4 = eisenstein_qexp(4, 5);
  CHECK(e4.coeffs() == std::vector<BigRational>{1, 240, 2160, 6720, 17520});

  QSeries e6 = eisenstein_qexp(6, 4);
  CHECK(e6.coeffs() == std::vector<BigRational>{1, -504, -16632, -122976});

  QSeries e8 = eisenstein_qexp(8, 3);
  CHECK(e8.coeffs() == std::vector<BigRational>{1, 480, 61920});

  QSeries e12 = eisenstein_qexp(12, 2);
  CHECK(e12.coeff(1) == BigRational(65520, 691));

  CHECK_THROWS_AS(eisenstein_qexp(3, 5), std::invalid_argument);
  CHECK_THROWS_AS(eisenstein_qexp(0, 5), std::invalid_argument);
}

TEST_CASE("E4^3 - E6^2 is 1728 Delta") {
  int n = 8;
  QSeries lhs = series_pow(eisenstein_qexp(4, n), 3) - series_pow(eisenstein_qexp(6, n), 2);
  // Delta = q prod (1-q^n)^24 = q - 24q^2 + 252q^3 - 1472q^4 + 4830q^5 - 6048q^6 ...
  QSeries delta = from_longs({0, 1, -24, 252, -1472, 4830, -6048, -16744});
  CHECK(lhs == BigRational(1728) * delta);
}

TEST_CASE("E4^2 equals E8 (dim M_8 = 1)") {
  int n = 30;
  CHECK(series_pow(eisenstein_qexp(4, n), 2) == eisenstein_qexp(8, n));
}

TEST_CASE("binary operations truncate to the smaller precision") {
  QSeries a = eisenstein_qexp(4, 5);
  QSeries b = eisenstein_qexp(6, 9);
  CHECK((a + b).precision() == 5);
  CHECK((a * b).precision() == 5);
  CHECK((a - b).precision() == 5);
  CHECK(a.truncate(3).precision() == 3);
  CHECK_THROWS_AS(a.truncate(6), std::invalid_argument);
}

TEST_CASE("series derivation is q d/dq") {
  QSeries e4 = eisenstein_qexp(4, 5);
  QSeries d = series_derive(e4);
  CHECK(d.coeffs() == std::vector<BigRational>{0, 240, 4320, 20160, 70080});
  CHECK(series_derive_n(e4, 2).coeff(3) == 6720 * 9);
  CHECK(series_derive(QSeries::one(4)).is_zero());
}

TEST_CASE("eval_double sums the truncated series") {
  QSeries geo = from_longs({1, 1, 1, 1, 1, 1, 1, 1, 1, 1});
  double s = geo.eval_double(0.5);
  CHECK(std::abs(s - (2.0 - std::pow(0.5, 9))) < 1e-12);
}

TEST_CASE("certification precision") {
  CHECK(certification_precision(4) == 3);
  CHECK(certification_precision(12) == 3);
  CHECK(certification_precision(13) == 4);
  CHECK(certification_precision(344) == 31);
}

TEST_CASE("reduction mod p^m") {
  // E4 mod 7 = 1 + 2q + 4q^2 + 0q^3 + 6q^4 + ...
  ModQSeries e4mod7 = reduce_series(eisenstein_qexp(4, 5), 7, 1);
  CHECK(e4mod7.coeff(0) == 1);
  CHECK(e4mod7.coeff(1) == 2);
  CHECK(e4mod7.coeff(2) == 4);
  CHECK(e4mod7.coeff(3) == 0);
  CHECK(e4mod7.coeff(4) == 6);

  // 65520/691 mod 13: denominator is invertible.
  ModQSeries e12mod13 = reduce_series(eisenstein_qexp(12, 2), 13, 1);
  CHECK(e12mod13.coeff(1) == 0);  // E_12 = E_{p-1} is 1 mod 13

  SUBCASE("denominator divisible by p names the index") {
    std::vector<BigRational> c{1, BigRational(1, 7)};
    try {
      reduce_series(QSeries(std::move(c)), 7, 2);
      FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("1") != std::string::npos);
    }
  }

  SUBCASE("mixed moduli are rejected") {
    ModQSeries a = reduce_series(eisenstein_qexp(4, 4), 7, 1);
    ModQSeries b = reduce_series(eisenstein_qexp(4, 4), 5, 1);
    ModQSeries c = reduce_series(eisenstein_qexp(4, 4), 7, 2);
    CHECK_THROWS_AS(a + b, std::invalid_argument);
    CHECK_THROWS_AS(a * c, std::invalid_argument);
  }

  SUBCASE("constructor guards") {
    CHECK_THROWS_AS(ModQSeries(4, 1, {}), std::invalid_argument);
    CHECK_THROWS_AS(ModQSeries(3, 1, {}), std::invalid_argument);
    CHECK_THROWS_AS(ModQSeries(7, 0, {}), std::invalid_argument);
  }
}

TEST_CASE("E_{p-1} is 1 and E_{p+1} is E_2 mod p, to 200 coefficients") {
  int n = 200;
  for (long p : {5L, 7L, 11L, 13L}) {
    ModQSeries a = reduce_series(eisenstein_qexp(static_cast<unsigned>(p - 1), n), p, 1);
    CHECK(a == reduce_series(QSeries::one(n), p, 1));
    ModQSeries b = reduce_series(eisenstein_qexp(static_cast<unsigned>(p + 1), n), p, 1);
    CHECK(b == reduce_series(eisenstein_qexp(2, n), p, 1));
  }
}

TEST_CASE("Euler-style lift: E_{(p-1)p^{m-1}} is 1 mod p^m") {
  int n = 60;
  for (long p : {5L, 7L}) {
    for (int m : {1, 2}) {
      unsigned k = static_cast<unsigned>((p - 1) * (m == 1 ? 1 : p));
      ModQSeries a = reduce_series(eisenstein_qexp(k, n), p, m);
      CHECK(a == reduce_series(QSeries::one(n), p, m));
    }
  }
}
