#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "qmlab/cmtaylor.hpp"

using namespace qmlab;

// Every value_at checks Z[1/6] integrality of the scaled coefficient, so
// driving the chains deep is itself the assertion: a single denominator
// prime other than 2 or 3 anywhere in n <= 200 would throw.
TEST_CASE("scaled Taylor coefficients stay in Z[1/6] out to n = 200") {
  const CMPoint& i = find_point(shipped_points(), "i");
  const CMPoint& tau7 = find_point(shipped_points(), "tau7");
  for (const QMPoly& f : {QMPoly::Q(), QMPoly::R(), delta_poly()}) {
    DerivativeChain chain(f);
    for (int n = 0; n <= 200; ++n) {
      CHECK_NOTHROW(chain.value_at(i));
      CHECK_NOTHROW(chain.value_at(tau7));
      if (n < 200) chain.advance();
    }
  }
}

// Spot exponents deep in the chain: the n = 170 coefficient of E4 at i has
// the documented prime content at 7, 11, 13.
TEST_CASE("valuation pattern of t_{E4}(i; 170)") {
  DerivativeChain chain(QMPoly::Q());
  chain.advance_to(170);
  BigRational t = chain.value_at(find_point(shipped_points(), "i")).value;
  CHECK(padic_valuation(t, BigInt(7)) == 6);
  CHECK(padic_valuation(t, BigInt(11)) == 2);
  CHECK(padic_valuation(t, BigInt(13)) == 0);
}
