#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "qmlab/cmtaylor.hpp"
#include "qmlab/formspec.hpp"

using namespace qmlab;

namespace {

const QMPoly Q = QMPoly::Q();
const QMPoly R = QMPoly::R();

const CMPoint& point_i() { return find_point(shipped_points(), "i"); }
const CMPoint& point_tau7() { return find_point(shipped_points(), "tau7"); }

bool close_rel(double x, double y, double tol) { return std::fabs(x - y) <= tol * std::fabs(y); }

// Euler's criterion: for an odd prime q not dividing d, (-d | q) is congruent
// to (-d)^((q-1)/2) mod q.
int euler_symbol(int d, long q) {
  if (BigInt(d) % q == 0) return 0;
  BigInt r, base(-d), mod(q);
  mpz_powm_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>((q - 1) / 2),
              mod.get_mpz_t());
  return r == 1 ? 1 : -1;
}

// Registry fixture: writes `text` to a fresh temp file, removed on scope exit.
class TempRegistry {
 public:
  explicit TempRegistry(const std::string& text) {
    static int counter = 0;
    path_ = (std::filesystem::temp_directory_path() /
             ("qmlab_registry_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) +
              ".json"))
                .string();
    std::ofstream(path_) << text;
  }
  ~TempRegistry() { std::filesystem::remove(path_); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace

TEST_CASE("kronecker character against Euler's criterion") {
  for (int d : {3, 4, 7, 8, 23}) {
    for (long q : {3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L, 41L, 43L, 47L}) {
      if (q == 2) continue;
      CHECK(kronecker_chi(d, BigInt(q)) == euler_symbol(d, q));
    }
  }
  CHECK(kronecker_chi(4, BigInt(3)) == -1);
  CHECK(kronecker_chi(7, BigInt(2)) == 1);   // -7 = 1 mod 8
  CHECK(kronecker_chi(8, BigInt(2)) == 0);
  CHECK(kronecker_chi(4, BigInt(1)) == 1);
  CHECK(kronecker_chi(7, BigInt(0)) == 0);
  CHECK_THROWS_AS(kronecker_chi(5, BigInt(3)), std::invalid_argument);
  CHECK_THROWS_AS(kronecker_chi(-4, BigInt(3)), std::invalid_argument);
}

TEST_CASE("class numbers by reduced-form enumeration") {
  auto hw = [](int d) {
    ClassData c = class_data(d);
    return std::pair<int, int>(c.h, c.w);
  };
  CHECK(hw(3) == std::pair<int, int>(1, 6));
  CHECK(hw(4) == std::pair<int, int>(1, 4));
  CHECK(hw(7) == std::pair<int, int>(1, 2));
  CHECK(hw(8) == std::pair<int, int>(1, 2));
  CHECK(hw(11) == std::pair<int, int>(1, 2));
  CHECK(hw(15) == std::pair<int, int>(2, 2));
  CHECK(hw(20) == std::pair<int, int>(2, 2));
  CHECK(hw(23) == std::pair<int, int>(3, 2));
  CHECK(hw(163) == std::pair<int, int>(1, 2));
}

TEST_CASE("Chowla-Selberg periods") {
  CHECK(close_rel(chowla_selberg(4), 0.5901702995080482, 1e-12));
  CHECK(close_rel(chowla_selberg(3), 0.6409273802196893, 1e-12));
  CHECK(close_rel(chowla_selberg(7), 0.5004912879489576, 1e-12));
  // The shipped decimals are prefixes of the computed periods.
  CHECK(std::stod(point_i().omega_decimal) == doctest::Approx(chowla_selberg(4)).epsilon(1e-12));
  double omega_tau7 = chowla_selberg(7) / std::pow(7.0, 0.25);
  CHECK(std::stod(point_tau7().omega_decimal) == doctest::Approx(omega_tau7).epsilon(1e-12));
}

TEST_CASE("inert-or-ramified test") {
  CHECK(legendre_applicable(4, 7));
  CHECK(legendre_applicable(7, 7));   // ramified
  CHECK(legendre_applicable(4, 11));
  CHECK(legendre_applicable(7, 5));
  CHECK_FALSE(legendre_applicable(4, 13));
  CHECK_FALSE(legendre_applicable(4, 5));
  CHECK_FALSE(legendre_applicable(7, 11));
}

TEST_CASE("Z[1/6] integrality guard") {
  CHECK_NOTHROW(check_z16(make_rational(1, 6), "t"));
  CHECK_NOTHROW(check_z16(make_rational(5, 16), "t"));
  CHECK_NOTHROW(check_z16(make_rational(-7, 72), "t"));
  CHECK_NOTHROW(check_z16(BigRational(0), "t"));
  CHECK_THROWS_AS(check_z16(make_rational(1, 5), "t"), std::domain_error);
  CHECK_THROWS_AS(check_z16(make_rational(3, 14), "t"), std::domain_error);
}

TEST_CASE("Taylor coefficient prefixes at the shipped points") {
  auto t = [](const QMPoly& f, const CMPoint& pt, int n) { return taylor_coeff(f, pt, n).value; };
  const CMPoint& i = point_i();
  const CMPoint& tau7 = point_tau7();

  CHECK(t(Q, i, 0) == 12);
  CHECK(t(Q, i, 1) == 0);
  CHECK(t(Q, i, 2) == 20);
  CHECK(t(Q, i, 3) == 0);
  CHECK(t(Q, tau7, 2) == 560);

  QMPoly d = delta_poly();
  CHECK(t(d, tau7, 0) == -343);
  CHECK(t(d, tau7, 1) == -1029);
  CHECK(t(d, tau7, 2) == -343);
  CHECK(t(d, tau7, 3) == 7203);

  CHECK_THROWS_AS(taylor_coeff(Q, i, -1), std::invalid_argument);
}

TEST_CASE("CM congruences at ramified primes, and a split escape") {
  // 7 ramifies in Q(sqrt(-7)): t_{E6}(tau7; 0) = 1323 = 3^3 * 7^2 = 0 mod 7.
  BigRational v = taylor_coeff(R, point_tau7(), 0).value;
  CHECK(v == 1323);
  CHECK(padic_valuation(v, BigInt(7)) == 2);
  CHECK(taylor_coeff(R, point_i(), 0).value == 0);
  // 5 splits in Q(i): no congruence, v_5(12) = 0.
  CHECK(padic_valuation(taylor_coeff(Q, point_i(), 0).value, BigInt(5)) == 0);
}

TEST_CASE("derivative chain is incremental and point-independent") {
  DerivativeChain chain(Q);
  chain.advance_to(2);
  CHECK(chain.n() == 2);
  CHECK(chain.value_at(point_i()).value == 20);
  CHECK(chain.value_at(point_tau7()).value == 560);  // same chain, other point
  chain.advance();
  CHECK(chain.value_at(point_i()).value == taylor_coeff(Q, point_i(), 3).value);
  CHECK(chain.current() == derive_n(Q, 3));
  CHECK_THROWS_AS(chain.advance_to(1), std::invalid_argument);
  CHECK_THROWS_AS(DerivativeChain(phi(Q)), std::invalid_argument);
}

TEST_CASE("non-holomorphic derivative assembly equals the conjugated chain") {
  for (const QMPoly& f : {Q, R, delta_poly()}) {
    for (int n = 0; n <= 12; ++n) {
      CHECK(nonholo_eq56(f, n) == phi(derive_n(f, n)));
    }
  }
  CHECK_THROWS_AS(nonholo_eq56(derive(Q), 1), std::invalid_argument);
  CHECK_THROWS_AS(nonholo_eq56(phi(Q), 1), std::invalid_argument);
  CHECK_THROWS_AS(nonholo_eq56(Q, -1), std::invalid_argument);
}

TEST_CASE("single non-holomorphic derivation steps") {
  CHECK(nonholo_derive(phi(Q)) == phi(derive(Q)));
  CHECK(nonholo_derive(Q) == phi(derive(Q)));  // P-free holomorphic input is lifted
  CHECK(nonholo_derive(nonholo_derive(phi(Q))) == nonholo_eq56(Q, 2));
  CHECK_THROWS_AS(nonholo_derive(derive(Q)), std::invalid_argument);
}

TEST_CASE("sweep thresholds") {
  CHECK(sweep_threshold(SweepMode::weak, 7, 2) == 49);
  CHECK(sweep_threshold(SweepMode::weak, 7, 3) == 98);
  CHECK(sweep_threshold(SweepMode::sharp, 7, 1) == 49);
  CHECK(sweep_threshold(SweepMode::sharp, 5, 3) == 50);
  CHECK(sweep_threshold(SweepMode::conjecture, 13, 1) == 169);
}

TEST_CASE("sweep mode names") {
  for (SweepMode m : {SweepMode::weak, SweepMode::sharp, SweepMode::conjecture})
    CHECK(sweep_mode_from_string(to_string(m)) == m);
  CHECK_THROWS_WITH_AS(sweep_mode_from_string("strong"),
                       "unknown sweep mode 'strong' (weak, sharp, conjecture)",
                       std::invalid_argument);
}

TEST_CASE("sweep hypothesis validation") {
  const CMPoint& i = point_i();
  const CMPoint& tau7 = point_tau7();
  CHECK_THROWS_WITH_AS(sweep(Q, "E4", i, 13, 2, 0, 1, SweepMode::weak),
                       "sweep(weak): hypothesis chi_{-d}(p) in {0,-1} fails: chi_{-4}(13) = 1",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(sweep(Q, "E4", tau7, 7, 1, 0, 1, SweepMode::weak),
                       "sweep(weak): hypothesis m > 1 fails: m = 1", std::invalid_argument);
  CHECK_THROWS_WITH_AS(sweep(delta_poly(), "delta", tau7, 7, 2, 0, 1, SweepMode::sharp),
                       "sweep(sharp): hypothesis p >= 2k-2 fails: p = 7, k = 12",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(sweep(Q, "E4", tau7, 5, 3, 0, 1, SweepMode::sharp),
                       "sweep(sharp): hypothesis m <= k-2 fails: m = 3, k = 4",
                       std::invalid_argument);
  CHECK_THROWS_AS(sweep(derive(Q), "DE4", i, 5, 2, 0, 1, SweepMode::weak), std::invalid_argument);
  CHECK_THROWS_AS(sweep(QMPoly(4), "zero", i, 5, 2, 0, 1, SweepMode::weak), std::invalid_argument);
  CHECK_THROWS_AS(sweep(Q, "E4", i, 4, 2, 0, 1, SweepMode::weak), std::invalid_argument);
  CHECK_THROWS_AS(sweep(Q, "E4", tau7, 5, 0, 0, 1, SweepMode::conjecture), std::invalid_argument);
  CHECK_THROWS_AS(sweep(Q, "E4", tau7, 5, 2, 3, 1, SweepMode::weak), std::invalid_argument);
}

TEST_CASE("weak sweep across its threshold") {
  // delta at tau7, p = 5, m = 2: threshold 25; the window is known to clear
  // the bound.
  Report rep = sweep(delta_poly(), "delta", point_tau7(), 5, 2, 24, 27, SweepMode::weak);
  REQUIRE(rep.rows.size() == 4);
  CHECK(rep.hypothesis_notes.empty());
  CHECK_FALSE(rep.rows[0].required);  // n = 24 < threshold
  for (size_t k = 1; k < rep.rows.size(); ++k) CHECK(rep.rows[k].required);
  for (const SweepRow& row : rep.rows) {
    CHECK(row.bound == 2);
    CHECK(row.mode == "weak");
    CHECK(row.form == "delta");
    CHECK(row.point == "tau7");
  }
  CHECK(rep.all_pass());
  CHECK(rep.failure_count() == 0);
  // Rows agree with the direct single-coefficient path.
  BigRational t25 = taylor_coeff(delta_poly(), point_tau7(), 25).value;
  CHECK(rep.rows[1].valuation == padic_valuation(t25, BigInt(5)));
}

TEST_CASE("conjecture sweep records the violated hypothesis and probes anyway") {
  // 5 splits in Q(i); the congruence genuinely fails there, which is the
  // necessity evidence for the inert-or-ramified hypothesis.
  Report rep = sweep(delta_poly(), "delta", point_i(), 5, 2, 26, 26, SweepMode::conjecture);
  REQUIRE(rep.hypothesis_notes.size() == 1);
  CHECK(rep.hypothesis_notes[0] ==
        "chi_{-4}(5) = 1: inert-or-ramified hypothesis fails; rows computed as a necessity probe");
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].required);  // threshold ceil(2/2)*25 = 25
  CHECK(rep.rows[0].valuation == 0);
  CHECK_FALSE(rep.rows[0].pass);
  CHECK(rep.failure_count() == 1);
}

TEST_CASE("sweep rows serialize with a stable schema") {
  SweepRow row;
  row.form = "E4";
  row.point = "i";
  row.p = 7;
  row.m = 2;
  row.n = 49;
  row.valuation = 4;
  row.bound = 2;
  row.required = true;
  row.pass = true;
  row.mode = "weak";
  CHECK(row_to_json(row) ==
        R"({"form":"E4","point":"i","p":7,"m":2,"n":49,"valuation":4,"bound":2,)"
        R"("required":true,"pass":true,"mode":"weak"})");
  row.valuation = std::nullopt;
  row.n = 50;
  CHECK(row_to_json(row) ==
        R"({"form":"E4","point":"i","p":7,"m":2,"n":50,"valuation":"inf","bound":2,)"
        R"("required":true,"pass":true,"mode":"weak"})");
}

TEST_CASE("shipped points") {
  const auto& pts = shipped_points();
  REQUIRE(pts.size() == 2);
  const CMPoint& i = find_point(pts, "i");
  CHECK(i.d == 4);
  CHECK(i.pstar == 0);
  CHECK(i.q == 12);
  CHECK(i.r == 0);
  const CMPoint& tau7 = find_point(pts, "tau7");
  CHECK(tau7.d == 7);
  CHECK(tau7.pstar == 3);
  CHECK(tau7.q == 105);
  CHECK(tau7.r == 1323);
  CHECK_THROWS_WITH_AS(find_point(pts, "rho"), "unknown CM point 'rho' (available: i, tau7)",
                       std::invalid_argument);
}

TEST_CASE("registry file validation") {
  SUBCASE("valid file") {
    TempRegistry reg(R"([{"name":"x8","d":8,"pstar":"1/2","q":"20","r":"-56",)"
                     R"("omega_decimal":"0.42","scale_note":"test"}])");
    auto pts = load_registry_file(reg.path());
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].name == "x8");
    CHECK(pts[0].d == 8);
    CHECK(pts[0].pstar == make_rational(1, 2));
    CHECK(pts[0].q == 20);
    CHECK(pts[0].r == -56);
  }
  SUBCASE("optional keys may be absent") {
    TempRegistry reg(R"([{"name":"x8","d":8,"pstar":"0","q":"1","r":"1"}])");
    CHECK(load_registry_file(reg.path())[0].omega_decimal.empty());
  }
  SUBCASE("duplicate name") {
    TempRegistry reg(R"([{"name":"x","d":8,"pstar":"0","q":"1","r":"1"},)"
                     R"({"name":"x","d":8,"pstar":"0","q":"1","r":"1"}])");
    CHECK_THROWS_AS(load_registry_file(reg.path()), std::invalid_argument);
  }
  SUBCASE("unknown key") {
    TempRegistry reg(R"([{"name":"x","d":8,"pstar":"0","q":"1","r":"1","weight":4}])");
    CHECK_THROWS_AS(load_registry_file(reg.path()), std::invalid_argument);
  }
  SUBCASE("missing rational key") {
    TempRegistry reg(R"([{"name":"x","d":8,"pstar":"0","q":"1"}])");
    CHECK_THROWS_AS(load_registry_file(reg.path()), std::invalid_argument);
  }
  SUBCASE("rational given as a JSON number") {
    TempRegistry reg(R"([{"name":"x","d":8,"pstar":"0","q":1,"r":"1"}])");
    CHECK_THROWS_AS(load_registry_file(reg.path()), std::invalid_argument);
  }
  SUBCASE("denominator outside Z[1/6]") {
    TempRegistry reg(R"([{"name":"x","d":8,"pstar":"0","q":"1/5","r":"1"}])");
    CHECK_THROWS_AS(load_registry_file(reg.path()), std::domain_error);
  }
  SUBCASE("invalid discriminant") {
    TempRegistry reg(R"([{"name":"x","d":5,"pstar":"0","q":"1","r":"1"}])");
    CHECK_THROWS_AS(load_registry_file(reg.path()), std::invalid_argument);
  }
  SUBCASE("not an array") {
    TempRegistry reg(R"({"name":"x"})");
    CHECK_THROWS_AS(load_registry_file(reg.path()), std::invalid_argument);
  }
  SUBCASE("not JSON at all") {
    TempRegistry reg("not json");
    CHECK_THROWS_AS(load_registry_file(reg.path()), std::invalid_argument);
  }
  SUBCASE("unopenable path") {
    CHECK_THROWS_AS(load_registry_file("/nonexistent/registry.json"), std::invalid_argument);
  }
}

TEST_CASE("registry overlay precedence") {
  TempRegistry reg(R"([{"name":"i","d":4,"pstar":"0","q":"13","r":"0"},)"
                   R"({"name":"x8","d":8,"pstar":"1/2","q":"20","r":"-56"}])");
  ::unsetenv("QMLAB_REGISTRY");

  auto plain = effective_registry("");
  CHECK(plain.size() == 2);  // no file: shipped points only
  CHECK(find_point(plain, "i").q == 12);

  auto overlaid = effective_registry(reg.path());
  CHECK(overlaid.size() == 3);
  CHECK(find_point(overlaid, "i").q == 13);  // file wins on a shipped name
  CHECK(find_point(overlaid, "tau7").q == 105);
  CHECK(find_point(overlaid, "x8").d == 8);

  // The environment variable supplies the path when no explicit one is given.
  ::setenv("QMLAB_REGISTRY", reg.path().c_str(), 1);
  auto via_env = effective_registry("");
  CHECK(via_env.size() == 3);
  CHECK(find_point(via_env, "i").q == 13);
  ::unsetenv("QMLAB_REGISTRY");
}
