#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmlab/arith.hpp"
#include "qmlab/qmpoly.hpp"

namespace qmlab {

// chi_{-d}(j), the Kronecker symbol (-d | j). Requires d > 0 with
// -d congruent to 0 or 1 mod 4 (i.e. d congruent to 0 or 3 mod 4).
int kronecker_chi(int d, const BigInt& j);

struct ClassData {
  int h;  // class number of discriminant -d
  int w;  // unit count: 6 for d=3, 4 for d=4, else 2
};

// Class number by enumerating reduced binary quadratic forms (a, b, c) with
// b^2 - 4ac = -d, |b| <= a <= c, and b >= 0 when |b| == a or a == c.
// The caller is responsible for -d being a fundamental discriminant.
ClassData class_data(int d);

// Omega*_{-d} = (2 pi d)^{-1/2} * (prod_{j=1}^{d-1} Gamma(j/d)^{chi_{-d}(j)})
// raised to w/(4h), evaluated via log-Gamma. Omega*_{-4} = 0.590170299508048.
double chowla_selberg(int d);

// True when chi_{-d}(p) is 0 or -1 (p inert or ramified in Q(sqrt(-d))).
bool legendre_applicable(int d, long p);

// CM evaluation point: tau with discriminant -d, carrying the scaled values
// (P*(tau), Q(tau), R(tau)) / appropriate Omega powers. The triple must lie
// in Z[1/6] (denominators only of the form 2^a 3^b).
struct CMPoint {
  std::string name;
  int d = 0;
  BigRational pstar, q, r;
  std::string omega_decimal;  // decimal of the period the triple is scaled by
  std::string scale_note;
};

// Scaled Taylor coefficient t_f(tau; n). The Z[1/6]-integrality of the value
// is checked at construction.
struct TaylorCoeff {
  int n = 0;
  BigRational value;
};

// Throws unless x has denominator 2^a 3^b.
void check_z16(const BigRational& x, const std::string& what);

// t_f(tau; n) = (phi of D^n f) evaluated at the point's triple.
TaylorCoeff taylor_coeff(const QMPoly& f, const CMPoint& pt, int n);

// Incremental derivative chain: keeps D^n f and advances one derivation at a
// time, so a sweep over consecutive n costs one derive per step.
class DerivativeChain {
 public:
  explicit DerivativeChain(QMPoly f);

  int n() const { return n_; }
  const QMPoly& current() const { return cur_; }
  void advance();
  void advance_to(int n);
  TaylorCoeff value_at(const CMPoint& pt) const;

 private:
  int n_ = 0;
  QMPoly cur_;
};

// n-th non-holomorphic derivative of a P-free f of weight k, assembled as
//   sum_r T^r C(n, r) (k+n-1)!/(k+n-r-1)! D^{n-r} f,  then  T = (P* - P)/12.
// The holomorphic P must cancel completely after substitution; asserted.
// Agrees with phi(derive_n(f, n)).
QMPoly nonholo_eq56(const QMPoly& f, int n);

// Derivation on the completed ring (starred kind), the conjugate of D under
// the P -> P* relabeling.
QMPoly nonholo_derive(const QMPoly& f);

enum class SweepMode { weak, sharp, conjecture };

SweepMode sweep_mode_from_string(const std::string& s);
std::string to_string(SweepMode mode);

// Smallest n from which the mode requires v_p(t) >= m:
// weak: (m-1) p^2; sharp and conjecture: ceil(m/2) p^2.
long sweep_threshold(SweepMode mode, long p, int m);

struct SweepRow {
  std::string form;
  std::string point;
  long p = 0;
  int m = 0;
  int n = 0;
  std::optional<long> valuation;  // nullopt = +infinity (t == 0)
  int bound = 0;                  // required valuation when the row is required
  bool required = false;          // n >= sweep_threshold
  bool pass = true;               // !required || valuation >= bound
  std::string mode;
};

struct Report {
  std::vector<SweepRow> rows;
  // Hypothesis checks recorded for conjecture mode (empty = all satisfied).
  std::vector<std::string> hypothesis_notes;

  bool all_pass() const;
  int failure_count() const;
};

std::string row_to_json(const SweepRow& row);

// Valuation sweep of t_f(tau; n) over n in [n_from, n_to], incremental in n.
// weak and sharp modes reject hypothesis violations (invalid_argument naming
// the failed hypothesis); conjecture mode records violations in the report
// and computes the rows anyway, so necessity probes can run.
// Hypotheses: all modes need P-free f and prime p >= 5;
//   weak:  legendre_applicable(pt.d, p) and m > 1;
//   sharp: legendre_applicable(pt.d, p), 1 <= m <= k-2 and p >= 2k-2.
Report sweep(const QMPoly& f, const std::string& form_name, const CMPoint& pt, long p, int m,
             int n_from, int n_to, SweepMode mode);

// The two shipped CM points: "i" (d = 4, triple (0, 12, 0)) and "tau7"
// (d = 7, triple (3, 105, 1323)).
const std::vector<CMPoint>& shipped_points();

// Points from a registry JSON file (array of objects with keys name, d,
// pstar, q, r, omega_decimal, scale_note; rationals as "num/den" strings).
// Validates the schema and the Z[1/6] triple invariant.
std::vector<CMPoint> load_registry_file(const std::string& path);

// Shipped points overlaid with the optional registry file named by the
// --registry flag or the QMLAB_REGISTRY environment variable; a file point
// with a shipped name wins.
std::vector<CMPoint> effective_registry(const std::string& registry_path_or_empty);

const CMPoint& find_point(const std::vector<CMPoint>& points, const std::string& name);
// The returned reference points into `points`; a temporary would dangle.
const CMPoint& find_point(std::vector<CMPoint>&& points, const std::string& name) = delete;

}  // namespace qmlab
