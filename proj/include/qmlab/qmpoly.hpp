#pragma once

#include <array>
#include <compare>
#include <vector>

#include "qmlab/arith.hpp"
#include "qmlab/qseries.hpp"

namespace qmlab {

// First variable of the ring: P (weight-2 quasimodular generator) or its
// non-holomorphic completion P*. Q and R always mean the weight-4 and
// weight-6 generators.
enum class VarKind { holo, star };

// Exponent triple (a, b, c) for P^a Q^b R^c; weight 2a + 4b + 6c.
struct Monomial {
  int a = 0;
  int b = 0;
  int c = 0;

  int weight() const { return 2 * a + 4 * b + 6 * c; }
  auto operator<=>(const Monomial&) const = default;
};

// Weight-homogeneous polynomial in (P, Q, R) or (P*, Q, R) over BigRational.
// Invariants: every stored term has the declared weight, no zero
// coefficients, terms sorted by descending (a, b, c); the zero polynomial is
// the empty term list (its weight label is bookkeeping only and equality
// treats all zero polynomials as equal).
class QMPoly {
 public:
  QMPoly() : QMPoly(0, VarKind::holo) {}
  explicit QMPoly(int weight, VarKind kind = VarKind::holo) : weight_(weight), kind_(kind) {}

  static QMPoly constant(const BigRational& c);
  static QMPoly monomial(const BigRational& coeff, Monomial m, VarKind kind = VarKind::holo);
  static QMPoly P();
  static QMPoly Q();
  static QMPoly R();

  // Takes an unsorted term list, sorts, combines, drops zeros; every term
  // must have weight equal to the label.
  static QMPoly from_terms(int weight, VarKind kind,
                           std::vector<std::pair<Monomial, BigRational>> terms);

  int weight() const { return weight_; }
  VarKind kind() const { return kind_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_pfree() const;
  int term_count() const { return static_cast<int>(terms_.size()); }
  const std::vector<std::pair<Monomial, BigRational>>& terms() const { return terms_; }
  BigRational coeff(Monomial m) const;

  QMPoly operator-() const;
  friend QMPoly operator+(const QMPoly& f, const QMPoly& g);
  friend QMPoly operator-(const QMPoly& f, const QMPoly& g);
  friend QMPoly operator*(const QMPoly& f, const QMPoly& g);
  friend QMPoly operator*(const BigRational& c, const QMPoly& f);
  friend bool operator==(const QMPoly& f, const QMPoly& g);

 private:
  int weight_;
  VarKind kind_;
  std::vector<std::pair<Monomial, BigRational>> terms_;
};

QMPoly poly_pow(const QMPoly& f, unsigned e);

// Product kernels; operator* dispatches between them.
QMPoly poly_mul_serial(const QMPoly& f, const QMPoly& g);
QMPoly poly_mul_parallel(const QMPoly& f, const QMPoly& g);

// Ramanujan derivation D = q d/dq on the q-expansion side: DP = (P^2 - Q)/12,
// DQ = (PQ - R)/3, DR = (PR - Q^2)/2. Raises weight by 2. Rejects starred
// input (use nonholo_derive for the completed ring).
QMPoly derive(const QMPoly& f);
QMPoly derive_n(const QMPoly& f, int n);

// Derivation kernels; derive() dispatches between them.
QMPoly derive_serial(const QMPoly& f);
QMPoly derive_parallel(const QMPoly& f);

// d/dQ and d/dR on P-free polynomials (weight drops by 4 resp. 6).
QMPoly partial_Q(const QMPoly& f);
QMPoly partial_R(const QMPoly& f);

// theta_p f = (BQ - AR)/3 * df/dQ + (BR - AQ^2)/2 * df/dR with
// A = eisenstein_poly(p-1), B = eisenstein_poly(p+1). Requires P-free f;
// raises weight by p + 1. Congruent to Df mod p as a q-expansion.
QMPoly theta(const QMPoly& f, long p);

// Rankin-Cohen bracket [f, g]_n for P-free f, g of weights k, k':
// sum_{r+s=n} (-1)^r C(k+n-1, s) C(k'+n-1, r) (D^r f)(D^s g).
// Weight k + k' + 2n; the P-cancellation of the result is asserted.
QMPoly rankin_cohen(const QMPoly& f, const QMPoly& g, int n);

// The unique P-free weight-k polynomial whose q-expansion is E_k, found by
// solving the linear system that matches one more q-coefficient than there
// are weight-k monomials in (Q, R). Requires even k >= 4.
QMPoly eisenstein_poly(unsigned k);

// (Q^3 - R^2)/1728, weight 12.
QMPoly delta_poly();

// Substitute the Eisenstein q-expansions for P, Q, R. Holomorphic kind only.
QSeries to_qseries(const QMPoly& f, int precision);

// Relabel P -> P* (the almost-holomorphic completion); terms are unchanged.
QMPoly phi(const QMPoly& f);
// Inverse relabeling P* -> P.
QMPoly unphi(const QMPoly& f);

// Evaluate at (first variable, Q, R). The input must be starred or P-free:
// a holomorphic polynomial that still contains P has no well-defined value
// at a point of the completed ring.
BigRational evaluate(const QMPoly& f, const std::array<BigRational, 3>& point);

}  // namespace qmlab
