#pragma once

#include <optional>
#include <vector>

#include "qmlab/qmpoly.hpp"

namespace qmlab {

// Weight-homogeneous polynomial in (P, Q, R) with coefficients in Z/p^m,
// stored as canonical residues in [0, p^m). Same term invariants as QMPoly.
class ModPoly {
 public:
  ModPoly(long p, int m, int weight);

  static ModPoly from_terms(long p, int m, int weight,
                            std::vector<std::pair<Monomial, BigInt>> terms);

  long p() const { return p_; }
  int m() const { return m_; }
  const BigInt& modulus() const { return modulus_; }
  int weight() const { return weight_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_pfree() const;
  const std::vector<std::pair<Monomial, BigInt>>& terms() const { return terms_; }
  BigInt coeff(Monomial mon) const;

  friend ModPoly operator+(const ModPoly& f, const ModPoly& g);
  friend ModPoly operator-(const ModPoly& f, const ModPoly& g);
  friend ModPoly operator*(const ModPoly& f, const ModPoly& g);
  friend bool operator==(const ModPoly& f, const ModPoly& g);

 private:
  long p_;
  int m_;
  BigInt modulus_;
  int weight_;
  std::vector<std::pair<Monomial, BigInt>> terms_;
};

// Reduce mod p^m for prime p >= 5, m >= 1. A coefficient whose denominator
// is divisible by p is an error naming the offending monomial.
ModPoly reduce_poly(const QMPoly& f, long p, int m);

// Lift residues to integer representatives in [0, p^m).
QMPoly lift_poly(const ModPoly& f);

// Decide whether A^t divides F in (Z/p^m)[P, Q, R], A = eisenstein_poly(p-1)
// reduced mod p^m, and return the quotient when it does. A is P-free, so F
// splits into independent P-degree slices, each an overdetermined linear
// system over Z/p solved per weight grade; m > 1 is handled by Hensel
// staging (divide mod p, lift the quotient canonically, subtract, divide the
// residual by p, repeat). The quotient mod p at each stage is unique because
// F_p[Q, R] is a domain, so a stage failure proves non-divisibility.
std::optional<ModPoly> divides_Apow(const ModPoly& F, int t);

// Swinnerton-Dyer filtration weight of a nonzero P-free F mod p^m: starting
// from the nominal weight, divide by A^{p^{m-1}} while possible, dropping the
// weight by p^{m-1}(p-1) each time.
int filtration(const ModPoly& F);

// v(f) = sup{ n : f lies in the n-th power of the ideal (A^p, p) } for a
// holomorphic-kind f with p-free coefficient denominators. nullopt (meaning
// +infinity) for f == 0. Search is capped at
//   min coefficient p-valuation + floor(weight / (p(p-1))) + 1,
// which is an upper bound for v: each A^p factor costs weight p(p-1) and
// each p factor costs one unit of coefficient valuation.
std::optional<int> ideal_valuation(const QMPoly& f, long p);

// Single membership test f in (A^p, p)^n; greedy recursion peeling p or the
// top A^{pn} layer. Exact, not heuristic: the quotient at each layer is
// unique mod p.
bool ideal_member(const QMPoly& f, long p, int n);

}  // namespace qmlab
