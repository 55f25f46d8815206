#pragma once

#include <vector>

#include "qmlab/arith.hpp"

namespace qmlab {

// Truncated q-expansion with exact rational coefficients. precision() == N
// means coefficients of q^0 .. q^{N-1} are stored; everything beyond is
// unknown, not zero. Binary operations truncate to the smaller precision.
class QSeries {
 public:
  explicit QSeries(std::vector<BigRational> coeffs);
  static QSeries zero(int precision);
  static QSeries one(int precision);

  int precision() const { return static_cast<int>(coeffs_.size()); }
  const BigRational& coeff(int n) const;
  const std::vector<BigRational>& coeffs() const { return coeffs_; }

  QSeries truncate(int precision) const;
  bool is_zero() const;

  QSeries operator-() const;
  friend QSeries operator+(const QSeries& a, const QSeries& b);
  friend QSeries operator-(const QSeries& a, const QSeries& b);
  friend QSeries operator*(const QSeries& a, const QSeries& b);
  friend QSeries operator*(const BigRational& c, const QSeries& a);
  friend bool operator==(const QSeries& a, const QSeries& b);

  // Numeric sum of coeff(n) * x^n over the stored range.
  double eval_double(double x) const;

 private:
  std::vector<BigRational> coeffs_;
};

// Convolution kernels; the operator* entry dispatches between them.
QSeries series_mul_serial(const QSeries& a, const QSeries& b);
QSeries series_mul_parallel(const QSeries& a, const QSeries& b);

// q d/dq: coefficient n is multiplied by n.
QSeries series_derive(const QSeries& f);
QSeries series_derive_n(const QSeries& f, int n);

QSeries series_pow(const QSeries& f, unsigned e);

// sum_{d | n} d^k for n >= 1.
BigInt sigma(unsigned k, unsigned long n);

// E_k = 1 - (2k/B_k) sum_{n>=1} sigma_{k-1}(n) q^n, for even k >= 2.
QSeries eisenstein_qexp(unsigned k, int precision);

// Default precision certifying an identity between weight-w forms on SL2(Z):
// ceil(w/12) + 2 coefficients.
int certification_precision(int weight);

// q-expansion with coefficients reduced into [0, p^m). Arithmetic between
// series with different (p, m) is a hard error.
class ModQSeries {
 public:
  ModQSeries(long p, int m, std::vector<BigInt> coeffs);
  static ModQSeries zero(long p, int m, int precision);

  long p() const { return p_; }
  int m() const { return m_; }
  const BigInt& modulus() const { return modulus_; }
  int precision() const { return static_cast<int>(coeffs_.size()); }
  const BigInt& coeff(int n) const;

  bool is_zero() const;
  ModQSeries truncate(int precision) const;

  friend ModQSeries operator+(const ModQSeries& a, const ModQSeries& b);
  friend ModQSeries operator-(const ModQSeries& a, const ModQSeries& b);
  friend ModQSeries operator*(const ModQSeries& a, const ModQSeries& b);
  friend bool operator==(const ModQSeries& a, const ModQSeries& b);

 private:
  long p_;
  int m_;
  BigInt modulus_;
  std::vector<BigInt> coeffs_;
};

ModQSeries series_derive(const ModQSeries& f);

// Reduce mod p^m for prime p >= 5, m >= 1. A coefficient whose denominator
// is divisible by p is an error naming the offending index.
ModQSeries reduce_series(const QSeries& f, long p, int m);

}  // namespace qmlab
