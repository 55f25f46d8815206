#include "qmlab/qseries.hpp"

#include <algorithm>
#include <stdexcept>

#include "qmlab/parallel.hpp"

namespace qmlab {

namespace {

// Below this output length the parallel convolution only pays overhead.
constexpr int kParallelMulThreshold = 64;

void check_same_ring(const ModQSeries& a, const ModQSeries& b) {
  if (a.p() != b.p() || a.m() != b.m())
    throw std::invalid_argument("ModQSeries: mixed moduli (p=" + std::to_string(a.p()) + ",m=" +
                                std::to_string(a.m()) + ") vs (p=" + std::to_string(b.p()) +
                                ",m=" + std::to_string(b.m()) + ")");
}

BigInt pow_long(long base, int e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
  return r;
}

}  // namespace

QSeries::QSeries(std::vector<BigRational> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("QSeries: precision must be positive");
}

QSeries QSeries::zero(int precision) {
  if (precision < 1) throw std::invalid_argument("QSeries: precision must be positive");
  return QSeries(std::vector<BigRational>(precision, BigRational(0)));
}

QSeries QSeries::one(int precision) {
  QSeries s = zero(precision);
  s.coeffs_[0] = 1;
  return s;
}

const BigRational& QSeries::coeff(int n) const {
  if (n < 0 || n >= precision())
    throw std::out_of_range("QSeries: coefficient index " + std::to_string(n) +
                            " outside precision " + std::to_string(precision()));
  return coeffs_[n];
}

QSeries QSeries::truncate(int precision) const {
  if (precision < 1 || precision > this->precision())
    throw std::invalid_argument("QSeries: cannot truncate precision " +
                                std::to_string(this->precision()) + " to " +
                                std::to_string(precision));
  return QSeries(std::vector<BigRational>(coeffs_.begin(), coeffs_.begin() + precision));
}

bool QSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const BigRational& c) { return c == 0; });
}

QSeries QSeries::operator-() const {
  std::vector<BigRational> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(-c);
  return QSeries(std::move(out));
}

QSeries operator+(const QSeries& a, const QSeries& b) {
  int n = std::min(a.precision(), b.precision());
  std::vector<BigRational> out(n);
  for (int i = 0; i < n; ++i) out[i] = a.coeffs_[i] + b.coeffs_[i];
  return QSeries(std::move(out));
}

QSeries operator-(const QSeries& a, const QSeries& b) {
  int n = std::min(a.precision(), b.precision());
  std::vector<BigRational> out(n);
  for (int i = 0; i < n; ++i) out[i] = a.coeffs_[i] - b.coeffs_[i];
  return QSeries(std::move(out));
}

QSeries series_mul_serial(const QSeries& a, const QSeries& b) {
  int n = std::min(a.precision(), b.precision());
  std::vector<BigRational> out(n);
  for (int k = 0; k < n; ++k) {
    BigRational acc(0);
    for (int i = 0; i <= k; ++i)
      if (a.coeff(i) != 0 && b.coeff(k - i) != 0) acc += a.coeff(i) * b.coeff(k - i);
    out[k] = std::move(acc);
  }
  return QSeries(std::move(out));
}

QSeries series_mul_parallel(const QSeries& a, const QSeries& b) {
  int n = std::min(a.precision(), b.precision());
  std::vector<BigRational> out(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) num_threads(parallel::max_threads())
#endif
  for (int k = 0; k < n; ++k) {
    BigRational acc(0);
    for (int i = 0; i <= k; ++i)
      if (a.coeff(i) != 0 && b.coeff(k - i) != 0) acc += a.coeff(i) * b.coeff(k - i);
    out[k] = std::move(acc);
  }
  return QSeries(std::move(out));
}

QSeries operator*(const QSeries& a, const QSeries& b) {
  int n = std::min(a.precision(), b.precision());
  if (parallel::enabled() && n >= kParallelMulThreshold) return series_mul_parallel(a, b);
  return series_mul_serial(a, b);
}

QSeries operator*(const BigRational& c, const QSeries& a) {
  std::vector<BigRational> out;
  out.reserve(a.precision());
  for (const auto& x : a.coeffs_) out.push_back(c * x);
  return QSeries(std::move(out));
}

bool operator==(const QSeries& a, const QSeries& b) {
  return a.coeffs_ == b.coeffs_;
}

double QSeries::eval_double(double x) const {
  // Horner over the stored range.
  double acc = 0.0;
  for (int i = precision() - 1; i >= 0; --i) acc = acc * x + coeffs_[i].get_d();
  return acc;
}

QSeries series_derive(const QSeries& f) {
  std::vector<BigRational> out;
  out.reserve(f.precision());
  for (int i = 0; i < f.precision(); ++i) out.push_back(BigRational(i) * f.coeff(i));
  return QSeries(std::move(out));
}

QSeries series_derive_n(const QSeries& f, int n) {
  if (n < 0) throw std::invalid_argument("series_derive_n: negative order");
  QSeries s = f;
  for (int i = 0; i < n; ++i) s = series_derive(s);
  return s;
}

QSeries series_pow(const QSeries& f, unsigned e) {
  QSeries acc = QSeries::one(f.precision());
  QSeries base = f;
  while (e > 0) {
    if (e & 1u) acc = acc * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return acc;
}

BigInt sigma(unsigned k, unsigned long n) {
  if (n == 0) throw std::invalid_argument("sigma: n must be >= 1");
  BigInt acc = 0;
  BigInt t;
  for (unsigned long d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    mpz_ui_pow_ui(t.get_mpz_t(), d, k);
    acc += t;
    unsigned long e = n / d;
    if (e != d) {
      mpz_ui_pow_ui(t.get_mpz_t(), e, k);
      acc += t;
    }
  }
  return acc;
}

QSeries eisenstein_qexp(unsigned k, int precision) {
  if (k < 2 || k % 2 != 0)
    throw std::invalid_argument("eisenstein_qexp: weight must be even and >= 2, got " +
                                std::to_string(k));
  std::vector<BigRational> out(precision, BigRational(0));
  out[0] = 1;
  BigRational factor = BigRational(-2 * static_cast<long>(k)) / bernoulli(k);
  for (int n = 1; n < precision; ++n)
    out[n] = factor * BigRational(sigma(k - 1, static_cast<unsigned long>(n)));
  return QSeries(std::move(out));
}

int certification_precision(int weight) {
  if (weight < 0) throw std::invalid_argument("certification_precision: negative weight");
  return (weight + 11) / 12 + 2;
}

ModQSeries::ModQSeries(long p, int m, std::vector<BigInt> coeffs)
    : p_(p), m_(m), modulus_(pow_long(p, m)), coeffs_(std::move(coeffs)) {
  if (p_ < 5 || !is_prime(BigInt(p_)))
    throw std::invalid_argument("ModQSeries: p must be a prime >= 5");
  if (m_ < 1) throw std::invalid_argument("ModQSeries: m must be >= 1");
  if (coeffs_.empty()) throw std::invalid_argument("ModQSeries: precision must be positive");
  for (auto& c : coeffs_) {
    mpz_mod(c.get_mpz_t(), c.get_mpz_t(), modulus_.get_mpz_t());
  }
}

ModQSeries ModQSeries::zero(long p, int m, int precision) {
  return ModQSeries(p, m, std::vector<BigInt>(precision, BigInt(0)));
}

const BigInt& ModQSeries::coeff(int n) const {
  if (n < 0 || n >= precision())
    throw std::out_of_range("ModQSeries: coefficient index " + std::to_string(n) +
                            " outside precision " + std::to_string(precision()));
  return coeffs_[n];
}

bool ModQSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const BigInt& c) { return c == 0; });
}

ModQSeries ModQSeries::truncate(int precision) const {
  if (precision < 1 || precision > this->precision())
    throw std::invalid_argument("ModQSeries: bad truncation");
  return ModQSeries(p_, m_, std::vector<BigInt>(coeffs_.begin(), coeffs_.begin() + precision));
}

ModQSeries operator+(const ModQSeries& a, const ModQSeries& b) {
  check_same_ring(a, b);
  int n = std::min(a.precision(), b.precision());
  std::vector<BigInt> out(n);
  for (int i = 0; i < n; ++i) out[i] = a.coeffs_[i] + b.coeffs_[i];
  return ModQSeries(a.p_, a.m_, std::move(out));
}

ModQSeries operator-(const ModQSeries& a, const ModQSeries& b) {
  check_same_ring(a, b);
  int n = std::min(a.precision(), b.precision());
  std::vector<BigInt> out(n);
  for (int i = 0; i < n; ++i) out[i] = a.coeffs_[i] - b.coeffs_[i];
  return ModQSeries(a.p_, a.m_, std::move(out));
}

ModQSeries operator*(const ModQSeries& a, const ModQSeries& b) {
  check_same_ring(a, b);
  int n = std::min(a.precision(), b.precision());
  std::vector<BigInt> out(n, BigInt(0));
  for (int i = 0; i < n; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (int j = 0; i + j < n; ++j) {
      if (b.coeffs_[j] == 0) continue;
      out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return ModQSeries(a.p_, a.m_, std::move(out));
}

bool operator==(const ModQSeries& a, const ModQSeries& b) {
  check_same_ring(a, b);
  return a.coeffs_ == b.coeffs_;
}

ModQSeries series_derive(const ModQSeries& f) {
  std::vector<BigInt> out;
  out.reserve(f.precision());
  for (int i = 0; i < f.precision(); ++i) out.push_back(BigInt(i) * f.coeff(i));
  return ModQSeries(f.p(), f.m(), std::move(out));
}

ModQSeries reduce_series(const QSeries& f, long p, int m) {
  BigInt modulus = pow_long(p, m);
  BigInt bp(p);
  std::vector<BigInt> out;
  out.reserve(f.precision());
  for (int n = 0; n < f.precision(); ++n) {
    const BigRational& c = f.coeff(n);
    if (mpz_divisible_p(denominator(c).get_mpz_t(), bp.get_mpz_t()))
      throw std::invalid_argument("reduce_series: denominator of coefficient " +
                                  std::to_string(n) + " is divisible by " + std::to_string(p));
    BigInt inv;
    if (mpz_invert(inv.get_mpz_t(), denominator(c).get_mpz_t(), modulus.get_mpz_t()) == 0)
      throw std::invalid_argument("reduce_series: denominator of coefficient " +
                                  std::to_string(n) + " not invertible mod " + std::to_string(p) +
                                  "^" + std::to_string(m));
    out.push_back(numerator(c) * inv);
  }
  return ModQSeries(p, m, std::move(out));
}

}  // namespace qmlab
