#include "qmlab/qmpoly.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

#include "linalg.hpp"
#include "qmlab/parallel.hpp"

namespace qmlab {

namespace {

using Term = std::pair<Monomial, BigRational>;

// Descending (a, b, c); ties broken nowhere (monomials are unique per poly).
bool term_before(const Term& x, const Term& y) { return y.first < x.first; }

// Sort, combine equal monomials, drop zeros. The canonical representation.
std::vector<Term> normalize(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), term_before);
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().first == t.first)
      out.back().second += t.second;
    else
      out.push_back(std::move(t));
    if (!out.empty() && out.back().second == 0) out.pop_back();
  }
  return out;
}

void check_kind(const QMPoly& f, const QMPoly& g, const char* op) {
  if (!f.is_zero() && !g.is_zero() && f.kind() != g.kind())
    throw std::invalid_argument(std::string(op) + ": mixed holomorphic/starred operands");
}

// Kernel thresholds: below these the parallel variants only pay overhead.
constexpr size_t kParallelMulWork = 4096;   // term-pair products
constexpr size_t kParallelDeriveTerms = 512;

std::vector<Term> mul_block(const std::vector<Term>& a, size_t lo, size_t hi,
                            const std::vector<Term>& b) {
  std::vector<Term> out;
  out.reserve((hi - lo) * b.size());
  for (size_t i = lo; i < hi; ++i)
    for (const auto& [mb, cb] : b)
      out.emplace_back(Monomial{a[i].first.a + mb.a, a[i].first.b + mb.b, a[i].first.c + mb.c},
                       a[i].second * cb);
  return out;
}

// Contributions of one term of f to Df. With w = term weight:
//   (a+1, b, c)   += coef (w - a)/12
//   (a-1, b+1, c) -= coef a/12
//   (a, b-1, c+1) -= coef b/3
//   (a, b+2, c-1) -= coef c/2
void derive_term(const Monomial& m, const BigRational& coef, std::vector<Term>& out) {
  int w = m.weight();
  if (w != m.a)
    out.emplace_back(Monomial{m.a + 1, m.b, m.c}, coef * make_rational(w - m.a, 12));
  if (m.a > 0) out.emplace_back(Monomial{m.a - 1, m.b + 1, m.c}, coef * make_rational(-m.a, 12));
  if (m.b > 0) out.emplace_back(Monomial{m.a, m.b - 1, m.c + 1}, coef * make_rational(-m.b, 3));
  if (m.c > 0) out.emplace_back(Monomial{m.a, m.b + 2, m.c - 1}, coef * make_rational(-m.c, 2));
}

}  // namespace

QMPoly QMPoly::constant(const BigRational& c) {
  return from_terms(0, VarKind::holo, {{Monomial{}, c}});
}

QMPoly QMPoly::monomial(const BigRational& coeff, Monomial m, VarKind kind) {
  return from_terms(m.weight(), kind, {{m, coeff}});
}

QMPoly QMPoly::P() { return monomial(BigRational(1), Monomial{1, 0, 0}); }
QMPoly QMPoly::Q() { return monomial(BigRational(1), Monomial{0, 1, 0}); }
QMPoly QMPoly::R() { return monomial(BigRational(1), Monomial{0, 0, 1}); }

QMPoly QMPoly::from_terms(int weight, VarKind kind, std::vector<Term> terms) {
  for (const auto& [m, c] : terms) {
    if (m.a < 0 || m.b < 0 || m.c < 0)
      throw std::invalid_argument("QMPoly: negative exponent");
    if (m.weight() != weight)
      throw std::invalid_argument("QMPoly: term of weight " + std::to_string(m.weight()) +
                                  " in a weight-" + std::to_string(weight) + " polynomial");
  }
  QMPoly f(weight, kind);
  f.terms_ = normalize(std::move(terms));
  return f;
}

bool QMPoly::is_pfree() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.first.a == 0; });
}

BigRational QMPoly::coeff(Monomial m) const {
  for (const auto& [mm, c] : terms_)
    if (mm == m) return c;
  return BigRational(0);
}

QMPoly QMPoly::operator-() const {
  QMPoly out(weight_, kind_);
  out.terms_.reserve(terms_.size());
  for (const auto& [m, c] : terms_) out.terms_.emplace_back(m, -c);
  return out;
}

QMPoly operator+(const QMPoly& f, const QMPoly& g) {
  if (f.is_zero()) return g;
  if (g.is_zero()) return f;
  check_kind(f, g, "operator+");
  if (f.weight() != g.weight())
    throw std::invalid_argument("operator+: weights " + std::to_string(f.weight()) + " and " +
                                std::to_string(g.weight()) + " differ");
  // Merge of two descending term lists.
  QMPoly out(f.weight(), f.kind());
  out.terms_.reserve(f.terms_.size() + g.terms_.size());
  size_t i = 0, j = 0;
  while (i < f.terms_.size() || j < g.terms_.size()) {
    if (j == g.terms_.size() || (i < f.terms_.size() && g.terms_[j].first < f.terms_[i].first)) {
      out.terms_.push_back(f.terms_[i++]);
    } else if (i == f.terms_.size() || f.terms_[i].first < g.terms_[j].first) {
      out.terms_.push_back(g.terms_[j++]);
    } else {
      BigRational c = f.terms_[i].second + g.terms_[j].second;
      if (c != 0) out.terms_.emplace_back(f.terms_[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  return out;
}

QMPoly operator-(const QMPoly& f, const QMPoly& g) { return f + (-g); }

QMPoly poly_mul_serial(const QMPoly& f, const QMPoly& g) {
  return QMPoly::from_terms(f.weight() + g.weight(), f.is_zero() ? g.kind() : f.kind(),
                            mul_block(f.terms(), 0, f.terms().size(), g.terms()));
}

QMPoly poly_mul_parallel(const QMPoly& f, const QMPoly& g) {
  const auto& a = f.terms();
  const auto& b = g.terms();
  int nthreads = parallel::max_threads();
  std::vector<std::vector<Term>> blocks(nthreads);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nthreads)
#endif
  for (int t = 0; t < nthreads; ++t) {
    size_t lo = a.size() * t / nthreads;
    size_t hi = a.size() * (t + 1) / nthreads;
    blocks[t] = mul_block(a, lo, hi, b);
  }
  std::vector<Term> all;
  all.reserve(a.size() * b.size());
  for (auto& blk : blocks)
    for (auto& t : blk) all.push_back(std::move(t));
  return QMPoly::from_terms(f.weight() + g.weight(), f.is_zero() ? g.kind() : f.kind(),
                            std::move(all));
}

QMPoly operator*(const QMPoly& f, const QMPoly& g) {
  check_kind(f, g, "operator*");
  if (parallel::enabled() && f.terms().size() * g.terms().size() >= kParallelMulWork)
    return poly_mul_parallel(f, g);
  return poly_mul_serial(f, g);
}

QMPoly operator*(const BigRational& c, const QMPoly& f) {
  if (c == 0) return QMPoly(f.weight(), f.kind());
  QMPoly out(f.weight(), f.kind());
  out.terms_.reserve(f.terms_.size());
  for (const auto& [m, x] : f.terms_) out.terms_.emplace_back(m, c * x);
  return out;
}

bool operator==(const QMPoly& f, const QMPoly& g) {
  if (f.is_zero() && g.is_zero()) return true;
  return f.kind() == g.kind() && f.weight() == g.weight() && f.terms_ == g.terms_;
}

QMPoly poly_pow(const QMPoly& f, unsigned e) {
  const unsigned e0 = e;
  QMPoly acc = QMPoly::constant(BigRational(1));
  QMPoly base = f;
  while (e > 0) {
    if (e & 1u) acc = acc * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  if (acc.is_zero()) return QMPoly(f.weight() * static_cast<int>(e0), f.kind());
  return acc;
}

QMPoly derive_serial(const QMPoly& f) {
  std::vector<Term> out;
  out.reserve(4 * f.terms().size());
  for (const auto& [m, c] : f.terms()) derive_term(m, c, out);
  return QMPoly::from_terms(f.weight() + 2, VarKind::holo, std::move(out));
}

QMPoly derive_parallel(const QMPoly& f) {
  const auto& terms = f.terms();
  int nthreads = parallel::max_threads();
  std::vector<std::vector<Term>> blocks(nthreads);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nthreads)
#endif
  for (int t = 0; t < nthreads; ++t) {
    size_t lo = terms.size() * t / nthreads;
    size_t hi = terms.size() * (t + 1) / nthreads;
    auto& blk = blocks[t];
    blk.reserve(4 * (hi - lo));
    for (size_t i = lo; i < hi; ++i) derive_term(terms[i].first, terms[i].second, blk);
  }
  std::vector<Term> all;
  all.reserve(4 * terms.size());
  for (auto& blk : blocks)
    for (auto& t : blk) all.push_back(std::move(t));
  return QMPoly::from_terms(f.weight() + 2, VarKind::holo, std::move(all));
}

QMPoly derive(const QMPoly& f) {
  if (f.kind() == VarKind::star)
    throw std::invalid_argument("derive: starred input (use nonholo_derive)");
  if (parallel::enabled() && f.terms().size() >= kParallelDeriveTerms) return derive_parallel(f);
  return derive_serial(f);
}

QMPoly derive_n(const QMPoly& f, int n) {
  if (n < 0) throw std::invalid_argument("derive_n: negative order");
  QMPoly g = f;
  for (int i = 0; i < n; ++i) g = derive(g);
  return g;
}

QMPoly partial_Q(const QMPoly& f) {
  std::vector<Term> out;
  for (const auto& [m, c] : f.terms()) {
    if (m.a != 0) throw std::invalid_argument("partial_Q: input must be P-free");
    if (m.b > 0) out.emplace_back(Monomial{0, m.b - 1, m.c}, BigRational(m.b) * c);
  }
  return QMPoly::from_terms(std::max(f.weight() - 4, 0), f.kind(), std::move(out));
}

QMPoly partial_R(const QMPoly& f) {
  std::vector<Term> out;
  for (const auto& [m, c] : f.terms()) {
    if (m.a != 0) throw std::invalid_argument("partial_R: input must be P-free");
    if (m.c > 0) out.emplace_back(Monomial{0, m.b, m.c - 1}, BigRational(m.c) * c);
  }
  return QMPoly::from_terms(std::max(f.weight() - 6, 0), f.kind(), std::move(out));
}

QMPoly theta(const QMPoly& f, long p) {
  if (!is_prime(BigInt(p)) || p < 5) throw std::invalid_argument("theta: p must be a prime >= 5");
  if (!f.is_pfree()) throw std::invalid_argument("theta: input must be P-free");
  if (f.kind() == VarKind::star) throw std::invalid_argument("theta: starred input");
  QMPoly A = eisenstein_poly(static_cast<unsigned>(p - 1));
  QMPoly B = eisenstein_poly(static_cast<unsigned>(p + 1));
  QMPoly gq = make_rational(1, 3) * (B * QMPoly::Q() - A * QMPoly::R());
  QMPoly gr = make_rational(1, 2) * (B * QMPoly::R() - A * QMPoly::Q() * QMPoly::Q());
  QMPoly out = gq * partial_Q(f) + gr * partial_R(f);
  if (out.is_zero()) return QMPoly(f.weight() + static_cast<int>(p) + 1, VarKind::holo);
  return out;
}

QMPoly rankin_cohen(const QMPoly& f, const QMPoly& g, int n) {
  if (n < 0) throw std::invalid_argument("rankin_cohen: negative bracket index");
  if (!f.is_pfree() || !g.is_pfree())
    throw std::invalid_argument("rankin_cohen: inputs must be P-free");
  if (f.kind() == VarKind::star || g.kind() == VarKind::star)
    throw std::invalid_argument("rankin_cohen: starred input");
  unsigned long k = static_cast<unsigned long>(f.weight());
  unsigned long kp = static_cast<unsigned long>(g.weight());
  std::vector<QMPoly> df{f}, dg{g};
  for (int i = 0; i < n; ++i) {
    df.push_back(derive(df.back()));
    dg.push_back(derive(dg.back()));
  }
  QMPoly acc(f.weight() + g.weight() + 2 * n, VarKind::holo);
  for (int r = 0; r <= n; ++r) {
    int s = n - r;
    BigRational c(binomial(k + n - 1, s) * binomial(kp + n - 1, r));
    if (r % 2 != 0) c = -c;
    acc = acc + c * (df[r] * dg[s]);
  }
  if (!acc.is_pfree())
    throw std::logic_error("rankin_cohen: P failed to cancel (weights " + std::to_string(k) +
                           ", " + std::to_string(kp) + ", n=" + std::to_string(n) + ")");
  return acc;
}

namespace {

// Weight-k monomials in (Q, R), descending (b, c) like the term order.
std::vector<Monomial> pfree_monomials(int weight) {
  std::vector<Monomial> out;
  for (int b = weight / 4; b >= 0; --b) {
    int rest = weight - 4 * b;
    if (rest % 6 == 0) out.push_back(Monomial{0, b, rest / 6});
  }
  std::sort(out.begin(), out.end(), [](const Monomial& x, const Monomial& y) { return y < x; });
  return out;
}

std::mutex epoly_mutex;
std::map<unsigned, QMPoly> epoly_cache;

QMPoly eisenstein_poly_uncached(unsigned k) {
  std::vector<Monomial> monos = pfree_monomials(static_cast<int>(k));
  int dim = static_cast<int>(monos.size());
  // One more matched coefficient than unknowns guards against a wrong basis.
  int prec = dim + 1;
  QSeries e4 = eisenstein_qexp(4, prec);
  QSeries e6 = eisenstein_qexp(6, prec);
  std::vector<QSeries> cols;
  cols.reserve(dim);
  for (const auto& m : monos)
    cols.push_back(series_pow(e4, static_cast<unsigned>(m.b)) *
                   series_pow(e6, static_cast<unsigned>(m.c)));
  QSeries target = eisenstein_qexp(k, prec);
  std::vector<std::vector<BigRational>> M(prec, std::vector<BigRational>(dim));
  std::vector<BigRational> rhs(prec);
  for (int row = 0; row < prec; ++row) {
    for (int col = 0; col < dim; ++col) M[row][col] = cols[col].coeff(row);
    rhs[row] = target.coeff(row);
  }
  auto sol = linalg::rational_solve(std::move(M), std::move(rhs));
  if (!sol)
    throw std::logic_error("eisenstein_poly: inconsistent system at k=" + std::to_string(k));
  std::vector<Term> terms;
  for (int i = 0; i < dim; ++i)
    if ((*sol)[i] != 0) terms.emplace_back(monos[i], (*sol)[i]);
  return QMPoly::from_terms(static_cast<int>(k), VarKind::holo, std::move(terms));
}

}  // namespace

QMPoly eisenstein_poly(unsigned k) {
  if (k < 4 || k % 2 != 0)
    throw std::invalid_argument("eisenstein_poly: weight must be even and >= 4, got " +
                                std::to_string(k));
  std::lock_guard<std::mutex> lock(epoly_mutex);
  auto it = epoly_cache.find(k);
  if (it != epoly_cache.end()) return it->second;
  QMPoly e = eisenstein_poly_uncached(k);
  epoly_cache.emplace(k, e);
  return e;
}

QMPoly delta_poly() {
  return QMPoly::from_terms(12, VarKind::holo,
                            {{Monomial{0, 3, 0}, make_rational(1, 1728)},
                             {Monomial{0, 0, 2}, make_rational(-1, 1728)}});
}

QSeries to_qseries(const QMPoly& f, int precision) {
  if (f.kind() == VarKind::star)
    throw std::invalid_argument("to_qseries: starred input has no q-expansion here");
  int max_a = 0, max_b = 0, max_c = 0;
  for (const auto& [m, c] : f.terms()) {
    max_a = std::max(max_a, m.a);
    max_b = std::max(max_b, m.b);
    max_c = std::max(max_c, m.c);
  }
  auto powers = [precision](const QSeries& base, int up) {
    std::vector<QSeries> ps{QSeries::one(precision)};
    for (int i = 1; i <= up; ++i) ps.push_back(ps.back() * base);
    return ps;
  };
  std::vector<QSeries> pe2 = powers(eisenstein_qexp(2, precision), max_a);
  std::vector<QSeries> pe4 = powers(eisenstein_qexp(4, precision), max_b);
  std::vector<QSeries> pe6 = powers(eisenstein_qexp(6, precision), max_c);
  QSeries acc = QSeries::zero(precision);
  for (const auto& [m, c] : f.terms()) acc = acc + c * (pe2[m.a] * pe4[m.b] * pe6[m.c]);
  return acc;
}

QMPoly phi(const QMPoly& f) {
  if (f.kind() == VarKind::star) throw std::invalid_argument("phi: already starred");
  return QMPoly::from_terms(f.weight(), VarKind::star,
                            {f.terms().begin(), f.terms().end()});
}

QMPoly unphi(const QMPoly& f) {
  if (f.kind() == VarKind::holo && !f.is_zero())
    throw std::invalid_argument("unphi: input is not starred");
  return QMPoly::from_terms(f.weight(), VarKind::holo, {f.terms().begin(), f.terms().end()});
}

BigRational evaluate(const QMPoly& f, const std::array<BigRational, 3>& point) {
  if (f.kind() == VarKind::holo && !f.is_pfree())
    throw std::invalid_argument(
        "evaluate: holomorphic polynomial containing P has no value at a point of the "
        "completed ring (apply phi first)");
  int max_a = 0, max_b = 0, max_c = 0;
  for (const auto& [m, c] : f.terms()) {
    max_a = std::max(max_a, m.a);
    max_b = std::max(max_b, m.b);
    max_c = std::max(max_c, m.c);
  }
  auto powers = [](const BigRational& base, int up) {
    std::vector<BigRational> ps{BigRational(1)};
    for (int i = 1; i <= up; ++i) ps.push_back(ps.back() * base);
    return ps;
  };
  std::vector<BigRational> pa = powers(point[0], max_a);
  std::vector<BigRational> pb = powers(point[1], max_b);
  std::vector<BigRational> pc = powers(point[2], max_c);
  BigRational acc(0);
  for (const auto& [m, c] : f.terms()) acc += c * pa[m.a] * pb[m.b] * pc[m.c];
  return acc;
}

}  // namespace qmlab
