#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "qmlab/arith.hpp"

namespace qmlab::linalg {

// Exact Gaussian elimination for M x = rhs with rows >= cols and full column
// rank expected. Returns nullopt when the system is inconsistent; throws when
// the rank is deficient (callers only build systems where multiplication by a
// nonzero element of a domain guarantees injectivity).
inline std::optional<std::vector<BigRational>> rational_solve(
    std::vector<std::vector<BigRational>> M, std::vector<BigRational> rhs) {
  const size_t rows = M.size();
  const size_t cols = rows == 0 ? 0 : M[0].size();
  if (rhs.size() != rows) throw std::logic_error("rational_solve: shape mismatch");
  size_t row = 0;
  std::vector<size_t> pivot_row(cols);
  for (size_t col = 0; col < cols; ++col) {
    size_t pr = row;
    while (pr < rows && M[pr][col] == 0) ++pr;
    if (pr == rows) throw std::logic_error("rational_solve: rank-deficient system");
    std::swap(M[pr], M[row]);
    std::swap(rhs[pr], rhs[row]);
    BigRational inv = 1 / M[row][col];
    for (size_t j = col; j < cols; ++j) M[row][j] *= inv;
    rhs[row] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == row || M[i][col] == 0) continue;
      BigRational f = M[i][col];
      for (size_t j = col; j < cols; ++j) M[i][j] -= f * M[row][j];
      rhs[i] -= f * rhs[row];
    }
    pivot_row[col] = row;
    ++row;
  }
  for (size_t i = row; i < rows; ++i)
    if (rhs[i] != 0) return std::nullopt;
  std::vector<BigRational> x(cols);
  for (size_t col = 0; col < cols; ++col) x[col] = rhs[pivot_row[col]];
  return x;
}

// Same over F_p with residues in [0, p).
inline std::optional<std::vector<BigInt>> modp_solve(std::vector<std::vector<BigInt>> M,
                                                     std::vector<BigInt> rhs, const BigInt& p) {
  const size_t rows = M.size();
  const size_t cols = rows == 0 ? 0 : M[0].size();
  if (rhs.size() != rows) throw std::logic_error("modp_solve: shape mismatch");
  auto mod = [&p](BigInt& x) { mpz_mod(x.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()); };
  size_t row = 0;
  std::vector<size_t> pivot_row(cols);
  for (size_t col = 0; col < cols; ++col) {
    size_t pr = row;
    while (pr < rows && M[pr][col] % p == 0) ++pr;
    if (pr == rows) throw std::logic_error("modp_solve: rank-deficient system");
    std::swap(M[pr], M[row]);
    std::swap(rhs[pr], rhs[row]);
    BigInt inv;
    if (mpz_invert(inv.get_mpz_t(), M[row][col].get_mpz_t(), p.get_mpz_t()) == 0)
      throw std::logic_error("modp_solve: non-invertible pivot");
    for (size_t j = col; j < cols; ++j) {
      M[row][j] *= inv;
      mod(M[row][j]);
    }
    rhs[row] *= inv;
    mod(rhs[row]);
    for (size_t i = 0; i < rows; ++i) {
      if (i == row) continue;
      BigInt f = M[i][col] % p;
      if (f == 0) continue;
      for (size_t j = col; j < cols; ++j) {
        M[i][j] -= f * M[row][j];
        mod(M[i][j]);
      }
      rhs[i] -= f * rhs[row];
      mod(rhs[i]);
    }
    pivot_row[col] = row;
    ++row;
  }
  for (size_t i = row; i < rows; ++i)
    if (rhs[i] % p != 0) return std::nullopt;
  std::vector<BigInt> x(cols);
  for (size_t col = 0; col < cols; ++col) x[col] = rhs[pivot_row[col]];
  return x;
}

}  // namespace qmlab::linalg
