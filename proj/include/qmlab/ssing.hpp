#pragma once

#include <string>
#include <vector>

#include "qmlab/arith.hpp"
#include "qmlab/qmpoly.hpp"

namespace qmlab {

// E_{p-1} = Delta^n Q^delta R^epsilon ftilde(j) with p - 1 = 12n + 4 delta
// + 6 epsilon, delta in {0,1,2}, epsilon in {0,1}, and ftilde of degree n.
// ftilde holds ascending coefficients in j; the decomposition is verified by
// exact multiply-back.
struct KZDecomposition {
  long p = 0;
  int n = 0;
  int delta = 0;
  int epsilon = 0;
  std::vector<BigRational> ftilde;
};

KZDecomposition kz_decompose(long p);

// Supersingular polynomial over F_p: monic, ascending coefficients in [0, p).
struct SSPoly {
  long p = 0;
  std::vector<long> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  long eval(long j) const;
  std::vector<long> roots() const;  // ascending j in [0, p) with value 0
  std::string to_string() const;    // e.g. "j^2 + 3*j + 12 (mod 13)"
};

// ss_p(j) = monic normalization of j^delta (j - 1728)^epsilon ftilde(j)
// mod p. Its roots in F_p are exactly the supersingular j-invariants there.
SSPoly ss_poly(long p);

// Supersingular j-invariants in F_p by naive point counting: for each j pick
// a curve with that j-invariant (y^2 = x^3 + ax + b with a = b for
// j not in {0, 1728}; (0,1) for j = 0; (1,0) for j = 1728) and test whether
// #E(F_p) == p + 1. Valid for primes 5 <= p <= 1000; ascending output.
std::vector<long> brute_force_supersingular(long p);

// Kernels; brute_force_supersingular dispatches between them.
std::vector<long> brute_force_supersingular_serial(long p);
std::vector<long> brute_force_supersingular_parallel(long p);

// j = 1728 Q^3 / (Q^3 - R^2); rejects Q^3 == R^2.
BigRational j_invariant(const BigRational& q, const BigRational& r);

}  // namespace qmlab
