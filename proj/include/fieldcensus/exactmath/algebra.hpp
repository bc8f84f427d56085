#pragma once

#include <vector>

#include "fieldcensus/errors.hpp"
#include "fieldcensus/exactmath/intpoly.hpp"

namespace fieldcensus {

/// Matrix of multiplication by sum_j v[j] x^j on the power basis of Q[x]/(f),
/// f monic; row i holds the coordinates of v * x^i.
inline std::vector<std::vector<BigInt>> multiplication_matrix(const IntPoly& f, const std::vector<BigInt>& v) {
  const int n = f.degree();
  std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n));
  std::vector<BigInt> cur(n);
  for (int j = 0; j < n && j < static_cast<int>(v.size()); ++j) cur[j] = v[j];
  for (int i = 0; i < n; ++i) {
    m[i] = cur;
    // cur *= x, reduced mod f
    BigInt top = cur[n - 1];
    for (int j = n - 1; j > 0; --j) cur[j] = cur[j - 1];
    cur[0] = 0;
    if (sgn(top) != 0)
      for (int j = 0; j < n; ++j) cur[j] -= top * f[j];
  }
  return m;
}

/// Characteristic polynomial det(x I - A) of an integer matrix (Faddeev-LeVerrier;
/// every division is exact).
inline IntPoly charpoly(const std::vector<std::vector<BigInt>>& A) {
  const int n = static_cast<int>(A.size());
  std::vector<BigInt> c(n + 1);
  c[n] = 1;
  std::vector<std::vector<BigInt>> M(n, std::vector<BigInt>(n));
  for (int k = 1; k <= n; ++k) {
    // M <- A M + c[n-k+1] I (with M_0 = 0)
    std::vector<std::vector<BigInt>> AM(n, std::vector<BigInt>(n));
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        if (sgn(A[i][l]) == 0) continue;
        for (int j = 0; j < n; ++j) AM[i][j] += A[i][l] * M[l][j];
      }
    for (int i = 0; i < n; ++i) AM[i][i] += c[n - k + 1];
    M = std::move(AM);
    BigInt tr = 0;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) tr += A[i][l] * M[l][i];
    c[n - k] = -divexact(tr, BigInt(k));
  }
  return IntPoly(std::move(c));
}

/// Characteristic polynomial of the element (sum_j v[j] x^j) / d of Q[x]/(f).
/// Throws when it does not have integer coefficients.
inline IntPoly charpoly_element(const IntPoly& f, const std::vector<BigInt>& v, const BigInt& d = 1) {
  const int n = f.degree();
  IntPoly chi = charpoly(multiplication_matrix(f, v));
  if (d == 1) return chi;
  // chi_{A/d}(x) = d^-n chi_A(d x)
  std::vector<BigInt> c(n + 1);
  for (int k = 0; k <= n; ++k) {
    const BigInt scale = pow_big(d, static_cast<unsigned long>(n - k));
    if (mpz_divisible_p(chi.coeff(k).get_mpz_t(), scale.get_mpz_t()) == 0)
      throw Error("charpoly_element: element is not integral");
    c[k] = divexact(chi.coeff(k), scale);
  }
  return IntPoly(std::move(c));
}

}  // namespace fieldcensus
