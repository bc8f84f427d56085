#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "fieldcensus/errors.hpp"
#include "fieldcensus/exactmath/algebra.hpp"
#include "fieldcensus/exactmath/roots.hpp"
#include "fieldcensus/galois/galois.hpp"
#include "fieldcensus/orders.hpp"

namespace fieldcensus {

/// Version of the tie-break rules below; part of the record format.
inline constexpr int kCanonVersion = 1;

struct CanonicalForm {
  IntPoly poly;
  long double t2 = 0;
};

/// Z-basis of O_K with the Gram matrix of the T2 form.
struct BasisLattice {
  Order order;
  std::vector<std::vector<long double>> gram;
};

namespace canon_detail {

using Float50 = boost::multiprecision::cpp_bin_float_50;

template <class R>
using Cplx = std::complex<R>;

template <class R>
R from_big(const BigInt& v) {
  if constexpr (std::is_same_v<R, long double>) {
    return to_long_double(v);
  } else {
    return R(v.get_str());
  }
}

/// Roots ordered real first (ascending), then conjugate pairs (upper first).
inline std::vector<Cplx<long double>> roots_ld(const IntPoly& f) {
  auto z = approximate_roots(f);
  const int n = f.degree();
  // accept only when every root is a clean Newton fixed point
  bool ok = static_cast<int>(z.size()) == n;
  for (auto& r : z) {
    Cplx<long double> p = 0;
    long double mag = 0;
    for (int k = n; k >= 0; --k) {
      p = p * r + to_long_double(f[k]);
      mag = mag * std::abs(r) + fabsl(to_long_double(f[k]));
    }
    if (!(std::abs(p) <= 1e-12L * mag)) ok = false;
  }
  if (!ok) {
    z.clear();
    for (auto& d : complex_roots(f, 96)) z.push_back(d.center());
    return z;
  }
  const long double tiny = 1e-12L;
  std::vector<Cplx<long double>> reals, uppers;
  for (auto& r : z) {
    long double scale = 1 + std::abs(r);
    if (fabsl(r.imag()) <= tiny * scale) reals.emplace_back(r.real(), 0);
    else if (r.imag() > 0) uppers.push_back(r);
  }
  if (reals.size() + 2 * uppers.size() != z.size()) {
    z.clear();
    for (auto& d : complex_roots(f, 96)) z.push_back(d.center());
    return z;
  }
  std::sort(reals.begin(), reals.end(), [](auto& a, auto& b) { return a.real() < b.real(); });
  std::sort(uppers.begin(), uppers.end(),
            [](auto& a, auto& b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); });
  std::vector<Cplx<long double>> out = reals;
  for (auto& u : uppers) {
    out.push_back(u);
    out.push_back(std::conj(u));
  }
  return out;
}

inline std::vector<Cplx<Float50>> roots_50(const IntPoly& f) {
  std::vector<Cplx<Float50>> out;
  for (auto& d : complex_roots(f, 180)) out.emplace_back(Float50(d.re.to_string(55)), Float50(d.im.to_string(55)));
  return out;
}

/// Real Minkowski coordinates of the order basis: for each real root one
/// coordinate, for each complex pair sqrt(2) Re and sqrt(2) Im, so that
/// |v|^2 = T2. Only the first root of every conjugate pair is used.
template <class R>
std::vector<std::vector<R>> embed_basis(const Order& o, const std::vector<Cplx<R>>& roots) {
  const int n = o.degree();
  std::vector<std::vector<R>> v(n, std::vector<R>(n));
  const R d = from_big<R>(o.denom);
  using std::sqrt;
  const R s2 = sqrt(R(2));
  for (int k = 0; k < n; ++k) {
    std::vector<R> coef(n);
    for (int j = 0; j < n; ++j) coef[j] = from_big<R>(o.basis[k][j]) / d;
    int col = 0;
    for (int i = 0; i < n; ++i) {
      const auto& z = roots[i];
      if (z.imag() < 0) continue;
      Cplx<R> acc(0);
      for (int j = n - 1; j >= 0; --j) acc = acc * z + coef[j];
      if (z.imag() == 0) {
        v[k][col++] = acc.real();
      } else {
        v[k][col++] = s2 * acc.real();
        v[k][col++] = s2 * acc.imag();
      }
    }
  }
  return v;
}

template <class R>
R dot(const std::vector<R>& a, const std::vector<R>& b) {
  R s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// LLL (delta = 0.99) on the rows of v; U tracks the integer transformation.
template <class R>
void lll(std::vector<std::vector<R>>& v, IntMatrix& U) {
  const int n = static_cast<int>(v.size());
  const R delta = R(99) / R(100);
  std::vector<std::vector<R>> mu(n, std::vector<R>(n));
  std::vector<R> B(n);
  auto gso = [&] {
    std::vector<std::vector<R>> bs = v;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) {
        mu[i][j] = dot(v[i], bs[j]) / B[j];
        for (std::size_t c = 0; c < bs[i].size(); ++c) bs[i][c] -= mu[i][j] * bs[j][c];
      }
      B[i] = dot(bs[i], bs[i]);
    }
  };
  gso();
  int k = 1, guard = 0;
  while (k < n) {
    if (++guard > 100000) throw PrecisionExhausted("LLL did not terminate");
    for (int j = k - 1; j >= 0; --j) {
      using std::round;
      const R q = round(mu[k][j]);
      if (q == 0) continue;
      const BigInt qi = big_from_i64(static_cast<long long>(q));
      for (std::size_t c = 0; c < v[k].size(); ++c) v[k][c] -= q * v[j][c];
      for (int c = 0; c < n; ++c) U[k][c] -= qi * U[j][c];
      gso();
    }
    if (B[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
      std::swap(v[k], v[k - 1]);
      std::swap(U[k], U[k - 1]);
      gso();
      k = std::max(k - 1, 1);
    } else {
      ++k;
    }
  }
}

/// Integer vectors x with x^T G x <= bound (up to sign: the first nonzero
/// coordinate from the top is positive), by Fincke-Pohst.
template <class R>
std::vector<std::vector<long>> short_vectors(const std::vector<std::vector<R>>& G, R bound, std::size_t cap) {
  const int n = static_cast<int>(G.size());
  // q[i][i] > 0, q[i][j] for j > i (Cohen's Cholesky form)
  std::vector<std::vector<R>> q = G;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      q[j][i] = q[i][j];
      q[i][j] = q[i][j] / q[i][i];
    }
    for (int k = i + 1; k < n; ++k)
      for (int l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
  }
  using std::ceil;
  using std::floor;
  using std::sqrt;
  std::vector<std::vector<long>> out;
  std::vector<long> x(n, 0);
  std::function<void(int, R, bool)> rec = [&](int i, R rest, bool top_zero) {
    R c = 0;
    for (int j = i + 1; j < n; ++j) c -= q[i][j] * R(x[j]);
    const R w = sqrt(std::max(rest, R(0)) / q[i][i]);
    long lo = static_cast<long>(ceil(c - w - R(1e-9)));
    long hi = static_cast<long>(floor(c + w + R(1e-9)));
    if (top_zero) lo = std::max(lo, 0L);
    for (long t = lo; t <= hi; ++t) {
      const R diff = R(t) - c;
      const R used = q[i][i] * diff * diff;
      if (used > rest * (1 + R(1e-12)) + R(1e-12)) continue;
      x[i] = t;
      const bool still_zero = top_zero && t == 0;
      if (i == 0) {
        if (!still_zero) out.push_back(x);
        if (out.size() > cap) throw PrecisionExhausted("short vector enumeration exceeded its cap");
      } else {
        rec(i - 1, rest - used, still_zero);
      }
    }
    x[i] = 0;
  };
  rec(n - 1, bound, true);
  return out;
}

/// Power-basis numerator of sum_k x_k (row_k of M) where M = U * basis.
inline std::vector<BigInt> combine(const IntMatrix& rows, const std::vector<long>& x) {
  const int n = static_cast<int>(rows.size());
  std::vector<BigInt> v(n);
  for (int k = 0; k < n; ++k) {
    if (x[k] == 0) continue;
    for (int j = 0; j < n; ++j) v[j] += x[k] * rows[k][j];
  }
  return v;
}

/// Ordering key of the tie-break: absolute coefficients (a_{n-1} .. a_0), then
/// a preference for a_{n-1} >= 0, then the signed coefficients.
inline bool canon_less(const IntPoly& a, const IntPoly& b) {
  const int n = a.degree();
  for (int k = n - 1; k >= 0; --k) {
    int c = cmp(abs_big(a.coeff(k)), abs_big(b.coeff(k)));
    if (c != 0) return c < 0;
  }
  const bool na = sgn(a.coeff(n - 1)) < 0, nb = sgn(b.coeff(n - 1)) < 0;
  if (na != nb) return !na;
  for (int k = n - 1; k >= 0; --k) {
    int c = cmp(a.coeff(k), b.coeff(k));
    if (c != 0) return c < 0;
  }
  return false;
}

template <class R>
CanonicalForm canonical_with(const IntPoly& f, const Order& ok, const std::vector<Cplx<R>>& roots, const BigInt& dk) {
  const int n = f.degree();
  std::vector<std::vector<R>> v = embed_basis<R>(ok, roots);
  IntMatrix U(n, std::vector<BigInt>(n));
  for (int i = 0; i < n; ++i) U[i][i] = 1;
  lll<R>(v, U);

  // reduced basis over the power basis (numerators over ok.denom)
  IntMatrix rows(n, std::vector<BigInt>(n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (sgn(U[i][k]) == 0) continue;
      for (int j = 0; j < n; ++j) rows[i][j] += U[i][k] * ok.basis[k][j];
    }
  std::vector<std::vector<R>> G(n, std::vector<R>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G[i][j] = dot(v[i], v[j]);

  // the Gram determinant must reproduce |d_K|; otherwise precision was lost
  {
    std::vector<std::vector<R>> a = G;
    R det = 1;
    for (int i = 0; i < n; ++i) {
      det *= a[i][i];
      for (int r = i + 1; r < n; ++r) {
        R m = a[r][i] / a[i][i];
        for (int c = i; c < n; ++c) a[r][c] -= m * a[i][c];
      }
    }
    using std::abs;
    const R target = from_big<R>(abs_big(dk));
    if (!(abs(det - target) <= R(1e-6) * target)) throw PrecisionExhausted("T2 Gram determinant mismatch");
  }

  auto primitive_poly = [&](const std::vector<BigInt>& num, IntPoly& out) {
    out = charpoly_element(f, num, ok.denom);
    return gcd(out, out.derivative()).degree() == 0;
  };

  // selection radius from the reduced basis (or theta + basis vectors)
  R radius = -1;
  for (int i = 0; i < n; ++i) {
    IntPoly g;
    if (primitive_poly(rows[i], g) && (radius < 0 || G[i][i] < radius)) radius = G[i][i];
  }
  if (radius < 0) {
    // T2 evaluated from the roots directly
    auto t2_of = [&](const std::vector<BigInt>& num) {
      R s = 0;
      const R d = from_big<R>(ok.denom);
      for (const auto& z : roots) {
        Cplx<R> acc(0);
        for (int j = n - 1; j >= 0; --j) acc = acc * z + from_big<R>(num[j]) / d;
        s += std::norm(acc);
      }
      return s;
    };
    std::vector<BigInt> theta(n);
    theta[1] = ok.denom;
    radius = t2_of(theta);
    for (int i = 0; i < n; ++i) {
      std::vector<BigInt> num = rows[i];
      num[1] += ok.denom;
      IntPoly g;
      if (primitive_poly(num, g)) radius = std::min(radius, t2_of(num));
    }
  }

  auto vecs = short_vectors<R>(G, radius * (1 + R(1e-9)), 2000000);
  std::vector<std::pair<R, std::size_t>> order;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    R t = 0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) t += R(vecs[i][a]) * G[a][b] * R(vecs[i][b]);
    order.emplace_back(t, i);
  }
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  const R tol = R(1e-9);
  std::size_t start = 0;
  while (start < order.size()) {
    const R t0 = order[start].first;
    std::size_t end = start;
    while (end < order.size() && order[end].first <= t0 * (1 + tol)) ++end;
    std::vector<IntPoly> tied;
    for (std::size_t i = start; i < end; ++i) {
      IntPoly g;
      if (primitive_poly(combine(rows, vecs[order[i].second]), g)) {
        tied.push_back(g);
        tied.push_back(g.negate_variable());
      }
    }
    if (!tied.empty()) {
      CanonicalForm out;
      out.poly = *std::min_element(tied.begin(), tied.end(), canon_less);
      out.t2 = static_cast<long double>(t0);
      return out;
    }
    start = end;
  }
  throw PrecisionExhausted("no primitive element found below the selection radius");
}

}  // namespace canon_detail

/// Maximal order with the T2 Gram matrix of its Hermite basis.
inline BasisLattice integral_basis_lattice(const IntPoly& f, const FieldDisc& fd) {
  BasisLattice out;
  out.order = maximal_order(f, fd);
  auto v = canon_detail::embed_basis<long double>(out.order, canon_detail::roots_ld(f));
  const int n = f.degree();
  out.gram.assign(n, std::vector<long double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.gram[i][j] = canon_detail::dot(v[i], v[j]);
  return out;
}

/// Canonical defining polynomial: the characteristic polynomial of a primitive
/// integral element of minimal T2, with the tie-break of canon_less.
inline CanonicalForm canonical_polynomial(const IntPoly& f, const FieldDisc& fd) {
  const Order ok = maximal_order(f, fd);
  try {
    return canon_detail::canonical_with<long double>(f, ok, canon_detail::roots_ld(f), fd.dk);
  } catch (const PrecisionExhausted&) {
    return canon_detail::canonical_with<canon_detail::Float50>(f, ok, canon_detail::roots_50(f), fd.dk);
  }
}

inline CanonicalForm canonical_polynomial(const IntPoly& f) { return canonical_polynomial(f, field_discriminant(f)); }

/// Isomorphism test: discriminants, then splitting patterns at 20 primes, then canonical forms.
inline bool fields_isomorphic(const IntPoly& f, const IntPoly& g) {
  if (f.degree() != g.degree()) return false;
  const FieldDisc df = field_discriminant(f), dg = field_discriminant(g);
  if (df.dk != dg.dk) return false;
  int compared = 0;
  for (std::uint32_t p : small_primes()) {
    if (compared >= 20) break;
    auto a = factor_degrees_squarefree(f, p);
    auto b = factor_degrees_squarefree(g, p);
    if (a.empty() || b.empty()) continue;
    if (a != b) return false;
    ++compared;
  }
  return canonical_polynomial(f, df).poly == canonical_polynomial(g, dg).poly;
}

}  // namespace fieldcensus
