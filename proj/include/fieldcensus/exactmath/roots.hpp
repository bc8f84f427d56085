#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "fieldcensus/errors.hpp"
#include "fieldcensus/exactmath/intpoly.hpp"
#include "fieldcensus/exactmath/mpreal.hpp"

namespace fieldcensus {

/// Disk {z : |z - (re + i im)| <= radius} containing exactly one root.
struct RootDisk {
  MpReal re, im, radius;
  bool real = false;

  std::complex<long double> center() const { return {re.to_long_double(), im.to_long_double()}; }
  /// Width of the enclosing axis-parallel box.
  MpReal width() const { return radius + radius; }
};

namespace roots_detail {

template <class R>
struct Cx {
  R re, im;
};

template <class R>
Cx<R> operator+(const Cx<R>& a, const Cx<R>& b) { return {a.re + b.re, a.im + b.im}; }
template <class R>
Cx<R> operator-(const Cx<R>& a, const Cx<R>& b) { return {a.re - b.re, a.im - b.im}; }
template <class R>
Cx<R> operator*(const Cx<R>& a, const Cx<R>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class R>
Cx<R> operator/(const Cx<R>& a, const Cx<R>& b) {
  R d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
template <class R>
R norm2(const Cx<R>& a) { return a.re * a.re + a.im * a.im; }

using std::sqrt;

template <class R>
R modulus(const Cx<R>& a) { return sqrt(norm2(a)); }

/// Simultaneous Aberth iteration in place; returns true when the last sweep moved
/// every root by less than tol * (1 + |z|).
template <class R>
bool aberth(const std::vector<R>& coef, std::vector<Cx<R>>& z, const R& tol, int max_iter) {
  const int n = static_cast<int>(coef.size()) - 1;
  for (int it = 0; it < max_iter; ++it) {
    bool done = true;
    for (int i = 0; i < n; ++i) {
      Cx<R> p{coef[n], R(0)}, dp{R(0), R(0)};
      for (int k = n - 1; k >= 0; --k) {
        dp = dp * z[i] + p;
        p = p * z[i] + Cx<R>{coef[k], R(0)};
      }
      if (p.re == R(0) && p.im == R(0)) continue;
      Cx<R> ratio = p / dp;
      Cx<R> s{R(0), R(0)};
      for (int j = 0; j < n; ++j)
        if (j != i) s = s + Cx<R>{R(1), R(0)} / (z[i] - z[j]);
      Cx<R> corr = ratio / (Cx<R>{R(1), R(0)} - ratio * s);
      z[i] = z[i] - corr;
      if (modulus(corr) > tol * (R(1) + modulus(z[i]))) done = false;
    }
    if (done) return true;
  }
  return false;
}

inline std::vector<Cx<long double>> initial_points(const IntPoly& f) {
  const int n = f.degree();
  const long double lc = to_long_double(f.leading());
  long double rad = 0;
  for (int k = 1; k <= n; ++k) {
    long double a = fabsl(to_long_double(f[n - k]) / lc);
    if (a > 0) rad = std::max(rad, powl(a, 1.0L / k));
  }
  rad = std::max(rad, 1.0L);
  const long double centre = -to_long_double(f[n - 1]) / (lc * n);
  std::vector<Cx<long double>> z(n);
  for (int k = 0; k < n; ++k) {
    const long double ang = 0.4L + 2.0L * 3.14159265358979323846L * k / n;
    z[k] = {centre + rad * cosl(ang), rad * sinl(ang)};
  }
  return z;
}

/// Inclusion disks from approximations at the current precision; radius bounds
/// include evaluation rounding. Empty when the disks overlap.
inline std::vector<RootDisk> certify(const IntPoly& f, const std::vector<Cx<MpReal>>& z) {
  const int n = f.degree();
  const mpfr_prec_t prec = mp_default_precision();
  const MpReal u = MpReal::pow2(-static_cast<long>(prec) + 1);
  std::vector<MpReal> a(n + 1);
  for (int k = 0; k <= n; ++k) a[k] = MpReal(f[k]);
  const MpReal lc = abs(a[n]);
  std::vector<RootDisk> disks(n);
  for (int i = 0; i < n; ++i) {
    Cx<MpReal> p{a[n], MpReal(0)};
    const MpReal az = modulus(z[i]);
    MpReal mag = abs(a[n]);
    for (int k = n - 1; k >= 0; --k) {
      p = p * z[i] + Cx<MpReal>{a[k], MpReal(0)};
      mag = mag * az + abs(a[k]);
    }
    MpReal prod(1);
    for (int j = 0; j < n; ++j)
      if (j != i) prod = prod * modulus(z[i] - z[j]);
    const MpReal slack = MpReal(8 * (n + 2)) * u;
    MpReal num = modulus(p) + slack * mag;
    MpReal den = lc * prod * (MpReal(1) - slack);
    if (den.sign() <= 0) return {};
    disks[i].re = z[i].re;
    disks[i].im = z[i].im;
    disks[i].radius = MpReal(n) * num / den * (MpReal(1) + slack);
  }
  return disks;
}

inline bool disjoint(const RootDisk& a, const RootDisk& b) {
  const MpReal dx = a.re - b.re, dy = a.im - b.im;
  const MpReal r = a.radius + b.radius;
  return dx * dx + dy * dy > r * r * MpReal(1.0000001);
}

/// Snaps disks meeting the real axis onto it, mirrors the upper half-plane disks,
/// and orders the result; empty if the configuration is not consistent.
inline std::vector<RootDisk> symmetrize(std::vector<RootDisk> d, int n) {
  std::vector<RootDisk> reals, uppers;
  for (auto& x : d) {
    if (abs(x.im) <= x.radius) {
      x.radius = x.radius + abs(x.im);
      x.im = MpReal(0);
      x.real = true;
      reals.push_back(x);
    } else if (x.im.sign() > 0) {
      uppers.push_back(x);
    }
  }
  if (static_cast<int>(reals.size() + 2 * uppers.size()) != n) return {};
  std::sort(reals.begin(), reals.end(), [](const RootDisk& a, const RootDisk& b) { return a.re < b.re; });
  std::sort(uppers.begin(), uppers.end(), [](const RootDisk& a, const RootDisk& b) {
    return a.re < b.re || (a.re == b.re && a.im < b.im);
  });
  std::vector<RootDisk> out = reals;
  for (auto& x : uppers) {
    out.push_back(x);
    RootDisk c = x;
    c.im = -x.im;
    out.push_back(c);
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (!disjoint(out[i], out[j])) return {};
  return out;
}

}  // namespace roots_detail

/// Certified isolation of all complex roots of a squarefree f: one disk per root,
/// pairwise disjoint, each of width below 2^-precision_bits. Real roots come
/// first in increasing order, then conjugate pairs with the upper root first.
inline std::vector<RootDisk> complex_roots(const IntPoly& f, long precision_bits = 64) {
  using roots_detail::Cx;
  const int n = f.degree();
  if (n < 1) return {};
  if (gcd(f, f.derivative()).degree() > 0) throw NonSquarefree("complex_roots needs a squarefree input");
  std::vector<Cx<long double>> z0 = roots_detail::initial_points(f);
  {
    std::vector<long double> c(n + 1);
    for (int k = 0; k <= n; ++k) c[k] = to_long_double(f[k]);
    roots_detail::aberth(c, z0, 1e-18L, 500);
  }
  long bits = std::max<long>(128, precision_bits + 64);
  std::vector<Cx<MpReal>> z;
  while (bits <= 65536) {
    MpPrecisionScope scope(bits);
    if (z.empty()) {
      for (auto& w : z0) z.push_back({MpReal(w.re), MpReal(w.im)});
    } else {
      for (auto& w : z) w = {w.re + MpReal(0), w.im + MpReal(0)};
    }
    std::vector<MpReal> c(n + 1);
    for (int k = 0; k <= n; ++k) c[k] = MpReal(f[k]);
    roots_detail::aberth(c, z, MpReal::pow2(-bits + 8), 200);
    std::vector<RootDisk> disks = roots_detail::certify(f, z);
    if (!disks.empty()) {
      disks = roots_detail::symmetrize(std::move(disks), n);
      const MpReal limit = MpReal::pow2(-precision_bits);
      bool narrow = !disks.empty();
      for (const auto& d : disks)
        if (!(d.width() < limit)) narrow = false;
      if (narrow) return disks;
    }
    bits *= 2;
  }
  throw PrecisionExhausted("root isolation failed below 65536 bits for " + f.to_string());
}

/// Root approximations in long double (Aberth only, no certificate).
inline std::vector<std::complex<long double>> approximate_roots(const IntPoly& f) {
  const int n = f.degree();
  if (n < 1) return {};
  std::vector<roots_detail::Cx<long double>> z = roots_detail::initial_points(f);
  std::vector<long double> c(n + 1);
  for (int k = 0; k <= n; ++k) c[k] = to_long_double(f[k]);
  roots_detail::aberth(c, z, 1e-19L, 500);
  std::vector<std::complex<long double>> out;
  out.reserve(n);
  for (auto& w : z) out.emplace_back(w.re, w.im);
  return out;
}

}  // namespace fieldcensus
