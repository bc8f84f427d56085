#pragma once

#include <utility>

#include "fieldcensus/exactmath/intpoly.hpp"

namespace fieldcensus {

/// Res(f, g) = lc(f)^deg(g) * prod g(alpha) over the roots alpha of f,
/// by the subresultant remainder sequence (exact, no fractions).
inline BigInt resultant(const IntPoly& f, const IntPoly& g) {
  if (f.is_zero() || g.is_zero()) return 0;
  IntPoly a = f, b = g;
  BigInt ca = a.content(), cb = b.content();
  a = a.exact_div_scalar(ca);
  b = b.exact_div_scalar(cb);
  BigInt t = pow_big(ca, static_cast<unsigned long>(b.degree())) *
             pow_big(cb, static_cast<unsigned long>(a.degree()));
  int s = 1;
  if (a.degree() < b.degree()) {
    std::swap(a, b);
    if (a.degree() % 2 == 1 && b.degree() % 2 == 1) s = -1;
  }
  if (b.degree() == 0) return s * t * pow_big(b.leading(), static_cast<unsigned long>(a.degree()));
  BigInt gg = 1, h = 1;
  while (true) {
    const int delta = a.degree() - b.degree();
    if (a.degree() % 2 == 1 && b.degree() % 2 == 1) s = -s;
    IntPoly r = pseudo_divmod(a, b).second;
    a = std::move(b);
    if (r.is_zero()) return 0;
    b = r.exact_div_scalar(gg * pow_big(h, static_cast<unsigned long>(delta)));
    gg = a.leading();
    // h <- h^(1-delta) * g^delta
    if (delta == 0) {
      // h unchanged
    } else {
      h = divexact(pow_big(gg, static_cast<unsigned long>(delta)),
                   pow_big(h, static_cast<unsigned long>(delta - 1)));
    }
    if (b.degree() <= 0) break;
  }
  const int da = a.degree();
  BigInt hh = divexact(pow_big(b.leading(), static_cast<unsigned long>(da)),
                       pow_big(h, static_cast<unsigned long>(da - 1)));
  return s * t * hh;
}

/// disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f).
inline BigInt discriminant(const IntPoly& f) {
  const int n = f.degree();
  if (n < 1) return 0;
  if (n == 1) return 1;
  BigInt r = divexact(resultant(f, f.derivative()), f.leading());
  if ((n * (n - 1) / 2) % 2 == 1) r = -r;
  return r;
}

}  // namespace fieldcensus
