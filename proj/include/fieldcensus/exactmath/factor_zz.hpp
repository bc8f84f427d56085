#pragma once

#include <algorithm>
#include <iterator>
#include <set>
#include <utility>
#include <vector>

#include "fieldcensus/exactmath/intpoly.hpp"
#include "fieldcensus/exactmath/primes.hpp"
#include "fieldcensus/exactmath/zp_poly.hpp"

namespace fieldcensus {

namespace zz_detail {

inline IntPoly from_zp(const ZpPoly& a) {
  std::vector<BigInt> c;
  c.reserve(a.size());
  for (auto v : a) c.push_back(big_from_u64(v));
  return IntPoly(std::move(c));
}

inline IntPoly reduce_mod(const IntPoly& a, const BigInt& m) {
  std::vector<BigInt> c(a.coeffs());
  for (auto& v : c) v = mod_pos(v, m);
  return IntPoly(std::move(c));
}

inline IntPoly reduce_sym(const IntPoly& a, const BigInt& m) {
  std::vector<BigInt> c(a.coeffs());
  for (auto& v : c) v = mod_sym(v, m);
  return IntPoly(std::move(c));
}

/// Division by a monic b, everything reduced mod m.
inline std::pair<IntPoly, IntPoly> divmod_monic_mod(const IntPoly& a, const IntPoly& b, const BigInt& m) {
  auto [q, r] = divmod_monic(reduce_mod(a, m), b);
  return {reduce_mod(q, m), reduce_mod(r, m)};
}

/// One quadratic Hensel step: from f = g h, s g + t h = 1 (mod m) to the same mod m^2.
/// g and h are monic.
inline void hensel_step(const IntPoly& f, IntPoly& g, IntPoly& h, IntPoly& s, IntPoly& t, const BigInt& m) {
  const BigInt m2 = m * m;
  IntPoly e = reduce_mod(f - g * h, m2);
  auto [q, r] = divmod_monic_mod(s * e, h, m2);
  IntPoly g2 = reduce_mod(g + t * e + q * g, m2);
  IntPoly h2 = reduce_mod(h + r, m2);
  IntPoly b = reduce_mod(s * g2 + t * h2 - IntPoly{1}, m2);
  auto [c, d] = divmod_monic_mod(s * b, h2, m2);
  IntPoly s2 = reduce_mod(s - d, m2);
  IntPoly t2 = reduce_mod(t - t * b - c * g2, m2);
  g = std::move(g2);
  h = std::move(h2);
  s = std::move(s2);
  t = std::move(t2);
}

/// Lifts the monic factorization f = prod(parts) mod p to mod p^(2^steps).
inline void multifactor_lift(const IntPoly& f, const std::vector<ZpPoly>& parts, std::uint64_t p, int steps,
                             std::vector<IntPoly>& out) {
  const Fp F{p};
  const BigInt P = big_from_u64(p);
  if (parts.size() == 1) {
    BigInt M = P;
    for (int i = 0; i < steps; ++i) M *= M;
    out.push_back(reduce_mod(f, M));
    return;
  }
  const std::size_t half = parts.size() / 2;
  ZpPoly gp{1}, hp{1};
  for (std::size_t i = 0; i < half; ++i) gp = zp::mul(F, gp, parts[i]);
  for (std::size_t i = half; i < parts.size(); ++i) hp = zp::mul(F, hp, parts[i]);
  ZpPoly sp, tp;
  zp::xgcd(F, gp, hp, sp, tp);
  IntPoly g = from_zp(gp), h = from_zp(hp), s = from_zp(sp), t = from_zp(tp);
  BigInt m = P;
  for (int i = 0; i < steps; ++i) {
    hensel_step(f, g, h, s, t, m);
    m *= m;
  }
  std::vector<ZpPoly> left(parts.begin(), parts.begin() + static_cast<long>(half));
  std::vector<ZpPoly> right(parts.begin() + static_cast<long>(half), parts.end());
  multifactor_lift(g, left, p, steps, out);
  multifactor_lift(h, right, p, steps, out);
}

/// Degrees d achievable as sums of sub-multisets of the factor degrees.
inline std::set<int> subset_sums(const std::vector<int>& degs) {
  std::set<int> s{0};
  for (int d : degs) {
    std::set<int> next = s;
    for (int v : s) next.insert(v + d);
    s = std::move(next);
  }
  return s;
}

/// Squarefree monic f of degree >= 2. Returns the monic irreducible factors.
inline std::vector<IntPoly> factor_squarefree_monic(const IntPoly& f) {
  const int n = f.degree();
  if (n <= 1) return {f};
  // gather a few good primes; keep the one with fewest factors
  std::set<int> possible;
  for (int d = 0; d <= n; ++d) possible.insert(d);
  std::uint64_t best_p = 0;
  std::size_t best_count = 0;
  int good = 0;
  for (std::uint32_t p : small_primes()) {
    std::vector<int> degs = factor_degrees_squarefree(f, p);
    if (degs.empty()) continue;
    ++good;
    if (degs.size() == 1) return {f};
    std::set<int> sums = subset_sums(degs), inter;
    std::set_intersection(possible.begin(), possible.end(), sums.begin(), sums.end(),
                          std::inserter(inter, inter.begin()));
    possible = std::move(inter);
    if (possible.size() == 2) return {f};
    if (best_p == 0 || degs.size() < best_count) {
      best_p = p;
      best_count = degs.size();
    }
    if (good >= 7) break;
  }
  const std::uint64_t p = best_p;
  std::vector<ZpPoly> modp;
  for (auto& [q, m] : factor_mod_p_full(zp::reduce(f, p), p)) modp.push_back(q);

  // coefficient bound for any monic factor: 2^n * ||f||_2
  BigInt norm2 = 0;
  for (const auto& c : f.coeffs()) norm2 += c * c;
  BigInt bound = (isqrt(norm2) + 1) * pow_big(BigInt(2), static_cast<unsigned long>(n));
  BigInt M = big_from_u64(p);
  int steps = 0;
  while (M <= 2 * bound) {
    M *= M;
    ++steps;
  }
  std::vector<IntPoly> lifted;
  multifactor_lift(f, modp, p, steps, lifted);

  std::vector<IntPoly> result;
  IntPoly rest = f;
  std::vector<IntPoly> pool = lifted;
  for (std::size_t k = 1; 2 * k <= pool.size(); ++k) {
    bool found = true;
    while (found && 2 * k <= pool.size()) {
      found = false;
      const std::size_t r = pool.size();
      std::vector<std::size_t> idx(k);
      for (std::size_t i = 0; i < k; ++i) idx[i] = i;
      while (true) {
        int dsum = 0;
        for (auto i : idx) dsum += pool[i].degree();
        if (possible.count(dsum)) {
          BigInt c0 = 1;
          for (auto i : idx) c0 = mod_sym(c0 * pool[i].coeff(0), M);
          // constant term must divide that of the remaining cofactor
          const bool plausible = sgn(c0) == 0 ? sgn(rest.coeff(0)) == 0
                                              : mpz_divisible_p(rest.coeff(0).get_mpz_t(), c0.get_mpz_t()) != 0;
          IntPoly q;
          if (plausible) {
            IntPoly g{1};
            for (auto i : idx) g = reduce_mod(g * pool[i], M);
            g = reduce_sym(g, M);
            if (divides_exact(rest, g, &q)) {
              result.push_back(g);
              rest = q;
              std::vector<IntPoly> next;
              for (std::size_t i = 0, j = 0; i < r; ++i) {
                if (j < k && idx[j] == i) {
                  ++j;
                  continue;
                }
                next.push_back(pool[i]);
              }
              pool = std::move(next);
              found = true;
              break;
            }
          }
        }
        // next combination
        int pos = static_cast<int>(k) - 1;
        while (pos >= 0 && idx[pos] == r - k + static_cast<std::size_t>(pos)) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (std::size_t i = static_cast<std::size_t>(pos) + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
      }
    }
  }
  if (rest.degree() > 0) result.push_back(rest);
  return result;
}

}  // namespace zz_detail

/// Factorization of a monic f over Q: monic irreducible factors with multiplicity.
inline std::vector<std::pair<IntPoly, int>> factor_over_Q(const IntPoly& f) {
  std::vector<std::pair<IntPoly, int>> out;
  if (f.degree() <= 0) return out;
  // squarefree decomposition over Z (Yun); f monic so all parts are monic
  IntPoly df = f.derivative();
  IntPoly a = gcd(f, df);
  IntPoly b, c, d;
  divides_exact(f, a, &b);
  divides_exact(df, a, &c);
  d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    IntPoly g = gcd(b, d);
    IntPoly bn, cn;
    divides_exact(b, g, &bn);
    divides_exact(d, g, &cn);
    if (g.degree() > 0)
      for (auto& h : zz_detail::factor_squarefree_monic(g)) out.emplace_back(h, i);
    b = bn;
    c = cn;
    d = c - b.derivative();
    ++i;
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.first.degree() != y.first.degree()) return x.first.degree() < y.first.degree();
    return x.first.coeffs() < y.first.coeffs();
  });
  return out;
}

/// True iff the monic f is irreducible over Q.
inline bool is_irreducible_over_Q(const IntPoly& f) {
  const int n = f.degree();
  if (n <= 0) return false;
  if (n == 1) return true;
  if (sgn(f.coeff(0)) == 0) return false;
  IntPoly g = gcd(f, f.derivative());
  if (g.degree() > 0) return false;
  return zz_detail::factor_squarefree_monic(f).size() == 1;
}

}  // namespace fieldcensus
