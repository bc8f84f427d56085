#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "fieldcensus/exactmath/intpoly.hpp"

namespace fieldcensus {

/// Arithmetic in Z/pZ for a prime p < 2^63.
struct Fp {
  std::uint64_t p;

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= p ? s - p : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p - b; }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
  }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1 % p;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  std::uint64_t inv(std::uint64_t a) const { return pow(a, p - 2); }
};

/// Polynomial over F_p, coefficients low to high, no trailing zeros.
using ZpPoly = std::vector<std::uint64_t>;

namespace zp {

inline void trim(ZpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int deg(const ZpPoly& a) { return static_cast<int>(a.size()) - 1; }

inline ZpPoly reduce(const IntPoly& f, std::uint64_t p) {
  ZpPoly r(f.coeffs().size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = mod_u64(f.coeffs()[i], p);
  trim(r);
  return r;
}

inline ZpPoly add(const Fp& F, const ZpPoly& a, const ZpPoly& b) {
  ZpPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
  trim(r);
  return r;
}

inline ZpPoly sub(const Fp& F, const ZpPoly& a, const ZpPoly& b) {
  ZpPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.sub(r[i], b[i]);
  trim(r);
  return r;
}

inline ZpPoly mul(const Fp& F, const ZpPoly& a, const ZpPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZpPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}

inline ZpPoly scale(const Fp& F, const ZpPoly& a, std::uint64_t s) {
  ZpPoly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.mul(a[i], s);
  trim(r);
  return r;
}

inline ZpPoly make_monic(const Fp& F, const ZpPoly& a) {
  if (a.empty() || a.back() == 1) return a;
  return scale(F, a, F.inv(a.back()));
}

/// a = q * b + r with deg r < deg b; b nonzero.
inline std::pair<ZpPoly, ZpPoly> divmod(const Fp& F, const ZpPoly& a, const ZpPoly& b) {
  const int db = deg(b);
  if (deg(a) < db) return {{}, a};
  ZpPoly r = a;
  ZpPoly q(static_cast<std::size_t>(deg(a) - db) + 1, 0);
  const std::uint64_t ilc = F.inv(b.back());
  for (int k = deg(a); k >= db; --k) {
    if (r[k] == 0) continue;
    const std::uint64_t t = F.mul(r[k], ilc);
    q[k - db] = t;
    for (int j = 0; j <= db; ++j) r[k - db + j] = F.sub(r[k - db + j], F.mul(t, b[j]));
  }
  trim(r);
  trim(q);
  return {q, r};
}

inline ZpPoly mod(const Fp& F, const ZpPoly& a, const ZpPoly& b) { return divmod(F, a, b).second; }

inline ZpPoly quo(const Fp& F, const ZpPoly& a, const ZpPoly& b) { return divmod(F, a, b).first; }

inline ZpPoly mulmod(const Fp& F, const ZpPoly& a, const ZpPoly& b, const ZpPoly& m) {
  return mod(F, mul(F, a, b), m);
}

/// Monic gcd (zero when both inputs are zero).
inline ZpPoly gcd(const Fp& F, ZpPoly a, ZpPoly b) {
  while (!b.empty()) {
    ZpPoly r = mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(F, a);
}

/// Returns monic g = gcd(a, b) and s, t with s*a + t*b = g.
inline ZpPoly xgcd(const Fp& F, const ZpPoly& a, const ZpPoly& b, ZpPoly& s, ZpPoly& t) {
  ZpPoly r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
  while (!r1.empty()) {
    auto [q, r] = divmod(F, r0, r1);
    ZpPoly s2 = sub(F, s0, mul(F, q, s1));
    ZpPoly t2 = sub(F, t0, mul(F, q, t1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.empty()) {
    s = {};
    t = {};
    return {};
  }
  const std::uint64_t il = F.inv(r0.back());
  s = scale(F, s0, il);
  t = scale(F, t0, il);
  return scale(F, r0, il);
}

inline ZpPoly derivative(const Fp& F, const ZpPoly& a) {
  if (a.size() <= 1) return {};
  ZpPoly r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = F.mul(a[i], i % F.p);
  trim(r);
  return r;
}

/// base^e mod m.
inline ZpPoly powmod(const Fp& F, ZpPoly base, std::uint64_t e, const ZpPoly& m) {
  ZpPoly r = mod(F, ZpPoly{1}, m);
  base = mod(F, base, m);
  while (e) {
    if (e & 1) r = mulmod(F, r, base, m);
    e >>= 1;
    if (e) base = mulmod(F, base, base, m);
  }
  return r;
}

/// Square-free decomposition of a monic polynomial: pairs (g_i, i) with
/// f = prod g_i^i, each g_i squarefree and monic, pairwise coprime.
inline std::vector<std::pair<ZpPoly, int>> squarefree_decomposition(const Fp& F, const ZpPoly& f) {
  std::vector<std::pair<ZpPoly, int>> out;
  if (deg(f) <= 0) return out;
  auto pth_root = [&](const ZpPoly& a) {
    ZpPoly r;
    for (std::size_t i = 0; i < a.size(); i += F.p) r.push_back(a[i]);
    trim(r);
    return r;
  };
  const ZpPoly df = derivative(F, f);
  if (df.empty()) {
    for (auto& [g, m] : squarefree_decomposition(F, pth_root(f)))
      out.emplace_back(g, m * static_cast<int>(F.p));
    return out;
  }
  ZpPoly c = gcd(F, f, df);
  ZpPoly w = quo(F, f, c);
  int i = 1;
  while (deg(w) > 0) {
    ZpPoly y = gcd(F, w, c);
    ZpPoly z = quo(F, w, y);
    if (deg(z) > 0) out.emplace_back(make_monic(F, z), i);
    ++i;
    w = std::move(y);
    c = quo(F, c, w);
  }
  if (deg(c) > 0) {
    for (auto& [g, m] : squarefree_decomposition(F, pth_root(make_monic(F, c))))
      out.emplace_back(g, m * static_cast<int>(F.p));
  }
  return out;
}

/// Distinct-degree factorization of a squarefree monic polynomial:
/// pairs (product of all irreducible factors of degree d, d).
inline std::vector<std::pair<ZpPoly, int>> distinct_degree(const Fp& F, ZpPoly f) {
  std::vector<std::pair<ZpPoly, int>> out;
  const ZpPoly x{0, 1};
  ZpPoly h = mod(F, x, f);
  for (int d = 1; 2 * d <= deg(f); ++d) {
    h = powmod(F, h, F.p, f);
    ZpPoly g = gcd(F, sub(F, h, x), f);
    if (deg(g) > 0) {
      out.emplace_back(g, d);
      f = quo(F, f, g);
      h = mod(F, h, f);
    }
  }
  if (deg(f) > 0) out.emplace_back(f, deg(f));
  return out;
}

/// Equal-degree splitting (Cantor-Zassenhaus) of a product of irreducibles of degree d.
inline void equal_degree(const Fp& F, const ZpPoly& g, int d, std::mt19937_64& rng,
                         std::vector<ZpPoly>& out) {
  const int n = deg(g);
  if (n == d) {
    out.push_back(g);
    return;
  }
  std::uniform_int_distribution<std::uint64_t> coef(0, F.p - 1);
  while (true) {
    ZpPoly a(static_cast<std::size_t>(n));
    for (auto& v : a) v = coef(rng);
    trim(a);
    if (deg(a) <= 0) continue;
    ZpPoly b;
    if (F.p == 2) {
      // trace map a + a^2 + ... + a^(2^(d-1))
      ZpPoly c = a;
      b = a;
      for (int i = 1; i < d; ++i) {
        c = mulmod(F, c, c, g);
        b = add(F, b, c);
      }
    } else {
      // a^((p^d - 1)/2) = (a^(1 + p + ... + p^(d-1)))^((p-1)/2)
      ZpPoly c = a, acc = a;
      for (int i = 1; i < d; ++i) {
        c = powmod(F, c, F.p, g);
        acc = mulmod(F, acc, c, g);
      }
      b = sub(F, powmod(F, acc, (F.p - 1) / 2, g), ZpPoly{1});
    }
    ZpPoly h = gcd(F, b, g);
    if (deg(h) > 0 && deg(h) < n) {
      equal_degree(F, h, d, rng, out);
      equal_degree(F, quo(F, g, h), d, rng, out);
      return;
    }
  }
}

}  // namespace zp

/// Full factorization of a monic polynomial over F_p into monic irreducibles
/// with multiplicity. Deterministic: the splitting randomness is seeded from p.
inline std::vector<std::pair<ZpPoly, int>> factor_mod_p_full(const ZpPoly& f, std::uint64_t p) {
  const Fp F{p};
  std::vector<std::pair<ZpPoly, int>> out;
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ p);
  for (auto& [g, m] : zp::squarefree_decomposition(F, zp::make_monic(F, f))) {
    for (auto& [h, d] : zp::distinct_degree(F, g)) {
      std::vector<ZpPoly> parts;
      zp::equal_degree(F, h, d, rng, parts);
      for (auto& q : parts) out.emplace_back(std::move(q), m);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Multiset of (degree, multiplicity) of the irreducible factors of f mod p,
/// sorted. f must have a leading coefficient prime to p.
inline std::vector<std::pair<int, int>> factor_mod_p(const IntPoly& f, std::uint64_t p) {
  const Fp F{p};
  ZpPoly g = zp::make_monic(F, zp::reduce(f, p));
  std::vector<std::pair<int, int>> out;
  for (auto& [h, m] : zp::squarefree_decomposition(F, g))
    for (auto& [q, d] : zp::distinct_degree(F, h))
      for (int k = 0; k < zp::deg(q) / d; ++k) out.emplace_back(d, m);
  std::sort(out.begin(), out.end());
  return out;
}

/// Degrees of the irreducible factors of f mod p when f mod p is squarefree
/// (the cycle type of Frobenius); empty when it is not.
inline std::vector<int> factor_degrees_squarefree(const IntPoly& f, std::uint64_t p) {
  const Fp F{p};
  ZpPoly g = zp::make_monic(F, zp::reduce(f, p));
  if (zp::deg(g) != f.degree()) return {};
  if (zp::deg(zp::gcd(F, g, zp::derivative(F, g))) > 0) return {};
  std::vector<int> out;
  for (auto& [q, d] : zp::distinct_degree(F, g))
    for (int k = 0; k < zp::deg(q) / d; ++k) out.push_back(d);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fieldcensus
