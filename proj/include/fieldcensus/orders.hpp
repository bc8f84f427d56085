#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "fieldcensus/errors.hpp"
#include "fieldcensus/exactmath/factor_integer.hpp"
#include "fieldcensus/exactmath/resultant.hpp"
#include "fieldcensus/exactmath/zp_poly.hpp"

namespace fieldcensus {

using IntMatrix = std::vector<std::vector<BigInt>>;

/// Lower-triangular Hermite normal form of the lattice spanned by the given
/// rows (full rank n assumed): row k is supported on columns 0..k, the pivot
/// B[k][k] is positive and 0 <= B[i][j] < B[j][j] for j < i.
inline IntMatrix hnf_lower(IntMatrix rows, int n) {
  IntMatrix out(n, std::vector<BigInt>(n));
  for (int c = n - 1; c >= 0; --c) {
    // gather a single row with a nonzero entry in column c
    int piv = -1;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (sgn(rows[r][c]) == 0) continue;
      if (piv < 0) {
        piv = static_cast<int>(r);
        continue;
      }
      auto& a = rows[piv];
      auto& b = rows[r];
      BigInt g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a[c].get_mpz_t(), b[c].get_mpz_t());
      const BigInt u = divexact(a[c], g), v = divexact(b[c], g);
      for (int j = 0; j <= c; ++j) {
        BigInt na = s * a[j] + t * b[j];
        BigInt nb = u * b[j] - v * a[j];
        a[j] = std::move(na);
        b[j] = std::move(nb);
      }
    }
    if (piv < 0) throw Error("hnf_lower: lattice is not of full rank");
    std::vector<BigInt> row = rows[piv];
    rows.erase(rows.begin() + piv);
    if (sgn(row[c]) < 0)
      for (auto& v : row) v = -v;
    out[c] = std::move(row);
    // rows with zero column c that are now entirely zero can be dropped
    rows.erase(std::remove_if(rows.begin(), rows.end(),
                              [&](const std::vector<BigInt>& r) {
                                for (int j = 0; j <= c; ++j)
                                  if (sgn(r[j]) != 0) return false;
                                return true;
                              }),
               rows.end());
  }
  for (int i = 0; i < n; ++i)
    for (int j = i - 1; j >= 0; --j) {
      BigInt q;
      mpz_fdiv_q(q.get_mpz_t(), out[i][j].get_mpz_t(), out[j][j].get_mpz_t());
      if (sgn(q) == 0) continue;
      for (int k = 0; k <= j; ++k) out[i][k] -= q * out[j][k];
    }
  return out;
}

/// A full-rank Z-module in Q(theta): element k is (sum_j basis[k][j] theta^j) / denom.
/// The basis is kept in lower-triangular Hermite form.
struct Order {
  IntMatrix basis;
  BigInt denom = 1;

  int degree() const { return static_cast<int>(basis.size()); }

  static Order equation_order(int n) {
    Order o;
    o.basis.assign(n, std::vector<BigInt>(n));
    for (int i = 0; i < n; ++i) o.basis[i][i] = 1;
    return o;
  }

  /// [O : Z[theta]] = denom^n / det(basis).
  BigInt index() const {
    BigInt det = 1;
    for (int i = 0; i < degree(); ++i) det *= basis[i][i];
    return divexact(pow_big(denom, static_cast<unsigned long>(degree())), det);
  }

  friend bool operator==(const Order& a, const Order& b) { return a.denom == b.denom && a.basis == b.basis; }
};

namespace orders_detail {

/// Product of two power-basis numerators reduced mod the monic f.
inline std::vector<BigInt> mul_mod_f(const std::vector<BigInt>& a, const std::vector<BigInt>& b, const IntPoly& f) {
  const int n = f.degree();
  std::vector<BigInt> c(2 * n - 1);
  for (int i = 0; i < n; ++i) {
    if (sgn(a[i]) == 0) continue;
    for (int j = 0; j < n; ++j) c[i + j] += a[i] * b[j];
  }
  for (int k = 2 * n - 2; k >= n; --k) {
    if (sgn(c[k]) == 0) continue;
    for (int j = 0; j < n; ++j) c[k - n + j] -= c[k] * f[j];
    c[k] = 0;
  }
  c.resize(n);
  return c;
}

/// Coordinates of sum_j v[j] theta^j / scale in the order basis; the caller
/// guarantees the element lies in the order.
inline std::vector<BigInt> coordinates(const Order& o, std::vector<BigInt> v, const BigInt& scale) {
  // v / scale = sum_k c_k basis_k / denom, so sum_k c_k basis_k = v * denom / scale
  const int n = o.degree();
  for (auto& x : v) x = divexact(x * o.denom, scale);
  std::vector<BigInt> c(n);
  for (int k = n - 1; k >= 0; --k) {
    c[k] = divexact(v[k], o.basis[k][k]);
    if (sgn(c[k]) == 0) continue;
    for (int j = 0; j <= k; ++j) v[j] -= c[k] * o.basis[k][j];
  }
  return c;
}

/// Structure constants: table[i][j] = coordinates of w_i * w_j.
inline std::vector<std::vector<std::vector<BigInt>>> multiplication_table(const Order& o, const IntPoly& f) {
  const int n = o.degree();
  std::vector<std::vector<std::vector<BigInt>>> t(n, std::vector<std::vector<BigInt>>(n));
  const BigInt d2 = o.denom * o.denom;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      t[i][j] = coordinates(o, mul_mod_f(o.basis[i], o.basis[j], f), d2);
      if (j != i) t[j][i] = t[i][j];
    }
  return t;
}

using ModVec = std::vector<std::uint64_t>;

/// Basis of {x : A x = 0} over F_p, A given by rows.
inline std::vector<ModVec> nullspace(const Fp& F, std::vector<ModVec> A, int cols) {
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < static_cast<int>(A.size()); ++c) {
    int sel = -1;
    for (int i = r; i < static_cast<int>(A.size()); ++i)
      if (A[i][c] != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(A[r], A[sel]);
    const std::uint64_t inv = F.inv(A[r][c]);
    for (auto& v : A[r]) v = F.mul(v, inv);
    for (int i = 0; i < static_cast<int>(A.size()); ++i) {
      if (i == r || A[i][c] == 0) continue;
      const std::uint64_t m = A[i][c];
      for (int j = 0; j < cols; ++j) A[i][j] = F.sub(A[i][j], F.mul(m, A[r][j]));
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<ModVec> out;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    ModVec x(cols, 0);
    x[free] = 1;
    for (int i = 0; i < static_cast<int>(pivot_col.size()); ++i) x[pivot_col[i]] = F.neg(A[i][free]);
    out.push_back(std::move(x));
  }
  return out;
}

/// Algebra O/pO given by the structure constants reduced mod p.
struct ResidueAlgebra {
  Fp F;
  int n;
  std::vector<std::vector<ModVec>> table;

  ModVec mul(const ModVec& a, const ModVec& b) const {
    ModVec c(n, 0);
    for (int i = 0; i < n; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < n; ++j) {
        if (b[j] == 0) continue;
        const std::uint64_t s = F.mul(a[i], b[j]);
        for (int k = 0; k < n; ++k) c[k] = F.add(c[k], F.mul(s, table[i][j][k]));
      }
    }
    return c;
  }

  ModVec power(ModVec a, std::uint64_t e) const {
    ModVec r(n, 0);
    r[0] = 1;  // the first basis element of an order in Hermite form is 1
    while (e) {
      if (e & 1) r = mul(r, a);
      e >>= 1;
      if (e) a = mul(a, a);
    }
    return r;
  }
};

/// Integer solve of sum_k c_k G_k = v for lower-triangular G.
inline std::vector<BigInt> solve_lower(const IntMatrix& G, std::vector<BigInt> v) {
  const int n = static_cast<int>(G.size());
  std::vector<BigInt> c(n);
  for (int k = n - 1; k >= 0; --k) {
    c[k] = divexact(v[k], G[k][k]);
    if (sgn(c[k]) == 0) continue;
    for (int j = 0; j <= k; ++j) v[j] -= c[k] * G[k][j];
  }
  return c;
}

/// One Round 2 step at p: returns the ring of multipliers of the p-radical
/// (equal to O exactly when O is p-maximal).
inline Order enlarge_once(const Order& o, const IntPoly& f, std::uint64_t p) {
  const int n = o.degree();
  const Fp F{p};
  const BigInt P = big_from_u64(p);
  auto table = multiplication_table(o, f);
  ResidueAlgebra alg{F, n, {}};
  alg.table.assign(n, std::vector<ModVec>(n, ModVec(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) alg.table[i][j][k] = mod_u64(table[i][j][k], p);

  // p-radical: kernel of x -> x^q with q = p^j >= n
  std::uint64_t q = p;
  while (q < static_cast<std::uint64_t>(n)) q *= p;
  std::vector<ModVec> frob(n);
  for (int i = 0; i < n; ++i) {
    ModVec e(n, 0);
    e[i] = 1;
    frob[i] = alg.power(e, q);
  }
  // left kernel of frob = nullspace of its transpose
  std::vector<ModVec> ft(n, ModVec(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ft[j][i] = frob[i][j];
  std::vector<ModVec> rad = nullspace(F, ft, n);

  IntMatrix gens;
  for (int i = 0; i < n; ++i) {
    std::vector<BigInt> v(n);
    v[i] = P;
    gens.push_back(v);
  }
  for (auto& k : rad) {
    std::vector<BigInt> v(n);
    for (int i = 0; i < n; ++i) v[i] = big_from_u64(k[i]);
    gens.push_back(v);
  }
  const IntMatrix I = hnf_lower(gens, n);  // radical in O-coordinates

  // products w_i * gamma_k in gamma-coordinates mod p
  auto mul_coords = [&](int i, const std::vector<BigInt>& y) {
    std::vector<BigInt> r(n);
    for (int j = 0; j < n; ++j) {
      if (sgn(y[j]) == 0) continue;
      for (int k = 0; k < n; ++k) r[k] += y[j] * table[i][j][k];
    }
    return r;
  };
  // equations: sum_i a_i * [w_i gamma_k]_l = 0 mod p for all (k, l)
  std::vector<ModVec> eqs(static_cast<std::size_t>(n) * n, ModVec(n, 0));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      std::vector<BigInt> c = solve_lower(I, mul_coords(i, I[k]));
      for (int l = 0; l < n; ++l) eqs[static_cast<std::size_t>(k) * n + l][i] = mod_u64(c[l], p);
    }
  std::vector<ModVec> mult = nullspace(F, eqs, n);

  // O' = (1/p)(pO + lifts), expressed over the power basis
  IntMatrix ugens;
  for (int i = 0; i < n; ++i) {
    std::vector<BigInt> v(n);
    v[i] = P;
    ugens.push_back(v);
  }
  for (auto& k : mult) {
    std::vector<BigInt> v(n);
    for (int i = 0; i < n; ++i) v[i] = big_from_u64(k[i]);
    ugens.push_back(v);
  }
  IntMatrix U = hnf_lower(ugens, n);
  IntMatrix pow_rows;
  for (int r = 0; r < n; ++r) {
    std::vector<BigInt> v(n);
    for (int k = 0; k < n; ++k) {
      if (sgn(U[r][k]) == 0) continue;
      for (int j = 0; j < n; ++j) v[j] += U[r][k] * o.basis[k][j];
    }
    pow_rows.push_back(std::move(v));
  }
  Order next;
  next.denom = o.denom * P;
  next.basis = hnf_lower(pow_rows, n);
  BigInt g = next.denom;
  for (auto& row : next.basis)
    for (auto& v : row) g = gcd_big(g, v);
  if (g != 1) {
    next.denom = divexact(next.denom, g);
    for (auto& row : next.basis)
      for (auto& v : row) v = divexact(v, g);
  }
  return next;
}

}  // namespace orders_detail

/// Dedekind criterion: true iff Z[x]/(f) is maximal at p.
inline bool dedekind_is_pmaximal(const IntPoly& f, std::uint64_t p) {
  const Fp F{p};
  ZpPoly fb = zp::reduce(f, p);
  ZpPoly g{1};
  for (auto& [part, mult] : zp::squarefree_decomposition(F, fb)) g = zp::mul(F, g, part);
  ZpPoly h = zp::quo(F, fb, g);
  auto lift = [](const ZpPoly& a) {
    std::vector<BigInt> c;
    for (auto v : a) c.push_back(big_from_u64(v));
    return IntPoly(std::move(c));
  };
  IntPoly diff = f - lift(g) * lift(h);
  const BigInt P = big_from_u64(p);
  std::vector<BigInt> c(diff.coeffs());
  for (auto& v : c) v = divexact(v, P);
  ZpPoly Fbar = zp::reduce(IntPoly(std::move(c)), p);
  ZpPoly d = zp::gcd(F, zp::gcd(F, Fbar, g), h);
  return zp::deg(d) == 0;
}

/// Enlarges o until it is p-maximal (Round 2).
inline Order round2_enlarge(const IntPoly& f, Order o, std::uint64_t p) {
  while (true) {
    Order next = orders_detail::enlarge_once(o, f, p);
    if (next == o) return o;
    o = std::move(next);
  }
}

struct LocalOrderResult {
  std::uint64_t p = 0;
  unsigned v_disc = 0;
  unsigned v_index = 0;
  unsigned v_dk = 0;
};

inline LocalOrderResult round2_local(const IntPoly& f, std::uint64_t p) {
  LocalOrderResult r;
  r.p = p;
  const BigInt P = big_from_u64(p);
  r.v_disc = valuation(abs_big(discriminant(f)), P);
  Order o = round2_enlarge(f, Order::equation_order(f.degree()), p);
  r.v_index = valuation(o.index(), P);
  r.v_dk = r.v_disc - 2 * r.v_index;
  return r;
}

struct FieldDisc {
  BigInt dk;
  bool certified = true;
  BigInt poly_disc;
  /// Primes p with p^2 | disc(f); the candidates for dividing the index.
  std::vector<std::uint64_t> index_primes;
};

/// d_K from a monic irreducible f. Without certification demanded, an
/// unsplit cofactor of disc(f) is assumed square-free and kept in d_K.
inline FieldDisc field_discriminant(const IntPoly& f, std::uint64_t effort = 1000000, bool require_certified = false) {
  FieldDisc out;
  out.poly_disc = discriminant(f);
  IntFactorization fac = factor_integer(out.poly_disc, effort);
  if (!fac.complete()) {
    if (require_certified)
      throw FactorizationIncomplete("disc(f) cofactor " + fac.cofactor->get_str() + " could not be split");
    out.certified = false;
  }
  BigInt index = 1;
  for (const auto& [p, e] : fac.primes) {
    if (e < 2) continue;
    if (!mpz_fits_ulong_p(p.get_mpz_t()) || p > BigInt("4611686018427387903"))
      throw FactorizationIncomplete("prime " + p.get_str() + " too large for local computation");
    const std::uint64_t pp = mpz_get_ui(p.get_mpz_t());
    out.index_primes.push_back(pp);
    if (dedekind_is_pmaximal(f, pp)) continue;
    Order o = round2_enlarge(f, Order::equation_order(f.degree()), pp);
    index *= o.index();
  }
  out.dk = divexact(out.poly_disc, index * index);
  return out;
}

/// Maximal order of Q[x]/(f), by Round 2 at every prime whose square divides disc(f).
inline Order maximal_order(const IntPoly& f, const FieldDisc& fd) {
  Order o = Order::equation_order(f.degree());
  for (std::uint64_t p : fd.index_primes)
    if (!dedekind_is_pmaximal(f, p)) o = round2_enlarge(f, std::move(o), p);
  return o;
}

inline Order maximal_order(const IntPoly& f) { return maximal_order(f, field_discriminant(f)); }

}  // namespace fieldcensus
