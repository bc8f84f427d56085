#include <gtest/gtest.h>

#include <random>

#include "fieldcensus/exactmath.hpp"
#include "fieldcensus/orders.hpp"

using namespace fieldcensus;

namespace {

/// Newton power sums s_0..s_m of the roots of monic f.
std::vector<BigInt> power_sums(const IntPoly& f, int m) {
  const int n = f.degree();
  std::vector<BigInt> s(m + 1);
  s[0] = n;
  for (int k = 1; k <= m; ++k) {
    BigInt acc = 0;
    for (int i = 1; i <= std::min(k, n); ++i) {
      const BigInt& e = f[n - i];  // coefficient of x^{n-i}
      acc -= e * (i == k ? BigInt(k) : s[k - i]);
    }
    s[k] = acc;
  }
  return s;
}

/// det(Tr(b_i b_j)) for the basis of an order: the discriminant of that order.
BigRational trace_form_det(const IntPoly& f, const Order& o) {
  const int n = f.degree();
  const auto s = power_sums(f, 2 * n);
  std::vector<std::vector<BigRational>> G(n, std::vector<BigRational>(n));
  const BigRational d2 = BigRational(o.denom * o.denom);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      BigInt t = 0;
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) t += o.basis[i][j] * o.basis[k][l] * s[j + l];
      G[i][k] = BigRational(t) / d2;
    }
  BigRational det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (piv < n && G[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(G[piv], G[c]);
      det = -det;
    }
    det *= G[c][c];
    for (int r = c + 1; r < n; ++r) {
      const BigRational q = G[r][c] / G[c][c];
      for (int k = c; k < n; ++k) G[r][k] -= q * G[c][k];
    }
  }
  return det;
}

IntPoly random_irreducible(std::mt19937_64& rng, int n, long h) {
  std::uniform_int_distribution<long> coef(-h, h);
  for (;;) {
    std::vector<BigInt> c(n + 1);
    for (int k = 0; k < n; ++k) c[k] = coef(rng);
    c[n] = 1;
    IntPoly f(c);
    if (discriminant(f) != 0 && is_irreducible_over_Q(f)) return f;
  }
}

}  // namespace

TEST(FieldDiscriminantTest, KnownFields) {
  EXPECT_EQ(field_discriminant(parse_poly("x^2-5")).dk, 5);
  EXPECT_EQ(field_discriminant(parse_poly("x^2+1")).dk, -4);
  EXPECT_EQ(field_discriminant(parse_poly("x^2-12")).dk, 12);
  EXPECT_EQ(field_discriminant(parse_poly("x^3-2")).dk, -108);
  EXPECT_EQ(field_discriminant(parse_poly("x^3-x^2-2x-8")).dk, -503);
  EXPECT_EQ(field_discriminant(parse_poly("x^4+1")).dk, 256);
  EXPECT_EQ(field_discriminant(parse_poly("x^4-2")).dk, -2048);
  EXPECT_EQ(field_discriminant(parse_poly("x^4+x^3+x^2+x+1")).dk, 125);
  EXPECT_EQ(field_discriminant(parse_poly("x^5-2")).dk, 50000);
  EXPECT_EQ(field_discriminant(parse_poly("x^6+x^5+x^4+x^3+x^2+x+1")).dk, -16807);
  EXPECT_EQ(field_discriminant(parse_poly("x^4-x^3-x^2+x+1")).dk, 117);
}

TEST(FieldDiscriminantTest, NonMonogenicCubicIndexTwo) {
  const IntPoly f = parse_poly("x^3-x^2-2x-8");
  const auto fd = field_discriminant(f);
  EXPECT_EQ(fd.poly_disc, -2012);
  EXPECT_EQ(maximal_order(f, fd).index(), 2);
  EXPECT_FALSE(dedekind_is_pmaximal(f, 2));
  EXPECT_TRUE(dedekind_is_pmaximal(f, 503));
}

TEST(DedekindTest, AgreesWithRoundTwo) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const IntPoly f = random_irreducible(rng, 2 + trial % 5, 12);
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL}) {
      if (mod_u64(discriminant(f), p * p) != 0) continue;
      EXPECT_EQ(dedekind_is_pmaximal(f, p), round2_local(f, p).v_index == 0) << f << " at " << p;
    }
  }
}

TEST(FieldDiscriminantTest, PropertyTraceFormOfMaximalOrder) {
  // second route: the trace-form determinant of the computed basis equals d_K
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 40; ++trial) {
    const IntPoly f = random_irreducible(rng, 2 + trial % 5, 20);
    const auto fd = field_discriminant(f);
    ASSERT_TRUE(fd.certified);
    const Order o = maximal_order(f, fd);
    EXPECT_EQ(trace_form_det(f, o), BigRational(fd.dk)) << f;
    const BigInt idx = o.index();
    EXPECT_EQ(fd.dk * idx * idx, fd.poly_disc) << f;
  }
}

TEST(FieldDiscriminantTest, PropertyInvariantUnderSubstitution) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    const IntPoly f = random_irreducible(rng, 3 + trial % 3, 8);
    const BigInt dk = field_discriminant(f).dk;
    EXPECT_EQ(field_discriminant(f.shift(trial - 12)).dk, dk);
    EXPECT_EQ(field_discriminant(f.negate_variable()).dk, dk);
    // x -> 2x scaled back to monic: same field, larger index
    std::vector<BigInt> c(f.coeffs());
    const int n = f.degree();
    for (int k = 0; k <= n; ++k) c[k] *= pow_big(2, static_cast<unsigned long>(n - k));
    EXPECT_EQ(field_discriminant(IntPoly(c)).dk, dk);
  }
}

TEST(FieldDiscriminantTest, StickelbergerSign) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 30; ++trial) {
    const IntPoly f = random_irreducible(rng, 2 + trial % 5, 15);
    const BigInt dk = field_discriminant(f).dk;
    const int r2 = (f.degree() - count_real_roots(f)) / 2;
    EXPECT_EQ(sgn(dk), r2 % 2 ? -1 : 1);
    EXPECT_TRUE(mod_pos(dk, 4) == 0 || mod_pos(dk, 4) == 1);
  }
}
