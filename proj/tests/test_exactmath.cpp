#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "fieldcensus/exactmath.hpp"

using namespace fieldcensus;

namespace {

// Hand-rolled generators: fixed seeds, small coefficients.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

  IntPoly monic(int n, long h) {
    std::vector<BigInt> c(n + 1);
    for (int k = 0; k < n; ++k) c[k] = uniform(-h, h);
    c[n] = 1;
    return IntPoly(c);
  }

  /// Monic and irreducible mod some prime below 100, hence irreducible over Q.
  IntPoly irreducible(int n, long h) {
    for (;;) {
      IntPoly f = monic(n, h);
      for (std::uint32_t p : primes_up_to(100)) {
        auto d = factor_degrees_squarefree(f, p);
        if (d.size() == 1 && d[0] == n) return f;
      }
    }
  }
};

std::complex<long double> eval_c(const IntPoly& f, std::complex<long double> z) {
  std::complex<long double> acc = 0;
  for (int k = f.degree(); k >= 0; --k) acc = acc * z + to_long_double(f[k]);
  return acc;
}

}  // namespace

TEST(IntPolyTest, ParsePrintRoundTrip) {
  const IntPoly f = parse_poly("x^5 - 3*x^2 + 7x - 11");
  EXPECT_EQ(f.degree(), 5);
  EXPECT_EQ(f[2], -3);
  EXPECT_EQ(parse_poly(f.to_string()), f);
  EXPECT_THROW(parse_poly(""), ParseError);
  EXPECT_THROW(parse_poly("x^"), ParseError);
}

TEST(IntPolyTest, ShiftAndNegate) {
  const IntPoly f = parse_poly("x^3 - 2");
  EXPECT_EQ(f.shift(1), parse_poly("x^3 + 3x^2 + 3x - 1"));
  EXPECT_EQ(f.negate_variable(), parse_poly("x^3 + 2"));
  EXPECT_EQ(f.shift(5).shift(-5), f);
}

TEST(IntPolyTest, DivisionAndGcd) {
  const IntPoly a = parse_poly("x^4 - 1"), b = parse_poly("x^2 + 3x + 2");
  EXPECT_EQ(gcd(a, b), parse_poly("x + 1"));
  IntPoly q;
  EXPECT_TRUE(divides_exact(a, parse_poly("x+1"), &q));
  EXPECT_FALSE(divides_exact(a, parse_poly("x+2")));
  EXPECT_EQ(q, parse_poly("x^3 - x^2 + x - 1"));
}

TEST(ResultantTest, KnownValues) {
  EXPECT_EQ(resultant(parse_poly("x^2+1"), parse_poly("x^2-2")), 9);
  EXPECT_EQ(discriminant(parse_poly("x^3-2")), -108);
  EXPECT_EQ(discriminant(parse_poly("x^2+x-1")), 5);
  EXPECT_EQ(discriminant(parse_poly("x^4+1")), 256);
  EXPECT_EQ(discriminant(parse_poly("x^5-x-1")), 2869);
  EXPECT_EQ(discriminant(parse_poly("x^3-x^2-2x-8")), -2012);
}

TEST(ResultantTest, PropertyProductFormula) {
  Gen g(11);
  for (int trial = 0; trial < 60; ++trial) {
    const IntPoly f = g.monic(static_cast<int>(g.uniform(1, 5)), 9);
    const IntPoly h = g.monic(static_cast<int>(g.uniform(1, 5)), 9);
    const BigInt r = resultant(f, h);
    EXPECT_EQ(discriminant(f * h), discriminant(f) * discriminant(h) * r * r);
  }
}

TEST(ResultantTest, PropertyAgreesWithRootProduct) {
  // second route: Res(f, g) = prod g(alpha) over the complex roots of f
  Gen g(12);
  for (int trial = 0; trial < 40; ++trial) {
    const IntPoly f = g.monic(static_cast<int>(g.uniform(2, 6)), 6);
    const IntPoly h = g.monic(static_cast<int>(g.uniform(1, 4)), 6);
    if (discriminant(f) == 0) continue;
    std::complex<long double> prod = 1;
    for (const auto& z : approximate_roots(f)) prod *= eval_c(h, z);
    const long double exact = to_long_double(resultant(f, h));
    EXPECT_NEAR(static_cast<double>(prod.real()), static_cast<double>(exact), 1e-6 * std::max(1.0L, fabsl(exact)));
  }
}

TEST(FactorIntegerTest, KnownFactorizations) {
  const auto f = factor_integer(BigInt("18446744073709551617"));
  ASSERT_TRUE(f.complete());
  ASSERT_EQ(f.primes.size(), 2u);
  EXPECT_EQ(f.primes[0].first, 274177);
  EXPECT_EQ(f.primes[1].first, BigInt("67280421310721"));
  const auto g = factor_integer(-2012);
  EXPECT_EQ(g.sign, -1);
  EXPECT_EQ(g.value(), -2012);
}

TEST(FactorIntegerTest, PropertyProductOfPrimes) {
  Gen g(13);
  const auto& ps = primes_up_to(200000);
  for (int trial = 0; trial < 40; ++trial) {
    BigInt n = 1;
    const int k = static_cast<int>(g.uniform(1, 5));
    for (int i = 0; i < k; ++i) n *= ps[g.uniform(0, static_cast<long>(ps.size()) - 1)];
    const auto f = factor_integer(n);
    ASSERT_TRUE(f.complete());
    EXPECT_EQ(f.value(), n);
    for (const auto& [p, e] : f.primes) EXPECT_TRUE(is_probable_prime(p));
  }
}

TEST(PrimesTest, Counts) {
  EXPECT_EQ(primes_up_to(100).size(), 25u);
  EXPECT_EQ(primes_up_to(1000000).size(), 78498u);
}

TEST(FactorModPTest, PropertyProductReconstructs) {
  Gen g(14);
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 101ULL, 1000003ULL}) {
    const Fp F{p};
    for (int trial = 0; trial < 15; ++trial) {
      const IntPoly f = g.monic(static_cast<int>(g.uniform(2, 9)), 50);
      ZpPoly prod{1};
      for (const auto& [part, mult] : factor_mod_p_full(zp::reduce(f, p), p))
        for (int i = 0; i < mult; ++i) prod = zp::mul(F, prod, part);
      EXPECT_EQ(prod, zp::make_monic(F, zp::reduce(f, p)));
    }
  }
}

TEST(FactorModPTest, SwinnertonDyerSplitsEverywhere) {
  const IntPoly f = parse_poly("x^4 - 10x^2 + 1");
  for (std::uint32_t p : primes_up_to(200)) {
    if (p == 2 || p == 3) continue;
    for (int d : factor_degrees_squarefree(f, p)) EXPECT_LE(d, 2);
  }
  EXPECT_TRUE(is_irreducible_over_Q(f));
}

TEST(FactorOverQTest, KnownFactorizations) {
  const auto a = factor_over_Q(parse_poly("x^4 + 4"));
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0].first * a[1].first, parse_poly("x^4 + 4"));
  EXPECT_EQ(factor_over_Q(parse_poly("x^8 - 1")).size(), 4u);
  const auto c = factor_over_Q(parse_poly("x^4 - 2x^2 + 1"));
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].second, 2);
  EXPECT_FALSE(is_irreducible_over_Q(parse_poly("x^6 + 108").shift(0) * parse_poly("x+1")));
  EXPECT_TRUE(is_irreducible_over_Q(parse_poly("x^6 + 108")));
}

TEST(FactorOverQTest, PropertyProductsOfIrreducibles) {
  Gen g(15);
  for (int trial = 0; trial < 25; ++trial) {
    const int k = static_cast<int>(g.uniform(2, 3));
    IntPoly f{1};
    std::vector<IntPoly> parts;
    for (int i = 0; i < k; ++i) {
      parts.push_back(g.irreducible(static_cast<int>(g.uniform(1, 4)), 7));
      f = f * parts.back();
    }
    const auto fac = factor_over_Q(f);
    IntPoly prod{1};
    int count = 0;
    for (const auto& [q, m] : fac) {
      for (int i = 0; i < m; ++i) prod = prod * q;
      count += m;
      EXPECT_TRUE(is_irreducible_over_Q(q));
    }
    EXPECT_EQ(prod, f);
    EXPECT_EQ(count, k);
  }
}

TEST(SturmTest, KnownCounts) {
  EXPECT_EQ(count_real_roots(parse_poly("x^5 - x - 1")), 1);
  EXPECT_EQ(count_real_roots(parse_poly("x^4 + 1")), 0);
  EXPECT_EQ(count_real_roots(parse_poly("x^4 - 10x^2 + 1")), 4);
}

TEST(SturmTest, PropertyConstructedSignatures) {
  Gen g(16);
  for (int trial = 0; trial < 50; ++trial) {
    IntPoly f{1};
    const int reals = static_cast<int>(g.uniform(0, 4));
    const int pairs = static_cast<int>(g.uniform(0, 2));
    std::set<long> used;
    while (static_cast<int>(used.size()) < reals) used.insert(g.uniform(-20, 20));
    for (long a : used) f = f * IntPoly{-a, 1};
    for (int i = 0; i < pairs; ++i) f = f * IntPoly{g.uniform(1, 30) + 100 * i, 0, 1};
    if (f.degree() == 0) continue;
    EXPECT_EQ(count_real_roots(f), reals) << f;
  }
}

TEST(RootsTest, CertifiedDisksMatchSturm) {
  Gen g(17);
  for (int trial = 0; trial < 25; ++trial) {
    const IntPoly f = g.irreducible(static_cast<int>(g.uniform(2, 7)), 9);
    const auto disks = complex_roots(f, 128);
    ASSERT_EQ(static_cast<int>(disks.size()), f.degree());
    int reals = 0;
    for (const auto& d : disks) {
      reals += d.real;
      EXPECT_LT(d.radius.to_double(), 1e-20);
      EXPECT_LT(std::abs(eval_c(f, d.center())), 1e-10L * std::max<long double>(1, std::pow(std::abs(d.center()), f.degree())));
    }
    EXPECT_EQ(reals, count_real_roots(f));
  }
}

TEST(RootsTest, SquareRootOfTwo) {
  const auto d = complex_roots(parse_poly("x^2 - 2"), 200);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_NEAR(std::fabs(d[0].re.to_double()), std::sqrt(2.0), 1e-15);
}

TEST(AlgebraTest, CharpolyOfElement) {
  // theta^2 with theta^3 = 2 is a root of x^3 - 4
  EXPECT_EQ(charpoly_element(parse_poly("x^3-2"), {0, 0, 1}), parse_poly("x^3 - 4"));
  // (1 + theta)/2 is a root of x^2 - x - 1
  EXPECT_EQ(charpoly_element(parse_poly("x^2-5"), {1, 1}, 2), parse_poly("x^2 - x - 1"));
}

TEST(MpRealTest, PrecisionScope) {
  MpPrecisionScope scope(256);
  MpReal a(2);
  MpReal r;
  mpfr_sqrt(r.get(), a.get(), MPFR_RNDN);
  EXPECT_EQ(r.precision(), 256);
  EXPECT_EQ(r.to_string(30).substr(0, 20), "1.414213562373095048");
}
