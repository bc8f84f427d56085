#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "fieldcensus/heuristics/heuristics.hpp"
#include "support/group_oracle.hpp"

using namespace fieldcensus;
using group_oracle::abelian_groups_of_order;
using group_oracle::brute_aut_order;

namespace {

long double table2(int n) {
  static const std::map<int, long double> t = {{4, 0.07604314L}, {5, 0.08635053L}, {6, 0.01702530L}, {7, 0.01822185L},
                                               {8, 0.00246880L}, {9, 0.00257368L}, {10, 0.00026840L}, {11, 0.00027478L}};
  return t.at(n);
}

EulerProductResult bhargava(int n, const std::string& sig, EulerMethod method, int digits) {
  EulerProductJob job;
  job.degree = n;
  job.signatures = SignatureSet::preset(sig, n);
  job.method = method;
  job.digits = digits;
  return bhargava_constant(job);
}

}  // namespace

TEST(AbelianGroupTest, ParseAndPrint) {
  const auto g = AbelianGroupType::parse("12,2");
  EXPECT_EQ(g.to_string(), "4,2,3");
  EXPECT_EQ(g.order(), 24);
  EXPECT_EQ(g.p_rank(2), 2);
  EXPECT_EQ(AbelianGroupType::parse("1").to_string(), "1");
  EXPECT_TRUE(AbelianGroupType::parse("1").is_trivial());
  EXPECT_EQ(g.coprime_part({2}).to_string(), "3");
  EXPECT_THROW(AbelianGroupType::parse("3,,2"), ParseError);
  EXPECT_EQ(parse_group_label("4x2"), AbelianGroupType::parse("4,2"));
  EXPECT_EQ(parse_group_label("2^3"), AbelianGroupType::parse("2,2,2"));
  EXPECT_THROW(parse_group_label("a^b"), ParseError);
}

TEST(AbelianGroupTest, AutOrderKnownValues) {
  EXPECT_EQ(aut_order(AbelianGroupType::parse("3,3")), 48);
  EXPECT_EQ(aut_order(AbelianGroupType::parse("4,2")), 8);
  EXPECT_EQ(aut_order(AbelianGroupType::parse("6")), 2);
  EXPECT_EQ(aut_order(AbelianGroupType::parse("2,2,2")), 168);
  EXPECT_EQ(aut_order(AbelianGroupType::trivial()), 1);
}

TEST(AbelianGroupTest, PropertyAutOrderMatchesBruteForceUpTo64) {
  int groups = 0;
  for (int m = 1; m <= 64; ++m)
    for (const auto& g : abelian_groups_of_order(m)) {
      std::vector<std::uint64_t> orders(g.begin(), g.end());
      const auto h = AbelianGroupType::from_cyclic(orders);
      EXPECT_EQ(aut_order(h), big_from_u64(brute_aut_order(g))) << h.to_string();
      ++groups;
    }
  EXPECT_EQ(groups, 117);
}

TEST(LocalMassTest, SmallDegrees) {
  EXPECT_EQ(local_mass(2, 3), BigRational(4, 3));
  EXPECT_EQ(local_mass(3, 2), BigRational(7, 4));
  // q(k, n-k) for n = 5: 1, 1, 2, 2, 1
  EXPECT_EQ(local_mass_coefficients(5), (std::vector<std::uint64_t>{1, 1, 2, 2, 1}));
  EXPECT_EQ(partitions_at_most(10, 3), 14u);
  EXPECT_EQ(archimedean_mass(SignatureSet::preset("tc", 4)), BigRational(1, 8));
  EXPECT_EQ(archimedean_mass(SignatureSet::preset("tr", 4)), BigRational(1, 24));
}

TEST(ZetaTest, EulerMaclaurinAgreesWithMpfr) {
  MpPrecisionScope scope(200);
  for (long s : {2L, 3L, 5L, 17L, 40L}) {
    MpReal ref;
    mpfr_zeta_ui(ref.get(), static_cast<unsigned long>(s), MPFR_RNDN);
    const MpReal diff = zeta_em(s) - ref;
    EXPECT_LT(std::fabs(diff.to_double()), 1e-55) << s;
  }
}

TEST(ZetaTest, PrimeZetaAtTwo) {
  MpPrecisionScope scope(128);
  EXPECT_EQ(prime_zeta(2).to_string(25).substr(0, 22), "0.45224742004106549850");
  // second route: direct sum to 10^6 plus a tail below 1/(10^6 ln 10^6)
  long double direct = 0;
  for (std::uint32_t p : primes_up_to(1000000)) direct += 1.0L / (static_cast<long double>(p) * p);
  const long double gap = prime_zeta(2).to_long_double() - direct;
  EXPECT_GT(gap, 0);
  EXPECT_LT(gap, 2.51012L / (1e6L * logl(1e6L)));
}

TEST(BhargavaTest, DegreeTwoMass) {
  const auto r = bhargava(2, "tr", EulerMethod::PrimeZeta, 20);
  EXPECT_NEAR(r.value.to_double(), 3.0 / (2 * M_PI * M_PI), 1e-15);
}

TEST(BhargavaTest, PrintedConstantsAndBothRoutes) {
  for (int n = 4; n <= 11; ++n) {
    const auto pz = bhargava(n, "r1le1", EulerMethod::PrimeZeta, 12);
    EXPECT_NEAR(pz.value.to_double(), static_cast<double>(table2(n)), 5e-9) << n;
    const auto d = bhargava(n, "r1le1", EulerMethod::Direct, 0);
    EXPECT_LE(std::fabs(pz.value.to_double() - d.value.to_double()), static_cast<double>(d.error_bound + pz.error_bound)) << n;
    EXPECT_GT(d.error_bound, 0);
  }
}

TEST(BhargavaTest, OddDegreesExceedEvenOnes) {
  for (int m = 2; m <= 5; ++m)
    EXPECT_LT(bhargava(2 * m, "r1le1", EulerMethod::PrimeZeta, 15).value.to_double(),
              bhargava(2 * m + 1, "r1le1", EulerMethod::PrimeZeta, 15).value.to_double());
}

TEST(BhargavaTest, TotallyRealQuartics) {
  const double tc = bhargava(4, "tc", EulerMethod::PrimeZeta, 15).value.to_double();
  const double tr = bhargava(4, "tr", EulerMethod::PrimeZeta, 15).value.to_double();
  EXPECT_NEAR(tr, tc / 3, 1e-15);
  EXPECT_NEAR(tr, 0.0253477, 5e-8);
}

TEST(BhargavaTest, PrecisionLimits) {
  EXPECT_THROW(bhargava(5, "r1le1", EulerMethod::PrimeZeta, 150), PrecisionUnreachable);
  EXPECT_THROW(bhargava(5, "r1le1", EulerMethod::Direct, 20), PrecisionUnreachable);
  EXPECT_THROW(euler_product(12, EulerMethod::PrimeZeta, 10), UnsupportedDegree);
}

TEST(CohenMartinetTest, Constants) {
  EXPECT_NEAR(cm_constant(1, {2}).to_double(), 0.7545, 5e-5);
  EXPECT_NEAR(cm_probability(AbelianGroupType::parse("3"), 1, {2}).to_double(), 0.126, 5e-4);
  EXPECT_NEAR(cm_probability(AbelianGroupType::parse("3"), 1, {2}).to_double(), cm_constant(1, {2}).to_double() / 6, 1e-15);
  EXPECT_NEAR(cm_constant(2, {5}).to_double(), 0.7240198, 5e-8);
  EXPECT_NEAR(cm_probability(AbelianGroupType::parse("2"), 2, {5}).to_double(), 0.181, 5e-4);
  // printed as 0.984725... (truncated digits)
  EXPECT_EQ(std::floor(cm_constant(2, {2, 3}).to_double() * 1e6), 984725.0);
  EXPECT_THROW(cm_probability(AbelianGroupType::parse("4"), 1, {2}), BadSupport);
  EXPECT_THROW(cm_constant(0, {}), BadSupport);
}

TEST(CohenMartinetTest, ClosedFormAgreesWithGroupSum) {
  // sum_H 1/(|H|^e |Aut H|) = 1 / c(e, S)
  for (auto [e, S] : std::vector<std::pair<int, std::set<std::uint64_t>>>{{2, {5}}, {2, {2, 3}}, {2, {}}, {3, {2}}}) {
    const auto gs = cm_group_sum(e, S, 10000);
    const double closed = 1.0 / cm_constant(e, S).to_double();
    EXPECT_NEAR(gs.sum, closed, 1e-6) << "e=" << e;
    EXPECT_LE(closed - gs.sum, gs.tail_bound + 1e-15) << "e=" << e;
  }
  // e = 1 converges slowly; the truncation stays inside its certified tail
  const auto gs = cm_group_sum(1, {2}, 10000);
  const double closed = 1.0 / cm_constant(1, {2}).to_double();
  EXPECT_GE(closed - gs.sum, 0);
  EXPECT_LE(closed - gs.sum, gs.tail_bound);
}

TEST(MalleTest, NormalizationAndValues) {
  EXPECT_NEAR(static_cast<double>(malle_normalizer()), 0.786, 5e-4);
  // 2-groups of order up to 2^12
  const long double total = malle_weight_sum(12) * malle_normalizer();
  EXPECT_GT(total, 0.999L);
  EXPECT_LT(total, 1.0001L);
  EXPECT_NEAR(static_cast<double>(malle_two_part_probability(AbelianGroupType::parse("2"))), 0.172, 1e-3);
  EXPECT_NEAR(static_cast<double>(malle_five_prime_probability(AbelianGroupType::trivial())), 0.739, 5e-4);
  EXPECT_NEAR(static_cast<double>(malle_five_prime_probability(AbelianGroupType::parse("2"))), 0.162, 5e-4);
  EXPECT_THROW(malle_weight(AbelianGroupType::parse("3")), BadSupport);
  EXPECT_THROW(malle_five_prime_probability(AbelianGroupType::parse("5")), BadSupport);
}

TEST(ClassDistributionTest, SyntheticBlocks) {
  std::vector<std::optional<AbelianGroupType>> all_trivial(10, AbelianGroupType::trivial());
  const auto a = class_distribution(all_trivial, 10, {2});
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].at(AbelianGroupType::trivial()), 1.0L);

  std::vector<std::optional<AbelianGroupType>> two;
  for (int i = 0; i < 4; ++i) two.push_back(AbelianGroupType::parse("3"));
  for (int i = 0; i < 4; ++i) two.push_back(AbelianGroupType::parse("6"));  // odd part 3 as well
  for (int i = 0; i < 4; ++i) two.push_back(AbelianGroupType::parse("5"));
  const auto b = class_distribution(two, 4, {2});
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0], b[1]);
  EXPECT_NE(b[0], b[2]);
  EXPECT_EQ(b[2].at(AbelianGroupType::parse("5")), 1.0L);

  two.push_back(std::nullopt);
  EXPECT_THROW(class_distribution(two, 4, {2}), MissingClassData);
  EXPECT_THROW(class_distribution(two, 0, {2}), BadSupport);
}

TEST(ClassDistributionTest, Deviations) {
  const auto t = AbelianGroupType::trivial(), c3 = AbelianGroupType::parse("3");
  const auto dev = deviation_table({{t, 0.75L}}, {{t, 0.7545L}, {c3, 0.126L}});
  EXPECT_NEAR(static_cast<double>(dev.at(t)), 100 * 0.0045 / 0.7545, 1e-12);
  EXPECT_NEAR(static_cast<double>(dev.at(c3)), 100.0, 1e-12);
  EXPECT_NEAR(static_cast<double>(round_significant(0.0226256L, 3)), 0.0226, 1e-15);
}
