#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fieldcensus/errors.hpp"
#include "fieldcensus/exactmath/bigint.hpp"
#include "fieldcensus/exactmath/intpoly.hpp"
#include "fieldcensus/exactmath/mpreal.hpp"
#include "fieldcensus/exactmath/primes.hpp"
#include "fieldcensus/exactmath/roots.hpp"
#include "fieldcensus/heuristics/abelian_group.hpp"
#include "fieldcensus/hunter.hpp"

namespace fieldcensus {

/// Number of partitions of k into at most m parts.
inline std::uint64_t partitions_at_most(int k, int m) {
  if (k < 0 || m < 0) return 0;
  // q[j][i]: partitions of i into parts of size <= j (conjugate count)
  std::vector<std::uint64_t> q(k + 1, 0);
  q[0] = 1;
  for (int part = 1; part <= m; ++part)
    for (int i = part; i <= k; ++i) q[i] += q[i - part];
  return q[k];
}

/// Coefficients q(k, n-k), k = 0..n-1, of the local mass polynomial.
inline std::vector<std::uint64_t> local_mass_coefficients(int n) {
  std::vector<std::uint64_t> c;
  for (int k = 0; k < n; ++k) c.push_back(partitions_at_most(k, n - k));
  return c;
}

/// m_p(n) = sum_k q(k, n-k) p^{-k}.
inline BigRational local_mass(int n, std::uint64_t p) {
  BigRational m = 0, pk = 1;
  const auto c = local_mass_coefficients(n);
  for (std::size_t k = 0; k < c.size(); ++k) {
    m += BigRational(big_from_u64(c[k])) / pk;
    pk *= big_from_u64(p);
  }
  m.canonicalize();
  return m;
}

/// sum over the signatures of 1 / (2^r2 r1! r2!).
inline BigRational archimedean_mass(const SignatureSet& s) {
  BigRational m = 0;
  for (const auto& [r1, r2] : s.members) {
    BigInt d = pow_big(BigInt(2), r2);
    for (int i = 2; i <= r1; ++i) d *= i;
    for (int i = 2; i <= r2; ++i) d *= i;
    m += BigRational(1) / BigRational(d);
  }
  m.canonicalize();
  return m;
}

namespace heuristics_detail {

/// Bernoulli numbers B_0..B_m.
inline std::vector<BigRational> bernoulli(int m) {
  std::vector<BigRational> b(m + 1);
  b[0] = 1;
  for (int k = 1; k <= m; ++k) {
    BigRational s = 0;
    BigInt binom = 1;  // C(k+1, j)
    for (int j = 0; j < k; ++j) {
      s += BigRational(binom) * b[j];
      binom = binom * (k + 1 - j) / (j + 1);
    }
    b[k] = -s / BigRational(k + 1);
    b[k].canonicalize();
  }
  return b;
}

inline std::vector<int> mobius_table(int m) {
  std::vector<int> mu(m + 1, 1), is_comp(m + 1, 0);
  for (int p = 2; p <= m; ++p) {
    if (is_comp[p]) continue;
    for (int k = p; k <= m; k += p) {
      if (k > p) is_comp[k] = 1;
      mu[k] = -mu[k];
    }
    for (long k = static_cast<long>(p) * p; k <= m; k += static_cast<long>(p) * p) mu[k] = 0;
  }
  return mu;
}

/// ln((1 - x) m(x)) = sum_{j>=1} c_j x^j for the local mass polynomial m of degree n.
inline std::vector<BigRational> log_series(int n, int J) {
  const auto q = local_mass_coefficients(n);
  std::vector<BigRational> g(J + 1, BigRational(0));  // (1 - x) m(x)
  for (int k = 0; k <= n && k <= J; ++k) {
    BigRational v = k < n ? BigRational(big_from_u64(q[k])) : BigRational(0);
    if (k >= 1) v -= BigRational(big_from_u64(q[k - 1]));
    g[k] = v;
  }
  std::vector<BigRational> c(J + 1, BigRational(0));
  // j c_j = j g_j - sum_{i=1}^{j-1} i c_i g_{j-i}   (g_0 = 1)
  for (int j = 1; j <= J; ++j) {
    BigRational s = BigRational(j) * g[j];
    for (int i = std::max(1, j - n); i < j; ++i) s -= BigRational(i) * c[i] * g[j - i];
    c[j] = s / BigRational(j);
    c[j].canonicalize();
  }
  return c;
}

/// Smallest root modulus of (1 - x) m(x).
inline long double min_root_modulus(int n) {
  const auto q = local_mass_coefficients(n);
  std::vector<BigInt> g(n + 1);
  for (int k = 0; k <= n; ++k) {
    BigInt v = k < n ? big_from_u64(q[k]) : BigInt(0);
    if (k >= 1) v -= big_from_u64(q[k - 1]);
    g[k] = v;
  }
  long double rho = 1;
  for (const auto& z : approximate_roots(IntPoly(g))) rho = std::min(rho, std::abs(z));
  return rho * (1 - 1e-9L);
}

}  // namespace heuristics_detail

/// zeta(s) for an integer s >= 2 by Euler-Maclaurin summation at the current precision.
inline MpReal zeta_em(long s) {
  if (s < 2) throw BadSupport("zeta_em needs s >= 2");
  const long bits = mp_default_precision();
  const long N = std::max(16L, bits / 4);
  const int M = static_cast<int>(std::max(20L, bits / 4));
  static thread_local std::vector<BigRational> B;
  if (static_cast<int>(B.size()) < 2 * M + 1) B = heuristics_detail::bernoulli(2 * M);
  MpReal sum = 0;
  for (long k = N - 1; k >= 1; --k) sum = sum + pow(MpReal(k), MpReal(-s));
  const MpReal Nr(N);
  const MpReal Ns = pow(Nr, MpReal(-s));
  sum = sum + Nr * Ns / MpReal(s - 1) + Ns / MpReal(2);
  // sum_j B_{2j}/(2j)! s(s+1)...(s+2j-2) N^{-s-2j+1}
  MpReal rising = MpReal(s);  // s (s+1) ... (s+2j-2)
  MpReal fact = 2;            // (2j)!
  MpReal Npow = Ns / Nr;      // N^{-s-2j+1}
  const MpReal inv_N2 = MpReal(1) / (Nr * Nr);
  for (int j = 1; j <= M; ++j) {
    sum = sum + MpReal(B[2 * j]) / fact * rising * Npow;
    rising = rising * MpReal(s + 2 * j - 1) * MpReal(s + 2 * j);
    fact = fact * MpReal(2 * j + 1) * MpReal(2 * j + 2);
    Npow = Npow * inv_N2;
  }
  return sum;
}

/// Prime zeta P(s) = sum_p p^{-s} = sum_m mu(m)/m ln zeta(m s).
inline MpReal prime_zeta(long s) {
  if (s < 2) throw BadSupport("prime_zeta needs s >= 2");
  const long bits = mp_default_precision();
  const long mmax = (bits + 16) / s + 1;
  static thread_local std::vector<int> mu;
  if (static_cast<long>(mu.size()) <= mmax) mu = heuristics_detail::mobius_table(static_cast<int>(mmax + 1));
  MpReal sum = 0;
  for (long m = 1; m <= mmax; ++m) {
    if (mu[m] == 0) continue;
    const MpReal t = log(zeta_em(m * s)) / MpReal(m);
    sum = mu[m] > 0 ? sum + t : sum - t;
  }
  return sum;
}

enum class EulerMethod { Direct, PrimeZeta };

struct EulerProductJob {
  int degree = 0;
  SignatureSet signatures;
  int digits = 30;
  EulerMethod method = EulerMethod::PrimeZeta;
  std::uint64_t p_max = 1000000;
};

struct EulerProductResult {
  MpReal value;
  long double error_bound = 0;
  EulerMethod method = EulerMethod::PrimeZeta;
};

/// Euler product prod_p (1 - 1/p) m_p(n).
inline EulerProductResult euler_product(int n, EulerMethod method, int digits, std::uint64_t p_max = 1000000) {
  if (n < 2 || n > 11) throw UnsupportedDegree("Euler product for degree " + std::to_string(n));
  const long bits = static_cast<long>(std::ceil(digits * 3.3219281)) + 40;
  MpPrecisionScope scope(bits);
  const long double rho = heuristics_detail::min_root_modulus(n);
  EulerProductResult out;
  out.method = method;
  if (method == EulerMethod::PrimeZeta) {
    // primes below p0 explicitly, the rest through sum_j c_j (P(j) - sum_{p<p0} p^{-j})
    const std::uint32_t p0 = 100;
    const long double r = 101 * rho;  // 101 is the first prime above p0
    int J = 2;
    auto tail_at = [&](int j) { return n / static_cast<long double>(j) * (1 + 101.0L / j) * powl(r, -j) / (r - 1); };
    while (J < 200 && tail_at(J) > powl(10.0L, -digits - 5)) ++J;
    const long work = bits + static_cast<long>(J * 7);
    MpPrecisionScope inner(work);
    const auto c = heuristics_detail::log_series(n, J);
    const auto small = primes_up_to(p0);
    const auto q = local_mass_coefficients(n);
    MpReal lg = 0;
    for (std::uint32_t p : small) {
      const MpReal x = MpReal(1) / MpReal(static_cast<long>(p));
      MpReal m = 0;
      for (int k = n - 1; k >= 0; --k) m = m * x + MpReal(static_cast<long>(q[k]));
      lg = lg + log((MpReal(1) - x) * m);
    }
    for (int j = 2; j <= J; ++j) {
      if (sgn(c[j].get_num()) == 0) continue;
      MpReal pj = prime_zeta(j);
      for (std::uint32_t p : small) pj = pj - pow(MpReal(static_cast<long>(p)), MpReal(-j));
      lg = lg + MpReal(c[j]) * pj;
    }
    const long double tail = tail_at(J) + ldexpl(1.0L, -static_cast<int>(bits) + 8);
    out.value = exp(lg);
    out.error_bound = out.value.to_long_double() * expm1l(tail);
  } else {
    MpReal prod = 1;
    const auto q = local_mass_coefficients(n);
    for (std::uint32_t p : primes_up_to(static_cast<std::uint32_t>(p_max))) {
      const MpReal x = MpReal(1) / MpReal(static_cast<long>(p));
      MpReal m = 0;
      for (int k = n - 1; k >= 0; --k) m = m * x + MpReal(static_cast<long>(q[k]));
      prod = prod * (MpReal(1) - x) * m;
    }
    // sum_{p>P} p^{-2} <= 2.51012 / (P ln P) from pi(x) < 1.25506 x / ln x;
    // |c_j| <= n / (j rho^j) for j >= 3 and c_2 exactly
    const long double P = static_cast<long double>(p_max);
    const auto c = heuristics_detail::log_series(n, 2);
    const long double s2 = 2.51012L / (P * logl(P));
    const long double eps =
        s2 * (fabsl(c[2].get_d()) + (n / 3.0L) / (rho * rho * rho * P) / (1 - 1 / (rho * P)));
    out.value = prod;
    out.error_bound = prod.to_long_double() * expm1l(eps) + ldexpl(1.0L, -static_cast<int>(bits) + 24);
  }
  return out;
}

/// B = 1/2 * archimedean mass * Euler product.
inline EulerProductResult bhargava_constant(const EulerProductJob& job) {
  if (job.signatures.degree != job.degree) throw BadSupport("signature set does not match degree");
  if (job.method == EulerMethod::PrimeZeta && job.digits > 100)
    throw PrecisionUnreachable("prime-zeta series is limited to 100 digits");
  EulerProductResult r = euler_product(job.degree, job.method, job.digits, job.p_max);
  const long bits = static_cast<long>(std::ceil(job.digits * 3.3219281)) + 40;
  MpPrecisionScope scope(bits);
  const MpReal factor = MpReal(archimedean_mass(job.signatures)) / MpReal(2);
  r.value = r.value * factor;
  r.error_bound *= factor.to_long_double();
  if (r.error_bound > powl(10.0L, -job.digits))
    throw PrecisionUnreachable("certified error " + std::to_string(static_cast<double>(r.error_bound)) +
                               " exceeds 10^-" + std::to_string(job.digits));
  return r;
}

/// c(e, S) = prod_{p not in S} prod_{k >= e+1} (1 - p^{-k}).
inline MpReal cm_constant(int e, const std::set<std::uint64_t>& S) {
  if (e < 1) throw BadSupport("weight exponent must be positive");
  const long bits = mp_default_precision();
  MpReal lg = 0;
  for (long k = e + 1; k <= bits + 8; ++k) {
    lg = lg - log(zeta_em(k));
    for (std::uint64_t p : S) lg = lg - log(MpReal(1) - pow(MpReal(static_cast<long>(p)), MpReal(-k)));
  }
  return exp(lg);
}

inline void check_coprime(const AbelianGroupType& h, const std::set<std::uint64_t>& S) {
  for (const auto& [p, v] : h.parts)
    if (S.count(p)) throw BadSupport("group " + h.to_string() + " has order divisible by excluded prime " + std::to_string(p));
}

/// c(e, S) / (|H|^e |Aut H|).
inline MpReal cm_probability(const AbelianGroupType& h, int e, const std::set<std::uint64_t>& S) {
  check_coprime(h, S);
  const BigInt w = pow_big(h.order(), e) * aut_order(h);
  return cm_constant(e, S) / MpReal(w);
}

struct GroupSum {
  long double sum = 0;
  long double tail_bound = 0;
};

/// sum over groups H of order <= cutoff coprime to S of 1/(|H|^e |Aut H|).
/// The rest is bounded by cutoff^{-d} sum_H |H|^d / (|H|^e |Aut H|), where by
/// Hall's identity the full sum at exponent s = e - d is
/// prod_{k >= 1} zeta(s + k) prod_{p in S} (1 - p^{-s-k}); d is chosen on a grid.
inline GroupSum cm_group_sum(int e, const std::set<std::uint64_t>& S, std::uint64_t cutoff) {
  // weight of a p-power part: sum over partitions of a
  std::map<std::pair<std::uint64_t, int>, long double> wcache;
  auto pweight = [&](std::uint64_t p, int a) {
    auto key = std::make_pair(p, a);
    auto it = wcache.find(key);
    if (it != wcache.end()) return it->second;
    long double w = 0;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int rest, int mx) {
      if (rest == 0) {
        AbelianGroupType g;
        g.parts[p] = cur;
        const long double o = powl(static_cast<long double>(p), a);
        w += 1.0L / (powl(o, e) * aut_order(g).get_d());
        return;
      }
      for (int k = std::min(rest, mx); k >= 1; --k) {
        cur.push_back(k);
        rec(rest - k, k);
        cur.pop_back();
      }
    };
    rec(a, a);
    wcache[key] = w;
    return w;
  };
  GroupSum out;
  for (std::uint64_t m = 1; m <= cutoff; ++m) {
    std::uint64_t r = m;
    long double w = 1;
    bool coprime = true;
    for (std::uint64_t p = 2; p * p <= r; ++p) {
      int a = 0;
      while (r % p == 0) {
        r /= p;
        ++a;
      }
      if (a) {
        if (S.count(p)) coprime = false;
        w *= pweight(p, a);
      }
    }
    if (r > 1) {
      if (S.count(r)) coprime = false;
      w *= pweight(r, 1);
    }
    if (coprime) out.sum += w;
  }
  MpPrecisionScope scope(96);
  auto full_sum = [&](const MpReal& s) {
    MpReal total = 1;
    for (long k = 1; k <= 120; ++k) {
      MpReal z, arg = s + MpReal(k);
      mpfr_zeta(z.get(), arg.get(), MPFR_RNDU);
      total = total * z;
      for (std::uint64_t p : S) total = total * (MpReal(1) - pow(MpReal(static_cast<long>(p)), MpReal(0) - arg));
    }
    return total.to_long_double() * (1 + 1e-15L);
  };
  out.tail_bound = std::numeric_limits<long double>::infinity();
  for (int step = 1; step < 20; ++step) {
    const long double d = e * step / 20.0L;
    const long double b = powl(static_cast<long double>(cutoff), -d) * full_sum(MpReal(e - d));
    out.tail_bound = std::min(out.tail_bound, b);
  }
  return out;
}

/// Unnormalized weight 2^{(r^2-r)/2} prod_{i=3}^{r+2} (1 - 2^{-i}) / (|H|^2 |Aut H|).
inline long double malle_weight(const AbelianGroupType& h2) {
  for (const auto& [p, v] : h2.parts)
    if (p != 2) throw BadSupport("not a 2-group: " + h2.to_string());
  const int r = h2.p_rank(2);
  long double w = ldexpl(1.0L, (r * r - r) / 2);
  for (int i = 3; i <= r + 2; ++i) w *= 1 - ldexpl(1.0L, -i);
  const long double o = h2.order().get_d();
  return w / (o * o * aut_order(h2).get_d());
}

/// Sum of malle_weight over 2-groups of order at most 2^max_exponent.
inline long double malle_weight_sum(int max_exponent) {
  long double s = 0;
  for (int a = 0; a <= max_exponent; ++a) {
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int rest, int mx) {
      if (rest == 0) {
        AbelianGroupType g;
        if (!cur.empty()) g.parts[2] = cur;
        s += malle_weight(g);
        return;
      }
      for (int k = std::min(rest, mx); k >= 1; --k) {
        cur.push_back(k);
        rec(rest - k, k);
        cur.pop_back();
      }
    };
    rec(a, a);
  }
  return s;
}

/// The constant 0.786... making the 2-group probabilities sum to 1.
inline long double malle_normalizer() {
  static const long double k = 1.0L / malle_weight_sum(48);
  return k;
}

inline long double malle_two_part_probability(const AbelianGroupType& h2) { return malle_normalizer() * malle_weight(h2); }

/// Prediction for the 5'-part: 2-part from the Malle weight, odd part from
/// the Cohen-Martinet probability with e = 2 and S = {2, 5}.
inline long double malle_five_prime_probability(const AbelianGroupType& h) {
  check_coprime(h, {5});
  const auto odd = h.coprime_part({2});
  return malle_two_part_probability(h.sylow(2)) * cm_probability(odd, 2, {2, 5}).to_long_double();
}

/// Parses a column label: "1", "3", "2^2", "4x2", "3^2".
inline AbelianGroupType parse_group_label(const std::string& label) {
  std::vector<std::uint64_t> orders;
  std::size_t pos = 0;
  while (pos <= label.size()) {
    std::size_t end = label.find('x', pos);
    if (end == std::string::npos) end = label.size();
    const std::string tok = label.substr(pos, end - pos);
    const auto caret = tok.find('^');
    try {
      if (caret == std::string::npos) {
        orders.push_back(std::stoull(tok));
      } else {
        const auto base = std::stoull(tok.substr(0, caret));
        const int times = std::stoi(tok.substr(caret + 1));
        for (int i = 0; i < times; ++i) orders.push_back(base);
      }
    } catch (const std::exception&) {
      throw ParseError("bad group label '" + label + "'");
    }
    pos = end + 1;
  }
  return AbelianGroupType::from_cyclic(orders);
}

/// Relative frequencies of the S-coprime parts per block of consecutive records.
inline std::vector<std::map<AbelianGroupType, long double>> class_distribution(
    const std::vector<std::optional<AbelianGroupType>>& groups, std::size_t block, const std::set<std::uint64_t>& S) {
  if (block == 0) throw BadSupport("block size must be positive");
  std::vector<std::map<AbelianGroupType, long double>> out;
  for (std::size_t start = 0; start < groups.size(); start += block) {
    const std::size_t end = std::min(groups.size(), start + block);
    std::map<AbelianGroupType, long double> row;
    for (std::size_t i = start; i < end; ++i) {
      if (!groups[i]) throw MissingClassData("record " + std::to_string(i) + " has no class group");
      row[groups[i]->coprime_part(S)] += 1;
    }
    for (auto& [g, v] : row) v /= static_cast<long double>(end - start);
    out.push_back(std::move(row));
  }
  return out;
}

/// 100 |observed - predicted| / predicted per group of the prediction.
inline std::map<AbelianGroupType, long double> deviation_table(const std::map<AbelianGroupType, long double>& observed,
                                                               const std::map<AbelianGroupType, long double>& predicted) {
  std::map<AbelianGroupType, long double> out;
  for (const auto& [g, pred] : predicted) {
    auto it = observed.find(g);
    const long double obs = it == observed.end() ? 0 : it->second;
    out[g] = 100 * fabsl(obs - pred) / pred;
  }
  return out;
}

/// Rounds to the given number of significant digits.
inline long double round_significant(long double v, int digits) {
  if (v == 0) return 0;
  const int e = static_cast<int>(floorl(log10l(fabsl(v))));
  const long double scale = powl(10.0L, digits - 1 - e);
  return roundl(v * scale) / scale;
}

}  // namespace fieldcensus
