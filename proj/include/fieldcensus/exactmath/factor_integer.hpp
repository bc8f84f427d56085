#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fieldcensus/exactmath/bigint.hpp"
#include "fieldcensus/exactmath/primes.hpp"

namespace fieldcensus {

/// |N| = prod p^e * cofactor. A cofactor is composite with no prime factor
/// below the trial-division bound; it is never reported as a prime.
struct IntFactorization {
  int sign = 1;
  std::vector<std::pair<BigInt, unsigned>> primes;
  std::optional<BigInt> cofactor;

  bool complete() const { return !cofactor.has_value(); }

  BigInt value() const {
    BigInt v = 1;
    for (const auto& [p, e] : primes) v *= pow_big(p, e);
    if (cofactor) v *= *cofactor;
    return sign * v;
  }

  unsigned exponent(const BigInt& p) const {
    for (const auto& [q, e] : primes)
      if (q == p) return e;
    return 0;
  }

  std::string to_string() const {
    std::string s = sign < 0 ? "-1" : "";
    for (const auto& [p, e] : primes) {
      if (!s.empty()) s += " * ";
      s += p.get_str();
      if (e > 1) s += "^" + std::to_string(e);
    }
    if (cofactor) s += (s.empty() ? "" : " * ") + ("(" + cofactor->get_str() + ")");
    return s.empty() ? "1" : s;
  }
};

/// Miller-Rabin. Deterministic with the first 13 prime bases below 3.3e24;
/// 40 seeded random bases above (error below 2^-80).
inline bool is_probable_prime(const BigInt& n) {
  if (n < 2) return false;
  static const unsigned small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  for (unsigned p : small) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  BigInt d = n - 1;
  const unsigned s = remove_factor(d, BigInt(2));
  const BigInt nm1 = n - 1;
  auto witness = [&](const BigInt& a) {
    BigInt x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == nm1) return false;
    for (unsigned r = 1; r < s; ++r) {
      x = x * x % n;
      if (x == nm1) return false;
    }
    return true;
  };
  static const BigInt deterministic_limit("3317044064679887385961981");
  if (n < deterministic_limit) {
    for (unsigned p : small)
      if (witness(BigInt(p))) return false;
    return true;
  }
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(0x5eed);
  for (int i = 0; i < 40; ++i) {
    BigInt a = rng.get_z_range(n - 3) + 2;
    if (witness(a)) return false;
  }
  return true;
}

namespace factor_detail {

/// Pollard rho with Brent's cycle detection. Returns a nontrivial factor or 0.
inline BigInt pollard_brent(const BigInt& n, std::uint64_t& budget, std::uint64_t seed) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 8 && budget > 0; ++attempt) {
    const BigInt c = big_from_u64(rng() % 1000000 + 1);
    BigInt y = big_from_u64(rng() % 1000000 + 2), x, ys, q = 1, g = 1;
    const std::uint64_t m = 128;
    std::uint64_t r = 1;
    while (g == 1 && budget > 0) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = (y * y + c) % n;
      std::uint64_t k = 0;
      while (k < r && g == 1) {
        ys = y;
        const std::uint64_t lim = std::min(m, r - k);
        for (std::uint64_t i = 0; i < lim; ++i) {
          y = (y * y + c) % n;
          q = q * abs_big(x - y) % n;
        }
        budget = budget > lim ? budget - lim : 0;
        g = gcd_big(q, n);
        k += lim;
      }
      r *= 2;
    }
    if (g == n) {
      do {
        ys = (ys * ys + c) % n;
        g = gcd_big(abs_big(x - ys), n);
      } while (g == 1);
    }
    if (g != n && g != 1) return g;
  }
  return 0;
}

}  // namespace factor_detail

/// Trial division by the primes below 10^6, then Pollard-Brent with a total
/// iteration budget. Whatever cannot be split is kept as a composite cofactor.
inline IntFactorization factor_integer(const BigInt& N, std::uint64_t effort = 2000000) {
  IntFactorization out;
  out.sign = sgn(N) < 0 ? -1 : 1;
  BigInt n = abs_big(N);
  if (n == 0) {
    out.cofactor = BigInt(0);
    return out;
  }
  std::vector<std::pair<BigInt, unsigned>> found;
  std::size_t since_check = 0;
  for (std::uint32_t p : small_primes()) {
    if (n == 1) break;
    if (static_cast<BigInt>(p) * p > n) {
      found.emplace_back(n, 1);
      n = 1;
      break;
    }
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      const unsigned e = remove_factor(n, BigInt(p));
      found.emplace_back(BigInt(p), e);
      since_check = 0;
      continue;
    }
    // a large prime cofactor would otherwise cost the whole table
    if (++since_check == 2048 || p == 997) {
      since_check = 0;
      if (is_probable_prime(n)) {
        found.emplace_back(n, 1);
        n = 1;
        break;
      }
    }
  }
  std::vector<BigInt> leftover;
  std::vector<BigInt> stack;
  if (n > 1) stack.push_back(n);
  std::uint64_t budget = effort;
  while (!stack.empty()) {
    BigInt m = stack.back();
    stack.pop_back();
    if (is_probable_prime(m)) {
      found.emplace_back(m, 1);
      continue;
    }
    if (is_perfect_square(m)) {
      BigInt r = isqrt(m);
      stack.push_back(r);
      stack.push_back(r);
      continue;
    }
    BigInt d = factor_detail::pollard_brent(m, budget, 0x1234 + stack.size());
    if (d == 0) {
      leftover.push_back(m);
      continue;
    }
    stack.push_back(d);
    stack.push_back(m / d);
  }
  std::sort(found.begin(), found.end());
  for (auto& [p, e] : found) {
    if (!out.primes.empty() && out.primes.back().first == p) {
      out.primes.back().second += e;
    } else {
      out.primes.emplace_back(p, e);
    }
  }
  if (!leftover.empty()) {
    BigInt c = 1;
    for (auto& v : leftover) c *= v;
    out.cofactor = c;
  }
  return out;
}

}  // namespace fieldcensus
