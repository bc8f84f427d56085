#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

namespace fieldcensus {

using BigInt = mpz_class;
using BigRational = mpq_class;

inline BigInt big_from_i64(std::int64_t v) {
  BigInt r;
  if (v >= 0) {
    mpz_set_ui(r.get_mpz_t(), static_cast<unsigned long>(v));
  } else {
    mpz_set_ui(r.get_mpz_t(), static_cast<unsigned long>(-(v + 1)) + 1UL);
    mpz_neg(r.get_mpz_t(), r.get_mpz_t());
  }
  return r;
}

inline BigInt big_from_u64(std::uint64_t v) {
  BigInt r;
  mpz_set_ui(r.get_mpz_t(), static_cast<unsigned long>(v));
  return r;
}

inline BigInt big_from_string(const std::string& s) { return BigInt(s, 10); }

inline bool fits_i64(const BigInt& v) { return mpz_fits_slong_p(v.get_mpz_t()) != 0; }

inline std::int64_t to_i64(const BigInt& v) { return mpz_get_si(v.get_mpz_t()); }

inline std::uint64_t mod_u64(const BigInt& v, std::uint64_t m) {
  return mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(m));
}

inline int sgn(const BigInt& v) { return mpz_sgn(v.get_mpz_t()); }

inline BigInt abs_big(const BigInt& v) {
  BigInt r;
  mpz_abs(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

inline BigInt pow_big(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline BigInt isqrt(const BigInt& v) {
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

inline bool is_perfect_square(const BigInt& v) {
  return sgn(v) >= 0 && mpz_perfect_square_p(v.get_mpz_t()) != 0;
}

/// Exponent of the prime p in v (v != 0). Divides the power out of v.
inline unsigned remove_factor(BigInt& v, const BigInt& p) {
  if (sgn(v) == 0) return 0;
  return static_cast<unsigned>(mpz_remove(v.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t()));
}

inline unsigned valuation(BigInt v, const BigInt& p) { return remove_factor(v, p); }

inline BigInt gcd_big(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

/// Exact quotient; the caller guarantees divisibility.
inline BigInt divexact(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_divexact(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

/// Floor division and nonnegative remainder.
inline std::pair<BigInt, BigInt> fdiv_qr(const BigInt& a, const BigInt& b) {
  BigInt q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return {q, r};
}

/// Residue in [0, m).
inline BigInt mod_pos(const BigInt& a, const BigInt& m) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

/// Residue in (-m/2, m/2].
inline BigInt mod_sym(const BigInt& a, const BigInt& m) {
  BigInt r = mod_pos(a, m);
  if (2 * r > m) r -= m;
  return r;
}

/// Modular inverse; returns false when gcd(a, m) != 1.
inline bool invert_mod(BigInt& out, const BigInt& a, const BigInt& m) {
  return mpz_invert(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) != 0;
}

inline std::string to_string(const BigInt& v) { return v.get_str(10); }

inline std::size_t bit_length(const BigInt& v) {
  return sgn(v) == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

inline long double to_long_double(const BigInt& v) {
  if (bit_length(v) <= 63) return static_cast<long double>(mpz_get_si(v.get_mpz_t()));
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return static_cast<long double>(mant) * powl(2.0L, static_cast<long double>(exp));
}

}  // namespace fieldcensus
