#pragma once

#include <mpfr.h>

#include <algorithm>
#include <string>
#include <utility>

#include "fieldcensus/exactmath/bigint.hpp"

namespace fieldcensus {

/// Precision used by default-constructed MpReal values on the current thread.
inline mpfr_prec_t& mp_default_precision() {
  thread_local mpfr_prec_t prec = 128;
  return prec;
}

/// Sets the thread's default MpReal precision for the lifetime of the guard.
class MpPrecisionScope {
 public:
  explicit MpPrecisionScope(mpfr_prec_t bits) : saved_(mp_default_precision()) { mp_default_precision() = bits; }
  ~MpPrecisionScope() { mp_default_precision() = saved_; }
  MpPrecisionScope(const MpPrecisionScope&) = delete;
  MpPrecisionScope& operator=(const MpPrecisionScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

/// RAII MPFR value with round-to-nearest arithmetic. Results take the larger
/// precision of the operands.
class MpReal {
 public:
  MpReal() { mpfr_init2(v_, mp_default_precision()); mpfr_set_zero(v_, 1); }
  explicit MpReal(mpfr_prec_t prec, int) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  MpReal(long double x) : MpReal() { mpfr_set_ld(v_, x, MPFR_RNDN); }
  MpReal(double x) : MpReal() { mpfr_set_d(v_, x, MPFR_RNDN); }
  MpReal(int x) : MpReal() { mpfr_set_si(v_, x, MPFR_RNDN); }
  MpReal(long x) : MpReal() { mpfr_set_si(v_, x, MPFR_RNDN); }
  explicit MpReal(const BigInt& x) : MpReal() { mpfr_set_z(v_, x.get_mpz_t(), MPFR_RNDN); }
  explicit MpReal(const BigRational& x) : MpReal() { mpfr_set_q(v_, x.get_mpq_t(), MPFR_RNDN); }
  explicit MpReal(const std::string& s) : MpReal() { mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN); }

  MpReal(const MpReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  MpReal(MpReal&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  MpReal& operator=(const MpReal& o) {
    if (this != &o) {
      if (mpfr_get_prec(v_) < mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  MpReal& operator=(MpReal&& o) noexcept {
    if (mpfr_get_prec(v_) <= mpfr_get_prec(o.v_)) {
      mpfr_swap(v_, o.v_);
    } else {
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  ~MpReal() { mpfr_clear(v_); }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// Nearest integer (ties away from zero).
  BigInt round_to_int() const {
    BigInt r;
    mpfr_get_z(r.get_mpz_t(), v_, MPFR_RNDNA);
    return r;
  }
  std::string to_string(int digits = 20) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }
  /// Binary exponent e with 2^(e-1) <= |x| < 2^e; very negative for zero.
  long exponent() const { return mpfr_zero_p(v_) ? -(1L << 30) : static_cast<long>(mpfr_get_exp(v_)); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

#define FIELDCENSUS_MP_BINOP(op, fn)                                           \
  friend MpReal operator op(const MpReal& a, const MpReal& b) {                \
    MpReal r(std::max(a.precision(), b.precision()), 0);                       \
    fn(r.v_, a.v_, b.v_, MPFR_RNDN);                                           \
    return r;                                                                  \
  }                                                                            \
  MpReal& operator op##=(const MpReal& b) {                                    \
    if (precision() < b.precision()) mpfr_prec_round(v_, b.precision(), MPFR_RNDN); \
    fn(v_, v_, b.v_, MPFR_RNDN);                                               \
    return *this;                                                              \
  }
  FIELDCENSUS_MP_BINOP(+, mpfr_add)
  FIELDCENSUS_MP_BINOP(-, mpfr_sub)
  FIELDCENSUS_MP_BINOP(*, mpfr_mul)
  FIELDCENSUS_MP_BINOP(/, mpfr_div)
#undef FIELDCENSUS_MP_BINOP

  friend MpReal operator-(const MpReal& a) {
    MpReal r(a.precision(), 0);
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  friend bool operator<(const MpReal& a, const MpReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const MpReal& a, const MpReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const MpReal& a, const MpReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const MpReal& a, const MpReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const MpReal& a, const MpReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const MpReal& a, const MpReal& b) { return !(a == b); }

  friend MpReal abs(const MpReal& a) {
    MpReal r(a.precision(), 0);
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend MpReal sqrt(const MpReal& a) {
    MpReal r(a.precision(), 0);
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend MpReal log(const MpReal& a) {
    MpReal r(a.precision(), 0);
    mpfr_log(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend MpReal exp(const MpReal& a) {
    MpReal r(a.precision(), 0);
    mpfr_exp(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend MpReal cos(const MpReal& a) {
    MpReal r(a.precision(), 0);
    mpfr_cos(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend MpReal sin(const MpReal& a) {
    MpReal r(a.precision(), 0);
    mpfr_sin(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend MpReal pow(const MpReal& a, const MpReal& b) {
    MpReal r(std::max(a.precision(), b.precision()), 0);
    mpfr_pow(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  /// 2^e at the default precision.
  static MpReal pow2(long e) {
    MpReal r;
    mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
    return r;
  }
  static MpReal pi() {
    MpReal r;
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }

 private:
  mpfr_t v_;
};

}  // namespace fieldcensus
