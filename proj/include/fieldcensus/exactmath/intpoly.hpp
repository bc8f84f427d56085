#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fieldcensus/errors.hpp"
#include "fieldcensus/exactmath/bigint.hpp"

namespace fieldcensus {

/// Dense univariate polynomial over Z. Coefficients are stored low to high,
/// so coeffs()[k] is the coefficient of x^k. The zero polynomial has no
/// coefficients and degree -1.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { normalize(); }
  IntPoly(std::initializer_list<long> coeffs) {
    c_.reserve(coeffs.size());
    for (long v : coeffs) c_.emplace_back(v);
    normalize();
  }

  static IntPoly from_i64(const std::vector<std::int64_t>& coeffs) {
    std::vector<BigInt> c;
    c.reserve(coeffs.size());
    for (auto v : coeffs) c.push_back(big_from_i64(v));
    return IntPoly(std::move(c));
  }

  static IntPoly monomial(int k, const BigInt& coeff = 1) {
    std::vector<BigInt> c(static_cast<std::size_t>(k) + 1);
    c[k] = coeff;
    return IntPoly(std::move(c));
  }

  static IntPoly x() { return monomial(1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<BigInt>& coeffs() const { return c_; }
  const BigInt& operator[](int k) const { return c_[k]; }
  BigInt coeff(int k) const { return k >= 0 && k <= degree() ? c_[k] : BigInt(0); }
  const BigInt& leading() const { return c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  void set_coeff(int k, const BigInt& v) {
    if (k > degree()) c_.resize(static_cast<std::size_t>(k) + 1);
    c_[k] = v;
    normalize();
  }

  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const IntPoly& a, const IntPoly& b) { return !(a == b); }

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<BigInt> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return IntPoly(std::move(c));
  }

  friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
    std::vector<BigInt> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
    return IntPoly(std::move(c));
  }

  friend IntPoly operator-(const IntPoly& a) {
    std::vector<BigInt> c(a.c_);
    for (auto& v : c) v = -v;
    return IntPoly(std::move(c));
  }

  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<BigInt> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (sgn(a.c_[i]) == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return IntPoly(std::move(c));
  }

  friend IntPoly operator*(const BigInt& s, const IntPoly& a) {
    std::vector<BigInt> c(a.c_);
    for (auto& v : c) v *= s;
    return IntPoly(std::move(c));
  }

  IntPoly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<BigInt> c(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) c[i - 1] = c_[i] * static_cast<unsigned long>(i);
    return IntPoly(std::move(c));
  }

  BigInt eval(const BigInt& x) const {
    BigInt acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  /// f(x + s), by repeated synthetic division (Taylor shift).
  IntPoly shift(const BigInt& s) const {
    std::vector<BigInt> c(c_);
    const int n = degree();
    for (int i = 0; i < n; ++i)
      for (int j = n - 1; j >= i; --j) c[j] += s * c[j + 1];
    return IntPoly(std::move(c));
  }

  /// (-1)^n f(-x): the polynomial of -alpha, monic when f is.
  IntPoly negate_variable() const {
    std::vector<BigInt> c(c_);
    const int n = degree();
    for (int k = 0; k <= n; ++k)
      if ((n - k) % 2 == 1) c[k] = -c[k];
    return IntPoly(std::move(c));
  }

  BigInt content() const {
    BigInt g = 0;
    for (const auto& v : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    return g;
  }

  /// Divides out the content; the leading coefficient becomes positive.
  IntPoly primitive_part() const {
    if (is_zero()) return {};
    BigInt g = content();
    if (sgn(leading()) < 0) g = -g;
    std::vector<BigInt> c(c_);
    for (auto& v : c) v = divexact(v, g);
    return IntPoly(std::move(c));
  }

  IntPoly exact_div_scalar(const BigInt& s) const {
    std::vector<BigInt> c(c_);
    for (auto& v : c) v = divexact(v, s);
    return IntPoly(std::move(c));
  }

  std::string to_string(char var = 'x') const;

 private:
  void normalize() {
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
  }

  std::vector<BigInt> c_;
};

/// Pseudo-division: lc(b)^(deg a - deg b + 1) * a = q * b + r.
inline std::pair<IntPoly, IntPoly> pseudo_divmod(const IntPoly& a, const IntPoly& b) {
  const int db = b.degree();
  if (a.degree() < db) return {IntPoly{}, a};
  std::vector<BigInt> r(a.coeffs());
  const int delta = a.degree() - db;
  std::vector<BigInt> q(static_cast<std::size_t>(delta) + 1);
  const BigInt& lb = b.leading();
  for (int k = a.degree(); k >= db; --k) {
    // multiply everything by lb, then cancel the x^k term
    for (auto& v : q) v *= lb;
    const BigInt t = r[k];
    for (int j = 0; j <= k; ++j) r[j] *= lb;
    q[k - db] += t;
    for (int j = 0; j <= db; ++j) r[k - db + j] -= t * b[j];
  }
  return {IntPoly(std::move(q)), IntPoly(std::move(r))};
}

/// Division by a monic polynomial: a = q * b + r exactly over Z.
inline std::pair<IntPoly, IntPoly> divmod_monic(const IntPoly& a, const IntPoly& b) {
  const int db = b.degree();
  if (a.degree() < db) return {IntPoly{}, a};
  std::vector<BigInt> r(a.coeffs());
  std::vector<BigInt> q(static_cast<std::size_t>(a.degree() - db) + 1);
  for (int k = a.degree(); k >= db; --k) {
    const BigInt t = r[k];
    if (sgn(t) == 0) continue;
    q[k - db] = t;
    for (int j = 0; j <= db; ++j) r[k - db + j] -= t * b[j];
  }
  return {IntPoly(std::move(q)), IntPoly(std::move(r))};
}

/// Exact division over Z; returns false when b does not divide a in Z[x].
inline bool divides_exact(const IntPoly& a, const IntPoly& b, IntPoly* quotient = nullptr) {
  if (b.is_zero()) return false;
  if (a.is_zero()) {
    if (quotient) *quotient = IntPoly{};
    return true;
  }
  const int db = b.degree();
  if (a.degree() < db) return false;
  std::vector<BigInt> r(a.coeffs());
  std::vector<BigInt> q(static_cast<std::size_t>(a.degree() - db) + 1);
  const BigInt& lb = b.leading();
  for (int k = a.degree(); k >= db; --k) {
    if (sgn(r[k]) == 0) continue;
    if (mpz_divisible_p(r[k].get_mpz_t(), lb.get_mpz_t()) == 0) return false;
    const BigInt t = divexact(r[k], lb);
    q[k - db] = t;
    for (int j = 0; j <= db; ++j) r[k - db + j] -= t * b[j];
  }
  for (int j = 0; j < db; ++j)
    if (sgn(r[j]) != 0) return false;
  if (quotient) *quotient = IntPoly(std::move(q));
  return true;
}

/// gcd over Z (primitive, positive leading coefficient) via the primitive PRS.
inline IntPoly gcd(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero()) return b.primitive_part();
  if (b.is_zero()) return a.primitive_part();
  IntPoly u = a.primitive_part(), v = b.primitive_part();
  if (u.degree() < v.degree()) std::swap(u, v);
  while (!v.is_zero()) {
    IntPoly r = pseudo_divmod(u, v).second;
    u = std::move(v);
    v = r.is_zero() ? IntPoly{} : r.primitive_part();
  }
  return u.primitive_part();
}

inline std::string IntPoly::to_string(char var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const BigInt& a = c_[k];
    if (sgn(a) == 0) continue;
    BigInt mag = abs_big(a);
    if (first) {
      if (sgn(a) < 0) os << "-";
    } else {
      os << (sgn(a) < 0 ? " - " : " + ");
    }
    first = false;
    const bool unit = (mag == 1);
    if (k == 0 || !unit) os << mag.get_str();
    if (k >= 1) {
      if (!unit) os << "*";
      os << var;
      if (k >= 2) os << "^" << k;
    }
  }
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const IntPoly& f) { return os << f.to_string(); }

/// Parses sums of terms such as "x^4 - 3*x^2 + 7" or "2x^3+x-1".
inline IntPoly parse_poly(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw ParseError("empty polynomial");
  std::vector<BigInt> c;
  std::size_t i = 0;
  auto add_term = [&](int k, const BigInt& v) {
    if (static_cast<int>(c.size()) <= k) c.resize(static_cast<std::size_t>(k) + 1);
    c[k] += v;
  };
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    std::string digits;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++];
    BigInt coeff = digits.empty() ? BigInt(1) : BigInt(digits);
    if (i < s.size() && s[i] == '*') ++i;
    int k = 0;
    if (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) {
      ++i;
      k = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::string e;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) e += s[i++];
        if (e.empty()) throw ParseError("missing exponent in '" + text + "'");
        k = std::stoi(e);
      }
    } else if (digits.empty()) {
      throw ParseError("malformed polynomial '" + text + "'");
    }
    add_term(k, sign * coeff);
    if (i < s.size() && s[i] != '+' && s[i] != '-') throw ParseError("unexpected character in '" + text + "'");
  }
  return IntPoly(std::move(c));
}

}  // namespace fieldcensus
