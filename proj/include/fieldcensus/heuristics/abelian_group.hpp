#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fieldcensus/errors.hpp"
#include "fieldcensus/exactmath/bigint.hpp"

namespace fieldcensus {

/// Finite abelian group as a partition (nonincreasing exponents) per prime:
/// p -> (a_1 >= a_2 >= ...) means prod Z/p^{a_i}.
struct AbelianGroupType {
  std::map<std::uint64_t, std::vector<int>> parts;

  static AbelianGroupType trivial() { return {}; }

  /// Product of cyclic groups of the given orders.
  static AbelianGroupType from_cyclic(const std::vector<std::uint64_t>& orders) {
    AbelianGroupType g;
    for (std::uint64_t m : orders) {
      if (m == 0) throw ParseError("cyclic factor of order 0");
      for (std::uint64_t p = 2; p * p <= m; ++p) {
        int e = 0;
        while (m % p == 0) {
          m /= p;
          ++e;
        }
        if (e) g.parts[p].push_back(e);
      }
      if (m > 1) g.parts[m].push_back(1);
    }
    for (auto& [p, v] : g.parts) std::sort(v.rbegin(), v.rend());
    return g;
  }

  /// Comma-separated cyclic factors, e.g. "4,3" or "1" for the trivial group.
  static AbelianGroupType parse(const std::string& text) {
    std::vector<std::uint64_t> orders;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find(',', pos);
      if (end == std::string::npos) end = text.size();
      const std::string item = text.substr(pos, end - pos);
      if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("bad class group '" + text + "'");
      orders.push_back(std::stoull(item));
      pos = end + 1;
    }
    return from_cyclic(orders);
  }

  /// Elementary divisors ordered by prime, larger powers first; "1" if trivial.
  std::string to_string() const {
    std::string s;
    for (const auto& [p, v] : parts)
      for (int e : v) {
        if (!s.empty()) s += ",";
        std::uint64_t q = 1;
        for (int i = 0; i < e; ++i) q *= p;
        s += std::to_string(q);
      }
    return s.empty() ? "1" : s;
  }

  BigInt order() const {
    BigInt o = 1;
    for (const auto& [p, v] : parts)
      for (int e : v) o *= pow_big(big_from_u64(p), e);
    return o;
  }

  int p_rank(std::uint64_t p) const {
    auto it = parts.find(p);
    return it == parts.end() ? 0 : static_cast<int>(it->second.size());
  }

  bool is_trivial() const { return parts.empty(); }

  /// The p-Sylow subgroup.
  AbelianGroupType sylow(std::uint64_t p) const {
    AbelianGroupType g;
    auto it = parts.find(p);
    if (it != parts.end()) g.parts[p] = it->second;
    return g;
  }

  /// The part of order coprime to every prime in S.
  AbelianGroupType coprime_part(const std::set<std::uint64_t>& S) const {
    AbelianGroupType g;
    for (const auto& [p, v] : parts)
      if (!S.count(p)) g.parts[p] = v;
    return g;
  }

  friend bool operator==(const AbelianGroupType& a, const AbelianGroupType& b) { return a.parts == b.parts; }
  friend bool operator<(const AbelianGroupType& a, const AbelianGroupType& b) {
    const BigInt oa = a.order(), ob = b.order();
    if (oa != ob) return oa < ob;
    return a.parts < b.parts;
  }
};

/// |Aut| of an abelian p-group of type lambda (Hillar and Rhea).
inline BigInt aut_order_p_group(std::uint64_t p, std::vector<int> lambda) {
  std::sort(lambda.begin(), lambda.end());  // e_1 <= ... <= e_k
  const int k = static_cast<int>(lambda.size());
  const BigInt P = big_from_u64(p);
  BigInt out = 1;
  for (int j = 1; j <= k; ++j) {
    const int e = lambda[j - 1];
    int d = j, c = j;
    while (d < k && lambda[d] == e) ++d;
    while (c > 1 && lambda[c - 2] == e) --c;
    out *= pow_big(P, d) - pow_big(P, j - 1);
    out *= pow_big(P, static_cast<unsigned>(e * (k - d)));
    out *= pow_big(P, static_cast<unsigned>((e - 1) * (k - c + 1)));
  }
  return out;
}

inline BigInt aut_order(const AbelianGroupType& h) {
  BigInt out = 1;
  for (const auto& [p, v] : h.parts) out *= aut_order_p_group(p, v);
  return out;
}

}  // namespace fieldcensus
