#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "fieldcensus/errors.hpp"

namespace fieldcensus {

/// Cycle type as a nonincreasing list of cycle lengths, e.g. {2, 1, 1, 1}.
using CycleType = std::vector<int>;

/// Permutation of {0, ..., n-1} as an image table.
using Perm = std::vector<std::uint8_t>;

inline Perm identity_perm(int n) {
  Perm p(n);
  for (int i = 0; i < n; ++i) p[i] = static_cast<std::uint8_t>(i);
  return p;
}

/// (a * b)(i) = a(b(i)).
inline Perm compose(const Perm& a, const Perm& b) {
  Perm r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[b[i]];
  return r;
}

inline CycleType cycle_type(const Perm& p) {
  std::vector<bool> seen(p.size(), false);
  CycleType t;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = p[j]) {
      seen[j] = true;
      ++len;
    }
    t.push_back(len);
  }
  std::sort(t.rbegin(), t.rend());
  return t;
}

inline std::string cycle_type_string(const CycleType& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(t[i]);
  }
  return "(" + s + ")";
}

/// Parses cycle notation on points 1..n, e.g. "(1 2 3)(4 5)"; "()" is the identity.
inline Perm parse_cycles(std::string_view text, int n) {
  Perm p = identity_perm(n);
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '(') {
      if (text[i] == ' ' || text[i] == '\t' || text[i] == '\r') {
        ++i;
        continue;
      }
      throw ParseError("bad cycle notation: " + std::string(text));
    }
    const std::size_t close = text.find(')', i);
    if (close == std::string_view::npos) throw ParseError("unclosed cycle: " + std::string(text));
    std::istringstream in{std::string(text.substr(i + 1, close - i - 1))};
    std::vector<int> cyc;
    for (int v; in >> v;) {
      if (v < 1 || v > n) throw ParseError("point out of range in " + std::string(text));
      cyc.push_back(v - 1);
    }
    for (std::size_t k = 0; k < cyc.size(); ++k)
      p[cyc[k]] = static_cast<std::uint8_t>(cyc[(k + 1) % cyc.size()]);
    i = close + 1;
  }
  return p;
}

/// Generator lists as shipped in the data files: '#' lines are comments, every
/// other nonblank line is one permutation.
inline std::vector<Perm> parse_generator_file(std::string_view text, int n) {
  std::vector<Perm> gens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    gens.push_back(parse_cycles(line.substr(first), n));
  }
  return gens;
}

struct CycleTypeSet {
  int degree = 0;
  std::uint64_t order = 0;
  std::set<CycleType> types;

  bool contains(const CycleType& t) const { return types.count(t) != 0; }
  bool contains_all(const std::set<CycleType>& ts) const {
    return std::includes(types.begin(), types.end(), ts.begin(), ts.end());
  }
};

namespace perm_detail {

struct PermHash {
  std::size_t operator()(const Perm& p) const {
    std::size_t h = 1469598103934665603ULL;
    for (auto v : p) h = (h ^ v) * 1099511628211ULL;
    return h;
  }
};

}  // namespace perm_detail

/// Enumerates the group generated by gens (closure under right multiplication
/// by generators) and collects the cycle types of its elements.
inline CycleTypeSet group_cycle_types(const std::vector<Perm>& gens, int n, std::uint64_t order_cap = 100000) {
  CycleTypeSet out;
  out.degree = n;
  std::unordered_set<Perm, perm_detail::PermHash> seen;
  std::vector<Perm> frontier{identity_perm(n)};
  seen.insert(frontier[0]);
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const auto& g : frontier) {
      out.types.insert(cycle_type(g));
      for (const auto& s : gens) {
        Perm h = compose(g, s);
        if (seen.insert(h).second) {
          if (seen.size() > order_cap)
            throw OrderCapExceeded("group order exceeds " + std::to_string(order_cap));
          next.push_back(std::move(h));
        }
      }
    }
    frontier = std::move(next);
  }
  out.order = seen.size();
  return out;
}

/// All partitions of n, each nonincreasing.
inline std::vector<CycleType> partitions_of(int n) {
  std::vector<CycleType> out;
  CycleType cur;
  std::function<void(int, int)> rec = [&](int rest, int max_part) {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (int k = std::min(rest, max_part); k >= 1; --k) {
      cur.push_back(k);
      rec(rest - k, k);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

/// A cycle type is even iff the number of even-length cycles is even.
inline bool is_even_type(const CycleType& t) {
  int evens = 0;
  for (int c : t)
    if (c % 2 == 0) ++evens;
  return evens % 2 == 0;
}

inline std::uint64_t factorial_u64(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

inline CycleTypeSet symmetric_types(int n) {
  CycleTypeSet s;
  s.degree = n;
  s.order = factorial_u64(n);
  for (auto& t : partitions_of(n)) s.types.insert(t);
  return s;
}

inline CycleTypeSet alternating_types(int n) {
  CycleTypeSet s;
  s.degree = n;
  s.order = factorial_u64(n) / 2;
  for (auto& t : partitions_of(n))
    if (is_even_type(t)) s.types.insert(t);
  return s;
}

/// Dihedral group of order 2n on the vertices of an n-gon.
inline std::vector<Perm> dihedral_generators(int n) {
  Perm r(n), s(n);
  for (int i = 0; i < n; ++i) {
    r[i] = static_cast<std::uint8_t>((i + 1) % n);
    s[i] = static_cast<std::uint8_t>((n - i) % n);
  }
  return {r, s};
}

/// Affine group x -> a x + b over Z/p with a in the subgroup of order k of (Z/p)^*.
inline std::vector<Perm> frobenius_generators(int p, int k) {
  int g = 2;
  // smallest primitive root
  for (;; ++g) {
    int x = 1, ord = 0;
    do {
      x = x * g % p;
      ++ord;
    } while (x != 1);
    if (ord == p - 1) break;
  }
  int a = 1;
  for (int i = 0; i < (p - 1) / k; ++i) a = a * g % p;
  Perm t(p), m(p);
  for (int i = 0; i < p; ++i) {
    t[i] = static_cast<std::uint8_t>((i + 1) % p);
    m[i] = static_cast<std::uint8_t>(i * a % p);
  }
  return {t, m};
}

}  // namespace fieldcensus
