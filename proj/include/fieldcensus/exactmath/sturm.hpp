#pragma once

#include <vector>

#include "fieldcensus/errors.hpp"
#include "fieldcensus/exactmath/intpoly.hpp"

namespace fieldcensus {

/// Sturm sequence with positive rescalings only, so sign variations are preserved.
inline std::vector<IntPoly> sturm_sequence(const IntPoly& f) {
  std::vector<IntPoly> seq{f, f.derivative()};
  while (seq.back().degree() > 0) {
    const IntPoly& a = seq[seq.size() - 2];
    const IntPoly& b = seq.back();
    // lc(b)^k a = q b + r; make the multiplier positive before negating
    auto [q, r] = pseudo_divmod(a, b);
    const int k = a.degree() - b.degree() + 1;
    if (sgn(b.leading()) < 0 && k % 2 == 1) r = -r;
    if (r.is_zero()) break;
    r = -r;
    const BigInt c = r.content();
    seq.push_back(r.exact_div_scalar(c));
  }
  return seq;
}

namespace sturm_detail {

inline int variations(const std::vector<int>& signs) {
  int v = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

}  // namespace sturm_detail

/// Number of distinct real roots of a squarefree f.
inline int count_real_roots(const IntPoly& f) {
  if (f.degree() <= 0) return 0;
  std::vector<IntPoly> seq = sturm_sequence(f);
  if (seq.back().degree() > 0) throw NonSquarefree("gcd(f, f') is nonconstant for " + f.to_string());
  std::vector<int> at_pos, at_neg;
  for (const auto& g : seq) {
    const int s = sgn(g.leading());
    at_pos.push_back(s);
    at_neg.push_back(g.degree() % 2 == 0 ? s : -s);
  }
  return sturm_detail::variations(at_neg) - sturm_detail::variations(at_pos);
}

}  // namespace fieldcensus
