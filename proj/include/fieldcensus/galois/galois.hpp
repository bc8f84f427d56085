#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fieldcensus/errors.hpp"
#include "fieldcensus/exactmath/algebra.hpp"
#include "fieldcensus/exactmath/factor_zz.hpp"
#include "fieldcensus/exactmath/primes.hpp"
#include "fieldcensus/exactmath/resultant.hpp"
#include "fieldcensus/exactmath/roots.hpp"
#include "fieldcensus/exactmath/sturm.hpp"
#include "fieldcensus/exactmath/zp_poly.hpp"
#include "fieldcensus/galois/group_data.hpp"
#include "fieldcensus/galois/permutation.hpp"

namespace fieldcensus {

enum class Certainty { Proven, Statistical };

inline const char* certainty_name(Certainty c) { return c == Certainty::Proven ? "proven" : "statistical"; }

inline Certainty parse_certainty(const std::string& s) {
  if (s == "proven") return Certainty::Proven;
  if (s == "statistical") return Certainty::Statistical;
  throw ParseError("unknown certainty '" + s + "'");
}

/// A Frobenius sample: the prime and the factorization pattern of f mod p.
struct FrobeniusSample {
  std::uint64_t p;
  CycleType type;
};

struct GaloisLabel {
  int degree = 0;
  std::string name;
  Certainty certainty = Certainty::Statistical;
  /// Re-checkable evidence for proven S_n / A_n labels and D5 witnesses.
  std::vector<FrobeniusSample> witnesses;

  bool primitive() const { return name != "imprimitive"; }
};

struct GroupCandidate {
  std::string name;
  CycleTypeSet types;
};

namespace galois_detail {

inline const group_data::Entry& data_entry(std::string_view file) {
  for (const auto& e : group_data::kEntries)
    if (e.name == file) return e;
  throw Error("missing group data " + std::string(file));
}

inline CycleTypeSet shipped(std::string_view file) {
  const auto& e = data_entry(file);
  return group_cycle_types(parse_generator_file(e.text, e.degree), e.degree);
}

inline std::vector<GroupCandidate> build_candidates(int n) {
  std::vector<GroupCandidate> c;
  auto add = [&](std::string name, CycleTypeSet t) { c.push_back({std::move(name), std::move(t)}); };
  switch (n) {
    case 4:
      add("S4", symmetric_types(4));
      add("A4", alternating_types(4));
      break;
    case 5:
      add("S5", symmetric_types(5));
      add("A5", alternating_types(5));
      add("F20", group_cycle_types(frobenius_generators(5, 4), 5));
      add("D5", group_cycle_types(dihedral_generators(5), 5));
      add("C5", group_cycle_types({frobenius_generators(5, 1)[0]}, 5));
      break;
    case 6:
      add("S6", symmetric_types(6));
      add("PGL2(5)", shipped("PGL2_5"));
      break;
    case 7:
      add("S7", symmetric_types(7));
      add("F42", group_cycle_types(frobenius_generators(7, 6), 7));
      add("D7", group_cycle_types(dihedral_generators(7), 7));
      break;
    case 8:
      add("S8", symmetric_types(8));
      add("A8", alternating_types(8));
      add("8T48", shipped("AGL3_2"));
      add("8T43", shipped("PGL2_7"));
      add("8T37", shipped("PSL2_7"));
      add("8T36", shipped("AGammaL1_8"));
      break;
    case 9:
      add("S9", symmetric_types(9));
      add("A9", alternating_types(9));
      add("9T32", shipped("PGammaL2_8"));
      add("9T16", shipped("9T16"));
      break;
    case 10:
      add("S10", symmetric_types(10));
      add("Aut(S6)", shipped("PGammaL2_9"));
      add("PGL2(9)", shipped("PGL2_9"));
      break;
    case 11:
      add("S11", symmetric_types(11));
      add("F110", group_cycle_types(frobenius_generators(11, 10), 11));
      add("D11", group_cycle_types(dihedral_generators(11), 11));
      break;
    default:
      throw UnsupportedDegree("no Galois candidate list for degree " + std::to_string(n));
  }
  return c;
}

inline bool is_small_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace galois_detail

/// Candidate groups for degree n (4..11), built once and then shared read-only.
inline const std::vector<GroupCandidate>& candidate_groups(int n) {
  static std::once_flag once;
  static std::array<std::vector<GroupCandidate>, 12> table;
  if (n < 4 || n > 11) throw UnsupportedDegree("no Galois candidate list for degree " + std::to_string(n));
  std::call_once(once, [] {
    for (int d = 4; d <= 11; ++d) table[d] = galois_detail::build_candidates(d);
  });
  return table[n];
}

inline const CycleTypeSet& candidate_types(int n, const std::string& name) {
  for (const auto& c : candidate_groups(n))
    if (c.name == name) return c.types;
  throw Error("unknown group " + name + " in degree " + std::to_string(n));
}

/// Factorization patterns of f at the first m primes not dividing disc(f).
inline std::vector<FrobeniusSample> frobenius_fingerprint(const IntPoly& f, int m) {
  std::vector<FrobeniusSample> out;
  for (std::uint32_t p : small_primes()) {
    if (static_cast<int>(out.size()) >= m) break;
    std::vector<int> degs = factor_degrees_squarefree(f, p);
    if (degs.empty()) continue;
    std::sort(degs.rbegin(), degs.rend());
    out.push_back({p, degs});
  }
  return out;
}

inline std::set<CycleType> distinct_types(const std::vector<FrobeniusSample>& s) {
  std::set<CycleType> t;
  for (const auto& x : s) t.insert(x.type);
  return t;
}

/// Cubic resolvent y^3 - b y^2 + (ac - 4d) y - (a^2 d - 4bd + c^2) of x^4 + a x^3 + b x^2 + c x + d.
inline IntPoly quartic_resolvent(const IntPoly& f) {
  const BigInt &a = f[3], &b = f[2], &c = f[1], &d = f[0];
  return IntPoly(std::vector<BigInt>{-(a * a * d - 4 * b * d + c * c), a * c - 4 * d, -b, BigInt(1)});
}

inline GaloisLabel quartic_group(const IntPoly& f, const BigInt& dk) {
  GaloisLabel g;
  g.degree = 4;
  g.certainty = Certainty::Proven;
  if (!is_irreducible_over_Q(quartic_resolvent(f))) {
    g.name = "imprimitive";
  } else {
    g.name = is_perfect_square(dk) ? "A4" : "S4";
  }
  return g;
}

namespace galois_detail {

/// Coset representatives of F20 = <(0 1 2 3 4), (1 2 4 3)> in S5, as index tables.
inline const std::vector<std::array<int, 5>>& f20_cosets() {
  static const std::vector<std::array<int, 5>> reps = [] {
    std::vector<std::array<int, 5>> out;
    std::set<std::set<std::pair<int, int>>> seen;
    std::array<int, 5> s{0, 1, 2, 3, 4};
    do {
      // the image of the pentagon edge set determines the coset up to its complement
      std::set<std::pair<int, int>> pent, star;
      for (int i = 0; i < 5; ++i) {
        int a = s[i], b = s[(i + 1) % 5], c = s[(i + 2) % 5];
        pent.insert({std::min(a, b), std::max(a, b)});
        star.insert({std::min(a, c), std::max(a, c)});
      }
      if (seen.count(pent) || seen.count(star)) continue;
      seen.insert(pent);
      out.push_back(s);
    } while (std::next_permutation(s.begin(), s.end()));
    return out;
  }();
  return reps;
}

/// Degree-6 resolvent of a quintic: the polynomial whose roots are the six values
/// (x1x2 + x2x3 + x3x4 + x4x5 + x5x1 - x1x3 - x3x5 - x5x2 - x2x4 - x4x1)^2.
/// Coefficients are computed from roots and accepted once two precisions agree.
inline IntPoly quintic_resolvent(const IntPoly& f) {
  using roots_detail::Cx;
  IntPoly prev;
  for (long bits = 128; bits <= 8192; bits *= 2) {
    auto disks = complex_roots(f, bits);
    MpPrecisionScope scope(bits + 64);
    std::vector<Cx<MpReal>> x;
    for (auto& d : disks) x.push_back({d.re + MpReal(0), d.im + MpReal(0)});
    std::vector<Cx<MpReal>> poly{{MpReal(1), MpReal(0)}};
    for (const auto& s : f20_cosets()) {
      Cx<MpReal> v{MpReal(0), MpReal(0)};
      for (int i = 0; i < 5; ++i) {
        v = v + x[s[i]] * x[s[(i + 1) % 5]];
        v = v - x[s[i]] * x[s[(i + 2) % 5]];
      }
      v = v * v;
      std::vector<Cx<MpReal>> next(poly.size() + 1, Cx<MpReal>{MpReal(0), MpReal(0)});
      for (std::size_t k = 0; k < poly.size(); ++k) {
        next[k + 1] = next[k + 1] + poly[k];
        next[k] = next[k] - poly[k] * v;
      }
      poly = std::move(next);
    }
    std::vector<BigInt> c;
    bool clean = true;
    for (auto& z : poly) {
      BigInt r = z.re.round_to_int();
      MpReal err = abs(z.re - MpReal(r)) + abs(z.im);
      if (!(err < MpReal(0.01))) clean = false;
      c.push_back(r);
    }
    IntPoly cur(std::move(c));
    if (clean && cur == prev) return cur;
    prev = std::move(cur);
  }
  throw PrecisionExhausted("quintic resolvent did not stabilize for " + f.to_string());
}

/// Integer roots of a monic integer polynomial.
inline std::vector<BigInt> integer_roots(const IntPoly& r) {
  std::vector<BigInt> out;
  for (auto& [g, m] : factor_over_Q(r))
    if (g.degree() == 1) out.push_back(-g[0]);
  return out;
}

inline bool all_even(const CycleTypeSet& s) {
  for (const auto& t : s.types)
    if (!is_even_type(t)) return false;
  return true;
}

}  // namespace galois_detail

/// Galois group of an irreducible quintic, with the sample size m used to separate D5 from C5.
inline GaloisLabel quintic_group(const IntPoly& f, const BigInt& dk, int m = 100) {
  GaloisLabel g;
  g.degree = 5;
  g.certainty = Certainty::Proven;
  const bool square = is_perfect_square(dk);
  const auto fp = frobenius_fingerprint(f, m);
  const CycleTypeSet& f20 = candidate_types(5, "F20");
  // a pattern outside F20 proves insolvability without the resolvent
  for (const auto& s : fp)
    if (!f20.contains(s.type)) {
      g.name = square ? "A5" : "S5";
      g.witnesses.push_back(s);
      return g;
    }
  // Cayley's criterion needs a squarefree resolvent; Tschirnhausen-transform until it is
  IntPoly h = f;
  IntPoly res = galois_detail::quintic_resolvent(h);
  for (int k = 1; gcd(res, res.derivative()).degree() > 0; ++k) {
    std::vector<BigInt> v{0, BigInt(k), 1};
    if (k > 4) v.push_back(BigInt(k - 4));
    h = charpoly_element(f, v);
    if (gcd(h, h.derivative()).degree() > 0) continue;
    res = galois_detail::quintic_resolvent(h);
  }
  if (galois_detail::integer_roots(res).empty()) {
    g.name = square ? "A5" : "S5";
    return g;
  }
  if (!square) {
    g.name = "F20";
    return g;
  }
  // D5 or C5: an involution pattern (2,2,1) only exists in D5
  for (const auto& s : fp)
    if (s.type == CycleType{2, 2, 1}) {
      g.name = "D5";
      g.witnesses.push_back(s);
      return g;
    }
  if (count_real_roots(f) == 1) {
    // complex conjugation is an involution
    g.name = "D5";
    return g;
  }
  g.name = "C5";
  g.certainty = Certainty::Statistical;
  return g;
}

/// Galois label from the closed candidate lists. Degree <= 5 uses resolvents;
/// higher degrees use Frobenius patterns at m primes together with the
/// signature and the squareness of d_K.
inline GaloisLabel identify_group(const IntPoly& f, const BigInt& dk, int r1, int m = 100) {
  const int n = f.degree();
  if (n == 4) return quartic_group(f, dk);
  if (n == 5) return quintic_group(f, dk, m);
  const bool square = is_perfect_square(dk);
  const int r2 = (n - r1) / 2;
  CycleType conj;
  for (int i = 0; i < r2; ++i) conj.push_back(2);
  for (int i = 0; i < r1; ++i) conj.push_back(1);

  const auto fp = frobenius_fingerprint(f, m);
  std::set<CycleType> seen = distinct_types(fp);
  seen.insert(conj);

  GaloisLabel g;
  g.degree = n;
  const std::string sn = "S" + std::to_string(n), an = "A" + std::to_string(n);

  // Jordan certificates. A part p (prime, p > n/2) yields a p-cycle by powering
  // and makes the group primitive; with p < n-2 the group contains A_n.
  const FrobeniusSample* big_p = nullptr;
  const FrobeniusSample* jordan_p = nullptr;
  const FrobeniusSample* transposition = nullptr;
  for (const auto& s : fp) {
    int twos = 0;
    bool others_odd = true;
    for (int c : s.type) {
      if (c == 2) ++twos;
      else if (c % 2 == 0) others_odd = false;
      if (2 * c > n && galois_detail::is_small_prime(c)) {
        if (!big_p) big_p = &s;
        if (c < n - 2 && !jordan_p) jordan_p = &s;
      }
    }
    if (twos == 1 && others_odd && !transposition) transposition = &s;
  }
  if (!square && big_p && transposition) {
    g.name = sn;
    g.certainty = Certainty::Proven;
    g.witnesses = {*big_p, *transposition};
    return g;
  }
  if (jordan_p) {
    g.name = square ? an : sn;
    g.certainty = Certainty::Proven;
    g.witnesses = {*jordan_p};
    return g;
  }

  std::vector<const GroupCandidate*> consistent;
  for (const auto& c : candidate_groups(n)) {
    if (square != galois_detail::all_even(c.types)) continue;
    if (c.types.contains_all(seen)) consistent.push_back(&c);
  }
  g.certainty = Certainty::Statistical;
  if (consistent.empty()) {
    g.name = "imprimitive";
    return g;
  }
  std::vector<const GroupCandidate*> minimal;
  for (auto* c : consistent) {
    bool has_smaller = false;
    for (auto* o : consistent)
      if (o != c && c->types.contains_all(o->types.types) && o->types.types != c->types.types) has_smaller = true;
    if (!has_smaller) minimal.push_back(c);
  }
  if (minimal.size() != 1) {
    std::string names;
    for (auto* c : minimal) names += " " + c->name;
    throw AmbiguousAfterSampling("candidates" + names + " remain after " + std::to_string(m) + " primes");
  }
  const GroupCandidate* pick = minimal.front();
  // without a part p > n/2 (prime) there is no primitivity evidence; groups that
  // have such elements would have shown one
  bool pick_has_big = false;
  for (const auto& t : pick->types.types)
    for (int c : t)
      if (2 * c > n && galois_detail::is_small_prime(c)) pick_has_big = true;
  if (pick_has_big && !big_p) {
    g.name = "imprimitive";
    return g;
  }
  g.name = pick->name;
  return g;
}

/// Labels that count as primitive groups for degree n.
inline bool is_primitive_label(const std::string& name) { return name != "imprimitive"; }

}  // namespace fieldcensus
