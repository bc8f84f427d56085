#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fieldcensus/errors.hpp"
#include "fieldcensus/exactmath/bigint.hpp"
#include "fieldcensus/exactmath/factor_zz.hpp"
#include "fieldcensus/exactmath/intpoly.hpp"
#include "fieldcensus/exactmath/primes.hpp"
#include "fieldcensus/exactmath/resultant.hpp"
#include "fieldcensus/exactmath/sturm.hpp"

namespace fieldcensus {

/// Allowed signatures (r1, r2) of one degree.
struct SignatureSet {
  int degree = 0;
  std::set<std::pair<int, int>> members;
  std::string name;

  /// "tc" (totally complex), "r1le1" (r1 = n mod 2), "tr" (totally real), or
  /// an explicit list "r1:r2,r1:r2".
  static SignatureSet preset(const std::string& which, int n) {
    SignatureSet s;
    s.degree = n;
    s.name = which;
    if (which == "tc") {
      if (n % 2 != 0) throw BadSupport("no totally complex fields of odd degree " + std::to_string(n));
      s.members.insert({0, n / 2});
    } else if (which == "r1le1") {
      s.members.insert({n % 2, n / 2});
    } else if (which == "tr") {
      s.members.insert({n, 0});
    } else if (which == "all") {
      for (int r2 = 0; 2 * r2 <= n; ++r2) s.members.insert({n - 2 * r2, r2});
    } else {
      std::stringstream in(which);
      std::string item;
      while (std::getline(in, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ParseError("bad signature '" + item + "'");
        const int r1 = std::stoi(item.substr(0, colon)), r2 = std::stoi(item.substr(colon + 1));
        if (r1 < 0 || r2 < 0 || r1 + 2 * r2 != n) throw BadSupport("signature " + item + " does not fit degree " + std::to_string(n));
        s.members.insert({r1, r2});
      }
      if (s.members.empty()) throw ParseError("empty signature list");
    }
    return s;
  }

  bool contains(int r1, int r2) const { return members.count({r1, r2}) != 0; }
  bool allows_r1(int r1) const { return (degree - r1) % 2 == 0 && contains(r1, (degree - r1) / 2); }
  int max_r1() const {
    int m = -1;
    for (auto& [r1, r2] : members) m = std::max(m, r1);
    return m;
  }
  /// Whether some member has discriminant sign (-1)^r2 equal to sign.
  bool allows_disc_sign(int sign) const {
    for (auto& [r1, r2] : members)
      if ((r2 % 2 == 0 ? 1 : -1) == sign) return true;
    return false;
  }
};

/// Upper bounds for the Hermite constants gamma_m, m = 1..10. Exact for m <= 8;
/// gamma_9 and gamma_10 come from Mordell's inequality starting at gamma_8 = 2.
inline long double hermite_constant(int m) {
  switch (m) {
    case 1: return 1.0L;
    case 2: return sqrtl(4.0L / 3.0L);
    case 3: return cbrtl(2.0L);
    case 4: return sqrtl(2.0L);
    case 5: return powl(8.0L, 1.0L / 5.0L);
    case 6: return powl(64.0L / 3.0L, 1.0L / 6.0L);
    case 7: return powl(64.0L, 1.0L / 7.0L);
    case 8: return 2.0L;
    case 9: return powl(2.0L, 8.0L / 7.0L);
    case 10: return powl(2.0L, 9.0L / 7.0L);
    default: throw UnsupportedDegree("no Hermite constant for dimension " + std::to_string(m));
  }
}

inline void check_degree(int n) {
  if (n < 2 || n > 11) throw UnsupportedDegree("degree " + std::to_string(n) + " outside 2..11");
}

/// T2 bound of Hunter's theorem for trace t.
inline long double t2_bound(int n, long double X, int t) {
  check_degree(n);
  if (t < 0 || 2 * t > n) throw BadSupport("trace outside [0, n/2]");
  return static_cast<long double>(t) * t / n + hermite_constant(n - 1) * powl(X / n, 1.0L / (n - 1));
}

struct HunterBox {
  int degree = 0;
  int trace = 0;
  long double t2 = 0;
  long double gamma = 0;
  /// ranges[k - 2] bounds a_{n-k}, k = 2..n.
  std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
};

inline long double binomial_ld(int n, int k) {
  long double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// |a_{n-k}| <= binom(n, k) (T2 / k)^{k/2}, rounded up.
inline HunterBox coefficient_bounds(int n, int t, long double T2) {
  check_degree(n);
  HunterBox box;
  box.degree = n;
  box.trace = t;
  box.t2 = T2;
  box.gamma = hermite_constant(n - 1);
  for (int k = 2; k <= n; ++k) {
    const long double b = binomial_ld(n, k) * powl(T2 / k, k / 2.0L);
    if (b > 9e15L) throw UnsupportedDegree("coefficient bound exceeds 64-bit range");
    const auto m = static_cast<std::int64_t>(ceill(b * (1 + 1e-15L)));
    box.ranges.emplace_back(-m, m);
  }
  return box;
}

/// A prefix block: trace t and coefficient a_{n-2}.
struct Prefix {
  int t = 0;
  std::int64_t a2 = 0;
  friend bool operator==(const Prefix& a, const Prefix& b) { return a.t == b.t && a.a2 == b.a2; }
};

struct EnumerationTask {
  int degree = 0;
  long double bound = 0;
  SignatureSet signatures;
  int shard_index = 0;
  int shard_count = 1;
  /// Last completed prefix of this slice, if any.
  std::optional<Prefix> cursor;
  bool deep_prune = false;

  BigInt bound_floor() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.0Lf", floorl(bound));
    return BigInt(buf);
  }
};

struct Candidate {
  IntPoly poly;
  int r1 = 0;
  BigInt poly_disc;
};

struct EnumerationSummary {
  std::uint64_t leaves = 0;
  std::uint64_t sign_rejected = 0;
  std::uint64_t disc_rejected = 0;
  std::uint64_t reducible = 0;
  std::uint64_t signature_rejected = 0;
  std::uint64_t emitted = 0;
  std::uint64_t prefixes_done = 0;
  std::optional<Prefix> last;
  bool complete = false;
};

using CandidateSink = std::function<void(const Candidate&)>;
using PrefixDone = std::function<void(const Prefix&, const EnumerationSummary&)>;

namespace hunter_detail {

inline std::int64_t ceil_div_ld(long double v) { return static_cast<std::int64_t>(ceill(v - 1e-9L)); }
inline std::int64_t floor_div_ld(long double v) { return static_cast<std::int64_t>(floorl(v + 1e-9L)); }

/// All prefix blocks of the full box, in enumeration order.
inline std::vector<Prefix> all_prefixes(int n, long double X) {
  std::vector<Prefix> out;
  for (int t = 0; 2 * t <= n; ++t) {
    const long double T2 = t2_bound(n, X, t);
    const HunterBox box = coefficient_bounds(n, t, T2);
    // s_2 = t^2 - 2 a_{n-2} with |s_2| <= T2
    std::int64_t lo = std::max(box.ranges[0].first, ceil_div_ld((static_cast<long double>(t) * t - T2) / 2));
    std::int64_t hi = std::min(box.ranges[0].second, floor_div_ld((static_cast<long double>(t) * t + T2) / 2));
    for (std::int64_t a = lo; a <= hi; ++a) {
      if (n == 2 && a == 0) continue;
      out.push_back({t, a});
    }
  }
  return out;
}

/// Upper bound for the largest square dividing the nonzero D: exact on the
/// part below 1000, conservative on the cofactor.
inline BigInt square_divisor_bound(const BigInt& D) {
  static const std::vector<std::uint32_t> ps = primes_up_to(1000);
  BigInt r = abs_big(D), sq = 1;
  for (std::uint32_t p : ps) {
    if (r < static_cast<BigInt>(p) * p) break;
    if (!mpz_divisible_ui_p(r.get_mpz_t(), p)) continue;
    const unsigned e = remove_factor(r, BigInt(p));
    sq *= pow_big(BigInt(p), e - e % 2);
  }
  const BigInt B = 1000;
  if (r < B * B) return sq;
  if (is_perfect_square(r)) return sq * r;
  if (r < B * B * B) return sq;
  const BigInt q = isqrt(r / B);
  return sq * q * q;
}

/// Newton coefficients of D(a_0) = disc(f) as an integer polynomial in a_0.
inline std::vector<BigInt> disc_in_constant(int n, const std::vector<std::int64_t>& c) {
  // c[i] = coefficient of x^{n-i}, c[0] = 1; c[n] varies
  std::vector<BigInt> vals;
  for (int a0 = 0; a0 < n; ++a0) {
    std::vector<std::int64_t> low(n + 1);
    for (int i = 0; i <= n; ++i) low[n - i] = c[i];
    low[0] = a0;
    vals.push_back(discriminant(IntPoly::from_i64(low)));
  }
  // forward differences -> Newton form -> monomial form
  std::vector<BigInt> diff = vals, newton;
  for (int j = 0; j < n; ++j) {
    newton.push_back(diff[0]);
    for (std::size_t i = 0; i + 1 < diff.size(); ++i) diff[i] = diff[i + 1] - diff[i];
    diff.pop_back();
  }
  std::vector<BigRational> mono(n, BigRational(0));
  std::vector<BigRational> basis{BigRational(1)};  // binom(x, j) as a polynomial
  for (int j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < basis.size(); ++i) mono[i] += BigRational(newton[j]) * basis[i];
    // basis *= (x - j) / (j + 1)
    std::vector<BigRational> next(basis.size() + 1, BigRational(0));
    for (std::size_t i = 0; i < basis.size(); ++i) {
      next[i + 1] += basis[i];
      next[i] -= basis[i] * j;
    }
    for (auto& v : next) {
      v /= (j + 1);
      v.canonicalize();
    }
    basis = std::move(next);
  }
  std::vector<BigInt> out;
  for (auto& m : mono) {
    m.canonicalize();
    if (m.get_den() != 1) throw Error("internal: non-integral discriminant interpolation");
    out.push_back(m.get_num());
  }
  return out;
}

struct Walker {
  int n;
  const EnumerationTask& task;
  const CandidateSink& sink;
  EnumerationSummary& sum;
  BigInt X;
  long double T2 = 0;
  HunterBox box;
  std::vector<long double> sbound;  // sbound[k] = T2^{k/2}
  std::vector<std::int64_t> c;       // c[i] = a_{n-i}
  std::vector<__int128> s;           // power sums s_1..s_n
  std::vector<BigInt> dpoly;         // discriminant as a polynomial in a_0
  bool dpoly_ready = false;
  int max_r1;

  Walker(int n_, const EnumerationTask& t, const CandidateSink& sk, EnumerationSummary& su)
      : n(n_), task(t), sink(sk), sum(su), X(t.bound_floor()), c(n_ + 1), s(n_ + 1), max_r1(t.signatures.max_r1()) {}

  void set_trace(int t) {
    T2 = t2_bound(n, task.bound, t);
    box = coefficient_bounds(n, t, T2);
    sbound.assign(n + 1, 0);
    for (int k = 1; k <= n; ++k) sbound[k] = powl(T2, k / 2.0L);
    c[0] = 1;
    c[1] = -t;
    s[1] = t;
  }

  /// Interval of c_k allowed by |s_k| <= T2^{k/2}, given c_1..c_{k-1}.
  std::pair<std::int64_t, std::int64_t> range(int k) const {
    auto [lo, hi] = box.ranges[k - 2];
    if (k == 2 || task.deep_prune) {
      // s_k = -(k c_k + sum_{i<k} c_i s_{k-i})
      __int128 rest = 0;
      for (int i = 1; i < k; ++i) rest += static_cast<__int128>(c[i]) * s[k - i];
      const long double R = static_cast<long double>(rest);
      lo = std::max(lo, ceil_div_ld((-sbound[k] - R) / k));
      hi = std::min(hi, floor_div_ld((sbound[k] - R) / k));
    }
    return {lo, hi};
  }

  void set_coeff(int k, std::int64_t v) {
    c[k] = v;
    __int128 acc = static_cast<__int128>(k) * v;
    for (int i = 1; i < k; ++i) acc += static_cast<__int128>(c[i]) * s[k - i];
    s[k] = -acc;
  }

  void walk(int k) {
    if (k == n) {
      dpoly_ready = false;
      auto [lo, hi] = range(n);
      for (std::int64_t a0 = lo; a0 <= hi; ++a0) {
        if (a0 == 0) continue;
        c[n] = a0;
        leaf();
      }
      return;
    }
    auto [lo, hi] = range(k);
    for (std::int64_t v = lo; v <= hi; ++v) {
      set_coeff(k, v);
      walk(k + 1);
    }
  }

  __int128 eval(int x) const {
    __int128 v = 1;
    for (int i = 1; i <= n; ++i) v = v * x + c[i];
    return v;
  }

  void leaf() {
    ++sum.leaves;
    // real roots are at least the sign changes over -inf, -3..3, +inf
    int changes = 0;
    int prev = n % 2 == 0 ? 1 : -1;
    for (int x = -3; x <= 3; ++x) {
      const __int128 v = eval(x);
      if (v == 0) {  // rational root
        ++sum.reducible;
        return;
      }
      const int sg = v > 0 ? 1 : -1;
      if (sg != prev) ++changes;
      prev = sg;
    }
    if (prev != 1) ++changes;
    if (changes > max_r1) {
      ++sum.sign_rejected;
      return;
    }
    if (!dpoly_ready) {
      dpoly = disc_in_constant(n, c);
      dpoly_ready = true;
    }
    BigInt D = 0;
    const BigInt a0 = big_from_i64(c[n]);
    for (int i = n - 1; i >= 0; --i) D = D * a0 + dpoly[i];
    if (sgn(D) == 0) {
      ++sum.reducible;
      return;
    }
    if (!task.signatures.allows_disc_sign(sgn(D))) {
      ++sum.signature_rejected;
      return;
    }
    if (abs_big(D) > X && abs_big(D) > X * square_divisor_bound(D)) {
      ++sum.disc_rejected;
      return;
    }
    std::vector<std::int64_t> low(n + 1);
    for (int i = 0; i <= n; ++i) low[n - i] = c[i];
    IntPoly f = IntPoly::from_i64(low);
    if (!is_irreducible_over_Q(f)) {
      ++sum.reducible;
      return;
    }
    const int r1 = count_real_roots(f);
    if (!task.signatures.allows_r1(r1)) {
      ++sum.signature_rejected;
      return;
    }
    ++sum.emitted;
    sink(Candidate{std::move(f), r1, std::move(D)});
  }
};

}  // namespace hunter_detail

/// Splits a task into parts slices; prefix block i goes to slice i mod parts.
inline std::vector<EnumerationTask> shard(const EnumerationTask& task, int parts) {
  if (parts < 1) throw BadSupport("shard count must be positive");
  std::vector<EnumerationTask> out;
  for (int i = 0; i < parts; ++i) {
    EnumerationTask t = task;
    t.shard_index = task.shard_index + i * task.shard_count;
    t.shard_count = task.shard_count * parts;
    t.cursor.reset();
    out.push_back(t);
  }
  return out;
}

/// Prefix blocks belonging to the slice of task, in order.
inline std::vector<Prefix> slice_prefixes(const EnumerationTask& task) {
  const auto all = hunter_detail::all_prefixes(task.degree, task.bound);
  std::vector<Prefix> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (static_cast<int>(i % task.shard_count) == task.shard_index) out.push_back(all[i]);
  return out;
}

/// Walks the slice after its cursor. Candidates that survive the coefficient
/// prunes, a nonzero constant term, the sign and discriminant prefilters,
/// irreducibility and the Sturm signature go to sink. done is called after
/// every completed prefix block; stop is polled between blocks.
inline EnumerationSummary enumerate_candidates(const EnumerationTask& task, const CandidateSink& sink,
                                               const PrefixDone& done = {}, const std::atomic<bool>* stop = nullptr) {
  check_degree(task.degree);
  if (task.signatures.degree != task.degree) throw BadSupport("signature set does not match degree");
  if (task.bound < 1) throw BadSupport("discriminant bound must be at least 1");
  EnumerationSummary sum;
  const int n = task.degree;
  const auto prefixes = slice_prefixes(task);
  std::size_t start = 0;
  if (task.cursor) {
    while (start < prefixes.size() && !(prefixes[start] == *task.cursor)) ++start;
    if (start == prefixes.size()) throw CheckpointError("cursor is not a prefix of this slice");
    ++start;
  }
  hunter_detail::Walker w(n, task, sink, sum);
  int current_t = -1;
  for (std::size_t i = start; i < prefixes.size(); ++i) {
    if (stop && stop->load()) return sum;
    const Prefix& p = prefixes[i];
    if (p.t != current_t) {
      w.set_trace(p.t);
      current_t = p.t;
    }
    w.set_coeff(2, p.a2);
    if (n == 2) {
      w.dpoly_ready = false;
      w.leaf();
    } else {
      w.walk(3);
    }
    sum.last = p;
    ++sum.prefixes_done;
    if (done) done(p, sum);
  }
  sum.complete = true;
  return sum;
}

/// Resumable state of one slice.
struct Checkpoint {
  int degree = 0;
  std::string bound;
  std::string signature;
  int shard_index = 0;
  int shard_count = 1;
  bool deep_prune = false;
  std::optional<Prefix> cursor;
  std::uint64_t records = 0;
  bool complete = false;
};

/// Writes key=value lines to a temporary file and renames it into place.
inline void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw CheckpointError("cannot write " + tmp);
    out << "format=fieldcensus-checkpoint-1\n";
    out << "degree=" << cp.degree << "\n";
    out << "bound=" << cp.bound << "\n";
    out << "signature=" << cp.signature << "\n";
    out << "shard=" << cp.shard_index << "\n";
    out << "shards=" << cp.shard_count << "\n";
    out << "deep_prune=" << (cp.deep_prune ? 1 : 0) << "\n";
    out << "cursor=";
    if (cp.cursor) out << cp.cursor->t << "," << cp.cursor->a2;
    else out << "none";
    out << "\n";
    out << "records=" << cp.records << "\n";
    out << "complete=" << (cp.complete ? 1 : 0) << "\n";
    out.flush();
    if (!out) throw CheckpointError("short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CheckpointError("cannot rename " + tmp + ": " + ec.message());
}

inline Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot read " + path.string());
  std::map<std::string, std::string> kv;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw CheckpointError("malformed line '" + line + "' in " + path.string());
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto get = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw CheckpointError("missing key '" + key + "' in " + path.string());
    return it->second;
  };
  if (get("format") != "fieldcensus-checkpoint-1") throw FormatVersionMismatch("unknown checkpoint format in " + path.string());
  Checkpoint cp;
  try {
    cp.degree = std::stoi(get("degree"));
    cp.bound = get("bound");
    cp.signature = get("signature");
    cp.shard_index = std::stoi(get("shard"));
    cp.shard_count = std::stoi(get("shards"));
    cp.deep_prune = get("deep_prune") == "1";
    const std::string cur = get("cursor");
    if (cur != "none") {
      const auto comma = cur.find(',');
      if (comma == std::string::npos) throw CheckpointError("bad cursor '" + cur + "'");
      cp.cursor = Prefix{std::stoi(cur.substr(0, comma)), std::stoll(cur.substr(comma + 1))};
    }
    cp.records = std::stoull(get("records"));
    cp.complete = get("complete") == "1";
  } catch (const std::invalid_argument&) {
    throw CheckpointError("non-numeric field in " + path.string());
  } catch (const std::out_of_range&) {
    throw CheckpointError("numeric field out of range in " + path.string());
  }
  return cp;
}

}  // namespace fieldcensus
