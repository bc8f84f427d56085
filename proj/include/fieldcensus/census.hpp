#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fieldcensus/canon.hpp"
#include "fieldcensus/errors.hpp"
#include "fieldcensus/exactmath/bigint.hpp"
#include "fieldcensus/exactmath/intpoly.hpp"
#include "fieldcensus/galois/galois.hpp"
#include "fieldcensus/heuristics/abelian_group.hpp"

namespace fieldcensus {

inline constexpr int kRecordFormatVersion = 1;

struct FieldRecord {
  int degree = 0;
  int r1 = 0;
  BigInt dk;
  /// a_0 .. a_{n-1} of the monic canonical polynomial.
  std::vector<BigInt> coeffs;
  std::string label;
  Certainty certainty = Certainty::Statistical;
  std::optional<AbelianGroupType> classgroup;

  IntPoly poly() const {
    std::vector<BigInt> c = coeffs;
    c.emplace_back(1);
    return IntPoly(std::move(c));
  }
};

/// (|d_K|, d_K, coefficients) order of the store.
inline bool record_less(const FieldRecord& a, const FieldRecord& b) {
  const int c = cmp(abs_big(a.dk), abs_big(b.dk));
  if (c != 0) return c < 0;
  if (a.dk != b.dk) return a.dk < b.dk;
  return a.coeffs < b.coeffs;
}

inline std::string format_record(const FieldRecord& r) {
  std::string s = std::to_string(r.degree) + "\t" + std::to_string(r.r1) + "\t" + r.dk.get_str() + "\t" + r.label + "\t" +
                  certainty_name(r.certainty);
  for (const auto& c : r.coeffs) s += "\t" + c.get_str();
  if (r.classgroup) s += "\t" + r.classgroup->to_string();
  return s;
}

inline FieldRecord parse_record(const std::string& line) {
  std::vector<std::string> f;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t end = line.find('\t', pos);
    if (end == std::string::npos) end = line.size();
    f.push_back(line.substr(pos, end - pos));
    pos = end + 1;
  }
  if (f.size() < 6) throw ParseError("short record line: " + line);
  FieldRecord r;
  try {
    r.degree = std::stoi(f[0]);
    r.r1 = std::stoi(f[1]);
  } catch (const std::exception&) {
    throw ParseError("bad degree or r1 in: " + line);
  }
  if (r.degree < 2 || r.degree > 11) throw ParseError("degree out of range in: " + line);
  if (f.size() != static_cast<std::size_t>(5 + r.degree) && f.size() != static_cast<std::size_t>(6 + r.degree))
    throw ParseError("wrong field count in: " + line);
  r.dk = big_from_string(f[2]);
  r.label = f[3];
  r.certainty = parse_certainty(f[4]);
  for (int i = 0; i < r.degree; ++i) r.coeffs.push_back(big_from_string(f[5 + i]));
  if (f.size() == static_cast<std::size_t>(6 + r.degree)) r.classgroup = AbelianGroupType::parse(f.back());
  return r;
}

struct StoreHeader {
  int version = kRecordFormatVersion;
  int degree = 0;
  std::string signature;
  BigInt bound = 0;
  int canon = kCanonVersion;
  /// Further provenance (job id, tool version, shard layout).
  std::map<std::string, std::string> extra;

  std::string to_string() const {
    std::string s = "#fieldcensus v" + std::to_string(version) + " degree=" + std::to_string(degree) +
                    " signature=" + signature + " bound=" + bound.get_str() + " canon=" + std::to_string(canon);
    for (const auto& [k, v] : extra) s += " " + k + "=" + v;
    return s;
  }

  static StoreHeader parse(const std::string& line) {
    std::istringstream in(line);
    std::string magic, ver;
    in >> magic >> ver;
    if (magic != "#fieldcensus") throw ParseError("missing #fieldcensus header");
    if (ver != "v" + std::to_string(kRecordFormatVersion)) throw FormatVersionMismatch("record format " + ver);
    StoreHeader h;
    for (std::string tok; in >> tok;) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw ParseError("bad header token '" + tok + "'");
      const std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
      if (k == "degree") h.degree = std::stoi(v);
      else if (k == "signature") h.signature = v;
      else if (k == "bound") h.bound = big_from_string(v);
      else if (k == "canon") h.canon = std::stoi(v);
      else h.extra[k] = v;
    }
    if (h.canon != kCanonVersion) throw FormatVersionMismatch("canonical form version " + std::to_string(h.canon));
    return h;
  }
};

/// Records sorted by record_less and unique by canonical coefficients.
struct FieldStore {
  StoreHeader header;
  std::vector<FieldRecord> records;

  void normalize() {
    std::stable_sort(records.begin(), records.end(), record_less);
    std::vector<FieldRecord> out;
    for (auto& r : records) {
      if (out.empty() || out.back().coeffs != r.coeffs || out.back().dk != r.dk) {
        out.push_back(std::move(r));
      } else if (!out.back().classgroup && r.classgroup) {
        out.back().classgroup = r.classgroup;
      }
    }
    records = std::move(out);
  }

  void write(std::ostream& out) const {
    out << header.to_string() << "\n";
    for (const auto& r : records) out << format_record(r) << "\n";
  }

  void write(const std::filesystem::path& path) const {
    const auto tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw SinkFailure("cannot write " + tmp);
      write(out);
      out.flush();
      if (!out) throw SinkFailure("short write to " + tmp);
    }
    std::filesystem::rename(tmp, path);
  }

  static FieldStore read(std::istream& in, const std::string& name = "<stream>") {
    FieldStore s;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty store " + name);
    s.header = StoreHeader::parse(line);
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      FieldRecord r = parse_record(line);
      if (r.degree != s.header.degree) throw FormatVersionMismatch("record of degree " + std::to_string(r.degree) + " in " + name);
      s.records.push_back(std::move(r));
    }
    return s;
  }

  static FieldStore read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return read(in, path.string());
  }
};

/// Union of stores of one degree, deduplicated and sorted. The bound of the
/// result is the smallest input bound.
inline FieldStore store_merge(const std::vector<FieldStore>& inputs) {
  if (inputs.empty()) throw BadSupport("nothing to merge");
  FieldStore out;
  out.header = inputs.front().header;
  out.header.extra.clear();
  for (const auto& s : inputs) {
    if (s.header.degree != out.header.degree) throw FormatVersionMismatch("cannot merge degrees " + std::to_string(s.header.degree) + " and " + std::to_string(out.header.degree));
    if (s.header.version != out.header.version || s.header.canon != out.header.canon) throw FormatVersionMismatch("mixed format versions");
    if (s.header.signature != out.header.signature) out.header.signature = "mixed";
    if (s.header.bound < out.header.bound) out.header.bound = s.header.bound;
    out.records.insert(out.records.end(), s.records.begin(), s.records.end());
  }
  // provenance keys shared by every input survive the merge
  for (const auto& [k, v] : inputs.front().header.extra) {
    if (k == "shard" || k == "shards") continue;
    bool shared = true;
    for (const auto& s : inputs) {
      auto it = s.header.extra.find(k);
      if (it == s.header.extra.end() || it->second != v) shared = false;
    }
    if (shared) out.header.extra[k] = v;
  }
  out.normalize();
  return out;
}

/// True when |d| <= 10^{i/10}, i.e. d^10 <= 10^i.
inline bool below_checkpoint(const BigInt& d, int i) {
  return pow_big(abs_big(d), 10) <= pow_big(BigInt(10), static_cast<unsigned>(i));
}

inline std::uint64_t count_up_to(const FieldStore& store, const std::string& label, const BigInt& X) {
  if (X > store.header.bound) throw BeyondCertifiedBound("X = " + X.get_str() + " exceeds the enumerated bound " + store.header.bound.get_str());
  auto end = std::upper_bound(store.records.begin(), store.records.end(), X,
                              [](const BigInt& x, const FieldRecord& r) { return x < abs_big(r.dk); });
  std::uint64_t n = 0;
  for (auto it = store.records.begin(); it != end; ++it)
    if (it->label == label) ++n;
  return n;
}

struct CurvePoint {
  int i = 0;
  std::uint64_t count = 0;
  bool complete = true;
  long double x() const { return powl(10.0L, i / 10.0L); }
};

struct CountingCurve {
  std::string label;
  std::vector<CurvePoint> points;
};

/// N(label, 10^{i/10}) for i = i_min..i_max; points beyond the bound are flagged incomplete.
inline CountingCurve counting_curve(const FieldStore& store, const std::string& label, int i_min, int i_max) {
  CountingCurve c;
  c.label = label;
  std::size_t idx = 0;
  std::uint64_t n = 0;
  for (int i = i_min; i <= i_max; ++i) {
    while (idx < store.records.size() && below_checkpoint(store.records[idx].dk, i)) {
      if (store.records[idx].label == label) ++n;
      ++idx;
    }
    // complete when 10^{i/10} <= bound
    c.points.push_back({i, n, pow_big(BigInt(10), static_cast<unsigned>(i)) <= pow_big(store.header.bound, 10)});
  }
  return c;
}

/// CSV X,N with a provenance comment line.
inline std::string curve_csv(const CountingCurve& c, const StoreHeader& h) {
  std::string s = "# " + h.to_string().substr(1) + " label=" + c.label + "\nX,N\n";
  char buf[64];
  for (const auto& p : c.points) {
    if (!p.complete) continue;
    std::snprintf(buf, sizeof buf, "%.10Lg", p.x());
    s += std::string(buf) + "," + std::to_string(p.count) + "\n";
  }
  return s;
}

struct ErrorDiagnostics {
  long double E = 0;
  long double alpha1 = 0;
  std::optional<long double> alpha2;
};

/// E = B X - N(X), alpha_1 = ln E / ln X, alpha_2 = ln(E(X) / E(X/2)) / ln 2.
inline ErrorDiagnostics error_term(long double B, long double X, std::uint64_t n_x, std::optional<std::uint64_t> n_half = {}) {
  ErrorDiagnostics d;
  d.E = B * X - static_cast<long double>(n_x);
  if (d.E <= 0) throw NonpositiveErrorTerm("E = " + std::to_string(static_cast<double>(d.E)) + " at X = " + std::to_string(static_cast<double>(X)));
  d.alpha1 = logl(d.E) / logl(X);
  if (n_half) {
    const long double Eh = B * X / 2 - static_cast<long double>(*n_half);
    if (Eh <= 0) throw NonpositiveErrorTerm("E(X/2) = " + std::to_string(static_cast<double>(Eh)));
    d.alpha2 = logl(d.E / Eh) / logl(2.0L);
  }
  return d;
}

/// Error diagnostics from a store; X/2 is counted as |d_K| <= X/2.
inline ErrorDiagnostics error_term(long double B, const FieldStore& store, const std::string& label, const BigInt& X) {
  const std::uint64_t n = count_up_to(store, label, X);
  BigInt half = X / 2;  // |d| <= X/2 iff |d| <= floor(X/2) for integers
  const std::uint64_t nh = count_up_to(store, label, half);
  return error_term(B, X.get_d(), n, nh);
}

/// k -> number of discriminants shared by exactly k fields among the first
/// `first` records with the label.
inline std::map<int, std::uint64_t> multiplicity_histogram(const FieldStore& store, const std::string& label, std::size_t first) {
  std::map<BigInt, int> mult;
  std::size_t taken = 0;
  for (const auto& r : store.records) {
    if (taken == first) break;
    if (r.label != label) continue;
    ++mult[r.dk];
    ++taken;
  }
  if (taken < first) throw BadSupport("store has only " + std::to_string(taken) + " records labelled " + label);
  std::map<int, std::uint64_t> hist;
  for (const auto& [d, k] : mult) ++hist[k];
  return hist;
}

struct FitResult {
  long double B = 0;
  long double c1 = 0, c2 = 0, c3 = 0;
  long double residual_norm = 0;
  long double condition = 0;
  int i_min = 0;
  std::size_t points = 0;
};

/// Least squares for N - B X against X^{5/6}, X^{3/4} ln X, X^{3/4} by Householder QR.
inline FitResult fit_secondary_terms(const std::vector<std::pair<long double, long double>>& xn, long double B) {
  const std::size_t m = xn.size();
  if (m < 3) throw RankDeficient("need at least 3 checkpoints, have " + std::to_string(m));
  std::vector<std::array<long double, 3>> A(m);
  std::vector<long double> y(m);
  for (std::size_t r = 0; r < m; ++r) {
    const long double X = xn[r].first;
    const long double x34 = powl(X, 0.75L);
    A[r] = {powl(X, 5.0L / 6.0L), x34 * logl(X), x34};
    y[r] = xn[r].second - B * X;
  }
  // column scaling keeps the factorization well conditioned
  std::array<long double, 3> scale{};
  for (int c = 0; c < 3; ++c) {
    long double s = 0;
    for (std::size_t r = 0; r < m; ++r) s += A[r][c] * A[r][c];
    scale[c] = sqrtl(s);
    if (scale[c] == 0) throw RankDeficient("zero column");
    for (std::size_t r = 0; r < m; ++r) A[r][c] /= scale[c];
  }
  for (int c = 0; c < 3; ++c) {
    long double norm = 0;
    for (std::size_t r = c; r < m; ++r) norm += A[r][c] * A[r][c];
    norm = sqrtl(norm);
    if (norm == 0) throw RankDeficient("dependent columns");
    const long double alpha = A[c][c] > 0 ? -norm : norm;
    std::vector<long double> v(m, 0);
    for (std::size_t r = c; r < m; ++r) v[r] = A[r][c];
    v[c] -= alpha;
    long double vv = 0;
    for (std::size_t r = c; r < m; ++r) vv += v[r] * v[r];
    if (vv == 0) continue;
    for (int k = c; k < 3; ++k) {
      long double d = 0;
      for (std::size_t r = c; r < m; ++r) d += v[r] * A[r][k];
      for (std::size_t r = c; r < m; ++r) A[r][k] -= 2 * d / vv * v[r];
    }
    long double d = 0;
    for (std::size_t r = c; r < m; ++r) d += v[r] * y[r];
    for (std::size_t r = c; r < m; ++r) y[r] -= 2 * d / vv * v[r];
  }
  long double rmax = 0, rmin = INFINITY;
  for (int c = 0; c < 3; ++c) {
    rmax = std::max(rmax, fabsl(A[c][c]));
    rmin = std::min(rmin, fabsl(A[c][c]));
  }
  if (rmin <= 1e-15L * rmax) throw RankDeficient("checkpoints do not determine three terms");
  std::array<long double, 3> x{};
  for (int c = 2; c >= 0; --c) {
    long double s = y[c];
    for (int k = c + 1; k < 3; ++k) s -= A[c][k] * x[k];
    x[c] = s / A[c][c];
  }
  FitResult f;
  f.B = B;
  f.c1 = x[0] / scale[0];
  f.c2 = x[1] / scale[1];
  f.c3 = x[2] / scale[2];
  long double res = 0;
  for (std::size_t r = 3; r < m; ++r) res += y[r] * y[r];
  f.residual_norm = sqrtl(res);
  f.condition = rmax / rmin;
  f.points = m;
  return f;
}

/// Fit over the complete checkpoints i >= i_min of a curve.
inline FitResult fit_secondary_terms(const CountingCurve& curve, long double B, int i_min) {
  std::vector<std::pair<long double, long double>> xn;
  for (const auto& p : curve.points)
    if (p.i >= i_min && p.complete) xn.emplace_back(p.x(), static_cast<long double>(p.count));
  FitResult f = fit_secondary_terms(xn, B);
  f.i_min = i_min;
  return f;
}

/// P = B X + c' X^{5/6} + c'' X^{3/4} ln X + c''' X^{3/4} (natural logarithm).
inline long double predict_P(long double B, long double c1, long double c2, long double c3, long double X) {
  const long double x34 = powl(X, 0.75L);
  return B * X + c1 * powl(X, 5.0L / 6.0L) + c2 * x34 * logl(X) + c3 * x34;
}

/// Delta = ln |N - P| / ln X.
inline long double delta_diag(long double N, long double P, long double X) { return logl(fabsl(N - P)) / logl(X); }

}  // namespace fieldcensus
