// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance --only N   run criterion N
//
// Enumeration jobs live under ACCEPTANCE_WORK_DIR and are resumed, so a
// finished job is reused by later criteria and later runs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "fieldcensus/census.hpp"
#include "fieldcensus/heuristics/heuristics.hpp"
#include "fieldcensus/pipeline.hpp"
#include "support/group_oracle.hpp"

using namespace fieldcensus;
namespace fs = std::filesystem;

namespace {

constexpr int kDeclared = 77;

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back((ok ? "" : "MISMATCH ") + what);
  }
  void info(const std::string& what) { notes.push_back(what); }
};

std::string fmt(long double v, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << static_cast<double>(v);
  return os.str();
}

/// True when v rounds to the printed decimal string at its own precision.
bool matches_printed(long double v, const std::string& printed) {
  const auto dot = printed.find('.');
  const int decimals = dot == std::string::npos ? 0 : static_cast<int>(printed.size() - dot - 1);
  const long double scale = powl(10.0L, decimals);
  return llroundl(v * scale) == llroundl(std::stold(printed) * scale);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- censuses

struct Census {
  FieldStore store;
  double seconds = 0;  // wall time of the run that produced the store
  bool reused = false;
};

Census census(int degree, const std::string& signature, long bound, int shards) {
  JobConfig cfg;
  cfg.degree = degree;
  cfg.signature = signature;
  cfg.bound = bound;
  cfg.shards = shards;
  cfg.out_dir = fs::path(ACCEPTANCE_WORK_DIR) / cfg.job_id();
  const fs::path timing = cfg.out_dir / "elapsed-seconds";
  Census c;
  if (fs::exists(cfg.out_dir / "store.tsv") && fs::exists(timing)) {
    std::ifstream(timing) >> c.seconds;
    c.reused = true;
  } else {
    double before = 0;
    if (fs::exists(timing)) std::ifstream(timing) >> before;
    std::cerr << "running " << cfg.job_id() << " in " << cfg.out_dir << "\n";
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& o : run_job(cfg))
      if (!o.summary.complete) throw CheckpointError("shard " + std::to_string(o.shard) + " of " + cfg.job_id() + " incomplete");
    c.seconds = before + seconds_since(t0);
    std::ofstream(timing) << c.seconds << "\n";
  }
  c.store = FieldStore::read(cfg.out_dir / "store.tsv");
  return c;
}

std::string timing_note(const Census& c) {
  return "run time " + fmt(c.seconds, 4) + " s" + (c.reused ? " (recorded by an earlier run)" : "");
}

// ---------------------------------------------------------------- criteria

Verdict bhargava_constants() {
  Verdict v;
  const std::map<int, std::string> printed = {{4, "0.07604314"}, {5, "0.08635053"}, {6, "0.01702530"}, {7, "0.01822185"},
                                              {8, "0.00246880"}, {9, "0.00257368"}, {10, "0.00026840"}, {11, "0.00027478"}};
  const auto t0 = std::chrono::steady_clock::now();
  const std::string out_file = (fs::temp_directory_path() / "fieldcensus-acceptance-bhargava.txt").string();
  const std::string cmd = std::string(FIELDCENSUS_CLI) + " bhargava --degree 4..11 --signature r1le1 --method both --digits 12 >" + out_file;
  const int raw = std::system(cmd.c_str());
  const double secs = seconds_since(t0);
  v.check(WIFEXITED(raw) && WEXITSTATUS(raw) == 0, "bhargava exit status");
  std::ifstream in(out_file);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  long double worst = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    int n;
    long double pz, pz_err, direct, direct_err;
    std::string agree;
    if (!(ls >> n >> pz >> pz_err >> direct >> direct_err >> agree)) continue;
    ++rows;
    const long double diff = fabsl(pz - std::stold(printed.at(n)));
    worst = std::max(worst, diff);
    v.check(diff < 5e-9L, "B_" + std::to_string(n) + " = " + fmt(pz, 10));
    // the two routes are compared here as well as by the tool
    const bool routes = fabsl(pz - direct) <= pz_err + direct_err && agree == "yes";
    if (!routes) v.check(false, "routes disagree at n = " + std::to_string(n));
  }
  v.check(rows == 8, std::to_string(rows) + " of 8 constants");
  v.info("max |computed - printed| = " + fmt(worst, 3));
  v.check(secs < 60, "runtime " + fmt(secs, 3) + " s");
  return v;
}

Verdict quartic_census() {
  Verdict v;
  const auto c = census(4, "tc", 100000, 4);
  for (auto [X, want] : std::vector<std::pair<long, std::uint64_t>>{{1000, 8}, {10000, 206}, {100000, 3374}}) {
    const auto n = count_up_to(c.store, "S4", X);
    v.check(n == want, "N(S4, " + std::to_string(X) + ") = " + std::to_string(n));
  }
  v.check(c.seconds < 600, timing_note(c));
  return v;
}

Verdict error_diagnostics() {
  Verdict v;
  const auto c = census(4, "tc", 100000, 4);
  EulerProductJob job;
  job.degree = 4;
  job.signatures = SignatureSet::preset("tc", 4);
  job.digits = 20;
  const long double B = bhargava_constant(job).value.to_long_double();
  const auto d = error_term(B, c.store, "S4", 100000);
  v.check(llroundl(d.E) == 4230, "E = " + fmt(d.E, 8));
  v.check(matches_printed(d.alpha1, ".725"), "alpha1 = " + fmt(d.alpha1, 5));
  v.check(d.alpha2 && matches_printed(*d.alpha2, ".887"), "alpha2 = " + fmt(d.alpha2.value_or(0), 5) +
                                                            " with N(S4, 50000) = " + std::to_string(count_up_to(c.store, "S4", 50000)));
  return v;
}

Verdict quintic_census() {
  Verdict v;
  const auto small = census(5, "r1le1", 10000, 2);
  v.check(count_up_to(small.store, "S5", 10000) == 69, "10^4 S5 = " + std::to_string(count_up_to(small.store, "S5", 10000)));
  v.check(count_up_to(small.store, "D5", 10000) == 2, "10^4 D5 = " + std::to_string(count_up_to(small.store, "D5", 10000)));
  const auto big = census(5, "r1le1", 100000, 8);
  for (auto [label, want] : std::vector<std::pair<std::string, std::uint64_t>>{{"S5", 1714}, {"A5", 4}, {"F20", 4}, {"D5", 13}}) {
    const auto n = count_up_to(big.store, label, 100000);
    v.check(n == want, "10^5 " + label + " = " + std::to_string(n));
  }
  int proven = 0, witnessed = 0, unsupported = 0;
  for (const auto& r : big.store.records) {
    if (r.label != "A5" && r.label != "F20" && r.label != "D5") continue;
    if (r.certainty == Certainty::Proven) {
      ++proven;
      continue;
    }
    const auto g = identify_group(r.poly(), r.dk, r.r1);
    if (g.name == r.label && !g.witnesses.empty())
      ++witnessed;
    else
      ++unsupported;
  }
  v.check(unsupported == 0, "labels: " + std::to_string(proven) + " proven, " + std::to_string(witnessed) + " statistical with witnesses");
  v.check(big.seconds < 7200, timing_note(big));
  return v;
}

Verdict sextic_census() {
  Verdict v;
  const auto c = census(6, "tc", 100000, 4);
  const auto n = count_up_to(c.store, "S6", 100000);
  v.check(n == 74, "N(S6, 10^5) = " + std::to_string(n));
  v.info(timing_note(c));
  return v;
}

Verdict prediction_formula() {
  Verdict v;
  EulerProductJob job;
  job.degree = 4;
  job.signatures = SignatureSet::preset("tc", 4);
  job.digits = 20;
  const long double B = bhargava_constant(job).value.to_long_double();
  const std::vector<std::pair<int, long double>> table = {{5, 3377}, {6, 44163}, {7, 525012}, {8, 5892769}, {9, 63748073}};
  long double worst = 0;
  for (auto [i, printed] : table) {
    const long double X = powl(10.0L, i);
    const long double P = predict_P(B, -0.50856L, 0.0106L, 0.4533L, X);
    const long double rel = fabsl(P - printed) / printed;
    worst = std::max(worst, rel);
    v.check(rel < 1e-3L, "P(10^" + std::to_string(i) + ") = " + fmt(P, 10));
  }
  v.info("max relative deviation " + fmt(worst, 3));
  const long double delta = delta_diag(63748067, 63748073, 1e9L);
  v.check(matches_printed(delta, ".09"), "Delta(10^9) = " + fmt(delta, 4));
  return v;
}

Verdict fit_machinery() {
  Verdict v;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1, 1);
  long double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const long double B = 0.05L + 0.05L * u(rng), c1 = u(rng), c2 = 0.1L * u(rng), c3 = u(rng);
    std::vector<std::pair<long double, long double>> xn;
    for (int i = 20; i <= 90; ++i) {
      const long double X = powl(10.0L, i / 10.0L);
      xn.emplace_back(X, predict_P(B, c1, c2, c3, X));
    }
    const auto f = fit_secondary_terms(xn, B);
    worst = std::max({worst, fabsl(f.c1 - c1), fabsl(f.c2 - c2), fabsl(f.c3 - c3)});
  }
  v.check(worst < 1e-9L, "50 synthetic curves, max coefficient error " + fmt(worst, 3));
  return v;
}

Verdict heuristic_constants() {
  Verdict v;
  const long double c5 = cm_constant(2, {5}).to_long_double();
  v.check(fabsl(c5 - 0.7240198L) < 5e-8L, "c(2,{5}) = " + fmt(c5, 10));
  const long double c23 = cm_constant(2, {2, 3}).to_long_double();
  v.check(fabsl(c23 - 0.984725L) < 5e-7L, "c(2,{2,3}) = " + fmt(c23, 10));
  const std::vector<std::pair<std::string, std::string>> t6 = {{"1", ".7545"},  {"3", ".126"},    {"5", ".0377"},
                                                                {"7", ".0180"},  {"9", ".0140"},   {"3^2", ".00175"},
                                                                {"11", ".00686"}, {"13", ".00484"}, {"15", ".00629"}};
  for (const auto& [g, printed] : t6) {
    const long double p = cm_probability(parse_group_label(g), 1, {2}).to_long_double();
    v.check(matches_printed(p, printed), "odd part " + g + ": " + fmt(p, 4));
  }
  const std::vector<std::pair<std::string, std::string>> t9 = {{"1", ".724"},  {"2", ".181"},   {"3", ".0402"},
                                                                {"4", ".0227"},  {"2^2", ".0075"}, {"6", ".0100"},
                                                                {"7", ".0025"},  {"8", ".0028"},   {"4x2", ".0014"}};
  for (const auto& [g, printed] : t9) {
    const long double p = cm_probability(parse_group_label(g), 2, {5}).to_long_double();
    v.check(matches_printed(p, printed), "5'-part " + g + ": " + fmt(p, 4));
  }
  return v;
}

Verdict malle_formula() {
  Verdict v;
  const std::vector<std::pair<std::string, std::string>> row = {
      {"1", ".739"},  {"2", ".162"},   {"3", ".0411"},   {"4", ".0197"},  {"2^2", ".013"}, {"6", ".0090"},
      {"7", ".0025"}, {"8", ".0025"}, {"4x2", ".0023"}, {"2^3", ".00043"}, {"9", ".0015"}, {"3^2", ".00019"}};
  for (const auto& [g, printed] : row) {
    const long double p = malle_five_prime_probability(parse_group_label(g));
    v.check(matches_printed(p, printed), g + ": " + fmt(p, 4));
  }
  const long double total = malle_weight_sum(12) * malle_normalizer();
  v.check(total > 0.999L && total < 1.0001L, "normalization over 2-groups up to 2^12 = " + fmt(total, 8));
  return v;
}

Verdict aut_counts() {
  Verdict v;
  int groups = 0, wrong = 0;
  for (int m = 1; m <= 64; ++m)
    for (const auto& g : group_oracle::abelian_groups_of_order(m)) {
      ++groups;
      const auto h = AbelianGroupType::from_cyclic(std::vector<std::uint64_t>(g.begin(), g.end()));
      if (aut_order(h) != big_from_u64(group_oracle::brute_aut_order(g))) ++wrong;
    }
  v.check(wrong == 0 && groups == 117, std::to_string(groups) + " groups, " + std::to_string(wrong) + " disagreements");
  return v;
}

Verdict dedup_soundness() {
  Verdict v;
  std::vector<FieldStore> stores = {census(4, "tc", 100000, 4).store, census(5, "r1le1", 100000, 8).store};
  const fs::path sextic = fs::path(ACCEPTANCE_WORK_DIR) / "d6-tc-100000" / "store.tsv";
  if (fs::exists(sextic)) stores.push_back(FieldStore::read(sextic));
  std::size_t records = 0, pairs = 0, collisions = 0, not_fixed = 0, duplicates = 0;
  for (const auto& s : stores) {
    std::map<BigInt, std::vector<const FieldRecord*>> by_disc;
    std::set<std::vector<BigInt>> seen;
    for (const auto& r : s.records) {
      ++records;
      if (!seen.insert(r.coeffs).second) ++duplicates;
      by_disc[r.dk].push_back(&r);
      const IntPoly f = r.poly();
      if (canonical_polynomial(f).poly != f) ++not_fixed;
    }
    for (const auto& [dk, rs] : by_disc)
      for (std::size_t i = 0; i < rs.size(); ++i)
        for (std::size_t j = i + 1; j < rs.size(); ++j) {
          ++pairs;
          if (fields_isomorphic(rs[i]->poly(), rs[j]->poly())) ++collisions;
        }
  }
  v.check(duplicates == 0, std::to_string(records) + " records, " + std::to_string(duplicates) + " repeated polynomials");
  v.check(collisions == 0, std::to_string(pairs) + " equal-discriminant pairs, " + std::to_string(collisions) + " isomorphic");
  v.check(not_fixed == 0, std::to_string(not_fixed) + " records change under re-canonicalization");
  return v;
}

const std::map<int, std::pair<std::string, std::function<Verdict()>>>& criteria() {
  static const std::map<int, std::pair<std::string, std::function<Verdict()>>> table = {
      {1, {"Bhargava constants", bhargava_constants}},
      {2, {"quartic totally complex census", quartic_census}},
      {3, {"error diagnostics at 10^5", error_diagnostics}},
      {4, {"quintic r1 = 1 census", quintic_census}},
      {5, {"sextic totally complex census", sextic_census}},
      {6, {"prediction formula", prediction_formula}},
      {7, {"fit machinery", fit_machinery}},
      {8, {"Cohen-Martinet constants", heuristic_constants}},
      {9, {"Malle 2-adic formula", malle_formula}},
      {10, {"automorphism counts", aut_counts}},
      {11, {"dedup soundness", dedup_soundness}},
  };
  return table;
}

const char* kDeclaredText =
    "counts at full bounds (quartics from 10^7, higher degrees), minimal discriminants of large-degree "
    "fields and class-group frequency tables need computations far beyond a desk run; covered by the "
    "property suites and the synthetic ingest round trip";

int run_one(int id) {
  if (id == 12) {
    std::cout << "DECLARED criterion 12: not reproducible here: " << kDeclaredText << std::endl;
    return kDeclared;
  }
  const auto& [name, fn] = criteria().at(id);
  Verdict v;
  try {
    v = fn();
  } catch (const std::exception& e) {
    v.check(false, std::string("error: ") + e.what());
  }
  std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << name;
  for (std::size_t i = 0; i < v.notes.size(); ++i) std::cout << (i ? "; " : " | ") << v.notes[i];
  std::cout << std::endl;
  return v.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  fs::create_directories(ACCEPTANCE_WORK_DIR);
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      const int id = std::atoi(argv[++i]);
      if (id < 1 || id > 12) {
        std::cerr << "no criterion " << argv[i] << "\n";
        return 2;
      }
      ids.push_back(id);
    } else {
      std::cerr << "usage: acceptance [--only N]\n";
      return 2;
    }
  }
  if (ids.empty())
    for (int i = 1; i <= 12; ++i) ids.push_back(i);
  int status = 0;
  bool declared = false;
  for (int id : ids) {
    const int rc = run_one(id);
    if (rc == kDeclared)
      declared = true;
    else if (rc != 0)
      status = 1;
  }
  if (status == 0 && declared && ids.size() == 1) return kDeclared;
  return status;
}
