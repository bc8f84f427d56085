// fieldcensus command-line tool.

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fieldcensus/census.hpp"
#include "fieldcensus/heuristics/heuristics.hpp"
#include "fieldcensus/pipeline.hpp"

namespace fc = fieldcensus;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIncomplete = 3;

std::atomic<bool> g_stop{false};
void on_signal(int) { g_stop = true; }

/// "100000", "1e5" or "10^5" as an exact integer.
fc::BigInt parse_bound(const std::string& text) {
  const auto caret = text.find('^');
  if (caret != std::string::npos)
    return fc::pow_big(fc::big_from_string(text.substr(0, caret)), std::stoul(text.substr(caret + 1)));
  const auto e = text.find_first_of("eE");
  if (e != std::string::npos) {
    const fc::BigInt mant = fc::big_from_string(text.substr(0, e));
    const long ex = std::stol(text.substr(e + 1));
    if (ex < 0) throw fc::BadSupport("bound must be an integer: " + text);
    return mant * fc::pow_big(fc::BigInt(10), static_cast<unsigned long>(ex));
  }
  return fc::big_from_string(text);
}

std::set<std::uint64_t> parse_prime_list(const std::string& text) {
  std::set<std::uint64_t> s;
  if (text.empty() || text == "none") return s;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) s.insert(std::stoull(item));
  return s;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string fixed(long double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*Lf", decimals, v);
  return buf;
}

/// Paper-style decimal: leading zero dropped, e.g. .725.
std::string short_decimal(long double v, int decimals) {
  std::string s = fixed(v, decimals);
  if (s.rfind("0.", 0) == 0) s.erase(0, 1);
  if (s.rfind("-0.", 0) == 0) s.erase(1, 1);
  return s;
}

std::string sig3(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3Lg", fc::round_significant(v, 3));
  return buf;
}

void write_job_conf(const fc::JobConfig& cfg) {
  std::ofstream out(cfg.out_dir / "job.conf");
  out << "degree=" << cfg.degree << "\nbound=" << cfg.bound.get_str() << "\nsignature=" << cfg.signature
      << "\nshards=" << cfg.shards << "\ndeep_prune=" << (cfg.deep_prune ? 1 : 0) << "\ngalois_primes=" << cfg.galois_primes
      << "\nfactor_effort=" << cfg.factor_effort << "\n";
}

fc::JobConfig read_job_conf(const fs::path& dir) {
  std::ifstream in(dir / "job.conf");
  if (!in) throw fc::CheckpointError("no job.conf in " + dir.string());
  std::map<std::string, std::string> kv;
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  fc::JobConfig cfg;
  try {
    cfg.degree = std::stoi(kv.at("degree"));
    cfg.bound = fc::big_from_string(kv.at("bound"));
    cfg.signature = kv.at("signature");
    cfg.shards = std::stoi(kv.at("shards"));
    cfg.deep_prune = kv.at("deep_prune") == "1";
    cfg.galois_primes = std::stoi(kv.at("galois_primes"));
    cfg.factor_effort = std::stoull(kv.at("factor_effort"));
  } catch (const std::exception&) {
    throw fc::CheckpointError("incomplete job.conf in " + dir.string());
  }
  cfg.out_dir = dir;
  return cfg;
}

int report_job(const fc::JobConfig& cfg, const std::vector<fc::ShardOutcome>& outcomes) {
  bool complete = true;
  std::uint64_t uncertified = 0;
  for (const auto& o : outcomes) {
    complete = complete && o.summary.complete;
    uncertified += o.uncertified;
  }
  if (!complete) {
    std::cerr << "job interrupted; continue with: fieldcensus resume " << cfg.out_dir.string() << "\n";
    return kExitIncomplete;
  }
  const auto store = fc::FieldStore::read(cfg.out_dir / "store.tsv");
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> by_label;  // proven, statistical
  for (const auto& r : store.records) {
    auto& e = by_label[r.label];
    (r.certainty == fc::Certainty::Proven ? e.first : e.second)++;
  }
  std::cout << "# " << store.header.to_string().substr(1) << "\n";
  std::cout << "label\tfields\tproven\tstatistical\n";
  bool statistical = false;
  for (const auto& [label, e] : by_label) {
    std::cout << label << "\t" << e.first + e.second << "\t" << e.first << "\t" << e.second << "\n";
    statistical = statistical || e.second > 0;
  }
  std::cout << "store: " << (cfg.out_dir / "store.tsv").string() << "\n";
  if (uncertified > 0) {
    std::cerr << uncertified << " field discriminants rest on an incomplete factorization\n";
    return kExitIncomplete;
  }
  if (statistical) std::cerr << "note: some labels are statistical, see the certainty column\n";
  return kExitOk;
}

fc::FieldStore load_store_arg(const std::string& arg) {
  const fs::path p(arg);
  if (fs::is_directory(p)) {
    if (fs::exists(p / "store.tsv")) return fc::FieldStore::read(p / "store.tsv");
    std::vector<fc::FieldStore> parts;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(p))
      if (e.path().extension() == ".tsv") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) parts.push_back(fc::FieldStore::read(f));
    if (parts.empty()) throw fc::ParseError("no stores in " + arg);
    return fc::store_merge(parts);
  }
  return fc::FieldStore::read(p);
}

long double bhargava_for(int degree, const std::string& signature) {
  fc::EulerProductJob job;
  job.degree = degree;
  job.signatures = fc::SignatureSet::preset(signature, degree);
  job.digits = 20;
  return fc::bhargava_constant(job).value.to_long_double();
}

std::string default_group(int degree) { return "S" + std::to_string(degree); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Enumeration and statistics of number fields of small degree"};
  app.require_subcommand(1);

  // enumerate
  fc::JobConfig cfg;
  std::string bound_text, out_dir;
  bool no_deep = false;
  auto* en = app.add_subcommand("enumerate", "Enumerate fields with |d_K| <= bound");
  en->add_option("--degree", cfg.degree, "Field degree (2..11)")->required();
  en->add_option("--bound", bound_text, "Discriminant bound, e.g. 1e5")->required();
  en->add_option("--signature", cfg.signature, "tc, r1le1, tr or r1:r2 list")->default_val("tc");
  en->add_option("--shards", cfg.shards, "Number of slices")->default_val(1);
  en->add_option("--threads", cfg.threads, "Worker threads")->default_val(1);
  en->add_option("--out", out_dir, "Output directory")->required();
  en->add_option("--galois-primes", cfg.galois_primes, "Primes sampled for Frobenius types")->default_val(100);
  en->add_option("--factor-effort", cfg.factor_effort, "Pollard-rho budget per discriminant")->default_val(1000000);
  en->add_flag("--no-deep-prune", no_deep, "Only the s_2 coefficient prune");

  // resume
  std::string resume_dir;
  int resume_threads = 1;
  auto* re = app.add_subcommand("resume", "Continue an interrupted enumeration");
  re->add_option("dir", resume_dir, "Job directory")->required();
  re->add_option("--threads", resume_threads, "Worker threads")->default_val(1);

  // merge
  std::vector<std::string> merge_inputs;
  std::string merge_out;
  auto* me = app.add_subcommand("merge", "Merge stores or job directories");
  me->add_option("inputs", merge_inputs, "Store files or job directories")->required();
  me->add_option("--out", merge_out, "Merged store file")->required();

  // stats
  std::string st_store, st_group, st_bound;
  bool st_curve = false, st_alphas = false;
  std::size_t st_mult = 0;
  std::string st_predict;
  auto* st = app.add_subcommand("stats", "Counts, curves, multiplicities and error diagnostics");
  st->add_option("--store", st_store, "Store file or job directory")->required();
  st->add_option("--group", st_group, "Galois label, default S_n");
  st->add_option("--bound", st_bound, "Count up to this X (default: store bound)");
  auto* oc = st->add_flag("--curve", st_curve, "N at X = 10^{i/10}");
  auto* om = st->add_option("--mult", st_mult, "Multiplicity histogram of the first N fields");
  auto* oa = st->add_flag("--alphas", st_alphas, "E, alpha_1, alpha_2 at decades");
  oc->excludes(om)->excludes(oa);
  om->excludes(oa);
  st->add_option("--predict", st_predict, "c',c'',c''' for the P and Delta columns");

  // fit
  std::string fit_store, fit_group;
  int fit_imin = 20;
  auto* fi = app.add_subcommand("fit", "Least-squares fit of the secondary terms");
  fi->add_option("--store", fit_store, "Store file or job directory")->required();
  fi->add_option("--group", fit_group, "Galois label, default S_n");
  fi->add_option("--imin", fit_imin, "Smallest checkpoint index i")->default_val(20);

  // bhargava
  std::string bh_degrees = "4..11", bh_signature = "r1le1", bh_method = "prime-zeta";
  int bh_digits = 8;
  std::uint64_t bh_pmax = 1000000;
  auto* bh = app.add_subcommand("bhargava", "Bhargava constants B_n");
  bh->add_option("--degree", bh_degrees, "Degree or range A..B")->default_val("4..11");
  bh->add_option("--signature", bh_signature, "Signature preset")->default_val("r1le1");
  bh->add_option("--digits", bh_digits, "Decimal digits")->default_val(8);
  bh->add_option("--method", bh_method, "prime-zeta, direct or both")->default_val("prime-zeta");
  bh->add_option("--pmax", bh_pmax, "Last prime of the direct product")->default_val(1000000);

  // heuristics
  auto* he = app.add_subcommand("heuristics", "Class group predictions");
  he->require_subcommand(1);
  int cm_e = 1;
  std::string cm_exclude = "2", cm_groups = "1,3,5,7,9,3^2,11,13,15";
  auto* cm = he->add_subcommand("cm", "Cohen-Martinet probabilities c(e,S)/(|H|^e |Aut H|)");
  cm->add_option("--e", cm_e, "Weight exponent")->default_val(1);
  cm->add_option("--exclude", cm_exclude, "Excluded primes S, comma separated")->default_val("2");
  cm->add_option("--groups", cm_groups, "Group labels such as 1,3,2^2,4x2");
  std::string ma_groups = "1,2,3,4,2^2,6,7,8,4x2,2^3,9,3^2";
  auto* ma = he->add_subcommand("malle", "2-adic corrected probabilities of 5'-parts");
  ma->add_option("--groups", ma_groups, "Group labels");

  // ingest-classgroups
  std::string in_file, in_store, in_out, in_exclude = "2";
  std::size_t in_block = 0;
  auto* ig = app.add_subcommand("ingest-classgroups", "Attach class groups and summarize their distribution");
  ig->add_option("file", in_file, "Record file with a class group column")->required();
  ig->add_option("--store", in_store, "Store to annotate (default: the file itself)");
  ig->add_option("--out", in_out, "Annotated store output");
  ig->add_option("--block", in_block, "Records per block (default: all)");
  ig->add_option("--exclude", in_exclude, "Excluded primes for the summarized part")->default_val("2");

  // export-csv
  std::string ex_store, ex_group, ex_out;
  auto* ex = app.add_subcommand("export-csv", "Counting curve as CSV X,N");
  ex->add_option("--store", ex_store, "Store file or job directory")->required();
  ex->add_option("--group", ex_group, "Galois label, default S_n");
  ex->add_option("--out", ex_out, "CSV file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  try {
    if (*en) {
      cfg.bound = parse_bound(bound_text);
      cfg.out_dir = out_dir;
      cfg.deep_prune = !no_deep;
      cfg.validate();
      fs::create_directories(cfg.out_dir);
      if (fs::exists(cfg.out_dir / "job.conf")) {
        std::cerr << cfg.out_dir.string() << " already holds a job; use resume\n";
        return kExitValidation;
      }
      write_job_conf(cfg);
      const auto outcomes = fc::run_job(cfg, &g_stop, &std::cerr);
      return report_job(cfg, outcomes);
    }
    if (*re) {
      fc::JobConfig c = read_job_conf(resume_dir);
      c.threads = resume_threads;
      const auto outcomes = fc::run_job(c, &g_stop, &std::cerr);
      return report_job(c, outcomes);
    }
    if (*me) {
      std::vector<fc::FieldStore> parts;
      for (const auto& in : merge_inputs) parts.push_back(load_store_arg(in));
      const auto merged = fc::store_merge(parts);
      merged.write(fs::path(merge_out));
      std::cout << merged.records.size() << " fields written to " << merge_out << "\n";
      return kExitOk;
    }
    if (*st) {
      const auto store = load_store_arg(st_store);
      const std::string group = st_group.empty() ? default_group(store.header.degree) : st_group;
      const bool primitive = fc::is_primitive_label(group);
      int rc = primitive ? kExitOk : kExitIncomplete;
      if (!primitive) std::cerr << "note: " << group << " is not a primitive class; counts are lower bounds\n";
      if (st_curve) {
        const auto curve = fc::counting_curve(store, group, 0, 10 * static_cast<int>(store.header.bound.get_str().size()));
        std::cout << "# " << store.header.to_string().substr(1) << " label=" << group << "\n";
        std::cout << "i\tX\tN\n";
        for (const auto& p : curve.points)
          if (p.complete) std::cout << p.i << "\t" << fixed(p.x(), 1) << "\t" << p.count << "\n";
        return rc;
      }
      if (st_mult > 0) {
        const auto hist = fc::multiplicity_histogram(store, group, st_mult);
        std::uint64_t mass = 0;
        std::cout << "k\tdiscriminants\n";
        for (const auto& [k, c] : hist) {
          std::cout << k << "\t" << c << "\n";
          mass += static_cast<std::uint64_t>(k) * c;
        }
        std::cout << "# mass " << mass << "\n";
        return rc;
      }
      if (st_alphas) {
        const long double B = bhargava_for(store.header.degree, store.header.signature);
        std::vector<long double> c;
        for (const auto& t : split_commas(st_predict)) c.push_back(std::stold(t));
        if (!c.empty() && c.size() != 3) throw fc::BadSupport("--predict needs three constants");
        std::cout << "# B = " << fixed(B, 13) << "\n";
        std::cout << "X\tN\tE\talpha1\talpha2" << (c.empty() ? "" : "\tP\tDelta") << "\n";
        for (fc::BigInt X = 1000; X <= store.header.bound; X *= 10) {
          const std::uint64_t n = fc::count_up_to(store, group, X);
          std::cout << X.get_str() << "\t" << n;
          try {
            const auto d = fc::error_term(B, store, group, X);
            std::cout << "\t" << fixed(d.E, 0) << "\t" << short_decimal(d.alpha1, 3) << "\t" << short_decimal(*d.alpha2, 3);
          } catch (const fc::NonpositiveErrorTerm&) {
            std::cout << "\t" << fixed(B * X.get_d() - n, 0) << "\t-\t-";
          }
          if (!c.empty()) {
            const long double P = fc::predict_P(B, c[0], c[1], c[2], X.get_d());
            std::cout << "\t" << fixed(P, 0) << "\t" << short_decimal(fc::delta_diag(n, P, X.get_d()), 2);
          }
          std::cout << "\n";
        }
        return rc;
      }
      const fc::BigInt X = st_bound.empty() ? store.header.bound : parse_bound(st_bound);
      std::cout << fc::count_up_to(store, group, X) << "\n";
      return rc;
    }
    if (*fi) {
      const auto store = load_store_arg(fit_store);
      const std::string group = fit_group.empty() ? default_group(store.header.degree) : fit_group;
      const long double B = bhargava_for(store.header.degree, store.header.signature);
      const auto curve = fc::counting_curve(store, group, fit_imin, 10 * static_cast<int>(store.header.bound.get_str().size()));
      const auto f = fc::fit_secondary_terms(curve, B, fit_imin);
      std::cout << "B\t" << fixed(B, 13) << "\nc1\t" << fixed(f.c1, 6) << "\nc2\t" << fixed(f.c2, 6) << "\nc3\t" << fixed(f.c3, 6)
                << "\nresidual\t" << fixed(f.residual_norm, 3) << "\ncondition\t" << fixed(f.condition, 1) << "\npoints\t" << f.points
                << "\n";
      // sensitivity: drop each checkpoint once
      std::vector<std::pair<long double, long double>> xn;
      for (const auto& p : curve.points)
        if (p.i >= fit_imin && p.complete) xn.emplace_back(p.x(), static_cast<long double>(p.count));
      if (xn.size() > 3) {
        long double spread = 0;
        for (std::size_t k = 0; k < xn.size(); ++k) {
          auto sub = xn;
          sub.erase(sub.begin() + static_cast<long>(k));
          const auto g = fc::fit_secondary_terms(sub, B);
          spread = std::max({spread, fabsl(g.c1 - f.c1), fabsl(g.c2 - f.c2), fabsl(g.c3 - f.c3)});
        }
        std::cout << "leave-one-out spread\t" << fixed(spread, 6) << "\n";
      }
      return kExitOk;
    }
    if (*bh) {
      int lo = 0, hi = 0;
      const auto dots = bh_degrees.find("..");
      if (dots == std::string::npos) {
        lo = hi = std::stoi(bh_degrees);
      } else {
        lo = std::stoi(bh_degrees.substr(0, dots));
        hi = std::stoi(bh_degrees.substr(dots + 2));
      }
      if (lo < 2 || hi > 11 || lo > hi) throw fc::BadSupport("degree range must lie in 2..11");
      if (bh_method != "prime-zeta" && bh_method != "direct" && bh_method != "both") throw fc::BadSupport("unknown method " + bh_method);
      std::cout << "n\tB_n\terror_bound" << (bh_method == "both" ? "\tdirect\tdirect_error_bound\tagree" : "") << "\n";
      for (int n = lo; n <= hi; ++n) {
        fc::EulerProductJob job;
        job.degree = n;
        job.signatures = fc::SignatureSet::preset(bh_signature, n);
        job.digits = bh_digits;
        job.p_max = bh_pmax;
        job.method = bh_method == "direct" ? fc::EulerMethod::Direct : fc::EulerMethod::PrimeZeta;
        const auto r = fc::bhargava_constant(job);
        std::cout << n << "\t" << r.value.to_string(bh_digits) << "\t" << static_cast<double>(r.error_bound);
        if (bh_method == "both") {
          job.method = fc::EulerMethod::Direct;
          job.digits = 0;
          const auto d = fc::bhargava_constant(job);
          const long double diff = fabsl(d.value.to_long_double() - r.value.to_long_double());
          std::cout << "\t" << d.value.to_string(bh_digits) << "\t" << static_cast<double>(d.error_bound) << "\t"
                    << (diff <= d.error_bound + r.error_bound ? "yes" : "NO");
        }
        std::cout << "\n";
      }
      return kExitOk;
    }
    if (*cm) {
      const auto S = parse_prime_list(cm_exclude);
      std::cout << "# c(e=" << cm_e << ", S={" << cm_exclude << "}) = " << fc::cm_constant(cm_e, S).to_string(12) << "\n";
      std::cout << "H\tprobability\n";
      for (const auto& label : split_commas(cm_groups))
        std::cout << label << "\t" << sig3(fc::cm_probability(fc::parse_group_label(label), cm_e, S).to_long_double()) << "\n";
      return kExitOk;
    }
    if (*ma) {
      std::cout << "# normalizer " << fixed(fc::malle_normalizer(), 9) << "\n";
      std::cout << "H\tprobability\n";
      for (const auto& label : split_commas(ma_groups))
        std::cout << label << "\t" << sig3(fc::malle_five_prime_probability(fc::parse_group_label(label))) << "\n";
      return kExitOk;
    }
    if (*ig) {
      const auto source = fc::FieldStore::read(fs::path(in_file));
      fc::FieldStore target = in_store.empty() ? source : load_store_arg(in_store);
      std::map<std::vector<fc::BigInt>, fc::AbelianGroupType> groups;
      for (const auto& r : source.records)
        if (r.classgroup) groups[r.coeffs] = *r.classgroup;
      std::size_t matched = 0;
      for (auto& r : target.records) {
        auto it = groups.find(r.coeffs);
        if (it != groups.end()) {
          r.classgroup = it->second;
          ++matched;
        }
      }
      if (!in_out.empty()) target.write(fs::path(in_out));
      std::vector<std::optional<fc::AbelianGroupType>> cls;
      for (const auto& r : target.records) cls.push_back(r.classgroup);
      const auto S = parse_prime_list(in_exclude);
      const std::size_t block = in_block == 0 ? std::max<std::size_t>(cls.size(), 1) : in_block;
      const auto rows = fc::class_distribution(cls, block, S);
      std::set<fc::AbelianGroupType> cols;
      for (const auto& row : rows)
        for (const auto& [g, v] : row) cols.insert(g);
      std::cout << "# matched " << matched << " of " << target.records.size() << " records\n";
      std::cout << "block";
      for (const auto& g : cols) std::cout << "\t" << g.to_string();
      std::cout << "\n";
      for (std::size_t b = 0; b < rows.size(); ++b) {
        std::cout << b;
        for (const auto& g : cols) {
          auto it = rows[b].find(g);
          std::cout << "\t" << (it == rows[b].end() ? "0" : sig3(it->second));
        }
        std::cout << "\n";
      }
      return kExitOk;
    }
    if (*ex) {
      const auto store = load_store_arg(ex_store);
      const std::string group = ex_group.empty() ? default_group(store.header.degree) : ex_group;
      const auto curve = fc::counting_curve(store, group, 0, 10 * static_cast<int>(store.header.bound.get_str().size()));
      const std::string csv = fc::curve_csv(curve, store.header);
      if (ex_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(ex_out);
        if (!out) throw fc::SinkFailure("cannot write " + ex_out);
        out << csv;
      }
      return kExitOk;
    }
  } catch (const fc::BeyondCertifiedBound& e) {
    std::cerr << e.what() << "\n";
    return kExitIncomplete;
  } catch (const fc::FactorizationIncomplete& e) {
    std::cerr << e.what() << "\n";
    return kExitIncomplete;
  } catch (const fc::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid number: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    std::cerr << "number out of range: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
