#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "fieldcensus/canon.hpp"
#include "fieldcensus/census.hpp"
#include "fieldcensus/errors.hpp"
#include "fieldcensus/galois/galois.hpp"
#include "fieldcensus/hunter.hpp"
#include "fieldcensus/orders.hpp"

namespace fieldcensus {

/// Everything needed to run (or re-run) one enumeration job.
struct JobConfig {
  int degree = 0;
  BigInt bound = 0;
  std::string signature = "tc";
  int shards = 1;
  int threads = 1;
  bool deep_prune = true;
  int galois_primes = 100;
  std::uint64_t factor_effort = 1000000;
  std::filesystem::path out_dir;

  std::string job_id() const { return "d" + std::to_string(degree) + "-" + signature + "-" + bound.get_str(); }

  StoreHeader header() const {
    StoreHeader h;
    h.degree = degree;
    h.signature = signature;
    h.bound = bound;
    h.extra["job"] = job_id();
    h.extra["shards"] = std::to_string(shards);
    return h;
  }

  void validate() const {
    check_degree(degree);
    if (bound < 1) throw BadSupport("bound must be at least 1");
    if (shards < 1) throw BadSupport("shard count must be positive");
    if (threads < 1) throw BadSupport("thread count must be positive");
    SignatureSet::preset(signature, degree);
  }
};

struct ShardOutcome {
  int shard = 0;
  EnumerationSummary summary;
  std::uint64_t records = 0;
  std::uint64_t uncertified = 0;
};

/// Turns candidates into field records: field discriminant, bound check,
/// canonical form, per-shard dedup, Galois label.
class RecordBuilder {
 public:
  RecordBuilder(const JobConfig& cfg) : cfg_(cfg) {}

  void seed(const std::vector<FieldRecord>& existing) {
    for (const auto& r : existing) seen_.insert(r.coeffs);
  }

  /// Returns a new record, or nothing when the field exceeds the bound or was seen.
  std::optional<FieldRecord> build(const Candidate& c, bool& uncertified) {
    const FieldDisc fd = field_discriminant(c.poly, cfg_.factor_effort);
    if (abs_big(fd.dk) > cfg_.bound) return std::nullopt;
    if (!fd.certified) uncertified = true;
    const CanonicalForm cf = canonical_polynomial(c.poly, fd);
    std::vector<BigInt> coeffs(cf.poly.coeffs().begin(), cf.poly.coeffs().end() - 1);
    if (!seen_.insert(coeffs).second) return std::nullopt;
    const GaloisLabel g = identify_group(cf.poly, fd.dk, c.r1, cfg_.galois_primes);
    FieldRecord r;
    r.degree = cfg_.degree;
    r.r1 = c.r1;
    r.dk = fd.dk;
    r.coeffs = std::move(coeffs);
    r.label = g.name;
    r.certainty = g.certainty;
    return r;
  }

 private:
  const JobConfig& cfg_;
  std::set<std::vector<BigInt>> seen_;
};

namespace pipeline_detail {

inline std::filesystem::path shard_file(const JobConfig& cfg, int i) { return cfg.out_dir / ("shard-" + std::to_string(i) + ".tsv"); }
inline std::filesystem::path checkpoint_file(const JobConfig& cfg, int i) { return cfg.out_dir / ("shard-" + std::to_string(i) + ".ckpt"); }

/// Keeps the header and the first `records` record lines of a shard file.
/// Lines written after the last checkpoint, possibly torn, are dropped unread.
inline std::vector<FieldRecord> truncate_shard(const std::filesystem::path& path, std::uint64_t records, const StoreHeader& header) {
  std::vector<FieldRecord> kept;
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    std::string line;
    if (!std::getline(in, line)) throw CheckpointError("empty shard file " + path.string());
    StoreHeader::parse(line);
    while (kept.size() < records && std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      kept.push_back(parse_record(line));
    }
    if (kept.size() < records) throw CheckpointError(path.string() + " holds fewer records than its checkpoint");
  } else if (records > 0) {
    throw CheckpointError("missing shard file " + path.string());
  }
  FieldStore s;
  s.header = header;
  s.records = kept;
  s.write(path);
  return kept;
}

}  // namespace pipeline_detail

/// Runs (or resumes) every shard of the job, then merges into out_dir/store.tsv.
/// Returns per-shard outcomes; stop aborts between prefix blocks.
inline std::vector<ShardOutcome> run_job(const JobConfig& cfg, const std::atomic<bool>* stop = nullptr,
                                         std::ostream* log = nullptr) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);
  EnumerationTask base;
  base.degree = cfg.degree;
  base.bound = cfg.bound.get_d();
  base.signatures = SignatureSet::preset(cfg.signature, cfg.degree);
  base.deep_prune = cfg.deep_prune;
  const auto tasks = shard(base, cfg.shards);

  std::vector<ShardOutcome> outcomes(tasks.size());
  std::atomic<int> next{0};
  std::mutex log_mutex;
  std::exception_ptr failure;

  auto run_shard = [&](int i) {
    EnumerationTask task = tasks[i];
    StoreHeader header = cfg.header();
    header.extra["shard"] = std::to_string(i);
    const auto ckpt_path = pipeline_detail::checkpoint_file(cfg, i);
    const auto out_path = pipeline_detail::shard_file(cfg, i);
    Checkpoint cp;
    cp.degree = cfg.degree;
    cp.bound = cfg.bound.get_str();
    cp.signature = cfg.signature;
    cp.shard_index = i;
    cp.shard_count = cfg.shards;
    cp.deep_prune = cfg.deep_prune;
    if (std::filesystem::exists(ckpt_path)) {
      const Checkpoint old = read_checkpoint(ckpt_path);
      if (old.degree != cp.degree || old.bound != cp.bound || old.signature != cp.signature || old.shard_count != cp.shard_count ||
          old.shard_index != cp.shard_index)
        throw CheckpointError("checkpoint " + ckpt_path.string() + " belongs to a different job");
      cp = old;
      cp.deep_prune = cfg.deep_prune;
    }
    ShardOutcome& outcome = outcomes[i];
    outcome.shard = i;
    std::vector<FieldRecord> existing = pipeline_detail::truncate_shard(out_path, cp.records, header);
    outcome.records = existing.size();
    if (cp.complete) {
      outcome.summary.complete = true;
      return;
    }
    task.cursor = cp.cursor;
    RecordBuilder builder(cfg);
    builder.seed(existing);
    std::ofstream out(out_path, std::ios::app);
    if (!out) throw SinkFailure("cannot append to " + out_path.string());
    auto sink = [&](const Candidate& c) {
      bool uncertified = false;
      auto rec = builder.build(c, uncertified);
      if (uncertified) ++outcome.uncertified;
      if (!rec) return;
      out << format_record(*rec) << "\n";
      if (!out) throw SinkFailure("write failed on " + out_path.string());
      ++outcome.records;
    };
    auto done = [&](const Prefix& p, const EnumerationSummary&) {
      out.flush();
      if (!out) throw SinkFailure("flush failed on " + out_path.string());
      cp.cursor = p;
      cp.records = outcome.records;
      write_checkpoint(ckpt_path, cp);
    };
    outcome.summary = enumerate_candidates(task, sink, done, stop);
    out.flush();
    if (outcome.summary.complete) {
      cp.complete = true;
      cp.records = outcome.records;
      write_checkpoint(ckpt_path, cp);
    }
    if (log) {
      std::lock_guard<std::mutex> lock(log_mutex);
      *log << "shard " << i << ": " << outcome.summary.leaves << " polynomials, " << outcome.summary.emitted << " candidates, "
           << outcome.records << " fields" << (outcome.summary.complete ? "" : " (interrupted)") << "\n";
    }
  };

  auto worker = [&] {
    for (int i; (i = next.fetch_add(1)) < static_cast<int>(tasks.size());) {
      try {
        run_shard(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(log_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  const int nthreads = std::min<int>(cfg.threads, static_cast<int>(tasks.size()));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  bool all_done = true;
  for (const auto& o : outcomes) all_done = all_done && o.summary.complete;
  if (all_done) {
    std::vector<FieldStore> parts;
    for (int i = 0; i < cfg.shards; ++i) parts.push_back(FieldStore::read(pipeline_detail::shard_file(cfg, i)));
    store_merge(parts).write(cfg.out_dir / "store.tsv");
  }
  return outcomes;
}

}  // namespace fieldcensus
