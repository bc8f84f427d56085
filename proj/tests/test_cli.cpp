#include <gtest/gtest.h>

#include <sys/wait.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "fieldcensus/census.hpp"
#include "fieldcensus/pipeline.hpp"

using namespace fieldcensus;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto p = fs::temp_directory_path() / "fieldcensus-cli-test";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

RunResult run(const std::string& args) {
  const auto out = scratch() / "stdout.txt", err = scratch() / "stderr.txt";
  const std::string cmd = std::string(FIELDCENSUS_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

/// A small quartic job shared by several tests.
const fs::path& quartic_job() {
  static const fs::path dir = [] {
    const auto d = scratch() / "q4";
    const auto r = run("enumerate --degree 4 --bound 5000 --signature tc --shards 3 --out " + d.string());
    EXPECT_EQ(r.status, 0) << r.err;
    return d;
  }();
  return dir;
}

}  // namespace

TEST(CliTest, BhargavaTable) {
  const auto r = run("bhargava --degree 4..5 --signature r1le1 --digits 8");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("4\t0.07604314"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("5\t0.08635053"), std::string::npos) << r.out;
  const auto both = run("bhargava --degree 6 --method both --digits 8");
  ASSERT_EQ(both.status, 0) << both.err;
  EXPECT_NE(both.out.find("\tyes"), std::string::npos) << both.out;
}

TEST(CliTest, ValidationErrorsExitTwo) {
  EXPECT_EQ(run("enumerate --degree 13 --bound 100 --out " + (scratch() / "bad").string()).status, 2);
  EXPECT_EQ(run("enumerate --degree 5 --bound 100 --signature tc --out " + (scratch() / "bad").string()).status, 2);
  EXPECT_EQ(run("enumerate --degree 4 --bound abc --out " + (scratch() / "bad").string()).status, 2);
  EXPECT_EQ(run("bhargava --degree 3..12").status, 2);
  EXPECT_EQ(run("no-such-command").status, 2);
  EXPECT_EQ(run("stats --store " + (scratch() / "missing.tsv").string()).status, 2);
}

TEST(CliTest, EnumerateStatsAndMultiplicities) {
  const auto& job = quartic_job();
  ASSERT_TRUE(fs::exists(job / "store.tsv"));
  const auto s = run("stats --store " + (job / "store.tsv").string() + " --group S4 --bound 1000");
  ASSERT_EQ(s.status, 0) << s.err;
  EXPECT_EQ(s.out, "8\n");
  const auto n = run("stats --store " + job.string() + " --group S4");
  ASSERT_EQ(n.status, 0);
  const int total = std::stoi(n.out);
  const auto m = run("stats --store " + job.string() + " --group S4 --mult " + std::to_string(total));
  ASSERT_EQ(m.status, 0) << m.err;
  EXPECT_NE(m.out.find("# mass " + std::to_string(total)), std::string::npos) << m.out;
  // counting past the enumerated bound is refused
  EXPECT_EQ(run("stats --store " + job.string() + " --group S4 --bound 5001").status, 3);
  // imprimitive counts are only lower bounds
  EXPECT_EQ(run("stats --store " + job.string() + " --group imprimitive").status, 3);
}

TEST(CliTest, OutputsAreDeterministic) {
  const auto& job = quartic_job();
  const auto other = scratch() / "q4-again";
  const auto r = run("enumerate --degree 4 --bound 5000 --signature tc --shards 3 --out " + other.string());
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(slurp(job / "store.tsv"), slurp(other / "store.tsv"));
  const auto one = scratch() / "q4-one-shard";
  ASSERT_EQ(run("enumerate --degree 4 --bound 5000 --signature tc --out " + one.string()).status, 0);
  // records agree; only the shard count in the header differs
  const auto a = FieldStore::read(job / "store.tsv"), b = FieldStore::read(one / "store.tsv");
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) EXPECT_EQ(format_record(a.records[i]), format_record(b.records[i]));
  EXPECT_EQ(slurp(job / "store.tsv").rfind("#fieldcensus v1 degree=4 signature=tc bound=5000 canon=1", 0), 0u);
}

TEST(CliTest, ResumeOfFinishedJobIsStable) {
  const auto& job = quartic_job();
  const std::string before = slurp(job / "store.tsv");
  const auto r = run("resume " + job.string());
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(slurp(job / "store.tsv"), before);
  EXPECT_EQ(run("enumerate --degree 4 --bound 5000 --out " + job.string()).status, 2);
}

TEST(CliTest, MergeAndExport) {
  const auto& job = quartic_job();
  const auto merged = scratch() / "merged.tsv";
  const auto r = run("merge " + (job / "shard-0.tsv").string() + " " + (job / "shard-1.tsv").string() + " " +
                     (job / "shard-2.tsv").string() + " --out " + merged.string());
  ASSERT_EQ(r.status, 0) << r.err;
  const auto a = FieldStore::read(merged), b = FieldStore::read(job / "store.tsv");
  EXPECT_EQ(a.records.size(), b.records.size());
  const auto csv = run("export-csv --store " + job.string() + " --group S4");
  ASSERT_EQ(csv.status, 0);
  EXPECT_EQ(csv.out.rfind("# fieldcensus v1", 0), 0u);
  EXPECT_NE(csv.out.find("\n1000,8\n"), std::string::npos) << csv.out;
}

TEST(CliTest, HeuristicsTables) {
  const auto cm = run("heuristics cm --e 1 --exclude 2 --groups 1,3");
  ASSERT_EQ(cm.status, 0) << cm.err;
  EXPECT_NE(cm.out.find("1\t0.754"), std::string::npos) << cm.out;
  EXPECT_NE(cm.out.find("3\t0.126"), std::string::npos) << cm.out;
  const auto ma = run("heuristics malle --groups 1,2");
  ASSERT_EQ(ma.status, 0) << ma.err;
  EXPECT_NE(ma.out.find("1\t0.739"), std::string::npos) << ma.out;
  EXPECT_NE(ma.out.find("2\t0.162"), std::string::npos) << ma.out;
  EXPECT_EQ(run("heuristics cm --e 1 --exclude 2 --groups 4").status, 2);
}

TEST(CliTest, IngestRoundTrip) {
  const auto& job = quartic_job();
  auto store = FieldStore::read(job / "store.tsv");
  const char* types[] = {"1", "1", "3", "1", "2", "5", "1", "6,2"};
  for (std::size_t i = 0; i < store.records.size(); ++i) store.records[i].classgroup = AbelianGroupType::parse(types[i % 8]);
  const auto with_cg = scratch() / "classgroups.tsv";
  store.write(with_cg);
  const auto annotated = scratch() / "annotated.tsv";
  const auto first = run("ingest-classgroups " + with_cg.string() + " --store " + job.string() + " --block 100 --out " + annotated.string());
  ASSERT_EQ(first.status, 0) << first.err;
  const auto second = run("ingest-classgroups " + annotated.string() + " --block 100");
  ASSERT_EQ(second.status, 0) << second.err;
  // the summary of the re-emitted store equals the first summary
  EXPECT_EQ(first.out, second.out);
  EXPECT_EQ(slurp(annotated), slurp(with_cg));
  EXPECT_EQ(run("ingest-classgroups " + (job / "store.tsv").string()).status, 2);
}

TEST(PipelineTest, InterruptedJobResumesToTheSameStore) {
  JobConfig cfg;
  cfg.degree = 4;
  cfg.bound = 20000;
  cfg.signature = "tc";
  cfg.shards = 2;
  cfg.out_dir = scratch() / "clean";
  run_job(cfg);
  const std::string clean = slurp(cfg.out_dir / "store.tsv");

  JobConfig c2 = cfg;
  c2.out_dir = scratch() / "interrupted";
  std::atomic<bool> stop{false};
  std::thread watcher([&] {
    while (!fs::exists(c2.out_dir / "shard-0.ckpt")) std::this_thread::sleep_for(std::chrono::milliseconds(1));
    stop = true;
  });
  const auto partial = run_job(c2, &stop);
  watcher.join();
  bool all = true;
  for (const auto& o : partial) all = all && o.summary.complete;
  EXPECT_FALSE(all);
  EXPECT_FALSE(fs::exists(c2.out_dir / "store.tsv"));
  // a torn line after the last checkpoint, as left by a crash mid-write
  std::ofstream(c2.out_dir / "shard-0.tsv", std::ios::app) << "4\t0\t-12";
  const auto done = run_job(c2);
  for (const auto& o : done) EXPECT_TRUE(o.summary.complete);
  EXPECT_EQ(slurp(c2.out_dir / "store.tsv"), clean);
}

TEST(PipelineTest, CheckpointFromAnotherJobIsRejected) {
  JobConfig cfg;
  cfg.degree = 4;
  cfg.bound = 1000;
  cfg.signature = "tc";
  cfg.out_dir = scratch() / "mismatch";
  run_job(cfg);
  cfg.bound = 2000;
  EXPECT_THROW(run_job(cfg), CheckpointError);
}
