// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "odal/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "odal");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = odal::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path kData = ODAL_TEST_DATA_DIR;

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("odal_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }
  std::string str(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

}  // namespace

TEST(Cli, GoldenScoreIsByteIdentical) {
  const auto r = cli({"score", "--verdicts", (kData / "golden/verdicts.jsonl").string(), "--policy", "literal",
                      "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, slurp(kData / "golden/report.json"));

  // Hand-evaluated totals of the golden verdicts.
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc.at("total_score"), "4");
  EXPECT_EQ(doc.at("total_max"), 10);
  EXPECT_EQ(doc.at("odal_score_pct").at("display"), "40");
  EXPECT_EQ(doc.at("C"), 5);
  EXPECT_EQ(doc.at("L"), 3);
  EXPECT_EQ(doc.at("H"), 3);
  EXPECT_EQ(doc.at("snr_cap"), 9);
  EXPECT_EQ(doc.at("odal_snr").at("display"), "1.6666");
  EXPECT_EQ(doc.at("json_rate_strict_pct").at("display"), "66.67");
  EXPECT_EQ(doc.at("json_rate_lenient_pct").at("display"), "83.33");
}

TEST(Cli, GoldenScoreUnderOtherPolicies) {
  const auto verdicts = (kData / "golden/verdicts.jsonl").string();
  const auto clamp = cli({"score", "--verdicts", verdicts, "--clamp", "--format", "json"});
  ASSERT_EQ(clamp.code, 0) << clamp.err;
  EXPECT_EQ(nlohmann::json::parse(clamp.out).at("odal_score_pct").at("display"), "50");
  const auto clean = cli({"score", "--verdicts", verdicts, "--policy", "clean-empty", "--format", "json"});
  ASSERT_EQ(clean.code, 0) << clean.err;
  EXPECT_EQ(nlohmann::json::parse(clean.out).at("odal_score_pct").at("display"), "20");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli({"dataset", "validate", (kData / "backpack").string()}).code, 0);
  const auto unknown = cli({"frobnicate"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("usage"), std::string::npos);
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"score"}).code, 2);
  EXPECT_EQ(cli({"score", "--verdicts", "x", "--policy", "generous"}).code, 2);
  EXPECT_EQ(cli({"dataset", "validate", "/nonexistent/odal"}).code, 1);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, BinaryExitCodes) {
  auto status = [](const std::string& args) {
    const int raw = std::system((std::string(ODAL_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("dataset validate " + (kData / "backpack").string()), 0);
  EXPECT_EQ(status("bogus"), 2);
  EXPECT_EQ(status("dataset validate /nonexistent/odal"), 1);
}

TEST(Cli, EndToEndOracleRunIsPerfectAndReplayable) {
  TempDir t;
  ASSERT_EQ(cli({"dataset", "fixture", "--frames", "15", "--seed", "4", "--out", t.str("ds")}).code, 0);
  ASSERT_EQ(cli({"dataset", "validate", t.str("ds")}).code, 0);
  for (const std::string tag : {"1", "2"}) {
    const auto run = cli({"run", t.str("ds"), "--backend", "oracle", "--out", t.str("resp" + tag + ".jsonl"),
                          "--run-manifest", t.str("run" + tag + ".json")});
    ASSERT_EQ(run.code, 0) << run.err;
    const auto judge = cli({"judge", "rules", t.str("ds"), "--responses", t.str("resp" + tag + ".jsonl"), "--out",
                            t.str("verdicts" + tag + ".jsonl")});
    ASSERT_EQ(judge.code, 0) << judge.err;
    const auto score = cli({"score", "--verdicts", t.str("verdicts" + tag + ".jsonl"), "--format", "json", "--out",
                            t.str("report" + tag + ".json"), "--run-manifest", t.str("run" + tag + ".json")});
    ASSERT_EQ(score.code, 0) << score.err;
  }
  EXPECT_EQ(slurp(t / "resp1.jsonl"), slurp(t / "resp2.jsonl"));
  EXPECT_EQ(slurp(t / "verdicts1.jsonl"), slurp(t / "verdicts2.jsonl"));
  EXPECT_EQ(slurp(t / "report1.json"), slurp(t / "report2.json"));

  const auto report = nlohmann::json::parse(slurp(t / "report1.json"));
  EXPECT_EQ(report.at("odal_score_pct").at("display"), "100");
  EXPECT_EQ(report.at("json_rate_strict_pct").at("display"), "100");
  EXPECT_EQ(report.at("H"), 0);
  EXPECT_EQ(report.at("run_meta").at("backend_id"), "oracle");

  const auto manifest = nlohmann::json::parse(slurp(t / "run1.json"));
  EXPECT_EQ(manifest.at("run_id"), nlohmann::json::parse(slurp(t / "run2.json")).at("run_id"));
  EXPECT_TRUE(manifest.at("artifacts").contains("verdicts"));
  EXPECT_TRUE(manifest.at("artifacts").contains("report"));

  // Re-scoring the persisted verdicts reproduces the stored report.
  const auto again = cli({"score", "--verdicts", t.str("verdicts1.jsonl"), "--format", "json", "--run-manifest",
                          t.str("run1.json")});
  EXPECT_EQ(again.out, slurp(t / "report1.json"));

  const auto table = cli({"report", t.str("report1.json"), t.str("report2.json"), "--format", "table"});
  ASSERT_EQ(table.code, 0) << table.err;
  EXPECT_NE(table.out.find("ODAL_SNR"), std::string::npos);
}

TEST(Cli, NoisyOracleRunHasHallucinations) {
  TempDir t;
  ASSERT_EQ(cli({"dataset", "fixture", "--frames", "30", "--seed", "8", "--out", t.str("ds")}).code, 0);
  ASSERT_EQ(cli({"run", t.str("ds"), "--backend", "oracle", "--p-miss", "0.2", "--p-hallucinate", "1", "--seed", "3",
                 "--out", t.str("r.jsonl")}).code, 0);
  ASSERT_EQ(cli({"judge", "rules", t.str("ds"), "--responses", t.str("r.jsonl"), "--out", t.str("v.jsonl")}).code, 0);
  const auto score = cli({"score", "--verdicts", t.str("v.jsonl"), "--format", "json"});
  ASSERT_EQ(score.code, 0) << score.err;
  const auto doc = nlohmann::json::parse(score.out);
  EXPECT_GT(doc.at("H").get<int>(), 0);
  EXPECT_FALSE(doc.at("odal_snr").at("capped").get<bool>());
}

TEST(Cli, DatasetToolsAndSimulate) {
  TempDir t;
  ASSERT_EQ(cli({"dataset", "fixture", "--frames", "20", "--seed", "1", "--out", t.str("ds")}).code, 0);
  const auto split = cli({"dataset", "split", t.str("ds"), "--fraction", "0.8", "--out", t.str("split")});
  ASSERT_EQ(split.code, 0) << split.err;
  EXPECT_EQ(split.out, "train 16, val 4\n");
  EXPECT_EQ(cli({"dataset", "validate", t.str("split/train.json")}).code, 0);
  EXPECT_EQ(cli({"dataset", "upsample", t.str("ds"), "--min-count", "5", "--out", t.str("up.json")}).code, 0);
  EXPECT_EQ(cli({"augment", "plan", t.str("ds"), "--level", "basic", "--out", t.str("plan.json")}).code, 0);
  EXPECT_EQ(cli({"augment", "apply", t.str("ds"), "--plan", t.str("plan.json"), "--out", t.str("aug")}).code, 0);
  EXPECT_EQ(cli({"dataset", "validate", t.str("aug")}).code, 0);

  const auto sim = cli({"simulate", "--frames", "5", "--format", "csv"});
  ASSERT_EQ(sim.code, 0) << sim.err;
  std::istringstream in(sim.out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("frame_id,", 0), 0u);
  int rows = 0;
  for (std::string l; std::getline(in, l);) ++rows;
  EXPECT_EQ(rows, 5);
  EXPECT_EQ(cli({"simulate", "--frames", "5", "--format", "json"}).out,
            cli({"simulate", "--frames", "5", "--format", "json"}).out);
}
