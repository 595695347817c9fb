//
// Copyright 2026 The gunlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"

#include "gunlearn/model.h"
#include "gunlearn/workload.h"

namespace gunlearn {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gunlearn_cli_" + std::string(::testing::UnitTest::GetInstance()
                                              ->current_test_info()
                                              ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  Result Run(std::vector<std::string> args) const {
    args.insert(args.begin(), "gunlearn");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::Run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
  }

  std::vector<std::string> DataFlags() const {
    return {"--edges", Path("g.edges"), "--features", Path("g.features.csv"),
            "--labels", Path("g.labels"), "--masks", Path("g.masks")};
  }

  void Synth(const std::vector<std::string>& extra) const {
    std::vector<std::string> args = {"synth", "--prefix", Path("g")};
    args.insert(args.end(), extra.begin(), extra.end());
    const Result r = Run(args);
    ASSERT_EQ(r.code, cli::kOk) << r.err;
  }

  Result Train(const std::vector<std::string>& extra) const {
    std::vector<std::string> args = {"train", "--model", Path("m.bin"),
                                     "--state", Path("s.bin")};
    const auto data = DataFlags();
    args.insert(args.end(), data.begin(), data.end());
    args.insert(args.end(), extra.begin(), extra.end());
    return Run(args);
  }

  Result Generate(const std::string& kind, int count,
                  const std::vector<std::string>& extra = {}) const {
    std::vector<std::string> args = {"gen-workload", "--kind", kind, "--count",
                                     std::to_string(count), "--output", Path("w.jsonl")};
    const auto data = DataFlags();
    args.insert(args.end(), data.begin(), data.end());
    args.insert(args.end(), extra.begin(), extra.end());
    return Run(args);
  }

  Result Unlearn(const std::string& report, const std::vector<std::string>& extra) const {
    std::vector<std::string> args = {"unlearn", "--model", Path("m.bin"), "--state",
                                     Path("s.bin"), "--workload", Path("w.jsonl"),
                                     "--output", report, "--summary", Path("summary.json")};
    const auto data = DataFlags();
    args.insert(args.end(), data.begin(), data.end());
    args.insert(args.end(), extra.begin(), extra.end());
    return Run(args);
  }

  std::vector<ReportRecord> Records(const std::string& path) const {
    std::ifstream in(path);
    return ParseRecords(in);
  }

  json Summary() const {
    std::ifstream in(Path("summary.json"));
    return json::parse(in);
  }

  fs::path dir_;
};

TEST_F(CliTest, TrainReportsAccuracy) {
  Synth({"--num-nodes", "120", "--num-classes", "3", "--seed", "4"});
  const Result r = Train({"--lambda", "0.01", "--alpha", "0"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const json report = json::parse(r.out);
  EXPECT_EQ(report["nodes"], 120);
  EXPECT_EQ(report["classes"], 3);
  for (const char* split : {"train", "val", "test"}) {
    const double acc = report["accuracy"][split];
    EXPECT_GE(acc, 0.0);
    EXPECT_LE(acc, 1.0);
  }
  EXPECT_GT(report["accuracy"]["train"].get<double>(), 0.5);
  EXPECT_TRUE(fs::exists(Path("m.bin")));
  EXPECT_TRUE(fs::exists(Path("s.bin")));
}

TEST_F(CliTest, MissingLambdaIsConfigError) {
  Synth({"--num-nodes", "40"});
  const Result r = Train({});
  EXPECT_EQ(r.code, cli::kConfigError);
  EXPECT_NE(r.err.find("lambda"), std::string::npos) << r.err;
}

TEST_F(CliTest, ExactModeAccepted) {
  Synth({"--num-nodes", "40"});
  EXPECT_EQ(Train({"--lambda", "0.01", "--rmax", "0"}).code, cli::kOk);
}

TEST_F(CliTest, InvalidWeightsAndUnknownCommandAreConfigErrors) {
  Synth({"--num-nodes", "40"});
  EXPECT_EQ(Train({"--lambda", "0.01", "--levels", "2", "--weights", "0.5,0.5"}).code,
            cli::kConfigError);
  EXPECT_EQ(Run({"frobnicate"}).code, cli::kConfigError);
}

TEST_F(CliTest, EmptyWorkloadGivesEmptySummary) {
  Synth({"--num-nodes", "60"});
  ASSERT_EQ(Train({"--lambda", "0.01"}).code, cli::kOk);
  { std::ofstream(Path("w.jsonl")); }
  const Result r = Unlearn(Path("r.jsonl"), {});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const json s = Summary();
  EXPECT_EQ(s["requests"], 0);
  EXPECT_EQ(s["retrains"], 0);
  EXPECT_TRUE(Records(Path("r.jsonl")).empty());
}

TEST_F(CliTest, RetrainCountNonIncreasingAsThresholdShrinks) {
  Synth({"--num-nodes", "400", "--num-features", "64", "--mode", "sparse",
         "--seed", "2"});
  ASSERT_EQ(Generate("random-edges", 100, {"--seed", "5"}).code, cli::kOk);
  std::vector<int> retrains;
  for (const char* rmax : {"1e-4", "1e-6", "1e-8"}) {
    ASSERT_EQ(Train({"--lambda", "0.01", "--rmax", rmax}).code, cli::kOk);
    const Result r = Unlearn(Path("r.jsonl"), {});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    retrains.push_back(Summary()["retrains"]);
  }
  EXPECT_GE(retrains[0], retrains[1]);
  EXPECT_GE(retrains[1], retrains[2]);
  RecordProperty("retrains", std::to_string(retrains[0]) + "," +
                                 std::to_string(retrains[1]) + "," +
                                 std::to_string(retrains[2]));
}

TEST_F(CliTest, ZeroNoiseRunTracksRetrainingAtEveryStep) {
  Synth({"--num-nodes", "150", "--seed", "6"});
  ASSERT_EQ(Train({"--lambda", "0.01", "--alpha", "0", "--rmax", "0"}).code, cli::kOk);
  ASSERT_EQ(Generate("random-nodes", 12, {"--batch-size", "2"}).code, cli::kOk);
  const Result r = Unlearn(Path("r.jsonl"), {"--compare-retrain"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto records = Records(Path("r.jsonl"));
  ASSERT_EQ(records.size(), 6u);
  for (const auto& rec : records) {
    EXPECT_TRUE(rec.retrained);
    EXPECT_EQ(*rec.accuracy, *rec.accuracy_retrain) << "request " << rec.index;
  }
}

TEST_F(CliTest, OracleChecksReportTrueResidual) {
  Synth({"--num-nodes", "100"});
  ASSERT_EQ(Train({"--lambda", "0.01", "--alpha", "0.1"}).code, cli::kOk);
  ASSERT_EQ(Generate("random-features", 5).code, cli::kOk);
  ASSERT_EQ(Unlearn(Path("r.jsonl"), {"--oracle-checks"}).code, cli::kOk);
  for (const auto& rec : Records(Path("r.jsonl"))) {
    ASSERT_TRUE(rec.residual_true.has_value());
    EXPECT_EQ(rec.kind, "feature");
  }
}

TEST_F(CliTest, ReportStreamsAreDeterministic) {
  Synth({"--num-nodes", "100"});
  ASSERT_EQ(Train({"--lambda", "0.01"}).code, cli::kOk);
  ASSERT_EQ(Generate("random-edges", 10, {"--batch-size", "3"}).code, cli::kOk);
  const std::string first = Path("w.jsonl") + ".copy";
  fs::copy_file(Path("w.jsonl"), first);
  ASSERT_EQ(Generate("random-edges", 10, {"--batch-size", "3"}).code, cli::kOk);
  std::ifstream a(first), b(Path("w.jsonl"));
  EXPECT_EQ(std::string(std::istreambuf_iterator<char>(a), {}),
            std::string(std::istreambuf_iterator<char>(b), {}));

  ASSERT_EQ(Unlearn(Path("r1.jsonl"), {}).code, cli::kOk);
  ASSERT_EQ(Unlearn(Path("r2.jsonl"), {}).code, cli::kOk);
  const auto r1 = Records(Path("r1.jsonl"));
  const auto r2 = Records(Path("r2.jsonl"));
  ASSERT_EQ(r1.size(), r2.size());
  for (std::size_t i = 0; i < r1.size(); ++i) {
    EXPECT_EQ(r1[i].bound_data, r2[i].bound_data);
    EXPECT_EQ(r1[i].bound_worst, r2[i].bound_worst);
    EXPECT_EQ(r1[i].pushes, r2[i].pushes);
    EXPECT_EQ(r1[i].retrained, r2[i].retrained);
    EXPECT_EQ(r1[i].accuracy, r2[i].accuracy);
  }
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  Synth({"--num-nodes", "60"});
  {
    std::ofstream cfg(Path("train.ini"));
    cfg << "lambda = 0.05\nalpha = 0\nrmax = 1e-5\nloss = least_squares\n";
  }
  const Result r = Train({"--config", Path("train.ini"), "--lambda", "0.02"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  std::ifstream in(Path("m.bin"), std::ios::binary);
  ASSERT_TRUE(in.good());
  // The model header records the effective settings.
  const LinearModel model = LoadModel(Path("m.bin"));
  EXPECT_EQ(model.spec.kind, LossKind::kLeastSquares);
  EXPECT_DOUBLE_EQ(model.spec.lambda, 0.02);
  EXPECT_EQ(model.alpha, 0.0);

  {
    std::ofstream cfg(Path("bad.ini"));
    cfg << "lambda = 0.05\nwarp_factor = 9\n";
  }
  EXPECT_EQ(Train({"--config", Path("bad.ini")}).code, cli::kConfigError);
}

TEST_F(CliTest, ShortfallIsRuntimeError) {
  Synth({"--num-nodes", "60"});
  const Result r = Generate("vulnerable-edges", 3, {"--degree-threshold", "0"});
  EXPECT_EQ(r.code, cli::kRuntimeError);
  EXPECT_NE(r.err.find("only 0"), std::string::npos) << r.err;
}

TEST_F(CliTest, MissingRemovalSkippedUnlessStrict) {
  Synth({"--num-nodes", "60"});
  ASSERT_EQ(Train({"--lambda", "0.01"}).code, cli::kOk);
  {
    std::ofstream w(Path("w.jsonl"));
    w << R"({"op":"node","u":3})" << '\n' << R"({"op":"node","u":3})" << '\n';
  }
  const Result lenient = Unlearn(Path("r.jsonl"), {});
  ASSERT_EQ(lenient.code, cli::kOk) << lenient.err;
  EXPECT_EQ(Summary()["skipped"], 1);
  EXPECT_EQ(Unlearn(Path("r.jsonl"), {"--strict"}).code, cli::kRuntimeError);
}

TEST_F(CliTest, ReportWritesCsvTables) {
  Synth({"--num-nodes", "100"});
  ASSERT_EQ(Train({"--lambda", "0.01"}).code, cli::kOk);
  ASSERT_EQ(Generate("random-edges", 6, {"--batch-size", "2"}).code, cli::kOk);
  ASSERT_EQ(Unlearn(Path("r.jsonl"), {"--oracle-checks"}).code, cli::kOk);
  const Result r = Run({"report", "--input", Path("r.jsonl"), "--summary",
                        Path("sum.csv"), "--accuracy", Path("acc.csv"), "--bounds",
                        Path("bounds.csv")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  std::ifstream sum(Path("sum.csv"));
  std::string header, row, extra;
  std::getline(sum, header);
  std::getline(sum, row);
  EXPECT_EQ(row.substr(0, 8), "batch,3,");
  EXPECT_FALSE(std::getline(sum, extra));
  std::ifstream bounds(Path("bounds.csv"));
  std::getline(bounds, header);
  EXPECT_EQ(header, "index,kind,residual_true,bound_data,bound_worst");

  { std::ofstream(Path("broken.jsonl")) << "{\"index\":0}\n"; }
  EXPECT_EQ(Run({"report", "--input", Path("broken.jsonl")}).code, cli::kConfigError);
}

}  // namespace
}  // namespace gunlearn
