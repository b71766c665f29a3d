// Copyright 2026 The adaptfuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"

namespace {

namespace fs = std::filesystem;

struct Result {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    std::string pattern = (fs::temp_directory_path() / "adaptfuse-cli-XXXXXX").string();
    dir_ = new fs::path(mkdtemp(pattern.data()));
    const Result r = Run("gen-fixtures --out " + (Dir() / "fx").string() + " --duration 3");
    ASSERT_EQ(r.exit_code, 0) << r.err;
  }
  static void TearDownTestSuite() {
    std::error_code ec;
    fs::remove_all(*dir_, ec);
    delete dir_;
  }

  static const fs::path& Dir() { return *dir_; }
  static fs::path Fx() { return Dir() / "fx"; }
  static std::string Config() { return " --config " + (Fx() / "adaptfuse.ini").string(); }

  static Result Run(const std::string& args) {
    const fs::path out = Dir() / "stdout.txt";
    const fs::path err = Dir() / "stderr.txt";
    const std::string cmd = std::string(ADAPTFUSE_CLI_PATH) + " " + args + " >" +
                            out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    Result r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = Slurp(out);
    r.err = Slurp(err);
    return r;
  }

  static void Write(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

 private:
  static fs::path* dir_;
};

fs::path* CliTest::dir_ = nullptr;

TEST_F(CliTest, EverySubcommandHasHelpAndConfig) {
  for (const char* sub : {"fuse", "split", "categorize", "evaluate", "rank", "run",
                          "protocol-check", "gen-fixtures"}) {
    const Result r = Run(std::string(sub) + " --help");
    EXPECT_EQ(r.exit_code, 0) << sub;
    EXPECT_NE(r.out.find("--config"), std::string::npos) << sub;
  }
}

TEST_F(CliTest, UsageErrorsExitOneAndNameTheInput) {
  Result r = Run("categorize --lux-trace /no/such/trace.csv");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("/no/such/trace.csv"), std::string::npos) << r.err;

  r = Run("rank --stats " + (Fx() / "mock_table.csv").string() + " --category dim_light --bogus");
  EXPECT_EQ(r.exit_code, 1);
  r = Run("");
  EXPECT_EQ(r.exit_code, 1);

  Write(Dir() / "bad.ini", "[turret]\ngain = 3\n");
  r = Run("categorize --lux-trace " + (Fx() / "lux" / "ramp_white.csv").string() +
          " --config " + (Dir() / "bad.ini").string());
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("bad.ini"), std::string::npos) << r.err;

  Write(Dir() / "broken_stats.csv", "model_id,category\ndim_f90,dim_light\n");
  r = Run("rank --stats " + (Dir() / "broken_stats.csv").string() + " --category dim_light");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("broken_stats.csv"), std::string::npos) << r.err;
}

TEST_F(CliTest, CategorizeThreeLevelTrace) {
  Write(Dir() / "trace.csv", "timestamp_ms,lux\n0,2000\n1000,500\n2000,5\n");
  const Result r = Run("categorize --lux-trace " + (Dir() / "trace.csv").string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("0,2000,full_light"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("1000,500,dim_light"), std::string::npos);
  EXPECT_NE(r.out.find("2000,5,no_light"), std::string::npos);
  EXPECT_NE(r.out.find("switches: 2"), std::string::npos);
}

TEST_F(CliTest, RankThreeModelCohortTopScoresOne) {
  Write(Dir() / "stats.csv",
        "model_id,category,fusion_rgb_percent,mean,std\n"
        "dim_f90,dim_light,90,0.9203,0.0490\n"
        "dim_f80,dim_light,80,0.9000,0.0796\n"
        "dim_f70,dim_light,70,0.8543,0.1203\n");
  const Result r = Run("rank --stats " + (Dir() / "stats.csv").string() +
                       " --category dim_light --out " + (Dir() / "ranked.csv").string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header, top;
  std::getline(lines, header);
  std::getline(lines, top);
  EXPECT_NE(top.find("dim_f90"), std::string::npos) << r.out;
  EXPECT_NE(top.find("1.0000"), std::string::npos) << r.out;
  EXPECT_NE(Slurp(Dir() / "ranked.csv").find("dim_light,1,dim_f90,90"), std::string::npos);
}

TEST_F(CliTest, RunMockOnFixturesWritesLogs) {
  const fs::path out = Dir() / "run";
  const Result r = Run("run" + Config() + " --source " + (Fx() / "dataset").string() +
                       " --recording ramp_white --backend mock --out " + out.string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("models used: full_f80 dim_f90 no_f40"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("switches: 2"), std::string::npos);
  for (const char* f : {"detections.csv", "commands.csv", "switches.csv", "run_log.jsonl",
                        "summary.json"}) {
    EXPECT_GT(fs::file_size(out / f), 0u) << f;
  }
  const std::string first = Slurp(out / "run_log.jsonl");
  ASSERT_EQ(Run("run" + Config() + " --source " + (Fx() / "dataset").string() +
                " --recording ramp_white --out " + out.string())
                .exit_code,
            0);
  EXPECT_EQ(Slurp(out / "run_log.jsonl"), first);
}

TEST_F(CliTest, RunWithoutMockTableIsAValidationError) {
  const Result r = Run("run --source " + (Fx() / "dataset").string() + " --out " +
                       (Dir() / "nope").string());
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("mock_table"), std::string::npos) << r.err;
}

TEST_F(CliTest, RuntimeFailureExitsTwo) {
  const Result r = Run("gen-fixtures --out /proc/adaptfuse-cannot-write");
  EXPECT_EQ(r.exit_code, 2) << r.err;
}

TEST_F(CliTest, ProtocolCheckWithoutServerReportsViolations) {
  const Result r = Run("protocol-check --endpoint http://127.0.0.1:9 --timeout-ms 300");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.out.find("FAIL health"), std::string::npos) << r.out;
}

TEST_F(CliTest, CsvOutputsRoundTripAcrossSubcommands) {
  // split: its outputs are manifests split itself accepts.
  Result r = Run("split" + Config() + " --manifest " + (Fx() / "manifest.csv").string() +
                 " --out " + (Dir() / "split").string() + " --seed 3");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  r = Run("split --manifest " + (Dir() / "split" / "train.csv").string() + " --out " +
          (Dir() / "split2").string());
  ASSERT_EQ(r.exit_code, 0) << r.err;

  // evaluate -> rank -> run.
  r = Run("evaluate" + Config() + " --logs " + (Fx() / "trials" / "logs").string() +
          " --manifest " + (Fx() / "trials" / "manifest.csv").string() + " --out " +
          (Dir() / "eval").string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("dim_light top: 1.dim_f90"), std::string::npos) << r.out;
  r = Run("rank --stats " + (Dir() / "eval" / "fusion_stats.csv").string() +
          " --category no_light");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  r = Run("run" + Config() + " --source " + (Fx() / "dataset").string() +
          " --recording no_white --rankings " + (Dir() / "eval" / "rankings.csv").string() +
          " --out " + (Dir() / "ranked_run").string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("models used: no_f40"), std::string::npos) << r.out;

  // fuse: the pair manifest feeds split; fused lux traces feed categorize.
  const fs::path rec = Fx() / "dataset" / "dim_white";
  r = Run("fuse --rgb " + (rec / "rgb").string() + " --lwir " + (rec / "lwir").string() +
          " --labels " + (rec / "labels").string() + " --levels 0,90 --out " +
          (Dir() / "fused").string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("images written: 60"), std::string::npos) << r.out;
  r = Run("split --manifest " + (Dir() / "fused" / "pairs_manifest.csv").string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  r = Run("categorize --lux-trace " + (Fx() / "lux" / "ramp_white.csv").string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("switches: 2"), std::string::npos);
}

}  // namespace
