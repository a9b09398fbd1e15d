// Copyright 2026 The Smoothmart Authors
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


// Drives the built smoothmart binary end to end.

#include <sys/wait.h>

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

struct Result {
  int status = -1;
  std::string out;
};

Result RunCli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" SMOOTHMART_BIN "' " + args + " 2>&1";
  Result res;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return res;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, n);
  const int raw = pclose(pipe);
  res.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return res;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("smoothmart_cli_") + info->name() + "_" +
            std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

constexpr char kAzumaZero[] = R"(seed: 11
trials: 2000
space: {kind: euclidean, dim: 1}
generators:
  - {name: walk, kind: paley_walsh, horizon: 8, rule: const_step(1)}
  - {name: two_point, kind: cond_symmetric, horizon: 8, rule: const_step(1), magnitude: two_point(0.5)}
suites:
  - {id: azuma-real, r_grid: [0]}
)";

TEST_F(CliTest, ZeroLevelAzumaPasses) {
  const std::string cfg = Write("azuma.yaml", kAzumaZero);
  const Result r = RunCli("run " + cfg + " --out " + (dir_ / "o").string());
  EXPECT_EQ(r.status, 0) << r.out;
  const std::string table = Slurp(dir_ / "o" / "report.csv");
  EXPECT_EQ(table.rfind("suite,param,estimate,ci_upper,bound,verdict,ms\n", 0),
            0u);
  int rows = 0;
  std::istringstream lines(table);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_NE(line.find(",pass,"), std::string::npos) << line;
  }
  EXPECT_GE(rows, 2);
  const std::string jsonl = Slurp(dir_ / "o" / "report.jsonl");
  EXPECT_NE(jsonl.find("\"schema\":\"v1\""), std::string::npos);
}

TEST_F(CliTest, FalsificationExitsTwo) {
  const std::string cfg = Write("fals.yaml", R"(seed: 3
space: {kind: euclidean, dim: 2}
generators:
  - {name: walk, kind: paley_walsh, horizon: 8, rule: const_step(1)}
  - {name: rotating, kind: paley_walsh, horizon: 8, rule: rotating(1)}
suites:
  - {id: falsification}
)");
  const Result r = RunCli("run " + cfg + " --out " + (dir_ / "o").string());
  EXPECT_EQ(r.status, 2) << r.out;
  EXPECT_NE(Slurp(dir_ / "o" / "report.csv").find(",fail,"), std::string::npos);
}

TEST_F(CliTest, BadConfigExitsOneWithLines) {
  const std::string cfg = Write("bad.yaml", R"(seed: 3
generators:
  - {name: walk, kind: paley_walsh, horizon: 8, rule: zigzag(1)}
suites:
  - {id: azuma-real, r_grid: [3, 1]}
  - {id: azuma-imaginary}
)");
  const Result r = RunCli("run " + cfg + " --out " + (dir_ / "o").string());
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("line 3"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("zigzag"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("line 5"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("line 6"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("azuma-imaginary"), std::string::npos) << r.out;
  EXPECT_EQ(RunCli("run " + (dir_ / "missing.yaml").string()).status, 1);
  EXPECT_EQ(RunCli("frobnicate").status, 1);
}

TEST_F(CliTest, ReportsIndependentOfThreads) {
  const std::string cfg = Write("repro.yaml", R"(seed: 5
trials: 3000
space: {kind: lp, p: 1.5, dim: 3}
generators:
  - {name: rotating, kind: paley_walsh, horizon: 10, rule: rotating(1)}
  - {name: uniform, kind: cond_symmetric, horizon: 10, rule: history_norm_cap(1), magnitude: uniform}
suites:
  - {id: pinelis-p}
  - {id: self-normalized}
  - {id: pisier-type}
  - {id: reduction-invariants, trials: 200}
)");
  const Result a = RunCli("run " + cfg + " --threads 1 --out " + (dir_ / "a").string());
  const Result b = RunCli("run " + cfg + " --threads 3 --out " + (dir_ / "b").string());
  ASSERT_EQ(a.status, 0) << a.out;
  ASSERT_EQ(b.status, 0) << b.out;
  for (const char* f : {"report.csv", "report.jsonl"}) {
    const std::string x = Slurp(dir_ / "a" / f);
    EXPECT_FALSE(x.empty());
    EXPECT_EQ(x, Slurp(dir_ / "b" / f)) << f;
  }
}

TEST_F(CliTest, FormatSelectsStdout) {
  const std::string cfg = Write("azuma.yaml", kAzumaZero);
  const Result t =
      RunCli("run " + cfg + " --format table --out " + (dir_ / "t").string());
  EXPECT_NE(t.out.find("suite,param,estimate"), std::string::npos);
  const Result s =
      RunCli("run " + cfg + " --format structured --out " + (dir_ / "s").string());
  EXPECT_NE(s.out.find("\"schema\":\"v1\""), std::string::npos);
  EXPECT_EQ(s.out.find("suite,param,estimate"), std::string::npos);
}

TEST_F(CliTest, OutputDirectoryPrecedence) {
  const std::string env = "SMOOTHMART_OUT_DIR='" + (dir_ / "env").string() + "'";
  const std::string plain = Write("plain.yaml", kAzumaZero);
  ASSERT_EQ(RunCli("run " + plain, env).status, 0);
  EXPECT_TRUE(fs::exists(dir_ / "env" / "report.csv"));

  const std::string with_out =
      Write("with_out.yaml", std::string(kAzumaZero) + "output: " +
                                 (dir_ / "cfg").string() + "\n");
  ASSERT_EQ(RunCli("run " + with_out, env).status, 0);
  EXPECT_TRUE(fs::exists(dir_ / "cfg" / "report.csv"));

  ASSERT_EQ(RunCli("run " + with_out + " --out " + (dir_ / "flag").string(), env)
                .status,
            0);
  EXPECT_TRUE(fs::exists(dir_ / "flag" / "report.csv"));
}

TEST(CliBasics, ListSuites) {
  const Result r = RunCli("list-suites");
  EXPECT_EQ(r.status, 0);
  for (const char* id :
       {"azuma-real", "pinelis-p", "self-normalized", "good-lambda",
        "pisier-type", "naor-moment", "family-moment", "freedman",
        "delapena-real", "delapena-selfnorm", "delapena-p", "two-point",
        "reduction-invariants"}) {
    EXPECT_NE(r.out.find(id), std::string::npos) << id;
  }
}

TEST(CliBasics, Selftest) {
  const Result r = RunCli("selftest");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
}

TEST(CliBasics, Help) { EXPECT_EQ(RunCli("--help").status, 0); }

}  // namespace
