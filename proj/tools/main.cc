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


// smoothmart: run verification suites from a config file.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "smoothmart/config.h"
#include "smoothmart/experiment.h"
#include "smoothmart/parallel.h"
#include "smoothmart/report.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFail = 2;

std::string OutputDir(const std::string& flag, const std::string& config) {
  if (!flag.empty()) return flag;
  if (!config.empty()) return config;
  if (const char* env = std::getenv("SMOOTHMART_OUT_DIR"); env && *env) {
    return env;
  }
  return "out";
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

int Run(const std::string& config_path, const std::string& out_flag,
        const std::string& format, bool timing) {
  const smoothmart::ExperimentConfig config =
      smoothmart::LoadConfig(config_path);
  const std::vector<smoothmart::ReportRow> rows =
      smoothmart::RunExperiment(config, {timing});
  const std::string table = smoothmart::RenderTable(rows);
  const std::string structured = smoothmart::RenderStructured(rows);
  const std::filesystem::path dir = OutputDir(out_flag, config.output_dir);
  std::filesystem::create_directories(dir);
  WriteFile(dir / "report.csv", table);
  WriteFile(dir / "report.jsonl", structured);
  std::cout << (format == "structured" ? structured : table);
  std::size_t fails = 0;
  for (const auto& row : rows) {
    if (row.verdict == smoothmart::Verdict::kFail) ++fails;
  }
  std::cerr << rows.size() << " rows, " << fails << " failed; reports in "
            << dir.string() << "\n";
  return fails > 0 ? kExitFail : kExitOk;
}

int Selftest() {
  bool ok = true;
  for (const auto& line : smoothmart::RunSelftest()) {
    std::cout << (line.pass ? "PASS " : "FAIL ") << line.name << ": "
              << line.detail << "\n";
    ok = ok && line.pass;
  }
  return ok ? kExitOk : kExitFail;
}

int ListSuites() {
  for (const auto& info : smoothmart::SuiteRegistry()) {
    std::cout << info.id << "\t" << info.verifies << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concentration inequality verification for Banach-space-valued "
               "martingales"};
  app.require_subcommand(1);
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string out_dir;
  std::string format = "table";
  bool timing = false;
  app.add_option("--threads", threads, "worker threads")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format, "stdout format")
      ->check(CLI::IsMember({"table", "structured"}));
  app.add_flag("--timing", timing, "fill the ms column with wall time");

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "run the suites of a config");
  run->add_option("config", config_path, "config file")->required();
  CLI::App* selftest = app.add_subcommand("selftest", "exact-check battery");
  CLI::App* list = app.add_subcommand("list-suites", "list suite ids");
  for (CLI::App* sub : {run, selftest, list}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  smoothmart::SetWorkerCount(threads);
  try {
    if (*run) return Run(config_path, out_dir, format, timing);
    if (*selftest) return Selftest();
    if (*list) return ListSuites();
  } catch (const smoothmart::ConfigError& e) {
    std::cerr << "config errors in " << config_path << ":\n";
    for (const auto& issue : e.issues()) std::cerr << "  " << issue << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
