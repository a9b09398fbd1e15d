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


// Experiment runner: the suite registry and the mapping from a parsed
// config to report rows.

#ifndef SMOOTHMART_EXPERIMENT_H_
#define SMOOTHMART_EXPERIMENT_H_

#include <string>
#include <vector>

#include "smoothmart/config.h"
#include "smoothmart/report.h"

namespace smoothmart {

struct SuiteInfo {
  std::string id;
  std::string verifies;
  std::vector<std::string> scalar_keys;
  std::vector<std::string> grid_keys;
};

const std::vector<SuiteInfo>& SuiteRegistry();
// nullptr for unknown ids.
const SuiteInfo* FindSuite(const std::string& id);

struct RunOptions {
  bool timing = false;
};

// Rows sorted by (suite, generator, grid index).
std::vector<ReportRow> RunExperiment(const ExperimentConfig& config,
                                     const RunOptions& options = {});

bool AnyFailure(const std::vector<ReportRow>& rows);

// c, K (maximal tails), K for the good-lambda factor and K for the p-version
// of the self-normalized bound, after applying config overrides.
struct ResolvedConstants {
  double c = 1.0;
  double K = 0.0;
  double K_good_lambda = 0.0;
  double K_delapena = 0.0;
};
ResolvedConstants ResolveConstants(const ExperimentConfig& config);

// Generators exercised by the acceptance battery and the example configs.
std::vector<NamedGenerator> BuiltinGenerators(const SpaceSpec& space,
                                              int horizon);

struct SelftestLine {
  std::string name;
  bool pass = false;
  std::string detail;
};
std::vector<SelftestLine> RunSelftest();

}  // namespace smoothmart

#endif  // SMOOTHMART_EXPERIMENT_H_
