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


// Experiment configuration. The file is YAML:
//
//   seed: 20260101            # mandatory
//   trials: 100000
//   space: {kind: lp, p: 1.5, dim: 4}
//   constants: {c: 1.4, K: 4.0, c_univ: 1, s: 0.5}
//   generators:
//     - {name: walk, kind: paley_walsh, horizon: 16, rule: rotating(1)}
//   suites:
//     - {id: pinelis-p, r_grid: [1, 2, 4]}
//   output: out/pinelis
//
// Suite entries accept the keys listed by the suite registry.

#ifndef SMOOTHMART_CONFIG_H_
#define SMOOTHMART_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smoothmart/error.h"
#include "smoothmart/geometry.h"
#include "smoothmart/stochastic.h"

namespace smoothmart {

// All problems found in a config, each prefixed with its line.
class ConfigError : public InputError {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

struct NamedGenerator {
  std::string name;
  GeneratorSpec spec;
};

struct Constants {
  std::optional<double> c;
  std::optional<double> K;
  double c_univ = 1.0;
  double s = 0.5;
};

struct SuiteEntry {
  std::string id;
  int line = 0;
  std::map<std::string, double> scalars;
  std::map<std::string, std::vector<double>> grids;
  std::vector<std::string> generators;  // empty selects all
  std::optional<std::uint64_t> trials;
  std::string sampling = "monte_carlo";

  double Scalar(const std::string& key, double fallback) const;
  const std::vector<double>* Grid(const std::string& key) const;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::uint64_t trials = 10000;
  SpaceSpec space = SpaceSpec::Euclidean(1);
  Constants constants;
  std::vector<NamedGenerator> generators;
  std::vector<SuiteEntry> suites;
  std::string output_dir;  // empty when not given
};

// Parses "name(a, b)" or "name" into a StepRule.
StepRule ParseRule(const std::string& text);
// Parses "unit", "uniform" or "two_point(low)".
Magnitude ParseMagnitude(const std::string& text);

ExperimentConfig ParseConfig(const std::string& yaml_text);
ExperimentConfig LoadConfig(const std::string& path);

}  // namespace smoothmart

#endif  // SMOOTHMART_CONFIG_H_
