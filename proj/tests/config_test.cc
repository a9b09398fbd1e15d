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


#include "smoothmart/config.h"

#include <string>

#include <gtest/gtest.h>

namespace smoothmart {
namespace {

// Returns the issues of a rejected config, or an empty list.
std::vector<std::string> Issues(const std::string& text) {
  try {
    ParseConfig(text);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool Mentions(const std::vector<std::string>& issues, const std::string& a,
              const std::string& b) {
  for (const std::string& s : issues) {
    if (s.find(a) != std::string::npos && s.find(b) != std::string::npos) {
      return true;
    }
  }
  return false;
}

constexpr char kValid[] = R"y(seed: 7
trials: 500
space: {kind: lp, p: 1.5, dim: 3}
constants: {c: 1.4, c_univ: 2}
generators:
  - {name: walk, kind: paley_walsh, horizon: 8, rule: const_step(1)}
  - {name: cs, kind: cond_symmetric, horizon: 6, rule: "decaying(1, 0.5)", magnitude: two_point(0.25)}
suites:
  - {id: pinelis-p, r_grid: [0.5, 1, 2]}
  - {id: good-lambda, generators: [cs], trials: 100}
)y";

TEST(ParseConfigTest, Valid) {
  const ExperimentConfig cfg = ParseConfig(kValid);
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.trials, 500u);
  EXPECT_EQ(cfg.space, SpaceSpec::Lp(1.5, 3));
  EXPECT_EQ(*cfg.constants.c, 1.4);
  EXPECT_FALSE(cfg.constants.K.has_value());
  EXPECT_EQ(cfg.constants.c_univ, 2.0);
  ASSERT_EQ(cfg.generators.size(), 2u);
  EXPECT_EQ(cfg.generators[1].spec.rule.kind, RuleKind::kDecaying);
  EXPECT_EQ(cfg.generators[1].spec.magnitude.low, 0.25);
  ASSERT_EQ(cfg.suites.size(), 2u);
  EXPECT_EQ(*cfg.suites[0].Grid("r_grid"), (std::vector<double>{0.5, 1, 2}));
  EXPECT_EQ(cfg.suites[0].line, 9);
  EXPECT_EQ(*cfg.suites[1].trials, 100u);
  EXPECT_EQ(cfg.suites[1].generators, (std::vector<std::string>{"cs"}));
}

TEST(ParseConfigTest, UnknownNamesCarryLines) {
  const std::string text = R"(seed: 1
generators:
  - {name: g, kind: paley_walsh, horizon: 4, rule: spiral(1)}
suites:
  - {id: azuma-real}
  - {id: no-such-suite}
)";
  const auto issues = Issues(text);
  EXPECT_TRUE(Mentions(issues, "line 3", "spiral")) << issues.size();
  EXPECT_TRUE(Mentions(issues, "line 6", "no-such-suite"));
}

TEST(ParseConfigTest, UnsortedGridAndMissingSeed) {
  const std::string text = R"(trials: 10
generators:
  - {name: g, kind: paley_walsh, horizon: 4, rule: const_step(1)}
suites:
  - {id: azuma-real, r_grid: [2, 1]}
)";
  const auto issues = Issues(text);
  EXPECT_TRUE(Mentions(issues, "seed", "mandatory"));
  EXPECT_TRUE(Mentions(issues, "line 5", "ascending"));
}

TEST(ParseConfigTest, MoreRejections) {
  EXPECT_FALSE(Issues("seed: 1\nsuites: []\n").empty());
  EXPECT_TRUE(Mentions(
      Issues("seed: 1\nspace: {kind: euclidean, p: 1.5}\n"
             "suites:\n  - {id: azuma-real}\n"),
      "line 2", "p = 2"));
  EXPECT_TRUE(Mentions(
      Issues("seed: 1\nbogus: 3\nsuites:\n  - {id: azuma-real}\n"), "line 2",
      "bogus"));
  EXPECT_TRUE(Mentions(
      Issues("seed: 1\ngenerators:\n"
             "  - {name: a, kind: paley_walsh, horizon: 2, rule: const_step(1)}\n"
             "  - {name: a, kind: paley_walsh, horizon: 2, rule: const_step(1)}\n"
             "suites:\n  - {id: azuma-real, generators: [b]}\n"),
      "line 4", "duplicate"));
  EXPECT_THROW(ParseConfig("seed: [1"), ConfigError);
}

TEST(ParseRuleTest, Forms) {
  EXPECT_EQ(ParseRule("rotating(0.5)").a, 0.5);
  EXPECT_EQ(ParseRule("history_norm_cap(1, 0.2)").param, 0.2);
  EXPECT_THROW(ParseRule("rotating"), InputError);
  EXPECT_THROW(ParseRule("rotating(x)"), InputError);
  EXPECT_EQ(ParseMagnitude("uniform").law, MagnitudeLaw::kUniform);
  EXPECT_EQ(ParseMagnitude("two_point(0.3)").low, 0.3);
  EXPECT_THROW(ParseMagnitude("gaussian"), InputError);
}

}  // namespace
}  // namespace smoothmart
