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

// Martingale path generation and exact dyadic enumeration.
//
// All generators produce differences d_j = eta_j * v_j where v_j is a
// direction computed from f_{j-1} by a StepRule and eta_j is a scalar
// driver:
//   paley_walsh          eta_j = eps_j (Rademacher)
//   cond_symmetric       eta_j = xi_j * m_j, xi_j Rademacher, m_j from a
//                        MagnitudeLaw independent of xi_j
//   predictable_bounded  eta_j in {+2 w.p. 1/3, -1 w.p. 2/3} (mean zero,
//                        not symmetric)
// The dominating value w_j is a function of f_{j-1} only.

#ifndef SMOOTHMART_STOCHASTIC_H_
#define SMOOTHMART_STOCHASTIC_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smoothmart/geometry.h"
#include "smoothmart/rng.h"

namespace smoothmart {

enum class GeneratorKind { kPaleyWalsh, kCondSymmetric, kPredictableBounded };

enum class RuleKind { kConstStep, kRotating, kHistoryNormCap, kDecaying };

// Built-in direction rules (steps are 1-based):
//   const_step(a)            a * e_1
//   rotating(a)              a * e_{(j mod d) + 1}
//   history_norm_cap(a, b)   a * min(1, ||f_{j-1}|| + b) * u_j, where u_j
//                            is f_{j-1} + e_{(j mod d)+1} normalized (e_1
//                            if that sum vanishes); b defaults to 1
//   decaying(a, gamma)       a * j^{-gamma} * e_1
struct StepRule {
  RuleKind kind = RuleKind::kConstStep;
  double a = 1.0;
  // gamma for decaying, b for history_norm_cap.
  double param = 0.0;

  static StepRule ConstStep(double a);
  static StepRule Rotating(double a);
  static StepRule HistoryNormCap(double a, double offset = 1.0);
  static StepRule Decaying(double a, double gamma);
  // Parses a rule key ("rotating") with positional parameters. Throws
  // InputError for unknown names or wrong arity.
  static StepRule Parse(const std::string& name,
                        const std::vector<double>& params);

  Point Direction(const SpaceSpec& space, int step,
                  std::span<const double> f_prev) const;
  // Upper bound on ||Direction(step, .)|| over all histories.
  double SupNorm(int step) const;
  std::string ToString() const;
};

enum class MagnitudeLaw { kUnit, kTwoPoint, kUniform };

// Law of m_j for cond_symmetric generators; values lie in [0, 1].
struct Magnitude {
  MagnitudeLaw law = MagnitudeLaw::kUnit;
  double low = 0.5;  // two_point: m in {low, 1}

  double Sample(double u) const;
  double SecondMoment() const;
  std::string ToString() const;
};

enum class WRuleKind {
  kTight,  // w_j = scale * (max |eta|) * ||v_j||
  kSup,    // w_j = scale * (max |eta|) * SupNorm(j), history-free
};

struct WRule {
  WRuleKind kind = WRuleKind::kTight;
  double scale = 1.0;
};

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kPaleyWalsh;
  int horizon = 1;
  StepRule rule;
  Magnitude magnitude;
  WRule w_rule;

  // True when every difference is a +-1 multiple of a predictable vector.
  bool IsSignDriven() const;
  bool IsConditionallySymmetric() const;
  // max |eta_j|.
  double DriverBound() const;
  // E eta_j^2.
  double DriverSecondMoment() const;
  // a priori bound on w_j over all histories.
  double WSup(int step) const;
  std::string ToString() const;
};

std::string ToString(GeneratorKind kind);

// One sampled trajectory. f has horizon + 1 points with f[0] = 0; the
// per-step arrays are 0-based, so d[j-1] = f_j - f_{j-1} and w[j-1] = w_j.
struct MartingalePath {
  std::vector<Point> f;
  std::vector<Point> d;
  std::vector<double> w;
  // Scalar drivers: d_j = signs[j-1] * magnitudes[j-1] * v_j.
  std::vector<int> signs;
  std::vector<double> magnitudes;
  // E_{j-1} ||d_j||^2 under the generator's two-branch law.
  std::vector<double> cond_var;

  int horizon() const { return static_cast<int>(d.size()); }
};

// Tolerance on ||d_j|| <= w_j.
inline constexpr double kDominationSlack = 1e-12;

// Samples a path. Throws ContractViolation (with the step) when the rule
// produces ||d_j|| > w_j + kDominationSlack.
MartingalePath GeneratePath(const GeneratorSpec& gen, const SpaceSpec& space,
                            const RngSpec& rng);

// Deterministic path for explicit drivers; `magnitudes` may be empty for
// unit magnitudes. signs[j-1] in {+1, -1}.
MartingalePath PathFromDrivers(const GeneratorSpec& gen,
                               const SpaceSpec& space,
                               std::span<const int> signs,
                               std::span<const double> magnitudes = {});

// Recomputes w_j from the stored prefix f_0..f_{j-1}.
double RecomputeW(const GeneratorSpec& gen, const SpaceSpec& space,
                  const MartingalePath& path, int step);

inline constexpr int kDefaultTreeDepthCap = 16;

// Full enumeration of a Paley-Walsh martingale. Level j holds 2^j nodes;
// the children of node k are 2k (eps = +1) and 2k + 1 (eps = -1), so the
// first sign is the most significant bit of a leaf index.
struct DyadicTree {
  SpaceSpec space = SpaceSpec::Euclidean(1);
  int depth = 0;
  // values[j] is a flat array of 2^j points.
  std::vector<std::vector<double>> values;
  // w[j][k] is w_{j+1} at node k of level j, j < depth.
  std::vector<std::vector<double>> w;

  std::span<const double> Value(int level, std::size_t node) const;
  std::span<double> MutableValue(int level, std::size_t node);
  std::size_t NodeCount(int level) const { return std::size_t{1} << level; }
};

DyadicTree BuildTree(const GeneratorSpec& gen, const SpaceSpec& space,
                     int depth, int depth_cap = kDefaultTreeDepthCap);

// Leaf index reached by a sign sequence.
std::size_t LeafIndex(std::span<const int> signs);

// f*_n = max_{1 <= j <= n} ||f_j - f_0||.
double MaximalFunction(const SpaceSpec& space, const MartingalePath& path,
                       int n);

// S_{p,n}(f) = (sum_{j <= n} ||d_j||^p)^{1/p}.
double SVariation(const SpaceSpec& space, const MartingalePath& path, double p,
                  int n);

// s_{2,n}^2 at every node of level n, from exact two-child averages.
std::vector<double> ConditionalQuadraticVariation(const DyadicTree& tree,
                                                  int n);

// max over internal nodes of ||mean(children) - node||.
double CheckMartingaleExact(const DyadicTree& tree);

}  // namespace smoothmart

#endif  // SMOOTHMART_STOCHASTIC_H_
