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


// Verification engines: Monte Carlo and exhaustive event frequencies with
// exact binomial confidence bounds, exact checks on dyadic trees, the
// good-lambda localization, and moment-ratio estimates.
//
// "For some n" events are scanned over n = 1..horizon only. The events
// grow with the horizon, so truncation can only lower the frequencies.

#ifndef SMOOTHMART_VERIFY_H_
#define SMOOTHMART_VERIFY_H_

#include <climits>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smoothmart/bounds.h"
#include "smoothmart/geometry.h"
#include "smoothmart/rng.h"
#include "smoothmart/stochastic.h"

namespace smoothmart {

struct TailEstimate {
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  double p_hat = 0.0;
  // One-sided 99% Clopper-Pearson limits; equal to p_hat when exact.
  double ci_upper_99 = 0.0;
  double ci_lower_99 = 0.0;
  bool exact = false;
};

TailEstimate MakeTailEstimate(std::uint64_t hits, std::uint64_t trials);
// Probability known exactly (enumeration); `hits` out of `trials` atoms of
// equal mass.
TailEstimate MakeExactEstimate(std::uint64_t hits, std::uint64_t trials);

enum class Verdict { kPass, kFail, kInconclusive, kNotApplicable };
std::string ToString(Verdict verdict);

// pass: ci_upper <= bound; fail: ci_lower > bound; otherwise inconclusive.
Verdict CheckDominance(const TailEstimate& est, double bound);
Verdict CheckDominance(const TailEstimate& est, const BoundResult& bound);

enum class EventKind {
  kMaximalTail,        // f*_n >= r
  kMaximalTailStrict,  // f*_n > r
  kFixedNTail,         // ||f_n - f_0|| >= r
  kSelfNormalized,     // ||f_n - f_0|| / S_{p,n} >= r
  kFreedman,           // f_n - f_0 >= r and s_{2,n}^2 <= b, some n (real)
  kDelapena,           // f_n - f_0 >= r and S_{2,n}^2 <= b, some n (real)
  kDelapenaSelfNorm,   // (f_n - f_0)/(alpha + beta S_{2,n}^2) >= r and
                       // 1/S_{2,n}^2 <= b, some n (real)
  kDelapenaP,          // ||f_n - f_0|| / (alpha + beta S_{p,n}^p)^{2/p} >= r
                       // and 1/S_{p,n}^p <= b, some n
  kGoodLambdaLhs,      // f* > beta r and S_p <= delta r  (r plays lambda)
};

std::string ToString(EventKind kind);

struct EventSpec {
  EventKind kind = EventKind::kMaximalTail;
  double r = 0.0;
  int n = 0;  // 0 selects the horizon
  double p = 2.0;
  double alpha = 0.0;
  double beta = 1.0;
  double b = 1.0;
  double delta = 0.5;

  static EventSpec MaximalTail(double r, int n = 0);
  static EventSpec FixedNTail(double r, int n = 0);
  static EventSpec SelfNormalized(double r, double p, int n = 0);
  static EventSpec Freedman(double r, double b);
  static EventSpec Delapena(double r, double b);
  static EventSpec DelapenaSelfNorm(double r, double alpha, double beta,
                                    double b);
  static EventSpec DelapenaP(double r, double p, double alpha, double beta,
                             double b);
  static EventSpec GoodLambdaLhs(double lambda, double beta, double delta,
                                 double p);
};

// Per-path quantities shared by all events.
struct PathStats {
  std::vector<double> norm_f;  // ||f_j - f_0||, j = 0..n
  std::vector<double> real_f;  // f_j - f_0 (first coordinate)
  std::vector<double> norm_d;  // ||d_j||, j = 1..n (0-based)
  // s_{2,j}^2 from cond_var, j = 0..n; NaN when the path has no cond_var.
  std::vector<double> cum_s2;
  bool real_valued = false;
};

PathStats ComputeStats(const SpaceSpec& space, const MartingalePath& path);

// Throws InputError when the event needs a real-valued path and the space
// has dim > 1.
bool EventOccurs(const EventSpec& ev, const PathStats& stats);

// Hits per event over trials [first_trial, first_trial + trials), trial t
// using rng.WithTrial(t).
std::vector<std::uint64_t> CountHits(const GeneratorSpec& gen,
                                     const SpaceSpec& space,
                                     std::span<const EventSpec> events,
                                     std::uint64_t trials, const RngSpec& rng,
                                     std::uint64_t first_trial = 0);

std::vector<TailEstimate> EstimateTails(const GeneratorSpec& gen,
                                        const SpaceSpec& space,
                                        std::span<const EventSpec> events,
                                        std::uint64_t trials,
                                        const RngSpec& rng);

TailEstimate EstimateTail(const GeneratorSpec& gen, const SpaceSpec& space,
                          const EventSpec& ev, std::uint64_t trials,
                          const RngSpec& rng);

inline constexpr int kExhaustiveHorizonCap = 20;

// True when every sign pattern has equal mass and the horizon is within
// kExhaustiveHorizonCap.
bool SupportsExhaustive(const GeneratorSpec& gen);

// Exact probabilities by enumerating all 2^n sign patterns.
std::vector<TailEstimate> ExhaustiveTails(const GeneratorSpec& gen,
                                          const SpaceSpec& space,
                                          std::span<const EventSpec> events);

// max over internal nodes of
//   mean_children cosh(lambda |f_j|) - exp(lambda^2 w_j^2 / 2) cosh(lambda |f_{j-1}|).
// Euclidean trees only.
double CheckSupermartingaleExact(const DyadicTree& tree, double lambda);

// Copy of `tree` with every dominating value multiplied by `factor`.
DyadicTree ScaleDominatingValues(const DyadicTree& tree, double factor);

inline constexpr int kNever = INT_MAX;

struct Localization {
  MartingalePath h;
  int mu = kNever;
  int nu = kNever;
  int sigma = kNever;
};

// h_n = sum_{j <= n} 1{mu < j <= min(nu, sigma)} d_j with
//   mu = inf{n : ||f_n|| > lambda}, nu = inf{n : ||f_n|| > beta lambda},
//   sigma = inf{n : S_{p,n+1} > delta lambda}
// (S_{p,horizon+1} read as S_{p,horizon}). h keeps the original w.
Localization ConstructLocalization(const SpaceSpec& space,
                                   const MartingalePath& path, double lambda,
                                   double beta, double delta, double p);

struct GoodLambdaRow {
  double lambda = 0.0;
  TailEstimate lhs;       // P{f* > beta lambda, S_p <= delta lambda}
  TailEstimate rhs_tail;  // P{f* > lambda}
  double factor = 0.0;
  // lhs.p_hat <= factor * rhs_tail.ci_upper_99
  bool holds = false;
  // Paths in the lhs event whose localization has h* <= (beta-1-delta)
  // lambda. Always 0 when the pathwise inclusion holds.
  std::uint64_t inclusion_failures = 0;
  // The lhs event is contained in the rhs event, so lhs hits given rhs hits
  // are binomial with success probability P(lhs) / P(rhs). These are its
  // one-sided 99% bounds; the verdict compares them with `factor`.
  double conditional_ci_upper = 1.0;
  double conditional_ci_lower = 0.0;
  // beta lambda >= sum_j sup w_j, so the lhs event is impossible.
  bool unreachable = false;
  Verdict verdict = Verdict::kInconclusive;
};

// `K` is the Azuma-type constant used in the factor and `scale` multiplies
// it as in BoundGoodLambdaFactor.
std::vector<GoodLambdaRow> CheckGoodLambda(
    const GeneratorSpec& gen, const SpaceSpec& space, double p, double K,
    double beta, double delta, std::span<const double> lambda_grid,
    std::uint64_t trials, const RngSpec& rng, double scale = 1.0);

// Moment estimates either exact (enumeration) or Monte Carlo.
enum class Sampling { kAuto, kMonteCarlo, kExhaustive };

struct PisierResult {
  double numerator = 0.0;    // E ||f_n||^p at the horizon
  double denominator = 0.0;  // sum_j E ||d_j||^p
  double ratio = 0.0;
  double std_error = 0.0;    // delta method; 0 when exact
  bool degenerate = false;   // denominator == 0
  bool exact = false;
};

PisierResult CheckPisierType(const GeneratorSpec& gen, const SpaceSpec& space,
                             double p, std::uint64_t trials,
                             const RngSpec& rng,
                             Sampling sampling = Sampling::kAuto);

struct NaorMomentResult {
  double lhs = 0.0;  // (E ||f_n - f_0||^q)^{1/q}
  double rhs = 0.0;  // 8 sqrt(s+q) sqrt(sum_j (E ||d_j||^q)^{2/q})
  bool holds = false;
  bool exact = false;
};

NaorMomentResult CheckNaorMoment(const GeneratorSpec& gen,
                                 const SpaceSpec& space, double s, double q,
                                 std::uint64_t trials, const RngSpec& rng,
                                 Sampling sampling = Sampling::kAuto);

struct FamilyMomentResult {
  double lhs_norm = 0.0;  // || (sum_j ||f^j_n||^p)^{1/p} ||_r
  double rhs_norm = 0.0;  // || (sum_j S_{p,n}^p(f^j))^{1/p} ||_r
  double ratio = 0.0;
  double ratio_over_r_power = 0.0;  // ratio / r^{1/p}
  // ratio of the reverse (cotype) norms over r^{1/2}; Euclidean p = 2 only,
  // NaN otherwise.
  double cotype_ratio_over_r_power = 0.0;
  bool exact = false;
};

// All members are driven by the same dyadic signs.
FamilyMomentResult CheckFamilyMoment(std::span<const GeneratorSpec> gens,
                                     const SpaceSpec& space, double p,
                                     double r, std::uint64_t trials,
                                     const RngSpec& rng,
                                     Sampling sampling = Sampling::kAuto);

struct DelapenaParams {
  double r = 1.0;
  double b = 1.0;
  double alpha = 0.0;
  double beta = 1.0;
  double K = 1.0;  // constant of the p-version
};

struct TheoremCheck {
  std::string theorem;  // freedman, delapena, delapena_selfnorm, delapena_p
  TailEstimate estimate;
  double bound = 0.0;
  Verdict verdict = Verdict::kNotApplicable;
  bool hypotheses_ok = false;
  std::string note;
};

// Empty when `gen` on `space` meets the hypotheses of `theorem` (one of the
// TheoremCheck names), otherwise the missing hypothesis.
std::string HypothesisGap(const std::string& theorem, const GeneratorSpec& gen,
                          const SpaceSpec& space);

// One check per theorem on shared paths; a theorem whose hypotheses the
// generator does not meet is reported as not applicable.
std::vector<TheoremCheck> CheckFreedmanAndDelapena(
    const GeneratorSpec& gen, const SpaceSpec& space,
    const DelapenaParams& params, std::uint64_t trials, const RngSpec& rng,
    Sampling sampling = Sampling::kAuto);

}  // namespace smoothmart

#endif  // SMOOTHMART_VERIFY_H_
