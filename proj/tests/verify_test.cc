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


#include "smoothmart/verify.h"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "smoothmart/error.h"
#include "smoothmart/parallel.h"
#include "smoothmart/reduction.h"

namespace smoothmart {
namespace {

GeneratorSpec Walk(int n, const StepRule& rule = StepRule::ConstStep(1.0)) {
  GeneratorSpec gen;
  gen.horizon = n;
  gen.rule = rule;
  return gen;
}

// Binomial tail sums by direct summation of log-pmf terms.
double BinomCdf(int k, int n, double p) {
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return k >= n ? 1.0 : 0.0;
  double sum = 0.0;
  for (int i = 0; i <= k; ++i) {
    sum += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) -
                    std::lgamma(n - i + 1.0) + i * std::log(p) +
                    (n - i) * std::log1p(-p));
  }
  return sum;
}

double Bisect(double lo, double hi, const auto& decreasing_minus_target) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (decreasing_minus_target(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

TEST(TailEstimateTest, ClopperPearsonMatchesSummationOracle) {
  const int cases[][2] = {{1, 10}, {5, 10}, {9, 10}, {0, 50}, {3, 200},
                          {100, 1000}, {50, 50}, {17, 123}};
  for (const auto& c : cases) {
    const int k = c[0], n = c[1];
    const TailEstimate est = MakeTailEstimate(k, n);
    EXPECT_DOUBLE_EQ(est.p_hat, static_cast<double>(k) / n);
    const double upper =
        k == n ? 1.0
               : Bisect(0.0, 1.0, [&](double p) { return BinomCdf(k, n, p) - 0.01; });
    const double lower =
        k == 0 ? 0.0
               : Bisect(0.0, 1.0, [&](double p) {
                   return 0.01 - (1.0 - BinomCdf(k - 1, n, p));
                 });
    EXPECT_NEAR(est.ci_upper_99, upper, 1e-9) << k << "/" << n;
    EXPECT_NEAR(est.ci_lower_99, lower, 1e-9) << k << "/" << n;
  }
  EXPECT_THROW(MakeTailEstimate(1, 0), InputError);
  EXPECT_THROW(MakeTailEstimate(3, 2), InputError);
}

TEST(CheckDominanceTest, Examples) {
  EXPECT_EQ(CheckDominance(MakeTailEstimate(1000, 10000), 0.5), Verdict::kPass);
  EXPECT_EQ(CheckDominance(MakeTailEstimate(9000, 10000), 0.5), Verdict::kFail);
  EXPECT_EQ(CheckDominance(MakeTailEstimate(2, 4), 0.5), Verdict::kInconclusive);
  EXPECT_EQ(CheckDominance(MakeExactEstimate(1, 2), 0.5), Verdict::kPass);
  EXPECT_EQ(ToString(Verdict::kPass), "pass");
  EXPECT_EQ(ToString(Verdict::kInconclusive), "inconclusive");
}

TEST(EstimateTailTest, ExhaustiveWalk) {
  const SpaceSpec line = SpaceSpec::Euclidean(1);
  const GeneratorSpec gen = Walk(2);
  ASSERT_TRUE(SupportsExhaustive(gen));
  const std::vector<EventSpec> events = {EventSpec::MaximalTail(2.0),
                                         EventSpec::MaximalTail(0.0),
                                         EventSpec::MaximalTail(1.0)};
  const std::vector<TailEstimate> est = ExhaustiveTails(gen, line, events);
  EXPECT_EQ(est[0].p_hat, 0.5);
  EXPECT_TRUE(est[0].exact);
  EXPECT_EQ(est[1].p_hat, 1.0);
  EXPECT_EQ(est[2].p_hat, 1.0);
}

TEST(EstimateTailTest, ZeroLevelIsCertain) {
  GeneratorSpec gen = Walk(10, StepRule::Rotating(1.0));
  gen.kind = GeneratorKind::kCondSymmetric;
  gen.magnitude.law = MagnitudeLaw::kUniform;
  const TailEstimate est = EstimateTail(gen, SpaceSpec::Lp(1.5, 3),
                                        EventSpec::MaximalTail(0.0), 500,
                                        RngSpec{1, 0, 0});
  EXPECT_EQ(est.p_hat, 1.0);
}

TEST(EstimateTailTest, SelfNormalizedOneStep) {
  const SpaceSpec space = SpaceSpec::Lp(1.5, 2);
  GeneratorSpec gen = Walk(1, StepRule::HistoryNormCap(1.0));
  gen.kind = GeneratorKind::kCondSymmetric;
  gen.magnitude.law = MagnitudeLaw::kTwoPoint;
  const TailEstimate est = EstimateTail(
      gen, space, EventSpec::SelfNormalized(1.0, 1.5, 1), 2000, RngSpec{2, 0, 0});
  EXPECT_EQ(est.p_hat, 1.0);
  const double K = ReductionConstant(1.5, DefaultSmoothnessConstant(space));
  EXPECT_GT(BoundSelfNormalized(1.0, 1.5, K).value, 1.0);
}

TEST(EstimateTailTest, PartitionInvariance) {
  const SpaceSpec space = SpaceSpec::Lp(1.25, 3);
  GeneratorSpec gen = Walk(20, StepRule::HistoryNormCap(1.0));
  gen.kind = GeneratorKind::kCondSymmetric;
  gen.magnitude.law = MagnitudeLaw::kUniform;
  const std::vector<EventSpec> events = {EventSpec::MaximalTail(2.0),
                                         EventSpec::SelfNormalized(1.2, 1.25)};
  const RngSpec rng{77, 3, 0};
  const auto whole = CountHits(gen, space, events, 3000, rng);
  const auto first = CountHits(gen, space, events, 1500, rng, 0);
  const auto second = CountHits(gen, space, events, 1500, rng, 1500);
  for (std::size_t k = 0; k < events.size(); ++k) {
    EXPECT_EQ(whole[k], first[k] + second[k]);
  }
}

TEST(EstimateTailTest, WorkerCountInvariance) {
  const SpaceSpec space = SpaceSpec::Lp(1.75, 4);
  GeneratorSpec gen = Walk(24, StepRule::Rotating(1.0));
  gen.kind = GeneratorKind::kPredictableBounded;
  const std::vector<EventSpec> events = {EventSpec::MaximalTail(3.0),
                                         EventSpec::FixedNTail(2.0)};
  const int saved = WorkerCount();
  SetWorkerCount(1);
  const auto one = EstimateTails(gen, space, events, 5000, RngSpec{5, 0, 0});
  const PisierResult p1 = CheckPisierType(gen, space, 1.75, 5000, RngSpec{5, 0, 0});
  SetWorkerCount(4);
  const auto four = EstimateTails(gen, space, events, 5000, RngSpec{5, 0, 0});
  const PisierResult p4 = CheckPisierType(gen, space, 1.75, 5000, RngSpec{5, 0, 0});
  SetWorkerCount(saved);
  for (std::size_t k = 0; k < events.size(); ++k) {
    EXPECT_EQ(one[k].hits, four[k].hits);
  }
  EXPECT_EQ(p1.ratio, p4.ratio);
  EXPECT_EQ(p1.std_error, p4.std_error);
}

TEST(EstimateTailTest, ExhaustiveMatchesBruteForce) {
  const SpaceSpec line = SpaceSpec::Euclidean(1);
  for (int n = 1; n <= 4; ++n) {
    std::vector<EventSpec> events;
    for (int r = 0; r <= n + 1; ++r) events.push_back(EventSpec::MaximalTail(r));
    const std::vector<TailEstimate> est = ExhaustiveTails(Walk(n), line, events);
    for (int r = 0; r <= n + 1; ++r) {
      int count = 0;
      for (int mask = 0; mask < (1 << n); ++mask) {
        int f = 0, best = 0;
        for (int j = 0; j < n; ++j) {
          f += (mask >> j) & 1 ? -1 : 1;
          best = std::max(best, std::abs(f));
        }
        if (best >= r) ++count;
      }
      EXPECT_EQ(est[r].hits, static_cast<std::uint64_t>(count));
      EXPECT_EQ(est[r].trials, std::uint64_t{1} << n);
    }
  }
}

TEST(SupermartingaleTest, WalkHolds) {
  const DyadicTree tree = BuildTree(Walk(8), SpaceSpec::Euclidean(1), 8);
  for (double lambda : {0.25, 0.5, 1.0, 2.0}) {
    EXPECT_LE(CheckSupermartingaleExact(tree, lambda), 1e-12);
  }
  const double tiny = CheckSupermartingaleExact(tree, 1e-4);
  EXPECT_LE(tiny, 1e-12);
  EXPECT_GE(tiny, -1e-6);
}

TEST(SupermartingaleTest, RootCheckMatchesHand) {
  const DyadicTree tree = BuildTree(Walk(1), SpaceSpec::Euclidean(1), 1);
  EXPECT_NEAR(CheckSupermartingaleExact(tree, 1.0),
              std::cosh(1.0) - std::exp(0.5), 1e-15);
}

TEST(SupermartingaleTest, UnderstatedWIsCaught) {
  const DyadicTree tree = BuildTree(Walk(6), SpaceSpec::Euclidean(2), 6);
  EXPECT_GT(CheckSupermartingaleExact(ScaleDominatingValues(tree, 0.5), 1.0), 0.0);
  EXPECT_THROW(CheckSupermartingaleExact(
                   BuildTree(Walk(2), SpaceSpec::Lp(1.5, 2), 2), 1.0),
               InputError);
  EXPECT_EQ(CheckSupermartingaleExact(
                BuildTree(Walk(2), SpaceSpec::Euclidean(1), 0), 1.0),
            0.0);
}

TEST(LocalizationTest, NeverCrossingIsZero) {
  const SpaceSpec line = SpaceSpec::Euclidean(1);
  const std::vector<int> signs = {1, -1, 1, -1};
  const MartingalePath path = PathFromDrivers(Walk(4), line, signs);
  const Localization loc = ConstructLocalization(line, path, 1.0, 2.0, 0.5, 2.0);
  EXPECT_EQ(loc.mu, kNever);
  for (const Point& h : loc.h.f) EXPECT_EQ(h[0], 0.0);
  EXPECT_EQ(loc.h.w, path.w);
}

TEST(LocalizationTest, CrossingAtFirstStep) {
  const SpaceSpec line = SpaceSpec::Euclidean(1);
  MartingalePath path;
  path.f = {{0.0}, {1.0}, {1.1}, {1.0}};
  path.d = {{1.0}, {0.1}, {-0.1}};
  path.w = {1.0, 0.1, 0.1};
  const Localization loc = ConstructLocalization(line, path, 0.5, 4.0, 2.5, 2.0);
  EXPECT_EQ(loc.mu, 1);
  EXPECT_EQ(loc.nu, kNever);
  EXPECT_EQ(loc.sigma, kNever);
  EXPECT_EQ(loc.h.f[1][0], 0.0);
  for (int n = 2; n <= 3; ++n) {
    EXPECT_NEAR(loc.h.f[n][0], path.f[n][0] - path.f[1][0], 1e-15);
  }
}

TEST(LocalizationTest, VariationStaysBelowDeltaLambda) {
  const SpaceSpec space = SpaceSpec::Lp(1.5, 2);
  GeneratorSpec gen = Walk(30, StepRule::HistoryNormCap(1.0));
  gen.kind = GeneratorKind::kCondSymmetric;
  gen.magnitude.law = MagnitudeLaw::kUniform;
  for (std::uint32_t t = 0; t < 300; ++t) {
    const MartingalePath path = GeneratePath(gen, space, RngSpec{9, 0, t});
    for (double lambda : {0.5, 1.0, 2.0}) {
      const Localization loc =
          ConstructLocalization(space, path, lambda, 2.0, 0.5, 1.5);
      const double sh = SVariation(space, loc.h, 1.5, 30);
      if (loc.mu == kNever) {
        EXPECT_EQ(sh, 0.0);
      } else {
        EXPECT_LE(sh, 0.5 * lambda * (1 + 1e-12));
      }
    }
  }
  const MartingalePath path = GeneratePath(gen, space, RngSpec{9, 0, 0});
  EXPECT_THROW(ConstructLocalization(space, path, 1.0, 2.0, 1.0, 1.5), InputError);
  EXPECT_THROW(ConstructLocalization(space, path, 0.0, 2.0, 0.5, 1.5), InputError);
}

TEST(GoodLambdaTest, UnreachableAndSmallDelta) {
  const SpaceSpec line = SpaceSpec::Euclidean(1);
  const GeneratorSpec gen = Walk(8);
  const std::vector<double> grid = {0.5, 1.0, 4.0, 10.0};
  const auto rows = CheckGoodLambda(gen, line, 2.0, 4.0, 2.0, 1e-3, grid, 2000,
                                    RngSpec{3, 0, 0});
  for (const GoodLambdaRow& row : rows) {
    EXPECT_EQ(row.lhs.hits, 0u);
    EXPECT_NE(row.verdict, Verdict::kFail);
  }
  EXPECT_TRUE(rows[3].unreachable);
  EXPECT_EQ(rows[3].verdict, Verdict::kPass);
  GeneratorSpec bad = gen;
  bad.kind = GeneratorKind::kPredictableBounded;
  EXPECT_THROW(CheckGoodLambda(bad, line, 2.0, 4.0, 2.0, 0.5, grid, 10,
                               RngSpec{}),
               InputError);
}

TEST(GoodLambdaTest, WalkDominated) {
  const SpaceSpec line = SpaceSpec::Euclidean(1);
  const std::vector<double> grid = {0.5, 1.0, 2.0, 3.0};
  for (double delta : {0.25, 0.5}) {
    const auto rows = CheckGoodLambda(Walk(16), line, 2.0, 8.0, 2.0, delta,
                                      grid, 20000, RngSpec{4, 0, 0});
    for (const GoodLambdaRow& row : rows) {
      EXPECT_TRUE(row.holds);
      EXPECT_EQ(row.inclusion_failures, 0u);
      EXPECT_NE(row.verdict, Verdict::kFail);
      EXPECT_LE(row.lhs.hits, row.rhs_tail.hits);
    }
  }
}

TEST(PisierTest, WalkIsExactlyOne) {
  const PisierResult r = CheckPisierType(Walk(10), SpaceSpec::Euclidean(1), 2.0,
                                         1, RngSpec{}, Sampling::kExhaustive);
  EXPECT_TRUE(r.exact);
  EXPECT_DOUBLE_EQ(r.ratio, 1.0);
  EXPECT_EQ(r.std_error, 0.0);
}

TEST(PisierTest, OneStepIsExactlyOne) {
  const SpaceSpec space = SpaceSpec::Lp(1.5, 3);
  GeneratorSpec gen = Walk(1, StepRule::HistoryNormCap(1.0));
  gen.kind = GeneratorKind::kCondSymmetric;
  gen.magnitude.law = MagnitudeLaw::kUniform;
  const PisierResult r = CheckPisierType(gen, space, 1.5, 1000, RngSpec{1, 0, 0},
                                         Sampling::kMonteCarlo);
  EXPECT_DOUBLE_EQ(r.ratio, 1.0);
}

TEST(PisierTest, DegenerateDenominator) {
  const PisierResult r =
      CheckPisierType(Walk(4, StepRule::ConstStep(0.0)), SpaceSpec::Euclidean(1),
                      2.0, 100, RngSpec{}, Sampling::kMonteCarlo);
  EXPECT_TRUE(r.degenerate);
}

TEST(NaorTest, WalkMoments) {
  const SpaceSpec line = SpaceSpec::Euclidean(1);
  const NaorMomentResult two =
      CheckNaorMoment(Walk(4), line, 0.5, 2.0, 1, RngSpec{}, Sampling::kExhaustive);
  EXPECT_DOUBLE_EQ(two.lhs, 2.0);
  EXPECT_NEAR(two.rhs, 8.0 * std::sqrt(2.5) * 2.0, 1e-12);
  EXPECT_TRUE(two.holds);
  const NaorMomentResult four =
      CheckNaorMoment(Walk(2), line, 0.5, 4.0, 1, RngSpec{}, Sampling::kExhaustive);
  EXPECT_NEAR(four.lhs, std::pow(8.0, 0.25), 1e-15);
  EXPECT_TRUE(four.holds);
  const NaorMomentResult one =
      CheckNaorMoment(Walk(1), line, 0.5, 3.0, 1, RngSpec{}, Sampling::kExhaustive);
  EXPECT_NEAR(one.lhs, one.rhs / (8.0 * std::sqrt(3.5)), 1e-15);
  EXPECT_THROW(CheckNaorMoment(Walk(2), line, 0.5, 1.5, 1, RngSpec{}),
               InputError);
  EXPECT_THROW(CheckNaorMoment(Walk(2), SpaceSpec::Lp(1.5, 1), 0.5, 2.0, 1,
                               RngSpec{}),
               InputError);
}

TEST(FamilyMomentTest, SingleAndDoubledWalk) {
  const SpaceSpec line = SpaceSpec::Euclidean(1);
  const std::vector<GeneratorSpec> one = {Walk(6)};
  const FamilyMomentResult a =
      CheckFamilyMoment(one, line, 2.0, 2.0, 1, RngSpec{}, Sampling::kExhaustive);
  EXPECT_NEAR(a.lhs_norm * a.lhs_norm, 6.0, 1e-12);
  EXPECT_NEAR(a.rhs_norm * a.rhs_norm, 6.0, 1e-12);
  EXPECT_NEAR(a.ratio, 1.0, 1e-15);
  const std::vector<GeneratorSpec> two = {Walk(6), Walk(6)};
  const FamilyMomentResult b =
      CheckFamilyMoment(two, line, 2.0, 2.0, 1, RngSpec{}, Sampling::kExhaustive);
  EXPECT_NEAR(b.lhs_norm * b.lhs_norm, 12.0, 1e-12);
  EXPECT_NEAR(b.ratio, a.ratio, 1e-15);
  EXPECT_FALSE(std::isnan(a.cotype_ratio_over_r_power));
  GeneratorSpec cs = Walk(6);
  cs.kind = GeneratorKind::kCondSymmetric;
  const std::vector<GeneratorSpec> bad = {cs};
  EXPECT_THROW(CheckFamilyMoment(bad, line, 2.0, 2.0, 1, RngSpec{}), InputError);
}

TEST(FamilyMomentTest, RatioBoundedInR) {
  const SpaceSpec space = SpaceSpec::Lp(1.5, 3);
  const std::vector<GeneratorSpec> gens = {
      Walk(12, StepRule::Rotating(1.0)), Walk(12, StepRule::HistoryNormCap(1.0))};
  for (double r : {2.0, 4.0, 8.0}) {
    const FamilyMomentResult res =
        CheckFamilyMoment(gens, space, 1.5, r, 1, RngSpec{}, Sampling::kExhaustive);
    EXPECT_LE(res.ratio_over_r_power, 2.0 * ReductionConstant(1.5, 1.5));
    EXPECT_TRUE(std::isnan(res.cotype_ratio_over_r_power));
  }
}

const TheoremCheck& Find(const std::vector<TheoremCheck>& v,
                         const std::string& name) {
  for (const TheoremCheck& t : v) {
    if (t.theorem == name) return t;
  }
  throw std::runtime_error("missing " + name);
}

TEST(FreedmanDelapenaTest, FreedmanWalkEnumeration) {
  const SpaceSpec line = SpaceSpec::Euclidean(1);
  DelapenaParams params;
  params.r = 1.0;
  params.b = 4.0;
  const auto checks = CheckFreedmanAndDelapena(Walk(4), line, params, 1,
                                               RngSpec{}, Sampling::kExhaustive);
  const TheoremCheck& f = Find(checks, "freedman");
  // max_{j <= 4} f_j >= 1 on 10 of the 16 sign paths.
  EXPECT_EQ(f.estimate.hits, 10u);
  EXPECT_EQ(f.estimate.trials, 16u);
  EXPECT_NEAR(f.bound, std::pow(0.8, 5.0) * std::exp(1.0), 1e-12);
  EXPECT_EQ(f.verdict, Verdict::kPass);
  EXPECT_TRUE(f.hypotheses_ok);
}

TEST(FreedmanDelapenaTest, LargeRIsNeverReached) {
  const SpaceSpec line = SpaceSpec::Euclidean(1);
  DelapenaParams params;
  params.r = 50.0;
  params.b = 10.0;
  const auto checks = CheckFreedmanAndDelapena(Walk(10), line, params, 1,
                                               RngSpec{}, Sampling::kExhaustive);
  EXPECT_EQ(Find(checks, "freedman").estimate.hits, 0u);
  EXPECT_EQ(Find(checks, "delapena").estimate.hits, 0u);
  for (const TheoremCheck& t : checks) EXPECT_NE(t.verdict, Verdict::kFail);
}

TEST(FreedmanDelapenaTest, PVersionAgainstRealVersion) {
  const SpaceSpec line = SpaceSpec::Euclidean(1);
  for (double r : {0.1, 0.25, 0.5, 1.0}) {
    DelapenaParams params;
    params.r = r;
    params.K = 1.0;
    const auto checks = CheckFreedmanAndDelapena(
        Walk(12), line, params, 1, RngSpec{}, Sampling::kExhaustive);
    const TheoremCheck& real = Find(checks, "delapena_selfnorm");
    const TheoremCheck& pver = Find(checks, "delapena_p");
    EXPECT_LE(real.estimate.hits, pver.estimate.hits);
    EXPECT_LE(pver.estimate.hits, 2 * real.estimate.hits);
    EXPECT_NEAR(pver.bound / real.bound, 4.0, 1e-12);
    EXPECT_EQ(real.verdict == Verdict::kPass, pver.verdict == Verdict::kPass);
  }
}

TEST(FreedmanDelapenaTest, HypothesisGaps) {
  const SpaceSpec line = SpaceSpec::Euclidean(1);
  const SpaceSpec plane = SpaceSpec::Euclidean(2);
  EXPECT_EQ(HypothesisGap("freedman", Walk(4), line), "");
  EXPECT_NE(HypothesisGap("freedman", Walk(4), plane), "");
  EXPECT_NE(HypothesisGap("freedman", Walk(4, StepRule::ConstStep(2.0)), line), "");
  GeneratorSpec pb = Walk(4);
  pb.kind = GeneratorKind::kPredictableBounded;
  pb.rule = StepRule::ConstStep(0.5);
  EXPECT_EQ(HypothesisGap("freedman", pb, line), "");
  EXPECT_NE(HypothesisGap("delapena", pb, line), "");
  EXPECT_NE(HypothesisGap("delapena_p", pb, plane), "");
  EXPECT_EQ(HypothesisGap("delapena_p", Walk(4), plane), "");
  DelapenaParams params;
  const auto checks = CheckFreedmanAndDelapena(pb, line, params, 100, RngSpec{});
  const TheoremCheck& d = Find(checks, "delapena");
  EXPECT_FALSE(d.hypotheses_ok);
  EXPECT_EQ(d.verdict, Verdict::kNotApplicable);
}

}  // namespace
}  // namespace smoothmart
