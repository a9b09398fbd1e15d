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


#include "smoothmart/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <tuple>

#include "smoothmart/bounds.h"
#include "smoothmart/error.h"
#include "smoothmart/parallel.h"
#include "smoothmart/reduction.h"

namespace smoothmart {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kExactTol = 1e-12;
const std::vector<double> kDefaultLevels = {0.9, 0.5, 0.2, 0.1, 0.05, 0.01};

using BoundFn = std::function<double(double)>;

// Context shared by all rows of one (suite, generator) pair.
struct Cell {
  const ExperimentConfig& config;
  const SuiteEntry& suite;
  const ResolvedConstants& constants;
  std::uint64_t trials;
  RngSpec rng;
  Sampling sampling;
};

Sampling ParseSampling(const std::string& s) {
  if (s == "exhaustive") return Sampling::kExhaustive;
  if (s == "auto") return Sampling::kAuto;
  return Sampling::kMonteCarlo;
}

std::string SamplingName(bool exact) { return exact ? "exhaustive" : "mc"; }

ReportRow NotApplicable(const std::string& suite, const std::string& gen,
                        const std::string& reason) {
  ReportRow row;
  row.suite = suite;
  row.generator = gen;
  row.estimate = kNaN;
  row.ci_upper = kNaN;
  row.bound = kNaN;
  row.verdict = Verdict::kNotApplicable;
  row.note = reason;
  row.Add("reason", reason);
  return row;
}

// Smallest r (to bisection precision) with bound(r) <= level.
double InvertBound(const BoundFn& bound, double level) {
  if (!(level > 0.0)) throw InputError("bound levels must be > 0");
  if (bound(0.0) <= level) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (bound(hi) > level) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw InputError("bound never reaches the requested level");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (bound(mid) > level ? lo : hi) = mid;
  }
  return hi;
}

std::vector<double> RadiusGrid(const SuiteEntry& suite, const BoundFn& bound) {
  std::vector<double> r;
  if (const auto* g = suite.Grid("r_grid")) r = *g;
  const auto* levels = suite.Grid("levels");
  if (levels != nullptr || r.empty()) {
    for (double level : levels ? *levels : kDefaultLevels) {
      r.push_back(InvertBound(bound, level));
    }
  }
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

double SumWSupPow(const GeneratorSpec& gen, double p, int n) {
  long double sum = 0.0L;
  for (int j = 1; j <= n; ++j) sum += std::pow(gen.WSup(j), p);
  return static_cast<double>(sum);
}

// Sum over j of sup ||d_j||^p, an a priori bound on S_{p,n}^p.
double SumDSupPow(const GeneratorSpec& gen, double p, int n) {
  long double sum = 0.0L;
  for (int j = 1; j <= n; ++j) {
    sum += std::pow(gen.DriverBound() * gen.rule.SupNorm(j), p);
  }
  return static_cast<double>(sum);
}

// Shared tail-suite body: one pass over the paths for all radii.
std::vector<ReportRow> TailRows(
    const Cell& cell, const NamedGenerator& gen, const BoundFn& bound,
    const std::function<EventSpec(double)>& event,
    const std::vector<std::pair<std::string, double>>& extra) {
  const SpaceSpec& space = cell.config.space;
  const std::vector<double> radii = RadiusGrid(cell.suite, bound);
  std::vector<EventSpec> events;
  for (double r : radii) events.push_back(event(r));
  bool exact = false;
  if (cell.sampling == Sampling::kExhaustive ||
      (cell.sampling == Sampling::kAuto && SupportsExhaustive(gen.spec))) {
    if (!SupportsExhaustive(gen.spec)) {
      return {NotApplicable(cell.suite.id, gen.name,
                            "exhaustive sampling unsupported")};
    }
    exact = true;
  }
  const std::vector<TailEstimate> est =
      exact ? ExhaustiveTails(gen.spec, space, events)
            : EstimateTails(gen.spec, space, events, cell.trials, cell.rng);
  std::vector<ReportRow> rows;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    ReportRow row;
    row.suite = cell.suite.id;
    row.generator = gen.name;
    row.grid_index = static_cast<int>(k);
    row.Add("r", radii[k]);
    for (const auto& [key, value] : extra) row.Add(key, value);
    row.Add("trials", static_cast<double>(est[k].trials));
    row.Add("sampling", SamplingName(exact));
    row.estimate = est[k].p_hat;
    row.ci_upper = est[k].ci_upper_99;
    row.bound = bound(radii[k]);
    row.verdict = CheckDominance(est[k], row.bound);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ReportRow> AzumaSuite(const Cell& cell, const NamedGenerator& g) {
  if (cell.config.space.dim() != 1) {
    return {NotApplicable(cell.suite.id, g.name, "needs a real-valued space")};
  }
  const int n = static_cast<int>(cell.suite.Scalar("n", g.spec.horizon));
  if (n < 1 || n > g.spec.horizon) {
    throw InputError("azuma-real: n must lie in [1, horizon]");
  }
  std::vector<double> a;
  for (int j = 1; j <= n; ++j) a.push_back(g.spec.WSup(j));
  return TailRows(
      cell, g, [a](double r) { return BoundAzuma(r, a).value; },
      [n](double r) { return EventSpec::FixedNTail(r, n); },
      {{"n", n}});
}

std::vector<ReportRow> PinelisSuite(const Cell& cell, const NamedGenerator& g,
                                    bool symmetric_version) {
  const double p = cell.config.space.p();
  if (symmetric_version && !g.spec.IsConditionallySymmetric()) {
    return {NotApplicable(cell.suite.id, g.name, "needs conditional symmetry")};
  }
  const double b = cell.suite.Scalar(
      "b", symmetric_version ? SumDSupPow(g.spec, p, g.spec.horizon)
                             : SumWSupPow(g.spec, p, g.spec.horizon));
  const double K = cell.suite.Scalar("K", cell.constants.K);
  return TailRows(
      cell, g, [=](double r) { return BoundPinelis(r, p, K, b).value; },
      [](double r) { return EventSpec::MaximalTail(r); },
      {{"b", b}, {"K", K}});
}

std::vector<ReportRow> SelfNormalizedSuite(const Cell& cell,
                                           const NamedGenerator& g) {
  if (!g.spec.IsConditionallySymmetric()) {
    return {NotApplicable(cell.suite.id, g.name, "needs conditional symmetry")};
  }
  const double p = cell.config.space.p();
  const double K = cell.suite.Scalar("K", cell.constants.K);
  const int n = static_cast<int>(cell.suite.Scalar("n", g.spec.horizon));
  if (n < 1 || n > g.spec.horizon) {
    throw InputError("self-normalized: n must lie in [1, horizon]");
  }
  return TailRows(
      cell, g, [=](double r) { return BoundSelfNormalized(r, p, K).value; },
      [=](double r) { return EventSpec::SelfNormalized(r, p, n); },
      {{"n", n}, {"K", K}});
}

std::vector<ReportRow> FreedmanFamilySuite(const Cell& cell,
                                           const NamedGenerator& g,
                                           const std::string& theorem) {
  const std::string gap = HypothesisGap(theorem, g.spec, cell.config.space);
  if (!gap.empty()) return {NotApplicable(cell.suite.id, g.name, gap)};
  const double p = cell.config.space.p();
  const SuiteEntry& s = cell.suite;
  std::vector<std::pair<std::string, double>> extra;
  BoundFn bound;
  std::function<EventSpec(double)> event;
  if (theorem == "freedman" || theorem == "delapena") {
    const double b = s.Scalar("b", SumWSupPow(g.spec, 2.0, g.spec.horizon));
    extra = {{"b", b}};
    if (theorem == "freedman") {
      bound = [b](double r) { return BoundFreedman(r, b).exact; };
      event = [b](double r) { return EventSpec::Freedman(r, b); };
    } else {
      bound = [b](double r) { return BoundDelapena(r, b).value; };
      event = [b](double r) { return EventSpec::Delapena(r, b); };
    }
  } else {
    const double alpha = s.Scalar("alpha", 0.0);
    const double beta = s.Scalar("beta", 1.0);
    const double b = s.Scalar("b", 1.0);
    extra = {{"alpha", alpha}, {"beta", beta}, {"b", b}};
    if (theorem == "delapena_selfnorm") {
      bound = [=](double r) {
        return BoundDelapenaSelfNorm(r, alpha, beta, b).value;
      };
      event = [=](double r) {
        return EventSpec::DelapenaSelfNorm(r, alpha, beta, b);
      };
    } else {
      const double K = s.Scalar("K", cell.constants.K_delapena);
      extra.emplace_back("K", K);
      bound = [=](double r) {
        return BoundDelapenaP(r, p, K, alpha, beta, b).value;
      };
      event = [=](double r) {
        return EventSpec::DelapenaP(r, p, alpha, beta, b);
      };
    }
  }
  std::vector<ReportRow> rows = TailRows(cell, g, bound, event, extra);
  for (ReportRow& row : rows) row.note = "some-n event truncated at horizon";
  return rows;
}

std::vector<ReportRow> GoodLambdaSuite(const Cell& cell,
                                       const NamedGenerator& g) {
  if (!g.spec.IsConditionallySymmetric()) {
    return {NotApplicable(cell.suite.id, g.name, "needs conditional symmetry")};
  }
  const SpaceSpec& space = cell.config.space;
  const double p = space.p();
  const double beta = cell.suite.Scalar("beta", 2.0);
  const double K = cell.suite.Scalar("K", cell.constants.K_good_lambda);
  const double scale = cell.suite.Scalar("scale", 1.0);
  std::vector<double> lambdas;
  if (const auto* grid = cell.suite.Grid("lambda_grid")) {
    lambdas = *grid;
  } else {
    const double s = std::pow(SumWSupPow(g.spec, p, g.spec.horizon), 1.0 / p);
    for (double m : {0.25, 0.5, 1.0, 2.0}) lambdas.push_back(m * s);
  }
  const std::vector<double> deltas = cell.suite.Grid("delta_grid")
                                         ? *cell.suite.Grid("delta_grid")
                                         : std::vector<double>{0.25, 0.5};
  std::vector<ReportRow> rows;
  int index = 0;
  for (double delta : deltas) {
    const std::vector<GoodLambdaRow> table =
        CheckGoodLambda(g.spec, space, p, K, beta, delta, lambdas, cell.trials,
                        cell.rng, scale);
    for (const GoodLambdaRow& gl : table) {
      ReportRow row;
      row.suite = cell.suite.id;
      row.generator = g.name;
      row.grid_index = index++;
      row.Add("delta", delta);
      row.Add("lambda", gl.lambda);
      row.Add("beta", beta);
      row.Add("K", K);
      row.Add("factor", gl.factor);
      row.Add("rhs_tail", gl.rhs_tail.p_hat);
      row.Add("inclusion_failures", static_cast<double>(gl.inclusion_failures));
      row.Add("cond_ci_upper", gl.conditional_ci_upper);
      row.Add("trials", static_cast<double>(cell.trials));
      row.estimate = gl.lhs.p_hat;
      row.ci_upper = gl.lhs.ci_upper_99;
      row.bound = gl.factor * gl.rhs_tail.p_hat;
      row.verdict = gl.inclusion_failures > 0 ? Verdict::kFail : gl.verdict;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<ReportRow> PisierSuite(const Cell& cell, const NamedGenerator& g) {
  const SpaceSpec& space = cell.config.space;
  const double p = space.p();
  const PisierResult res =
      CheckPisierType(g.spec, space, p, cell.trials, cell.rng, cell.sampling);
  ReportRow row;
  row.suite = cell.suite.id;
  row.generator = g.name;
  row.Add("p", p);
  row.Add("std_error", res.std_error);
  row.Add("sampling", SamplingName(res.exact));
  row.estimate = res.ratio;
  row.ci_upper = res.ratio + 2.0 * res.std_error;
  if (res.degenerate) {
    row.verdict = Verdict::kNotApplicable;
    row.bound = kNaN;
    row.note = "degenerate denominator";
    return {row};
  }
  // E||f_n||^p <= c sum_j E||d_j||^p follows from the smoothness
  // inequality; in Hilbert space c = 1 and the two sides are equal.
  row.bound = cell.suite.Scalar("bound", cell.constants.c);
  if (space.is_hilbert() && res.std_error > 0.0) {
    row.Add("z_equality", (res.ratio - 1.0) / res.std_error);
  }
  const double lower = res.ratio - 2.0 * res.std_error;
  const double slack = res.exact ? kExactTol * row.bound : 0.0;
  row.verdict = row.ci_upper <= row.bound + slack ? Verdict::kPass
                : lower > row.bound + slack      ? Verdict::kFail
                                                 : Verdict::kInconclusive;
  return {row};
}

std::vector<ReportRow> NaorSuite(const Cell& cell, const NamedGenerator& g) {
  const SpaceSpec& space = cell.config.space;
  if (!space.is_hilbert()) {
    return {NotApplicable(cell.suite.id, g.name, "needs a Euclidean space")};
  }
  const double s = cell.suite.Scalar("s", cell.config.constants.s);
  const std::vector<double> qs = cell.suite.Grid("q_grid")
                                     ? *cell.suite.Grid("q_grid")
                                     : std::vector<double>{2.0, 4.0};
  std::vector<ReportRow> rows;
  for (std::size_t k = 0; k < qs.size(); ++k) {
    const NaorMomentResult res = CheckNaorMoment(g.spec, space, s, qs[k],
                                                 cell.trials, cell.rng,
                                                 cell.sampling);
    ReportRow row;
    row.suite = cell.suite.id;
    row.generator = g.name;
    row.grid_index = static_cast<int>(k);
    row.Add("q", qs[k]);
    row.Add("s", s);
    row.Add("sampling", SamplingName(res.exact));
    row.estimate = res.lhs;
    row.ci_upper = kNaN;
    row.bound = res.rhs;
    row.verdict = res.holds ? Verdict::kPass : Verdict::kFail;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ReportRow> FamilySuite(const Cell& cell,
                                   const std::vector<NamedGenerator>& gens) {
  std::vector<GeneratorSpec> family;
  std::string name;
  for (const NamedGenerator& g : gens) {
    if (g.spec.kind != GeneratorKind::kPaleyWalsh) continue;
    if (!family.empty() && g.spec.horizon != family[0].horizon) continue;
    family.push_back(g.spec);
    name += (name.empty() ? "" : "+") + g.name;
  }
  if (family.empty()) {
    return {NotApplicable(cell.suite.id, "-", "needs dyadic generators")};
  }
  const SpaceSpec& space = cell.config.space;
  const double p = space.p();
  const double K = cell.suite.Scalar("K", cell.constants.K);
  const double bound = std::pow(2.0 * K, 1.0 / p);
  const std::vector<double> rs = cell.suite.Grid("r_grid")
                                     ? *cell.suite.Grid("r_grid")
                                     : std::vector<double>{2.0, 4.0, 8.0};
  std::vector<ReportRow> rows;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const FamilyMomentResult res = CheckFamilyMoment(
        family, space, p, rs[k], cell.trials, cell.rng, cell.sampling);
    ReportRow row;
    row.suite = cell.suite.id;
    row.generator = name;
    row.grid_index = static_cast<int>(k);
    row.Add("r", rs[k]);
    row.Add("lhs_norm", res.lhs_norm);
    row.Add("rhs_norm", res.rhs_norm);
    row.Add("cotype_ratio", res.cotype_ratio_over_r_power);
    row.Add("sampling", SamplingName(res.exact));
    row.estimate = res.ratio_over_r_power;
    row.ci_upper = kNaN;
    row.bound = bound;
    // The constant is not quantified, so exceeding the reference value is
    // reported as inconclusive.
    row.verdict = res.ratio_over_r_power <= bound ? Verdict::kPass
                                                  : Verdict::kInconclusive;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ReportRow> TwoPointSuite(const Cell& cell) {
  const SpaceSpec& space = cell.config.space;
  if (!space.is_hilbert()) {
    return {NotApplicable(cell.suite.id, "-", "needs a Euclidean space")};
  }
  const double s = cell.suite.Scalar("s", cell.config.constants.s);
  const std::vector<double> qs = cell.suite.Grid("q_grid")
                                     ? *cell.suite.Grid("q_grid")
                                     : std::vector<double>{2.0, 3.0, 4.0, 8.0};
  const std::size_t d = space.dim();
  const std::uint64_t samples = cell.trials;
  std::vector<ReportRow> rows;
  for (std::size_t k = 0; k < qs.size(); ++k) {
    std::vector<double> worst(BlockCount(samples, kDefaultBlockSize), 0.0);
    std::vector<std::uint64_t> bad(worst.size(), 0);
    ParallelBlocks(samples, kDefaultBlockSize,
                   [&](std::size_t block, std::size_t begin, std::size_t end) {
                     std::vector<double> x(d), y(d);
                     for (std::size_t i = begin; i < end; ++i) {
                       PhiloxEngine eng(cell.rng.WithTrial(
                                            static_cast<std::uint32_t>(i)),
                                        Substream::kGeometry);
                       const double sx = std::exp(6.0 * eng.Uniform() - 3.0);
                       const double sy = std::exp(6.0 * eng.Uniform() - 3.0);
                       for (double& v : x) v = sx * (2.0 * eng.Uniform() - 1.0);
                       for (double& v : y) v = sy * (2.0 * eng.Uniform() - 1.0);
                       const TwoPointCheck c = CheckTwoPoint(s, qs[k], x, y);
                       worst[block] = std::max(worst[block], c.lhs / c.rhs);
                       if (!c.holds) ++bad[block];
                     }
                   });
    ReportRow row;
    row.suite = cell.suite.id;
    row.generator = "-";
    row.grid_index = static_cast<int>(k);
    row.Add("q", qs[k]);
    row.Add("s", s);
    row.Add("samples", static_cast<double>(samples));
    row.estimate = *std::max_element(worst.begin(), worst.end());
    row.ci_upper = kNaN;
    row.bound = 1.0;
    row.verdict = std::accumulate(bad.begin(), bad.end(), std::uint64_t{0}) == 0
                      ? Verdict::kPass
                      : Verdict::kFail;
    rows.push_back(std::move(row));
  }
  return rows;
}

struct ReductionSummary {
  double worst = 0.0;
  std::uint64_t violations = 0;
};

ReductionSummary ReductionOverPaths(const GeneratorSpec& gen,
                                    const SpaceSpec& space, double c, double K,
                                    double tol, std::uint64_t paths,
                                    const RngSpec& rng) {
  std::vector<ReductionSummary> partial(BlockCount(paths, kDefaultBlockSize));
  ParallelBlocks(paths, kDefaultBlockSize,
                 [&](std::size_t block, std::size_t begin, std::size_t end) {
                   for (std::size_t i = begin; i < end; ++i) {
                     const RngSpec trial =
                         rng.WithTrial(static_cast<std::uint32_t>(i));
                     const MartingalePath path = GeneratePath(gen, space, trial);
                     ReducedPath red = ReducePath(path, space, c, trial);
                     red.K = K;
                     const ReductionCheck chk =
                         VerifyReduction(space, path, red, tol);
                     ReductionSummary& s = partial[block];
                     s.worst = std::max(
                         {s.worst, chk.max_i_violation, chk.max_ii_violation});
                     if (!chk.ok) ++s.violations;
                   }
                 });
  ReductionSummary out;
  for (const ReductionSummary& s : partial) {
    out.worst = std::max(out.worst, s.worst);
    out.violations += s.violations;
  }
  return out;
}

std::vector<ReportRow> ReductionSuite(const Cell& cell,
                                      const NamedGenerator& g) {
  const SpaceSpec& space = cell.config.space;
  const double c = cell.constants.c;
  const double tol = cell.suite.Scalar("tol", 1e-9);
  const ReductionSummary sum =
      ReductionOverPaths(g.spec, space, c, ReductionConstant(space.p(), c), tol,
                         cell.trials, cell.rng);
  std::vector<ReportRow> rows;
  ReportRow row;
  row.suite = cell.suite.id;
  row.generator = g.name;
  row.Add("check", "paths");
  row.Add("c", c);
  row.Add("paths", static_cast<double>(cell.trials));
  row.Add("violations", static_cast<double>(sum.violations));
  row.estimate = sum.worst;
  row.ci_upper = kNaN;
  row.bound = tol;
  row.verdict = sum.violations == 0 ? Verdict::kPass : Verdict::kFail;
  rows.push_back(row);
  if (g.spec.kind == GeneratorKind::kPaleyWalsh) {
    const int depth = std::min(
        g.spec.horizon, static_cast<int>(cell.suite.Scalar("tree_depth", 6)));
    const EnlargedTree tree =
        ReduceTree(BuildTree(g.spec, space, depth), c);
    ReportRow mean;
    mean.suite = cell.suite.id;
    mean.generator = g.name;
    mean.grid_index = 1;
    mean.Add("check", "tree_mean");
    mean.Add("depth", depth);
    mean.estimate = CheckReducedMartingaleExact(tree);
    mean.ci_upper = kNaN;
    mean.bound = kExactTol;
    mean.verdict =
        mean.estimate <= kExactTol ? Verdict::kPass : Verdict::kFail;
    rows.push_back(mean);
    const ReductionCheck chk = VerifyReducedTree(tree, tol);
    ReportRow inv = mean;
    inv.grid_index = 2;
    inv.params[0].second = "tree_invariants";
    inv.estimate = std::max(chk.max_i_violation, chk.max_ii_violation);
    inv.bound = tol;
    inv.verdict = chk.ok ? Verdict::kPass : Verdict::kFail;
    rows.push_back(inv);
  }
  return rows;
}

std::vector<ReportRow> SupermartingaleSuite(const Cell& cell,
                                            const NamedGenerator& g) {
  const SpaceSpec& space = cell.config.space;
  if (!space.is_hilbert()) {
    return {NotApplicable(cell.suite.id, g.name, "needs a Euclidean space")};
  }
  if (g.spec.kind != GeneratorKind::kPaleyWalsh) {
    return {NotApplicable(cell.suite.id, g.name, "needs a dyadic generator")};
  }
  const int depth = std::min(g.spec.horizon,
                             static_cast<int>(cell.suite.Scalar("depth", 10)));
  const DyadicTree tree = BuildTree(g.spec, space, depth);
  const std::vector<double> lambdas =
      cell.suite.Grid("lambda_grid") ? *cell.suite.Grid("lambda_grid")
                                     : std::vector<double>{0.25, 0.5, 1.0, 2.0};
  std::vector<ReportRow> rows;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    ReportRow row;
    row.suite = cell.suite.id;
    row.generator = g.name;
    row.grid_index = static_cast<int>(k);
    row.Add("lambda", lambdas[k]);
    row.Add("depth", depth);
    row.estimate = CheckSupermartingaleExact(tree, lambdas[k]);
    row.ci_upper = kNaN;
    row.bound = kExactTol;
    row.verdict = row.estimate <= kExactTol ? Verdict::kPass : Verdict::kFail;
    rows.push_back(std::move(row));
  }
  return rows;
}

// Deliberately broken inputs; each row is expected to fail.
std::vector<ReportRow> FalsificationSuite(const Cell& cell) {
  std::vector<ReportRow> rows;
  GeneratorSpec walk;
  walk.horizon = 8;
  walk.rule = StepRule::ConstStep(1.0);
  const SpaceSpec line = SpaceSpec::Euclidean(1);

  ReportRow super;
  super.suite = cell.suite.id;
  super.generator = "fixture";
  super.Add("check", "supermartingale_w_half");
  super.Add("lambda", 1.0);
  super.estimate = CheckSupermartingaleExact(
      ScaleDominatingValues(BuildTree(walk, line, walk.horizon), 0.5), 1.0);
  super.ci_upper = kNaN;
  super.bound = kExactTol;
  super.verdict = super.estimate <= kExactTol ? Verdict::kPass : Verdict::kFail;
  rows.push_back(super);

  const SpaceSpec& space = cell.config.space;
  GeneratorSpec rot;
  rot.horizon = 16;
  rot.rule = StepRule::Rotating(1.0);
  const double c = cell.constants.c;
  const double tol = 1e-9;
  const ReductionSummary sum =
      ReductionOverPaths(rot, space, c, 0.5 * ReductionConstant(space.p(), c),
                         tol, 64, cell.rng);
  ReportRow red;
  red.suite = cell.suite.id;
  red.generator = "fixture";
  red.grid_index = 1;
  red.Add("check", "reduction_K_half");
  red.Add("violations", static_cast<double>(sum.violations));
  red.estimate = sum.worst;
  red.ci_upper = kNaN;
  red.bound = tol;
  red.verdict = sum.violations == 0 ? Verdict::kPass : Verdict::kFail;
  rows.push_back(red);
  return rows;
}

bool PerGenerator(const std::string& id) {
  return id != "family-moment" && id != "two-point" && id != "falsification";
}

std::vector<ReportRow> RunCell(const Cell& cell, const NamedGenerator& g) {
  const std::string& id = cell.suite.id;
  if (id == "azuma-real") return AzumaSuite(cell, g);
  if (id == "pinelis-p") return PinelisSuite(cell, g, false);
  if (id == "cond-symmetric-p") return PinelisSuite(cell, g, true);
  if (id == "self-normalized") return SelfNormalizedSuite(cell, g);
  if (id == "good-lambda") return GoodLambdaSuite(cell, g);
  if (id == "pisier-type") return PisierSuite(cell, g);
  if (id == "naor-moment") return NaorSuite(cell, g);
  if (id == "freedman") return FreedmanFamilySuite(cell, g, "freedman");
  if (id == "delapena-real") return FreedmanFamilySuite(cell, g, "delapena");
  if (id == "delapena-selfnorm") {
    return FreedmanFamilySuite(cell, g, "delapena_selfnorm");
  }
  if (id == "delapena-p") return FreedmanFamilySuite(cell, g, "delapena_p");
  if (id == "reduction-invariants") return ReductionSuite(cell, g);
  if (id == "supermartingale") return SupermartingaleSuite(cell, g);
  throw InputError("unknown suite '" + id + "'");
}

}  // namespace

const std::vector<SuiteInfo>& SuiteRegistry() {
  static const std::vector<SuiteInfo> kSuites = {
      {"azuma-real", "Azuma-Hoeffding fixed-n tail for real martingales",
       {"n"}, {"r_grid", "levels"}},
      {"pinelis-p", "maximal tail under predictable domination w_j",
       {"b", "K"}, {"r_grid", "levels"}},
      {"cond-symmetric-p",
       "maximal tail of conditionally symmetric martingales, b >= |S_p^p|",
       {"b", "K"}, {"r_grid", "levels"}},
      {"self-normalized", "tail of ||f_n - f_0|| / S_{p,n}",
       {"n", "K"}, {"r_grid", "levels"}},
      {"good-lambda", "good-lambda inequality with the stopped martingale",
       {"beta", "K", "scale"}, {"lambda_grid", "delta_grid"}},
      {"pisier-type", "E||f_n||^p against sum E||d_j||^p", {"bound"}, {}},
      {"naor-moment", "Naor moment inequality in Euclidean space", {"s"},
       {"q_grid"}},
      {"family-moment", "L^r norms of dyadic families", {"K"}, {"r_grid"}},
      {"freedman", "Freedman inequality with predictable variance", {"b"},
       {"r_grid", "levels"}},
      {"delapena-real", "De la Pena inequality for real martingales", {"b"},
       {"r_grid", "levels"}},
      {"delapena-selfnorm", "De la Pena self-normalized inequality",
       {"alpha", "beta", "b"}, {"r_grid", "levels"}},
      {"delapena-p", "self-normalized De la Pena bound in l_p",
       {"alpha", "beta", "b", "K"}, {"r_grid", "levels"}},
      {"two-point", "Euclidean two-point inequality", {"s"}, {"q_grid"}},
      {"reduction-invariants", "dimension reduction to R^2 (i), (ii)",
       {"tol", "tree_depth"}, {}},
      {"supermartingale", "cosh supermartingale on dyadic trees", {"depth"},
       {"lambda_grid"}},
      {"falsification", "deliberately broken fixtures (expected to fail)", {},
       {}},
  };
  return kSuites;
}

const SuiteInfo* FindSuite(const std::string& id) {
  for (const SuiteInfo& info : SuiteRegistry()) {
    if (info.id == id) return &info;
  }
  return nullptr;
}

ResolvedConstants ResolveConstants(const ExperimentConfig& config) {
  ResolvedConstants out;
  out.c = config.constants.c ? *config.constants.c
                             : DefaultSmoothnessConstant(config.space);
  if (!(out.c > 0.0)) throw InputError("constant c must be > 0");
  out.K = config.constants.K ? *config.constants.K
                             : ReductionConstant(config.space.p(), out.c);
  if (!(out.K > 0.0)) throw InputError("constant K must be > 0");
  out.K_good_lambda = 2.0 * out.K;
  out.K_delapena = out.K * out.K / out.c;
  return out;
}

std::vector<ReportRow> RunExperiment(const ExperimentConfig& config,
                                     const RunOptions& options) {
  const ResolvedConstants constants = ResolveConstants(config);
  struct Keyed {
    std::size_t suite_pos;
    ReportRow row;
  };
  std::vector<Keyed> keyed;
  for (std::size_t si = 0; si < config.suites.size(); ++si) {
    const SuiteEntry& suite = config.suites[si];
    std::vector<NamedGenerator> gens;
    for (const NamedGenerator& g : config.generators) {
      if (suite.generators.empty() ||
          std::count(suite.generators.begin(), suite.generators.end(),
                     g.name)) {
        gens.push_back(g);
      }
    }
    auto emit = [&](std::size_t gi, auto&& produce) {
      const Cell cell{config,
                      suite,
                      constants,
                      suite.trials.value_or(config.trials),
                      RngSpec{config.seed,
                              static_cast<std::uint32_t>(((si + 1) << 12) + gi),
                              0},
                      ParseSampling(suite.sampling)};
      const auto start = std::chrono::steady_clock::now();
      std::vector<ReportRow> rows = produce(cell);
      const double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
      for (ReportRow& row : rows) {
        row.ms = options.timing ? std::round(ms) : 0.0;
        keyed.push_back({si, std::move(row)});
      }
    };
    if (!PerGenerator(suite.id)) {
      emit(0, [&](const Cell& cell) {
        if (suite.id == "family-moment") return FamilySuite(cell, gens);
        if (suite.id == "two-point") return TwoPointSuite(cell);
        return FalsificationSuite(cell);
      });
      continue;
    }
    if (gens.empty()) {
      keyed.push_back(
          {si, NotApplicable(suite.id, "-", "no generators configured")});
      continue;
    }
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      emit(gi, [&](const Cell& cell) { return RunCell(cell, gens[gi]); });
    }
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const Keyed& a, const Keyed& b) {
                     return std::tie(a.row.suite, a.row.generator, a.suite_pos,
                                     a.row.grid_index) <
                            std::tie(b.row.suite, b.row.generator, b.suite_pos,
                                     b.row.grid_index);
                   });
  std::vector<ReportRow> rows;
  rows.reserve(keyed.size());
  for (Keyed& k : keyed) rows.push_back(std::move(k.row));
  return rows;
}

bool AnyFailure(const std::vector<ReportRow>& rows) {
  return std::any_of(rows.begin(), rows.end(), [](const ReportRow& r) {
    return r.verdict == Verdict::kFail;
  });
}

std::vector<NamedGenerator> BuiltinGenerators(const SpaceSpec& space,
                                              int horizon) {
  (void)space;
  auto make = [horizon](const std::string& name, GeneratorKind kind,
                        StepRule rule, Magnitude mag = {}) {
    NamedGenerator g;
    g.name = name;
    g.spec.kind = kind;
    g.spec.horizon = horizon;
    g.spec.rule = rule;
    g.spec.magnitude = mag;
    return g;
  };
  return {
      make("walk", GeneratorKind::kPaleyWalsh, StepRule::ConstStep(1.0)),
      make("rotating", GeneratorKind::kPaleyWalsh, StepRule::Rotating(1.0)),
      make("history", GeneratorKind::kPaleyWalsh,
           StepRule::HistoryNormCap(1.0)),
      make("decaying", GeneratorKind::kPaleyWalsh,
           StepRule::Decaying(1.0, 0.5)),
      make("two_point", GeneratorKind::kCondSymmetric, StepRule::Rotating(1.0),
           Magnitude{MagnitudeLaw::kTwoPoint, 0.5}),
      make("uniform", GeneratorKind::kCondSymmetric,
           StepRule::HistoryNormCap(1.0), Magnitude{MagnitudeLaw::kUniform}),
      make("bounded", GeneratorKind::kPredictableBounded,
           StepRule::Rotating(0.5)),
  };
}

}  // namespace smoothmart
