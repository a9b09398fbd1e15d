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

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/distributions/binomial.hpp>

#include "smoothmart/error.h"
#include "smoothmart/parallel.h"

namespace smoothmart {
namespace {

constexpr double kConfidenceAlpha = 0.01;
// Horizon up to which Sampling::kAuto enumerates instead of sampling.
constexpr int kAutoExhaustiveHorizon = 16;

using Binomial = boost::math::binomial_distribution<double>;

double PowNonNeg(double x, double e) {
  if (x == 0.0) return 0.0;
  return std::pow(x, e);
}

int Resolve(int n, int horizon) {
  if (n < 0 || n > horizon) throw InputError("event: n exceeds the horizon");
  return n == 0 ? horizon : n;
}

bool NeedsRealPath(EventKind kind) {
  return kind == EventKind::kFreedman || kind == EventKind::kDelapena ||
         kind == EventKind::kDelapenaSelfNorm;
}

void RequireRealEvents(std::span<const EventSpec> events,
                       const SpaceSpec& space) {
  for (const EventSpec& ev : events) {
    if (NeedsRealPath(ev.kind) && space.dim() != 1) {
      throw InputError("event " + ToString(ev.kind) +
                       " needs a real-valued (dim 1) space");
    }
  }
}

// Sum_{j < n} ||d_j||^p.
double SumDp(const PathStats& stats, double p, int n) {
  long double sum = 0.0L;
  for (int j = 0; j < n; ++j) sum += PowNonNeg(stats.norm_d[j], p);
  return static_cast<double>(sum);
}

bool UseExhaustive(const GeneratorSpec& gen, Sampling sampling) {
  switch (sampling) {
    case Sampling::kMonteCarlo:
      return false;
    case Sampling::kExhaustive:
      if (!SupportsExhaustive(gen)) {
        throw InputError("exhaustive mode needs a sign-driven generator with "
                         "a small horizon");
      }
      return true;
    case Sampling::kAuto:
      return SupportsExhaustive(gen) && gen.horizon <= kAutoExhaustiveHorizon;
  }
  return false;
}

std::vector<int> PatternSigns(std::uint64_t pattern, int n) {
  std::vector<int> signs(n);
  for (int j = 0; j < n; ++j) {
    signs[j] = (pattern >> (n - 1 - j)) & 1 ? -1 : 1;
  }
  return signs;
}

// Runs body(path_index, path) over either all sign patterns or `trials`
// sampled paths, in fixed blocks. `per_block` receives the block index.
template <typename Body>
std::size_t ForEachPath(const GeneratorSpec& gen, const SpaceSpec& space,
                        bool exhaustive, std::uint64_t trials,
                        const RngSpec& rng, std::uint64_t first_trial,
                        Body&& body) {
  const std::uint64_t count =
      exhaustive ? (std::uint64_t{1} << gen.horizon) : trials;
  ParallelBlocks(count, kDefaultBlockSize,
                 [&](std::size_t block, std::size_t begin, std::size_t end) {
                   for (std::size_t i = begin; i < end; ++i) {
                     if (exhaustive) {
                       const std::vector<int> signs =
                           PatternSigns(i, gen.horizon);
                       body(block, PathFromDrivers(gen, space, signs));
                     } else {
                       const RngSpec trial_rng = rng.WithTrial(
                           static_cast<std::uint32_t>(first_trial + i));
                       body(block, GeneratePath(gen, space, trial_rng));
                     }
                   }
                 });
  return static_cast<std::size_t>(count);
}

}  // namespace

TailEstimate MakeTailEstimate(std::uint64_t hits, std::uint64_t trials) {
  if (trials == 0) throw InputError("tail estimate needs trials >= 1");
  if (hits > trials) throw InputError("tail estimate: hits exceed trials");
  TailEstimate est;
  est.hits = hits;
  est.trials = trials;
  const double n = static_cast<double>(trials);
  const double k = static_cast<double>(hits);
  est.p_hat = k / n;
  est.ci_upper_99 =
      hits == trials ? 1.0
                     : Binomial::find_upper_bound_on_p(n, k, kConfidenceAlpha);
  est.ci_lower_99 =
      hits == 0 ? 0.0 : Binomial::find_lower_bound_on_p(n, k, kConfidenceAlpha);
  est.ci_upper_99 = std::max(est.ci_upper_99, est.p_hat);
  est.ci_lower_99 = std::min(est.ci_lower_99, est.p_hat);
  return est;
}

TailEstimate MakeExactEstimate(std::uint64_t hits, std::uint64_t trials) {
  if (trials == 0 || hits > trials) {
    throw InputError("exact estimate: invalid counts");
  }
  TailEstimate est;
  est.hits = hits;
  est.trials = trials;
  est.p_hat = static_cast<double>(hits) / static_cast<double>(trials);
  est.ci_upper_99 = est.p_hat;
  est.ci_lower_99 = est.p_hat;
  est.exact = true;
  return est;
}

std::string ToString(Verdict verdict) {
  switch (verdict) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kFail:
      return "fail";
    case Verdict::kInconclusive:
      return "inconclusive";
    case Verdict::kNotApplicable:
      return "n/a";
  }
  return "?";
}

Verdict CheckDominance(const TailEstimate& est, double bound) {
  if (est.ci_upper_99 <= bound) return Verdict::kPass;
  if (est.ci_lower_99 > bound) return Verdict::kFail;
  return Verdict::kInconclusive;
}

Verdict CheckDominance(const TailEstimate& est, const BoundResult& bound) {
  return CheckDominance(est, bound.value);
}

std::string ToString(EventKind kind) {
  switch (kind) {
    case EventKind::kMaximalTail:
      return "maximal_tail";
    case EventKind::kMaximalTailStrict:
      return "maximal_tail_strict";
    case EventKind::kFixedNTail:
      return "fixed_n_tail";
    case EventKind::kSelfNormalized:
      return "self_normalized";
    case EventKind::kFreedman:
      return "freedman";
    case EventKind::kDelapena:
      return "delapena";
    case EventKind::kDelapenaSelfNorm:
      return "delapena_selfnorm";
    case EventKind::kDelapenaP:
      return "delapena_p";
    case EventKind::kGoodLambdaLhs:
      return "goodlambda_lhs";
  }
  return "?";
}

EventSpec EventSpec::MaximalTail(double r, int n) {
  EventSpec ev;
  ev.kind = EventKind::kMaximalTail;
  ev.r = r;
  ev.n = n;
  return ev;
}

EventSpec EventSpec::FixedNTail(double r, int n) {
  EventSpec ev = MaximalTail(r, n);
  ev.kind = EventKind::kFixedNTail;
  return ev;
}

EventSpec EventSpec::SelfNormalized(double r, double p, int n) {
  EventSpec ev = MaximalTail(r, n);
  ev.kind = EventKind::kSelfNormalized;
  ev.p = p;
  return ev;
}

EventSpec EventSpec::Freedman(double r, double b) {
  EventSpec ev;
  ev.kind = EventKind::kFreedman;
  ev.r = r;
  ev.b = b;
  return ev;
}

EventSpec EventSpec::Delapena(double r, double b) {
  EventSpec ev = Freedman(r, b);
  ev.kind = EventKind::kDelapena;
  return ev;
}

EventSpec EventSpec::DelapenaSelfNorm(double r, double alpha, double beta,
                                      double b) {
  EventSpec ev = Freedman(r, b);
  ev.kind = EventKind::kDelapenaSelfNorm;
  ev.alpha = alpha;
  ev.beta = beta;
  return ev;
}

EventSpec EventSpec::DelapenaP(double r, double p, double alpha, double beta,
                               double b) {
  EventSpec ev = DelapenaSelfNorm(r, alpha, beta, b);
  ev.kind = EventKind::kDelapenaP;
  ev.p = p;
  return ev;
}

EventSpec EventSpec::GoodLambdaLhs(double lambda, double beta, double delta,
                                   double p) {
  EventSpec ev;
  ev.kind = EventKind::kGoodLambdaLhs;
  ev.r = lambda;
  ev.beta = beta;
  ev.delta = delta;
  ev.p = p;
  return ev;
}

PathStats ComputeStats(const SpaceSpec& space, const MartingalePath& path) {
  const int n = path.horizon();
  if (path.f.size() != static_cast<std::size_t>(n) + 1) {
    throw InputError("path stats: f and d lengths disagree");
  }
  PathStats stats;
  stats.real_valued = space.dim() == 1;
  stats.norm_f.resize(n + 1);
  stats.real_f.resize(n + 1);
  stats.norm_d.resize(n);
  stats.cum_s2.resize(n + 1);
  const Point& f0 = path.f[0];
  Point diff(f0.size());
  for (int j = 0; j <= n; ++j) {
    for (std::size_t i = 0; i < diff.size(); ++i) {
      diff[i] = path.f[j][i] - f0[i];
    }
    stats.norm_f[j] = Norm(space, diff);
    stats.real_f[j] = diff[0];
  }
  const bool has_var = path.cond_var.size() == static_cast<std::size_t>(n);
  stats.cum_s2[0] = has_var ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  for (int j = 1; j <= n; ++j) {
    stats.norm_d[j - 1] = Norm(space, path.d[j - 1]);
    stats.cum_s2[j] =
        has_var ? stats.cum_s2[j - 1] + path.cond_var[j - 1] : stats.cum_s2[0];
  }
  return stats;
}

bool EventOccurs(const EventSpec& ev, const PathStats& stats) {
  const int horizon = static_cast<int>(stats.norm_d.size());
  if (NeedsRealPath(ev.kind) && !stats.real_valued) {
    throw InputError("event " + ToString(ev.kind) + " needs a real path");
  }
  switch (ev.kind) {
    case EventKind::kMaximalTail:
    case EventKind::kMaximalTailStrict: {
      const int n = Resolve(ev.n, horizon);
      double fstar = 0.0;
      for (int j = 1; j <= n; ++j) fstar = std::max(fstar, stats.norm_f[j]);
      return ev.kind == EventKind::kMaximalTail ? fstar >= ev.r
                                                : fstar > ev.r;
    }
    case EventKind::kFixedNTail:
      return stats.norm_f[Resolve(ev.n, horizon)] >= ev.r;
    case EventKind::kSelfNormalized: {
      // ||f_n||^p >= r^p S_{p,n}^p; both sides vanish together.
      const int n = Resolve(ev.n, horizon);
      const double spp = SumDp(stats, ev.p, n);
      if (spp == 0.0) return ev.r <= 0.0;
      return PowNonNeg(stats.norm_f[n], ev.p) >= PowNonNeg(ev.r, ev.p) * spp;
    }
    case EventKind::kFreedman:
      for (int n = 1; n <= horizon; ++n) {
        if (stats.real_f[n] >= ev.r && stats.cum_s2[n] <= ev.b) return true;
      }
      return false;
    case EventKind::kDelapena: {
      double s2 = 0.0;
      for (int n = 1; n <= horizon; ++n) {
        s2 += stats.norm_d[n - 1] * stats.norm_d[n - 1];
        if (stats.real_f[n] >= ev.r && s2 <= ev.b) return true;
      }
      return false;
    }
    case EventKind::kDelapenaSelfNorm: {
      double s2 = 0.0;
      for (int n = 1; n <= horizon; ++n) {
        s2 += stats.norm_d[n - 1] * stats.norm_d[n - 1];
        if (s2 == 0.0 || 1.0 / s2 > ev.b) continue;
        if (stats.real_f[n] / (ev.alpha + ev.beta * s2) >= ev.r) return true;
      }
      return false;
    }
    case EventKind::kDelapenaP: {
      double spp = 0.0;
      for (int n = 1; n <= horizon; ++n) {
        spp += PowNonNeg(stats.norm_d[n - 1], ev.p);
        if (spp == 0.0 || 1.0 / spp > ev.b) continue;
        const double denom = std::pow(ev.alpha + ev.beta * spp, 2.0 / ev.p);
        if (stats.norm_f[n] / denom >= ev.r) return true;
      }
      return false;
    }
    case EventKind::kGoodLambdaLhs: {
      double fstar = 0.0;
      for (int j = 1; j <= horizon; ++j) fstar = std::max(fstar, stats.norm_f[j]);
      if (!(fstar > ev.beta * ev.r)) return false;
      const double spp = SumDp(stats, ev.p, horizon);
      return spp <= PowNonNeg(ev.delta * ev.r, ev.p);
    }
  }
  return false;
}

std::vector<std::uint64_t> CountHits(const GeneratorSpec& gen,
                                     const SpaceSpec& space,
                                     std::span<const EventSpec> events,
                                     std::uint64_t trials, const RngSpec& rng,
                                     std::uint64_t first_trial) {
  RequireRealEvents(events, space);
  const std::size_t blocks = BlockCount(trials, kDefaultBlockSize);
  std::vector<std::vector<std::uint64_t>> partial(
      blocks, std::vector<std::uint64_t>(events.size(), 0));
  ForEachPath(gen, space, false, trials, rng, first_trial,
              [&](std::size_t block, const MartingalePath& path) {
                const PathStats stats = ComputeStats(space, path);
                for (std::size_t e = 0; e < events.size(); ++e) {
                  if (EventOccurs(events[e], stats)) ++partial[block][e];
                }
              });
  std::vector<std::uint64_t> hits(events.size(), 0);
  for (const auto& block : partial) {
    for (std::size_t e = 0; e < hits.size(); ++e) hits[e] += block[e];
  }
  return hits;
}

std::vector<TailEstimate> EstimateTails(const GeneratorSpec& gen,
                                        const SpaceSpec& space,
                                        std::span<const EventSpec> events,
                                        std::uint64_t trials,
                                        const RngSpec& rng) {
  if (trials < 1) throw InputError("estimate_tail needs trials >= 1");
  const std::vector<std::uint64_t> hits =
      CountHits(gen, space, events, trials, rng);
  std::vector<TailEstimate> out;
  out.reserve(hits.size());
  for (std::uint64_t h : hits) out.push_back(MakeTailEstimate(h, trials));
  return out;
}

TailEstimate EstimateTail(const GeneratorSpec& gen, const SpaceSpec& space,
                          const EventSpec& ev, std::uint64_t trials,
                          const RngSpec& rng) {
  return EstimateTails(gen, space, std::span<const EventSpec>(&ev, 1), trials,
                       rng)[0];
}

bool SupportsExhaustive(const GeneratorSpec& gen) {
  return gen.IsSignDriven() && gen.horizon <= kExhaustiveHorizonCap;
}

std::vector<TailEstimate> ExhaustiveTails(const GeneratorSpec& gen,
                                          const SpaceSpec& space,
                                          std::span<const EventSpec> events) {
  if (!SupportsExhaustive(gen)) {
    throw InputError("exhaustive mode needs a sign-driven generator with "
                     "horizon <= 20");
  }
  RequireRealEvents(events, space);
  const std::uint64_t count = std::uint64_t{1} << gen.horizon;
  std::vector<std::vector<std::uint64_t>> partial(
      BlockCount(count, kDefaultBlockSize),
      std::vector<std::uint64_t>(events.size(), 0));
  ForEachPath(gen, space, true, 0, RngSpec{}, 0,
              [&](std::size_t block, const MartingalePath& path) {
                const PathStats stats = ComputeStats(space, path);
                for (std::size_t e = 0; e < events.size(); ++e) {
                  if (EventOccurs(events[e], stats)) ++partial[block][e];
                }
              });
  std::vector<TailEstimate> out;
  for (std::size_t e = 0; e < events.size(); ++e) {
    std::uint64_t hits = 0;
    for (const auto& block : partial) hits += block[e];
    out.push_back(MakeExactEstimate(hits, count));
  }
  return out;
}

double CheckSupermartingaleExact(const DyadicTree& tree, double lambda) {
  if (!tree.space.is_hilbert()) {
    throw InputError("supermartingale check needs a Euclidean tree");
  }
  if (!(lambda > 0.0)) throw InputError("supermartingale check: lambda > 0");
  const long double lam = lambda;
  double worst = tree.depth > 0 ? -std::numeric_limits<double>::infinity() : 0.0;
  for (int level = 0; level < tree.depth; ++level) {
    for (std::size_t node = 0; node < tree.NodeCount(level); ++node) {
      const long double w = tree.w[level][node];
      const long double parent = Norm(tree.space, tree.Value(level, node));
      const long double plus = Norm(tree.space, tree.Value(level + 1, 2 * node));
      const long double minus =
          Norm(tree.space, tree.Value(level + 1, 2 * node + 1));
      const long double lhs =
          0.5L * (std::cosh(lam * plus) + std::cosh(lam * minus));
      const long double rhs =
          std::exp(lam * lam * w * w / 2.0L) * std::cosh(lam * parent);
      worst = std::max(worst, static_cast<double>(lhs - rhs));
    }
  }
  return worst;
}

DyadicTree ScaleDominatingValues(const DyadicTree& tree, double factor) {
  DyadicTree out = tree;
  for (auto& level : out.w) {
    for (double& w : level) w *= factor;
  }
  return out;
}

Localization ConstructLocalization(const SpaceSpec& space,
                                   const MartingalePath& path, double lambda,
                                   double beta, double delta, double p) {
  if (!(lambda > 0.0)) throw InputError("localization: lambda must be > 0");
  if (!(delta > 0.0 && delta < beta - 1.0)) {
    throw InputError("localization: need 0 < delta < beta - 1");
  }
  if (!(p >= 1.0)) throw InputError("localization: p must be >= 1");
  const int n = path.horizon();
  const PathStats stats = ComputeStats(space, path);
  Localization out;
  const double dl_p = std::pow(delta * lambda, p);
  double spp = 0.0;
  for (int j = 0; j <= n; ++j) {
    if (out.mu == kNever && stats.norm_f[j] > lambda) out.mu = j;
    if (out.nu == kNever && stats.norm_f[j] > beta * lambda) out.nu = j;
    if (j < n) spp += PowNonNeg(stats.norm_d[j], p);  // S_{p,j+1}^p
    if (out.sigma == kNever && j < n && spp > dl_p) out.sigma = j;
  }
  MartingalePath& h = out.h;
  const std::size_t dim = path.f[0].size();
  h.f.assign(1, Point(dim, 0.0));
  h.w = path.w;
  h.signs = path.signs;
  h.magnitudes = path.magnitudes;
  h.cond_var = path.cond_var;
  const int stop = std::min(out.nu, out.sigma);
  for (int j = 1; j <= n; ++j) {
    const bool active = out.mu < j && j <= stop;
    Point d = active ? path.d[j - 1] : Point(dim, 0.0);
    Point next = h.f.back();
    for (std::size_t i = 0; i < dim; ++i) next[i] += d[i];
    h.f.push_back(std::move(next));
    h.d.push_back(std::move(d));
  }
  return out;
}

std::vector<GoodLambdaRow> CheckGoodLambda(
    const GeneratorSpec& gen, const SpaceSpec& space, double p, double K,
    double beta, double delta, std::span<const double> lambda_grid,
    std::uint64_t trials, const RngSpec& rng, double scale) {
  if (!gen.IsConditionallySymmetric()) {
    throw InputError("good-lambda check needs a conditionally symmetric "
                     "generator");
  }
  if (trials < 1) throw InputError("good-lambda check needs trials >= 1");
  const double factor = BoundGoodLambdaFactor(p, K, beta, delta, scale).value;
  for (double lambda : lambda_grid) {
    if (!(lambda > 0.0)) throw InputError("good-lambda: lambda must be > 0");
  }
  const std::size_t m = lambda_grid.size();
  // Per block: lhs hits, rhs hits, inclusion failures for each lambda.
  std::vector<std::vector<std::uint64_t>> partial(
      BlockCount(trials, kDefaultBlockSize),
      std::vector<std::uint64_t>(3 * m, 0));
  const double gap = beta - 1.0 - delta;
  // f* <= sum_j ||d_j|| <= sum_j sup w_j.
  double reach = 0.0;
  for (int j = 1; j <= gen.horizon; ++j) reach += gen.WSup(j);
  ForEachPath(
      gen, space, false, trials, rng, 0,
      [&](std::size_t block, const MartingalePath& path) {
        const PathStats stats = ComputeStats(space, path);
        for (std::size_t k = 0; k < m; ++k) {
          const double lambda = lambda_grid[k];
          const bool lhs = EventOccurs(
              EventSpec::GoodLambdaLhs(lambda, beta, delta, p), stats);
          EventSpec tail = EventSpec::MaximalTail(lambda);
          tail.kind = EventKind::kMaximalTailStrict;
          if (lhs) {
            ++partial[block][3 * k];
            const Localization loc =
                ConstructLocalization(space, path, lambda, beta, delta, p);
            double hstar = 0.0;
            for (const Point& hj : loc.h.f) {
              hstar = std::max(hstar, Norm(space, hj));
            }
            if (!(hstar > gap * lambda)) ++partial[block][3 * k + 2];
          }
          if (EventOccurs(tail, stats)) ++partial[block][3 * k + 1];
        }
      });
  std::vector<GoodLambdaRow> rows(m);
  for (std::size_t k = 0; k < m; ++k) {
    std::uint64_t lhs = 0, rhs = 0, bad = 0;
    for (const auto& block : partial) {
      lhs += block[3 * k];
      rhs += block[3 * k + 1];
      bad += block[3 * k + 2];
    }
    GoodLambdaRow& row = rows[k];
    row.lambda = lambda_grid[k];
    row.lhs = MakeTailEstimate(lhs, trials);
    row.rhs_tail = MakeTailEstimate(rhs, trials);
    row.factor = factor;
    row.holds = row.lhs.p_hat <= factor * row.rhs_tail.ci_upper_99;
    row.inclusion_failures = bad;
    row.unreachable = beta * row.lambda >= reach;
    if (rhs > 0) {
      const TailEstimate cond = MakeTailEstimate(lhs, rhs);
      row.conditional_ci_upper = cond.ci_upper_99;
      row.conditional_ci_lower = cond.ci_lower_99;
    }
    if (row.unreachable || row.conditional_ci_upper <= factor) {
      row.verdict = Verdict::kPass;
    } else if (row.conditional_ci_lower > factor) {
      row.verdict = Verdict::kFail;
    } else {
      row.verdict = Verdict::kInconclusive;
    }
  }
  return rows;
}

PisierResult CheckPisierType(const GeneratorSpec& gen, const SpaceSpec& space,
                             double p, std::uint64_t trials,
                             const RngSpec& rng, Sampling sampling) {
  if (!(p >= 1.0)) throw InputError("pisier check: p must be >= 1");
  const bool exhaustive = UseExhaustive(gen, sampling);
  if (!exhaustive && trials < 1) throw InputError("pisier check: trials");
  const std::uint64_t count =
      exhaustive ? (std::uint64_t{1} << gen.horizon) : trials;
  struct Acc {
    long double x = 0, y = 0, xx = 0, yy = 0, xy = 0;
  };
  std::vector<Acc> partial(BlockCount(count, kDefaultBlockSize));
  ForEachPath(gen, space, exhaustive, trials, rng, 0,
              [&](std::size_t block, const MartingalePath& path) {
                const PathStats stats = ComputeStats(space, path);
                const long double x =
                    PowNonNeg(stats.norm_f[gen.horizon], p);
                const long double y = SumDp(stats, p, gen.horizon);
                Acc& a = partial[block];
                a.x += x;
                a.y += y;
                a.xx += x * x;
                a.yy += y * y;
                a.xy += x * y;
              });
  Acc total;
  for (const Acc& a : partial) {
    total.x += a.x;
    total.y += a.y;
    total.xx += a.xx;
    total.yy += a.yy;
    total.xy += a.xy;
  }
  const long double n = static_cast<long double>(count);
  PisierResult out;
  out.exact = exhaustive;
  out.numerator = static_cast<double>(total.x / n);
  out.denominator = static_cast<double>(total.y / n);
  if (total.y == 0.0L) {
    out.degenerate = true;
    out.ratio = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const long double ratio = total.x / total.y;
  out.ratio = static_cast<double>(ratio);
  if (!exhaustive && count > 1) {
    // Var(X - R Y) around its zero sample mean.
    const long double ez2 =
        (total.xx - 2.0L * ratio * total.xy + ratio * ratio * total.yy) / n;
    const long double var = std::max(0.0L, ez2) * n / (n - 1.0L);
    out.std_error = static_cast<double>(
        std::sqrt(var / n) / (total.y / n));
  }
  return out;
}

NaorMomentResult CheckNaorMoment(const GeneratorSpec& gen,
                                 const SpaceSpec& space, double s, double q,
                                 std::uint64_t trials, const RngSpec& rng,
                                 Sampling sampling) {
  if (!(q >= 2.0)) throw InputError("naor moment check needs q >= 2");
  if (!(s > 0.0)) throw InputError("naor moment check needs s > 0");
  if (!space.is_hilbert()) {
    throw InputError("naor moment check needs a Euclidean space");
  }
  const bool exhaustive = UseExhaustive(gen, sampling);
  const std::uint64_t count =
      exhaustive ? (std::uint64_t{1} << gen.horizon) : trials;
  if (count < 1) throw InputError("naor moment check: trials");
  const int n = gen.horizon;
  // Slot 0 holds ||f_n||^q, slot j holds ||d_j||^q.
  std::vector<std::vector<long double>> partial(
      BlockCount(count, kDefaultBlockSize),
      std::vector<long double>(n + 1, 0.0L));
  ForEachPath(gen, space, exhaustive, trials, rng, 0,
              [&](std::size_t block, const MartingalePath& path) {
                const PathStats stats = ComputeStats(space, path);
                auto& a = partial[block];
                a[0] += PowNonNeg(stats.norm_f[n], q);
                for (int j = 1; j <= n; ++j) {
                  a[j] += PowNonNeg(stats.norm_d[j - 1], q);
                }
              });
  std::vector<long double> total(n + 1, 0.0L);
  for (const auto& a : partial) {
    for (int j = 0; j <= n; ++j) total[j] += a[j];
  }
  const long double c = static_cast<long double>(count);
  NaorMomentResult out;
  out.exact = exhaustive;
  out.lhs = static_cast<double>(std::pow(total[0] / c, 1.0L / q));
  long double sum = 0.0L;
  for (int j = 1; j <= n; ++j) sum += std::pow(total[j] / c, 2.0L / q);
  out.rhs = static_cast<double>(8.0L * std::sqrt(static_cast<long double>(s) + q) *
                                std::sqrt(sum));
  out.holds = out.lhs <= out.rhs;
  return out;
}

FamilyMomentResult CheckFamilyMoment(std::span<const GeneratorSpec> gens,
                                     const SpaceSpec& space, double p,
                                     double r, std::uint64_t trials,
                                     const RngSpec& rng, Sampling sampling) {
  if (gens.empty()) throw InputError("family check needs generators");
  if (!(r >= 1.0)) throw InputError("family check needs r >= 1");
  if (!(p >= 1.0)) throw InputError("family check needs p >= 1");
  const int n = gens[0].horizon;
  for (const GeneratorSpec& g : gens) {
    if (g.kind != GeneratorKind::kPaleyWalsh) {
      throw InputError("family check needs dyadic (paley_walsh) generators");
    }
    if (g.horizon != n) throw InputError("family members need one horizon");
  }
  bool exhaustive = false;
  switch (sampling) {
    case Sampling::kMonteCarlo:
      break;
    case Sampling::kExhaustive:
      if (n > kExhaustiveHorizonCap) {
        throw InputError("family check: horizon too large to enumerate");
      }
      exhaustive = true;
      break;
    case Sampling::kAuto:
      exhaustive = n <= kAutoExhaustiveHorizon;
      break;
  }
  const std::uint64_t count = exhaustive ? (std::uint64_t{1} << n) : trials;
  if (count < 1) throw InputError("family check: trials");
  const bool cotype = space.is_hilbert() && p == 2.0;
  struct Acc {
    long double lhs = 0, rhs = 0;
  };
  std::vector<Acc> partial(BlockCount(count, kDefaultBlockSize));
  ParallelBlocks(
      count, kDefaultBlockSize,
      [&](std::size_t block, std::size_t begin, std::size_t end) {
        std::vector<int> signs(n);
        for (std::size_t i = begin; i < end; ++i) {
          if (exhaustive) {
            signs = PatternSigns(i, n);
          } else {
            const CounterRng base(rng.WithTrial(static_cast<std::uint32_t>(i)),
                                  Substream::kBaseSigns);
            for (int j = 1; j <= n; ++j) {
              signs[j - 1] = base.Sign(static_cast<std::uint32_t>(j), 0);
            }
          }
          long double a = 0.0L, b = 0.0L;
          for (const GeneratorSpec& g : gens) {
            const PathStats stats =
                ComputeStats(space, PathFromDrivers(g, space, signs));
            a += PowNonNeg(stats.norm_f[n], p);
            b += SumDp(stats, p, n);
          }
          partial[block].lhs += std::pow(a, static_cast<long double>(r / p));
          partial[block].rhs += std::pow(b, static_cast<long double>(r / p));
        }
      });
  Acc total;
  for (const Acc& a : partial) {
    total.lhs += a.lhs;
    total.rhs += a.rhs;
  }
  const long double c = static_cast<long double>(count);
  FamilyMomentResult out;
  out.exact = exhaustive;
  out.lhs_norm = static_cast<double>(std::pow(total.lhs / c, 1.0L / r));
  out.rhs_norm = static_cast<double>(std::pow(total.rhs / c, 1.0L / r));
  out.ratio = out.rhs_norm > 0.0 ? out.lhs_norm / out.rhs_norm
                                 : std::numeric_limits<double>::quiet_NaN();
  out.ratio_over_r_power = out.ratio / std::pow(r, 1.0 / p);
  out.cotype_ratio_over_r_power =
      cotype && out.lhs_norm > 0.0
          ? out.rhs_norm / out.lhs_norm / std::sqrt(r)
          : std::numeric_limits<double>::quiet_NaN();
  return out;
}

std::string HypothesisGap(const std::string& theorem, const GeneratorSpec& gen,
                          const SpaceSpec& space) {
  const bool real = space.dim() == 1;
  if (theorem == "freedman") {
    if (!real) return "needs a real-valued martingale";
    for (int j = 1; j <= gen.horizon; ++j) {
      if (gen.WSup(j) > 1.0) return "needs |d_j| <= 1";
    }
    return "";
  }
  if (theorem == "delapena" || theorem == "delapena_selfnorm") {
    if (!real) return "needs a real-valued martingale";
    if (!gen.IsConditionallySymmetric()) return "needs conditional symmetry";
    return "";
  }
  if (theorem == "delapena_p") {
    return gen.IsConditionallySymmetric() ? "" : "needs conditional symmetry";
  }
  throw InputError("unknown theorem '" + theorem + "'");
}

std::vector<TheoremCheck> CheckFreedmanAndDelapena(
    const GeneratorSpec& gen, const SpaceSpec& space,
    const DelapenaParams& params, std::uint64_t trials, const RngSpec& rng,
    Sampling sampling) {
  const double p = space.p();
  std::vector<TheoremCheck> checks(4);
  checks[0].theorem = "freedman";
  checks[0].bound = BoundFreedman(params.r, params.b).exact;
  checks[1].theorem = "delapena";
  checks[1].bound = BoundDelapena(params.r, params.b).value;
  checks[2].theorem = "delapena_selfnorm";
  checks[2].bound =
      BoundDelapenaSelfNorm(params.r, params.alpha, params.beta, params.b)
          .value;
  checks[3].theorem = "delapena_p";
  checks[3].bound = BoundDelapenaP(params.r, p, params.K, params.alpha,
                                   params.beta, params.b)
                        .value;
  for (TheoremCheck& check : checks) {
    check.note = HypothesisGap(check.theorem, gen, space);
    check.hypotheses_ok = check.note.empty();
  }

  std::vector<EventSpec> all = {
      EventSpec::Freedman(params.r, params.b),
      EventSpec::Delapena(params.r, params.b),
      EventSpec::DelapenaSelfNorm(params.r, params.alpha, params.beta,
                                  params.b),
      EventSpec::DelapenaP(params.r, p, params.alpha, params.beta, params.b)};
  std::vector<EventSpec> events;
  std::vector<std::size_t> index;
  for (std::size_t k = 0; k < checks.size(); ++k) {
    if (checks[k].hypotheses_ok) {
      events.push_back(all[k]);
      index.push_back(k);
    }
  }
  if (events.empty()) return checks;
  const std::vector<TailEstimate> est =
      UseExhaustive(gen, sampling) ? ExhaustiveTails(gen, space, events)
                                   : EstimateTails(gen, space, events, trials,
                                                   rng);
  for (std::size_t e = 0; e < events.size(); ++e) {
    TheoremCheck& check = checks[index[e]];
    check.estimate = est[e];
    check.verdict = CheckDominance(est[e], check.bound);
  }
  return checks;
}

}  // namespace smoothmart
