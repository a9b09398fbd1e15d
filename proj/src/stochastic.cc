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

#include "smoothmart/stochastic.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "smoothmart/error.h"

namespace smoothmart {
namespace {

void RequireParams(const std::string& name, const std::vector<double>& params,
                   std::size_t min, std::size_t max) {
  if (params.size() < min || params.size() > max) {
    std::ostringstream msg;
    msg << "rule " << name << " takes " << min;
    if (max != min) msg << ".." << max;
    msg << " parameter(s), got " << params.size();
    throw InputError(msg.str());
  }
}

// Scalar driver eta_j for one step: sign and |eta|.
struct Driver {
  int sign;
  double magnitude;
};

Driver DrawDriver(const GeneratorSpec& gen, const RngSpec& rng, int step) {
  const CounterRng base(rng, Substream::kBaseSigns);
  const auto s = static_cast<std::uint32_t>(step);
  switch (gen.kind) {
    case GeneratorKind::kPaleyWalsh:
      return {base.Sign(s, 0), 1.0};
    case GeneratorKind::kCondSymmetric: {
      const CounterRng mag(rng, Substream::kMagnitudes);
      return {base.Sign(s, 0), gen.magnitude.Sample(mag.Uniform(s, 0))};
    }
    case GeneratorKind::kPredictableBounded:
      return base.Uniform(s, 0) < 1.0 / 3.0 ? Driver{1, 2.0} : Driver{-1, 1.0};
  }
  return {1, 1.0};
}

double DefaultMagnitude(const GeneratorSpec& gen, int sign) {
  if (gen.kind == GeneratorKind::kPredictableBounded) {
    return sign > 0 ? 2.0 : 1.0;
  }
  return 1.0;
}

double WValue(const GeneratorSpec& gen, const SpaceSpec& space, int step,
              std::span<const double> v) {
  const double base = gen.w_rule.kind == WRuleKind::kTight
                          ? Norm(space, v)
                          : gen.rule.SupNorm(step);
  return gen.w_rule.scale * gen.DriverBound() * base;
}

// Appends step `step` to `path` given the driver.
void AppendStep(const GeneratorSpec& gen, const SpaceSpec& space, int step,
                const Driver& drv, MartingalePath& path) {
  const Point& prev = path.f.back();
  const Point v = gen.rule.Direction(space, step, prev);
  const double w = WValue(gen, space, step, v);
  const double vnorm = Norm(space, v);
  Point d(v.size());
  const double eta = drv.sign * drv.magnitude;
  for (std::size_t i = 0; i < v.size(); ++i) d[i] = eta * v[i];
  const double dnorm = Norm(space, d);
  if (!(dnorm <= w + kDominationSlack)) {
    std::ostringstream msg;
    msg << "generator contract violated at step " << step << ": ||d|| = "
        << dnorm << " > w = " << w;
    throw ContractViolation(msg.str(), static_cast<std::size_t>(step));
  }
  Point next = prev;
  for (std::size_t i = 0; i < v.size(); ++i) next[i] += d[i];
  path.f.push_back(std::move(next));
  path.d.push_back(std::move(d));
  path.w.push_back(w);
  path.signs.push_back(drv.sign);
  path.magnitudes.push_back(drv.magnitude);
  path.cond_var.push_back(gen.DriverSecondMoment() * vnorm * vnorm);
}

MartingalePath EmptyPath(const GeneratorSpec& gen, const SpaceSpec& space) {
  if (gen.horizon < 1) throw InputError("generator horizon must be >= 1");
  MartingalePath path;
  path.f.reserve(gen.horizon + 1);
  path.d.reserve(gen.horizon);
  path.f.emplace_back(space.dim(), 0.0);
  return path;
}

}  // namespace

StepRule StepRule::ConstStep(double a) {
  return {RuleKind::kConstStep, a, 0.0};
}
StepRule StepRule::Rotating(double a) { return {RuleKind::kRotating, a, 0.0}; }
StepRule StepRule::HistoryNormCap(double a, double offset) {
  return {RuleKind::kHistoryNormCap, a, offset};
}
StepRule StepRule::Decaying(double a, double gamma) {
  return {RuleKind::kDecaying, a, gamma};
}

StepRule StepRule::Parse(const std::string& name,
                         const std::vector<double>& params) {
  StepRule rule;
  if (name == "const_step") {
    RequireParams(name, params, 1, 1);
    rule = ConstStep(params[0]);
  } else if (name == "rotating") {
    RequireParams(name, params, 1, 1);
    rule = Rotating(params[0]);
  } else if (name == "history_norm_cap") {
    RequireParams(name, params, 1, 2);
    rule = HistoryNormCap(params[0], params.size() > 1 ? params[1] : 1.0);
  } else if (name == "decaying") {
    RequireParams(name, params, 2, 2);
    rule = Decaying(params[0], params[1]);
  } else {
    throw InputError("unknown step rule '" + name + "'");
  }
  if (!(rule.a >= 0.0) || !std::isfinite(rule.a)) {
    throw InputError("rule amplitude must be finite and >= 0");
  }
  return rule;
}

Point StepRule::Direction(const SpaceSpec& space, int step,
                          std::span<const double> f_prev) const {
  const int d = space.dim();
  Point v(d, 0.0);
  switch (kind) {
    case RuleKind::kConstStep:
      v[0] = a;
      break;
    case RuleKind::kRotating:
      v[step % d] = a;
      break;
    case RuleKind::kHistoryNormCap: {
      Point u(f_prev.begin(), f_prev.end());
      u[step % d] += 1.0;
      double n = Norm(space, u);
      if (n == 0.0) {
        std::fill(u.begin(), u.end(), 0.0);
        u[0] = 1.0;
        n = 1.0;
      }
      const double scale = a * std::min(1.0, Norm(space, f_prev) + param) / n;
      for (int i = 0; i < d; ++i) v[i] = scale * u[i];
      break;
    }
    case RuleKind::kDecaying:
      v[0] = a * std::pow(static_cast<double>(step), -param);
      break;
  }
  return v;
}

double StepRule::SupNorm(int step) const {
  if (kind == RuleKind::kDecaying) {
    return a * std::pow(static_cast<double>(step), -param);
  }
  return a;
}

std::string StepRule::ToString() const {
  std::ostringstream out;
  switch (kind) {
    case RuleKind::kConstStep:
      out << "const_step(" << a << ")";
      break;
    case RuleKind::kRotating:
      out << "rotating(" << a << ")";
      break;
    case RuleKind::kHistoryNormCap:
      out << "history_norm_cap(" << a << " " << param << ")";
      break;
    case RuleKind::kDecaying:
      out << "decaying(" << a << " " << param << ")";
      break;
  }
  return out.str();
}

double Magnitude::Sample(double u) const {
  switch (law) {
    case MagnitudeLaw::kUnit:
      return 1.0;
    case MagnitudeLaw::kTwoPoint:
      return u < 0.5 ? low : 1.0;
    case MagnitudeLaw::kUniform:
      return u;
  }
  return 1.0;
}

double Magnitude::SecondMoment() const {
  switch (law) {
    case MagnitudeLaw::kUnit:
      return 1.0;
    case MagnitudeLaw::kTwoPoint:
      return 0.5 * (low * low + 1.0);
    case MagnitudeLaw::kUniform:
      return 1.0 / 3.0;
  }
  return 1.0;
}

std::string Magnitude::ToString() const {
  switch (law) {
    case MagnitudeLaw::kUnit:
      return "unit";
    case MagnitudeLaw::kTwoPoint: {
      std::ostringstream out;
      out << "two_point(" << low << ")";
      return out.str();
    }
    case MagnitudeLaw::kUniform:
      return "uniform";
  }
  return "unit";
}

bool GeneratorSpec::IsSignDriven() const {
  return kind == GeneratorKind::kPaleyWalsh ||
         (kind == GeneratorKind::kCondSymmetric &&
          magnitude.law == MagnitudeLaw::kUnit);
}

bool GeneratorSpec::IsConditionallySymmetric() const {
  return kind != GeneratorKind::kPredictableBounded;
}

double GeneratorSpec::DriverBound() const {
  return kind == GeneratorKind::kPredictableBounded ? 2.0 : 1.0;
}

double GeneratorSpec::DriverSecondMoment() const {
  switch (kind) {
    case GeneratorKind::kPaleyWalsh:
      return 1.0;
    case GeneratorKind::kCondSymmetric:
      return magnitude.SecondMoment();
    case GeneratorKind::kPredictableBounded:
      return 4.0 / 3.0 + 2.0 / 3.0;
  }
  return 1.0;
}

double GeneratorSpec::WSup(int step) const {
  return w_rule.scale * DriverBound() * rule.SupNorm(step);
}

std::string ToString(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::kPaleyWalsh:
      return "paley_walsh";
    case GeneratorKind::kCondSymmetric:
      return "cond_symmetric";
    case GeneratorKind::kPredictableBounded:
      return "predictable_bounded";
  }
  return "?";
}

std::string GeneratorSpec::ToString() const {
  std::ostringstream out;
  out << smoothmart::ToString(kind) << ":" << rule.ToString();
  if (kind == GeneratorKind::kCondSymmetric &&
      magnitude.law != MagnitudeLaw::kUnit) {
    out << ":" << magnitude.ToString();
  }
  if (w_rule.kind == WRuleKind::kSup) out << ":wsup";
  if (w_rule.scale != 1.0) out << ":wscale=" << w_rule.scale;
  out << ":n=" << horizon;
  return out.str();
}

MartingalePath GeneratePath(const GeneratorSpec& gen, const SpaceSpec& space,
                            const RngSpec& rng) {
  MartingalePath path = EmptyPath(gen, space);
  for (int j = 1; j <= gen.horizon; ++j) {
    AppendStep(gen, space, j, DrawDriver(gen, rng, j), path);
  }
  return path;
}

MartingalePath PathFromDrivers(const GeneratorSpec& gen,
                               const SpaceSpec& space,
                               std::span<const int> signs,
                               std::span<const double> magnitudes) {
  if (signs.size() != static_cast<std::size_t>(gen.horizon)) {
    throw InputError("PathFromDrivers: need one sign per step");
  }
  if (!magnitudes.empty() && magnitudes.size() != signs.size()) {
    throw InputError("PathFromDrivers: magnitude count mismatch");
  }
  MartingalePath path = EmptyPath(gen, space);
  for (int j = 1; j <= gen.horizon; ++j) {
    const int s = signs[j - 1];
    if (s != 1 && s != -1) throw InputError("signs must be +1 or -1");
    const double m =
        magnitudes.empty() ? DefaultMagnitude(gen, s) : magnitudes[j - 1];
    AppendStep(gen, space, j, Driver{s, m}, path);
  }
  return path;
}

double RecomputeW(const GeneratorSpec& gen, const SpaceSpec& space,
                  const MartingalePath& path, int step) {
  if (step < 1 || step > path.horizon()) {
    throw InputError("RecomputeW: step out of range");
  }
  const Point v = gen.rule.Direction(space, step, path.f[step - 1]);
  return WValue(gen, space, step, v);
}

std::span<const double> DyadicTree::Value(int level, std::size_t node) const {
  const std::size_t d = space.dim();
  return std::span<const double>(values[level].data() + node * d, d);
}

std::span<double> DyadicTree::MutableValue(int level, std::size_t node) {
  const std::size_t d = space.dim();
  return std::span<double>(values[level].data() + node * d, d);
}

DyadicTree BuildTree(const GeneratorSpec& gen, const SpaceSpec& space,
                     int depth, int depth_cap) {
  if (gen.kind != GeneratorKind::kPaleyWalsh) {
    throw InputError("BuildTree requires a paley_walsh generator");
  }
  if (depth < 0) throw InputError("tree depth must be >= 0");
  if (depth > depth_cap) {
    std::ostringstream msg;
    msg << "tree depth " << depth << " exceeds cap " << depth_cap;
    throw ResourceError(msg.str());
  }
  const std::size_t d = space.dim();
  DyadicTree tree;
  tree.space = space;
  tree.depth = depth;
  tree.values.resize(depth + 1);
  tree.w.resize(depth);
  tree.values[0].assign(d, 0.0);
  for (int level = 0; level < depth; ++level) {
    const int step = level + 1;
    const std::size_t count = tree.NodeCount(level);
    tree.values[level + 1].resize(2 * count * d);
    tree.w[level].resize(count);
    for (std::size_t node = 0; node < count; ++node) {
      const std::span<const double> f = tree.Value(level, node);
      const Point v = gen.rule.Direction(space, step, f);
      tree.w[level][node] = WValue(gen, space, step, v);
      const double vnorm = Norm(space, v);
      if (!(vnorm <= tree.w[level][node] + kDominationSlack)) {
        throw ContractViolation("generator contract violated in tree",
                                static_cast<std::size_t>(step));
      }
      std::span<double> plus = tree.MutableValue(level + 1, 2 * node);
      std::span<double> minus = tree.MutableValue(level + 1, 2 * node + 1);
      for (std::size_t i = 0; i < d; ++i) {
        plus[i] = f[i] + v[i];
        minus[i] = f[i] - v[i];
      }
    }
  }
  return tree;
}

std::size_t LeafIndex(std::span<const int> signs) {
  std::size_t idx = 0;
  for (int s : signs) idx = 2 * idx + (s > 0 ? 0 : 1);
  return idx;
}

double MaximalFunction(const SpaceSpec& space, const MartingalePath& path,
                       int n) {
  if (n < 0 || n > path.horizon()) {
    throw InputError("MaximalFunction: n out of range");
  }
  const Point& f0 = path.f[0];
  Point diff(f0.size());
  double best = 0.0;
  for (int j = 1; j <= n; ++j) {
    for (std::size_t i = 0; i < diff.size(); ++i) {
      diff[i] = path.f[j][i] - f0[i];
    }
    best = std::max(best, Norm(space, diff));
  }
  return best;
}

double SVariation(const SpaceSpec& space, const MartingalePath& path, double p,
                  int n) {
  if (p < 1.0) throw InputError("SVariation: p must be >= 1");
  if (n < 0 || n > path.horizon()) {
    throw InputError("SVariation: n out of range");
  }
  long double sum = 0.0L;
  for (int j = 0; j < n; ++j) {
    const double nd = Norm(space, path.d[j]);
    if (nd > 0.0) sum += std::pow(static_cast<long double>(nd), p);
  }
  if (sum == 0.0L) return 0.0;
  return static_cast<double>(std::pow(sum, 1.0L / p));
}

std::vector<double> ConditionalQuadraticVariation(const DyadicTree& tree,
                                                  int n) {
  if (n < 0 || n > tree.depth) {
    throw InputError("ConditionalQuadraticVariation: n exceeds tree depth");
  }
  const std::size_t d = tree.space.dim();
  std::vector<double> acc(1, 0.0);
  Point diff(d);
  for (int level = 0; level < n; ++level) {
    const std::size_t count = tree.NodeCount(level);
    std::vector<double> next(2 * count);
    for (std::size_t node = 0; node < count; ++node) {
      const std::span<const double> parent = tree.Value(level, node);
      double avg = 0.0;
      for (std::size_t child : {2 * node, 2 * node + 1}) {
        const std::span<const double> c = tree.Value(level + 1, child);
        for (std::size_t i = 0; i < d; ++i) diff[i] = c[i] - parent[i];
        const double nd = Norm(tree.space, diff);
        avg += 0.5 * nd * nd;
      }
      next[2 * node] = acc[node] + avg;
      next[2 * node + 1] = acc[node] + avg;
    }
    acc = std::move(next);
  }
  return acc;
}

double CheckMartingaleExact(const DyadicTree& tree) {
  const std::size_t d = tree.space.dim();
  Point gap(d);
  double worst = 0.0;
  for (int level = 0; level < tree.depth; ++level) {
    for (std::size_t node = 0; node < tree.NodeCount(level); ++node) {
      const auto parent = tree.Value(level, node);
      const auto plus = tree.Value(level + 1, 2 * node);
      const auto minus = tree.Value(level + 1, 2 * node + 1);
      for (std::size_t i = 0; i < d; ++i) {
        gap[i] = 0.5 * (plus[i] + minus[i]) - parent[i];
      }
      worst = std::max(worst, Norm(tree.space, gap));
    }
  }
  return worst;
}

}  // namespace smoothmart
