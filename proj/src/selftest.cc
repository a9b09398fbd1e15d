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


#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "smoothmart/bounds.h"
#include "smoothmart/experiment.h"
#include "smoothmart/reduction.h"
#include "smoothmart/verify.h"

namespace smoothmart {
namespace {

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

SelftestLine JpIdentities() {
  double worst = 0.0;
  PhiloxEngine eng(RngSpec{7, 1, 0}, Substream::kGeometry);
  for (double p : {1.25, 1.5, 1.75, 2.0}) {
    for (int d : {1, 2, 4, 8}) {
      const SpaceSpec space = SpaceSpec::Lp(p, d);
      Point x(d);
      for (int k = 0; k < 200; ++k) {
        const double scale = std::exp(8.0 * eng.Uniform() - 4.0);
        for (double& v : x) v = scale * (2.0 * eng.Uniform() - 1.0);
        const double np = NormPow(space, x);
        const Point jx = DualMapJp(space, x);
        const double e1 =
            std::fabs(Pairing(jx, x) - np) / std::max(1.0, np);
        const double target = std::pow(Norm(space, x), p - 1.0);
        const double e2 =
            std::fabs(DualNorm(space, jx) - target) / std::max(1e-300, target);
        worst = std::max({worst, e1, e2});
      }
    }
  }
  return {"jp_identities", worst <= 1e-9, "max error " + Num(worst)};
}

SelftestLine TreeMartingale() {
  double worst = 0.0;
  for (const SpaceSpec& space :
       {SpaceSpec::Euclidean(3), SpaceSpec::Lp(1.5, 3)}) {
    for (const NamedGenerator& g : BuiltinGenerators(space, 8)) {
      if (g.spec.kind != GeneratorKind::kPaleyWalsh) continue;
      worst = std::max(worst, CheckMartingaleExact(BuildTree(g.spec, space, 8)));
    }
  }
  return {"tree_martingale", worst <= 1e-12, "max mean error " + Num(worst)};
}

SelftestLine ReductionInvariants() {
  double worst = 0.0;
  bool ok = true;
  for (const SpaceSpec& space :
       {SpaceSpec::Euclidean(2), SpaceSpec::Lp(1.25, 3), SpaceSpec::Lp(1.5, 4)}) {
    const double c = DefaultSmoothnessConstant(space);
    for (const NamedGenerator& g : BuiltinGenerators(space, 24)) {
      for (std::uint32_t t = 0; t < 50; ++t) {
        const RngSpec rng{11, 2, t};
        const MartingalePath path = GeneratePath(g.spec, space, rng);
        const ReductionCheck chk =
            VerifyReduction(space, path, ReducePath(path, space, c, rng));
        worst = std::max({worst, chk.max_i_violation, chk.max_ii_violation});
        ok = ok && chk.ok;
      }
      if (g.spec.kind == GeneratorKind::kPaleyWalsh) {
        const EnlargedTree tree = ReduceTree(BuildTree(g.spec, space, 5), c);
        const double mean = CheckReducedMartingaleExact(tree);
        ok = ok && mean <= 1e-12 && VerifyReducedTree(tree).ok;
        worst = std::max(worst, mean);
      }
    }
  }
  return {"reduction_invariants", ok, "max slack " + Num(worst)};
}

SelftestLine Supermartingale() {
  GeneratorSpec walk;
  walk.horizon = 8;
  walk.rule = StepRule::Rotating(1.0);
  const SpaceSpec space = SpaceSpec::Euclidean(2);
  const DyadicTree tree = BuildTree(walk, space, 8);
  double worst = -1.0;
  for (double lambda : {0.25, 0.5, 1.0, 2.0}) {
    worst = std::max(worst, CheckSupermartingaleExact(tree, lambda));
  }
  const double broken =
      CheckSupermartingaleExact(ScaleDominatingValues(tree, 0.5), 1.0);
  return {"cosh_supermartingale", worst <= 1e-12 && broken > 0.0,
          "max violation " + Num(worst) + ", broken fixture " + Num(broken)};
}

SelftestLine MittagLefflerIdentities() {
  double worst = 0.0;
  for (int k = 0; k <= 200; ++k) {
    const double x = -10.0 + 0.1 * k;
    const double z = x * x;
    const long double root = std::sqrt(static_cast<long double>(z));
    const long double e1 =
        std::fabs(MittagLeffler(2.0, 1.0, z) - std::cosh(root));
    const long double sinc = root == 0.0L ? 1.0L : std::sinh(root) / root;
    const long double e2 = std::fabs(MittagLeffler(2.0, 2.0, z) - sinc);
    worst = std::max(worst, static_cast<double>(std::max(e1, e2)));
  }
  return {"mittag_leffler", worst <= 1e-12, "max error " + Num(worst)};
}

SelftestLine ExhaustiveOracle() {
  GeneratorSpec walk;
  walk.horizon = 2;
  walk.rule = StepRule::ConstStep(1.0);
  const SpaceSpec line = SpaceSpec::Euclidean(1);
  const EventSpec ev = EventSpec::MaximalTail(2.0);
  const TailEstimate est =
      ExhaustiveTails(walk, line, std::span<const EventSpec>(&ev, 1))[0];
  return {"exhaustive_oracle", est.hits == 2 && est.trials == 4,
          "P{f* >= 2, n = 2} = " + Num(est.p_hat)};
}

}  // namespace

std::vector<SelftestLine> RunSelftest() {
  return {JpIdentities(),        TreeMartingale(),
          ReductionInvariants(), Supermartingale(),
          MittagLefflerIdentities(), ExhaustiveOracle()};
}

}  // namespace smoothmart
