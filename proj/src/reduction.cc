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


#include "smoothmart/reduction.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "smoothmart/error.h"

namespace smoothmart {
namespace {

double RelativeSlack(double lhs, double rhs) {
  const double scale = std::max(lhs, rhs);
  if (scale == 0.0) return 0.0;
  return (lhs - rhs) / scale;
}

double Dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

// w^e for w >= 0 with the zero branch explicit.
double PowNonNeg(double w, double e) {
  if (w == 0.0) return 0.0;
  return static_cast<double>(
      std::exp(static_cast<long double>(e) * std::log(static_cast<long double>(w))));
}

void CheckFinite(const Vec2& v, int step) {
  if (!std::isfinite(v[0]) || !std::isfinite(v[1])) {
    std::ostringstream msg;
    msg << "non-finite reduced value at step " << step;
    throw NumericError(msg.str(), static_cast<std::size_t>(step));
  }
}

void RequirePositiveC(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw InputError("smoothness constant c must be finite and > 0");
  }
}

// Accumulates one (i, ii) observation into `out`.
void Record(double slack_i, double slack_ii, int step, ReductionCheck& out) {
  if (out.worst_i_step == 0 || slack_i > out.max_i_violation) {
    out.max_i_violation = slack_i;
    out.worst_i_step = step;
  }
  if (out.worst_ii_step == 0 || slack_ii > out.max_ii_violation) {
    out.max_ii_violation = slack_ii;
    out.worst_ii_step = step;
  }
}

void Finish(double tol, ReductionCheck& out) {
  out.worst_step = out.max_i_violation >= out.max_ii_violation
                       ? out.worst_i_step
                       : out.worst_ii_step;
  out.ok = out.max_i_violation <= tol && out.max_ii_violation <= tol;
}

}  // namespace

Vec2 Perp(const Vec2& x) {
  if (x[0] == 0.0 && x[1] == 0.0) return {1.0, 0.0};
  return {-x[1], x[0]};
}

double ReductionConstant(double p, double c) { return p * p / 4.0 + c + p; }

ReductionIncrement ReductionStep(const SpaceSpec& space, double c,
                                 const Vec2& n_prev,
                                 std::span<const double> f_prev,
                                 std::span<const double> d, double w,
                                 int eps) {
  const double p = space.p();
  const bool zero = n_prev[0] == 0.0 && n_prev[1] == 0.0;
  const double n2 = Dot(n_prev, n_prev);
  const double wp = PowNonNeg(w, p);

  ReductionIncrement inc{{0.0, 0.0}, {0.0, 0.0}};
  if (wp <= n2) {
    const double pairing = DualMapPairing(space, f_prev, d);
    const double coeff = 0.5 * p * pairing / (zero ? 1.0 : n2);
    inc.radial = {coeff * n_prev[0], coeff * n_prev[1]};
  }
  const Vec2 perp = Perp(n_prev);
  const double tcoeff = std::sqrt(c + p) * eps * PowNonNeg(w, 0.5 * p) /
                        (zero ? 1.0 : std::sqrt(n2));
  inc.tangential = {tcoeff * perp[0], tcoeff * perp[1]};
  return inc;
}

ReducedPath ReducePath(const MartingalePath& path, const SpaceSpec& space,
                       double c, const RngSpec& rng) {
  const CounterRng signs(rng, Substream::kEnlargement);
  std::vector<int> eps(path.horizon());
  for (int j = 1; j <= path.horizon(); ++j) {
    eps[j - 1] = signs.Sign(static_cast<std::uint32_t>(j), 0);
  }
  return ReducePathWithSigns(path, space, c, eps);
}

ReducedPath ReducePathWithSigns(const MartingalePath& path,
                                const SpaceSpec& space, double c,
                                std::span<const int> eps) {
  RequirePositiveC(c);
  const int n = path.horizon();
  if (eps.size() != static_cast<std::size_t>(n) ||
      path.w.size() != static_cast<std::size_t>(n) ||
      path.f.size() != static_cast<std::size_t>(n) + 1) {
    throw InputError("ReducePath: inconsistent path lengths");
  }
  ReducedPath red;
  red.c = c;
  red.p = space.p();
  red.K = ReductionConstant(red.p, c);
  red.eps.assign(eps.begin(), eps.end());
  red.N.reserve(n + 1);
  red.N.push_back({0.0, 0.0});

  const Point& f0 = path.f[0];
  Point f_prev(f0.size(), 0.0);
  for (int j = 1; j <= n; ++j) {
    for (std::size_t i = 0; i < f_prev.size(); ++i) {
      f_prev[i] = path.f[j - 1][i] - f0[i];
    }
    const Vec2& prev = red.N.back();
    const ReductionIncrement inc = ReductionStep(
        space, c, prev, f_prev, path.d[j - 1], path.w[j - 1], eps[j - 1]);
    const Vec2 next = {prev[0] + inc.radial[0] + inc.tangential[0],
                       prev[1] + inc.radial[1] + inc.tangential[1]};
    CheckFinite(next, j);
    red.N.push_back(next);
  }
  return red;
}

ReductionCheck VerifyReduction(const SpaceSpec& space,
                               const MartingalePath& path,
                               const ReducedPath& red, double tol) {
  const int n = path.horizon();
  if (red.N.size() != static_cast<std::size_t>(n) + 1 ||
      path.w.size() != static_cast<std::size_t>(n)) {
    throw InputError("VerifyReduction: length mismatch");
  }
  ReductionCheck out;
  const Point& f0 = path.f[0];
  Point shifted(f0.size());
  for (int j = 1; j <= n; ++j) {
    for (std::size_t i = 0; i < shifted.size(); ++i) {
      shifted[i] = path.f[j][i] - f0[i];
    }
    const Vec2& cur = red.N[j];
    const Vec2& prev = red.N[j - 1];
    const Vec2 diff = {cur[0] - prev[0], cur[1] - prev[1]};
    const double slack_i = RelativeSlack(NormPow(space, shifted), Dot(cur, cur));
    const double slack_ii = RelativeSlack(
        Dot(diff, diff), red.K * PowNonNeg(path.w[j - 1], space.p()));
    Record(slack_i, slack_ii, j, out);
  }
  Finish(tol, out);
  return out;
}

EnlargedTree ReduceTree(const DyadicTree& tree, double c, int depth_cap) {
  RequirePositiveC(c);
  if (tree.depth > depth_cap) {
    std::ostringstream msg;
    msg << "enlarged tree depth " << tree.depth << " exceeds cap "
        << depth_cap;
    throw ResourceError(msg.str());
  }
  const SpaceSpec& space = tree.space;
  const std::size_t dim = space.dim();
  EnlargedTree out;
  out.base = tree;
  out.c = c;
  out.K = ReductionConstant(space.p(), c);
  out.depth = tree.depth;
  out.base_index.resize(tree.depth + 1);
  out.N.resize(tree.depth + 1);
  out.base_index[0] = {0};
  out.N[0] = {Vec2{0.0, 0.0}};

  Point d(dim);
  for (int level = 0; level < tree.depth; ++level) {
    const std::size_t count = out.NodeCount(level);
    out.base_index[level + 1].resize(4 * count);
    out.N[level + 1].resize(4 * count);
    for (std::size_t node = 0; node < count; ++node) {
      const std::size_t bi = out.base_index[level][node];
      const std::span<const double> f_prev = tree.Value(level, bi);
      const double w = tree.w[level][bi];
      const Vec2& n_prev = out.N[level][node];
      for (std::size_t b = 0; b < 2; ++b) {
        const std::size_t child_base = 2 * bi + b;
        const std::span<const double> f_next = tree.Value(level + 1, child_base);
        for (std::size_t i = 0; i < dim; ++i) d[i] = f_next[i] - f_prev[i];
        for (std::size_t e = 0; e < 2; ++e) {
          const int eps = e == 0 ? 1 : -1;
          const ReductionIncrement inc =
              ReductionStep(space, c, n_prev, f_prev, d, w, eps);
          const std::size_t child = 4 * node + 2 * b + e;
          const Vec2 next = {n_prev[0] + inc.radial[0] + inc.tangential[0],
                             n_prev[1] + inc.radial[1] + inc.tangential[1]};
          CheckFinite(next, level + 1);
          out.base_index[level + 1][child] = child_base;
          out.N[level + 1][child] = next;
        }
      }
    }
  }
  return out;
}

double CheckReducedMartingaleExact(const EnlargedTree& tree) {
  double worst = 0.0;
  for (int level = 0; level < tree.depth; ++level) {
    for (std::size_t node = 0; node < tree.NodeCount(level); ++node) {
      const Vec2& parent = tree.N[level][node];
      Vec2 mean = {0.0, 0.0};
      for (std::size_t k = 0; k < 4; ++k) {
        const Vec2& child = tree.N[level + 1][4 * node + k];
        mean[0] += 0.25 * (child[0] - parent[0]);
        mean[1] += 0.25 * (child[1] - parent[1]);
      }
      worst = std::max(worst, std::sqrt(Dot(mean, mean)));
    }
  }
  return worst;
}

ReductionCheck VerifyReducedTree(const EnlargedTree& tree, double tol) {
  ReductionCheck out;
  const SpaceSpec& space = tree.base.space;
  for (int level = 1; level <= tree.depth; ++level) {
    for (std::size_t node = 0; node < tree.NodeCount(level); ++node) {
      const std::size_t parent = node / 4;
      const Vec2& cur = tree.N[level][node];
      const Vec2& prev = tree.N[level - 1][parent];
      const Vec2 diff = {cur[0] - prev[0], cur[1] - prev[1]};
      const std::size_t bi = tree.base_index[level][node];
      const double w = tree.base.w[level - 1][tree.base_index[level - 1][parent]];
      const double slack_i = RelativeSlack(
          NormPow(space, tree.base.Value(level, bi)), Dot(cur, cur));
      const double slack_ii =
          RelativeSlack(Dot(diff, diff), tree.K * PowNonNeg(w, space.p()));
      Record(slack_i, slack_ii, level, out);
    }
  }
  Finish(tol, out);
  return out;
}

}  // namespace smoothmart
