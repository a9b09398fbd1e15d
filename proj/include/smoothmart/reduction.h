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


// Two-dimensional reduction of a p-smooth martingale. Given f with
// ||d_j|| <= w_j, w predictable, and Rademacher signs eps_j, the process
//
//   N_j - N_{j-1} = [p <J_p(f_{j-1}), d_j> 1_A / 2] N_{j-1} / (|N_{j-1}|^2 + 1_0)
//                 + sqrt(c + p) eps_j w_j^{p/2} perp(N_{j-1}) / (|N_{j-1}| + 1_0)
//
// with A = {w_j^p <= |N_{j-1}|^2} and 1_0 = 1_{N_{j-1} = 0} is an R^2
// martingale in the filtration enlarged by the signs, with
//   i)  ||f_j - f_0||^p <= |N_j|^2,
//   ii) |N_j - N_{j-1}|^2 <= K w_j^p,  K = p^2/4 + c + p.

#ifndef SMOOTHMART_REDUCTION_H_
#define SMOOTHMART_REDUCTION_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "smoothmart/geometry.h"
#include "smoothmart/rng.h"
#include "smoothmart/stochastic.h"

namespace smoothmart {

using Vec2 = std::array<double, 2>;

// (-x2, x1) for x != 0, (1, 0) for x = 0.
Vec2 Perp(const Vec2& x);

double ReductionConstant(double p, double c);

// The two orthogonal summands of one increment.
struct ReductionIncrement {
  Vec2 radial;
  Vec2 tangential;
};

// One update. `f_prev` and `d` are already shifted so that f_0 = 0.
ReductionIncrement ReductionStep(const SpaceSpec& space, double c,
                                 const Vec2& n_prev,
                                 std::span<const double> f_prev,
                                 std::span<const double> d, double w,
                                 int eps);

struct ReducedPath {
  std::vector<Vec2> N;  // N_0..N_n
  std::vector<int> eps;
  double c = 0.0;
  double K = 0.0;
  double p = 2.0;
};

// Signs are drawn from the kEnlargement substream of `rng`. Throws
// InputError for c <= 0 and NumericError (with the step) on non-finite
// values.
ReducedPath ReducePath(const MartingalePath& path, const SpaceSpec& space,
                       double c, const RngSpec& rng);

// Same with explicit signs, for replay over an enumerated filtration.
ReducedPath ReducePathWithSigns(const MartingalePath& path,
                                const SpaceSpec& space, double c,
                                std::span<const int> eps);

// Signed relative slacks (lhs - rhs) / max(lhs, rhs); 0 when both sides
// vanish. Negative means satisfied.
struct ReductionCheck {
  double max_i_violation = 0.0;
  double max_ii_violation = 0.0;
  int worst_i_step = 0;
  int worst_ii_step = 0;
  // Step of the larger of the two maxima.
  int worst_step = 0;
  bool ok = true;  // both maxima <= tol
};

ReductionCheck VerifyReduction(const SpaceSpec& space,
                               const MartingalePath& path,
                               const ReducedPath& red, double tol = 1e-9);

inline constexpr int kDefaultEnlargedDepthCap = 8;

// Exact enlarged filtration: level j has 4^j nodes and the children of
// node k are 4k + 2 b + e, with b = 0 for base sign +1 and e = 0 for
// eps = +1.
struct EnlargedTree {
  DyadicTree base;
  double c = 0.0;
  double K = 0.0;
  int depth = 0;
  std::vector<std::vector<std::size_t>> base_index;
  std::vector<std::vector<Vec2>> N;

  std::size_t NodeCount(int level) const {
    return std::size_t{1} << (2 * level);
  }
};

EnlargedTree ReduceTree(const DyadicTree& tree, double c,
                        int depth_cap = kDefaultEnlargedDepthCap);

// max over internal nodes of |mean of the four children N - N|.
double CheckReducedMartingaleExact(const EnlargedTree& tree);

// i) and ii) over every node of the enlarged tree.
ReductionCheck VerifyReducedTree(const EnlargedTree& tree, double tol = 1e-9);

}  // namespace smoothmart

#endif  // SMOOTHMART_REDUCTION_H_
