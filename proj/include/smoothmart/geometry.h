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

// Finite-dimensional l_p spaces (1 < p <= 2): norms, the coordinate duality
// pairing, the generalized dual map J_p and sampled lower estimates of the
// smoothness modulus and of the constant c in
//
//   ||x + y||^p <= ||x||^p + p <J_p(x), y> + c ||y||^p.
//
// Dual elements share the primal coordinate representation; the pairing is
// the coordinate dot product and the dual norm is the l_{p'} norm.

#ifndef SMOOTHMART_GEOMETRY_H_
#define SMOOTHMART_GEOMETRY_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "smoothmart/rng.h"

namespace smoothmart {

using Point = std::vector<double>;

enum class SpaceKind { kEuclidean, kLp };

class SpaceSpec {
 public:
  static SpaceSpec Euclidean(int dim);
  static SpaceSpec Lp(double p, int dim);

  SpaceKind kind() const { return kind_; }
  double p() const { return p_; }
  int dim() const { return dim_; }
  // p' = p / (p - 1).
  double dual_exponent() const { return p_ / (p_ - 1.0); }
  // True when the norm is Euclidean (either kind with p = 2).
  bool is_hilbert() const { return p_ == 2.0; }
  std::string ToString() const;

  bool operator==(const SpaceSpec&) const = default;

 private:
  SpaceSpec(SpaceKind kind, double p, int dim)
      : kind_(kind), p_(p), dim_(dim) {}

  SpaceKind kind_;
  double p_;
  int dim_;
};

double Norm(const SpaceSpec& space, std::span<const double> x);
// ||x||^p without the final root.
double NormPow(const SpaceSpec& space, std::span<const double> x);
// l_{p'} norm of a dual element.
double DualNorm(const SpaceSpec& space, std::span<const double> xstar);
double Pairing(std::span<const double> xstar, std::span<const double> x);

// (J_p x)_i = sign(x_i) |x_i|^{p-1}; J_p(0) = 0; identity when p = 2.
Point DualMapJp(const SpaceSpec& space, std::span<const double> x);
// <J_p(x), y> without materializing J_p(x).
double DualMapPairing(const SpaceSpec& space, std::span<const double> x,
                      std::span<const double> y);

struct SamplingOptions {
  // Coordinate-ascent sweeps applied to every sampled pair.
  int refine_sweeps = 24;
  double initial_step = 0.25;
};

// Lower estimate of rho_X(tau) = sup_{|x|=|y|=1} (|x+ty| + |x-ty|)/2 - 1.
// Sample k depends only on (rng, k), so the result is nondecreasing in
// `samples`.
double EstimateModulus(const SpaceSpec& space, double tau, std::size_t samples,
                       const RngSpec& rng, const SamplingOptions& opts = {});

// Lower estimate of the smallest c above, max over sampled pairs of
// (||x+y||^p - ||x||^p - p<J_p x, y>) / ||y||^p, clamped below at `floor`.
// Pairs with x = 0 contribute exactly 1.
double EstimateSmoothnessConstant(const SpaceSpec& space, std::size_t samples,
                                  const RngSpec& rng, double floor = 1.0,
                                  const SamplingOptions& opts = {});

// Sampling estimates of c for l_p recorded at build time (d = 4, 20000
// samples, seed 20260101). The constant is dimension-free for l_p because
// both ||.||^p and J_p act coordinate-wise.
double FrozenSmoothnessEstimate(double p);

// Multiplier applied to sampled estimates before use in the reduction.
inline constexpr double kSmoothnessSafetyFactor = 1.1;

// c used by default: 1 for Hilbert spaces (exact), otherwise the frozen or
// freshly sampled estimate times kSmoothnessSafetyFactor.
double DefaultSmoothnessConstant(const SpaceSpec& space);

struct TwoPointCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// Euclidean two-point inequality for q >= 2:
//   (|x+y|^q + |x-y|^q)/2 <= (|x|^2 + 8(s+q)|y|^2)^{q/2}.
TwoPointCheck CheckTwoPoint(double s, double q, std::span<const double> x,
                            std::span<const double> y);

}  // namespace smoothmart

#endif  // SMOOTHMART_GEOMETRY_H_
