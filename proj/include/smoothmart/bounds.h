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


// Closed-form tail and moment bounds. Values are returned unclamped, so a
// tail bound may exceed 1.

#ifndef SMOOTHMART_BOUNDS_H_
#define SMOOTHMART_BOUNDS_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace smoothmart {

enum class Formula {
  kAzuma,             // 2 exp(-r^2 / (2 sum a^2))
  kNaor,              // e^{s+2} exp(-c r^2 / sum a^2)
  kPinelis,           // 2 exp(-r^p / (2 K b))
  kSelfNormalized,    // 4 exp(-r^p / (2 K))
  kGoodLambda,        // 2 exp(-(beta-1-delta)^p / (m K delta^p))
  kMaximalMoment,     // 4^{r+1} ((r+2) ln 2 K)^{r/p}
  kFreedmanExact,     // (b/(r+b))^{r+b} e^r
  kFreedmanRelaxed,   // exp(-r^2 / (2(r+b)))
  kDelapena,          // exp(-r^2 / (2b))
  kDelapenaSelfNorm,  // exp(-r^2 (beta^2/(2b) + alpha beta))
  kDelapenaP,         // 4 exp(-r^p (beta^2/(2bK) + alpha beta/K))
};

std::string ToString(Formula formula);

struct BoundResult {
  double value = 0.0;
  Formula formula = Formula::kAzuma;
  std::vector<std::pair<std::string, double>> inputs;
  // False when the formula carries a constant the theory leaves open.
  bool constant_pinned = true;
};

// E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta), summed in long
// double until the tail is provably below `tol`. Throws NumericError when
// the terms overflow or when cancellation between alternating terms makes
// `tol` unreachable.
long double MittagLeffler(double alpha, double beta, double z,
                          double tol = 1e-14);

BoundResult BoundAzuma(double r, std::span<const double> a);

// `c_univ` is not determined by the theory; the result is flagged.
BoundResult BoundNaor(double r, double s, std::span<const double> a,
                      double c_univ);

// b may be +infinity, giving the trivial value 2.
BoundResult BoundPinelis(double r, double p, double K, double b);

BoundResult BoundSelfNormalized(double r, double p, double K);

// `scale` multiplies K in the exponent's denominator: 1 reads the
// statement literally, 2 matches the denominator of BoundPinelis.
BoundResult BoundGoodLambdaFactor(double p, double K, double beta,
                                  double delta, double scale = 1.0);

// Coefficient C with ||f*||_r^r <= C ||S_p(f)||_r^r.
BoundResult BoundMaximalMoment(double r, double p, double K);

struct FreedmanBound {
  double exact = 0.0;
  double relaxed = 0.0;
};
FreedmanBound BoundFreedman(double r, double b);

BoundResult BoundDelapena(double r, double b);
BoundResult BoundDelapenaSelfNorm(double r, double alpha, double beta,
                                  double b);
BoundResult BoundDelapenaP(double r, double p, double K, double alpha,
                           double beta, double b);

}  // namespace smoothmart

#endif  // SMOOTHMART_BOUNDS_H_
