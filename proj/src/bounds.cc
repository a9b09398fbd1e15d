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


#include "smoothmart/bounds.h"

#include <cfloat>
#include <cmath>
#include <limits>
#include <sstream>

#include "smoothmart/error.h"

namespace smoothmart {
namespace {

void RequireR(double r) {
  if (!(r >= 0.0)) throw InputError("bound: r must be >= 0");
}

void RequirePositive(double v, const char* name) {
  if (!(v > 0.0)) {
    throw InputError(std::string("bound: ") + name + " must be > 0");
  }
}

void RequireExponent(double p) {
  if (!(p > 1.0 && p <= 2.0)) {
    throw InputError("bound: p must satisfy 1 < p <= 2");
  }
}

double SumSquares(std::span<const double> a) {
  if (a.empty()) throw InputError("bound: sequence a is empty");
  long double sum = 0.0L;
  for (double v : a) {
    if (!(v > 0.0)) throw InputError("bound: a_j must be > 0");
    sum += static_cast<long double>(v) * v;
  }
  return static_cast<double>(sum);
}

// r^p with r = 0 handled explicitly.
double PowR(double r, double p) {
  if (r == 0.0) return 0.0;
  return std::pow(r, p);
}

BoundResult Make(double value, Formula formula,
                 std::vector<std::pair<std::string, double>> inputs) {
  BoundResult out;
  out.value = value;
  out.formula = formula;
  out.inputs = std::move(inputs);
  return out;
}

// |z|^k / Gamma(alpha k + beta). Direct evaluation is more accurate than
// exp(log_term) while tgamma stays in range.
long double TermMagnitude(double alpha, double beta, long double log_abs_z,
                          int k, long double log_term) {
  const long double x = static_cast<long double>(alpha) * k + beta;
  if (x < 1700.0L && k * log_abs_z < 11000.0L) {
    return std::exp(k * log_abs_z) / std::tgamma(x);
  }
  return std::exp(log_term);
}

}  // namespace

std::string ToString(Formula formula) {
  switch (formula) {
    case Formula::kAzuma:
      return "azuma";
    case Formula::kNaor:
      return "naor";
    case Formula::kPinelis:
      return "pinelis";
    case Formula::kSelfNormalized:
      return "self_normalized";
    case Formula::kGoodLambda:
      return "goodlambda";
    case Formula::kMaximalMoment:
      return "maximal_moment";
    case Formula::kFreedmanExact:
      return "freedman_exact";
    case Formula::kFreedmanRelaxed:
      return "freedman_relaxed";
    case Formula::kDelapena:
      return "delapena";
    case Formula::kDelapenaSelfNorm:
      return "delapena_selfnorm";
    case Formula::kDelapenaP:
      return "delapena_p";
  }
  return "?";
}

long double MittagLeffler(double alpha, double beta, double z, double tol) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw InputError("mittag-leffler: alpha and beta must be > 0");
  }
  if (!(tol > 0.0) || !std::isfinite(z)) {
    throw InputError("mittag-leffler: need finite z and tol > 0");
  }
  if (z == 0.0) return 1.0L / std::tgamma(static_cast<long double>(beta));

  const long double log_abs_z = std::log(std::fabs(static_cast<long double>(z)));
  const bool alternating = z < 0.0;
  // Largest exponent whose exp() is comfortably finite.
  const long double kLogMax = std::log(LDBL_MAX) - 8.0L;
  constexpr int kMaxTerms = 1000000;

  auto log_term = [&](int k) {
    return k * log_abs_z - std::lgamma(static_cast<long double>(alpha) * k +
                                       static_cast<long double>(beta));
  };

  long double sum = 0.0L;
  long double peak = 0.0L;
  long double cur = log_term(0);
  for (int k = 0; k < kMaxTerms; ++k) {
    if (cur > kLogMax) {
      std::ostringstream msg;
      msg << "mittag-leffler: term " << k << " overflows for z = " << z;
      throw NumericError(msg.str());
    }
    const long double mag = TermMagnitude(alpha, beta, log_abs_z, k, cur);
    peak = std::max(peak, mag);
    sum += (alternating && (k % 2 == 1)) ? -mag : mag;

    const long double next = log_term(k + 1);
    const long double ratio = std::exp(next - cur);
    // Past the peak the log-gamma growth makes the ratios decrease, so the
    // remainder is bounded by a geometric series.
    if (ratio < 1.0L) {
      const long double tail = std::exp(next) / (1.0L - ratio);
      if (tail < 0.5L * tol) {
        if (alternating && peak * 64.0L * LDBL_EPSILON > tol) {
          throw NumericError(
              "mittag-leffler: cancellation exceeds the requested tolerance");
        }
        return sum;
      }
    }
    cur = next;
  }
  throw NumericError("mittag-leffler: series did not converge");
}

BoundResult BoundAzuma(double r, std::span<const double> a) {
  RequireR(r);
  const double s2 = SumSquares(a);
  return Make(2.0 * std::exp(-r * r / (2.0 * s2)), Formula::kAzuma,
              {{"r", r}, {"sum_a2", s2}});
}

BoundResult BoundNaor(double r, double s, std::span<const double> a,
                      double c_univ) {
  RequireR(r);
  RequirePositive(s, "s");
  RequirePositive(c_univ, "c_univ");
  const double s2 = SumSquares(a);
  BoundResult out =
      Make(std::exp(s + 2.0) * std::exp(-c_univ * r * r / s2), Formula::kNaor,
           {{"r", r}, {"s", s}, {"sum_a2", s2}, {"c_univ", c_univ}});
  out.constant_pinned = false;
  return out;
}

BoundResult BoundPinelis(double r, double p, double K, double b) {
  RequireR(r);
  RequireExponent(p);
  RequirePositive(K, "K");
  RequirePositive(b, "b");
  const double value =
      std::isinf(b) ? 2.0 : 2.0 * std::exp(-PowR(r, p) / (2.0 * K * b));
  return Make(value, Formula::kPinelis, {{"r", r}, {"p", p}, {"K", K}, {"b", b}});
}

BoundResult BoundSelfNormalized(double r, double p, double K) {
  RequireR(r);
  RequireExponent(p);
  RequirePositive(K, "K");
  return Make(4.0 * std::exp(-PowR(r, p) / (2.0 * K)), Formula::kSelfNormalized,
              {{"r", r}, {"p", p}, {"K", K}});
}

BoundResult BoundGoodLambdaFactor(double p, double K, double beta,
                                  double delta, double scale) {
  RequireExponent(p);
  RequirePositive(K, "K");
  RequirePositive(beta, "beta");
  RequirePositive(scale, "scale");
  if (!(delta > 0.0 && delta < beta - 1.0)) {
    throw InputError("good-lambda: delta must lie in (0, beta - 1)");
  }
  const double num = std::pow(beta - 1.0 - delta, p);
  const double den = scale * K * std::pow(delta, p);
  return Make(2.0 * std::exp(-num / den), Formula::kGoodLambda,
              {{"p", p}, {"K", K}, {"beta", beta}, {"delta", delta},
               {"scale", scale}});
}

BoundResult BoundMaximalMoment(double r, double p, double K) {
  if (!(r >= 1.0)) throw InputError("maximal moment: r must be >= 1");
  RequireExponent(p);
  RequirePositive(K, "K");
  const double value = std::pow(4.0, r + 1.0) *
                       std::pow((r + 2.0) * std::log(2.0) * K, r / p);
  return Make(value, Formula::kMaximalMoment, {{"r", r}, {"p", p}, {"K", K}});
}

FreedmanBound BoundFreedman(double r, double b) {
  RequireR(r);
  RequirePositive(b, "b");
  FreedmanBound out;
  out.exact = std::exp((r + b) * std::log(b / (r + b)) + r);
  out.relaxed = std::exp(-r * r / (2.0 * (r + b)));
  return out;
}

BoundResult BoundDelapena(double r, double b) {
  RequireR(r);
  RequirePositive(b, "b");
  return Make(std::exp(-r * r / (2.0 * b)), Formula::kDelapena,
              {{"r", r}, {"b", b}});
}

BoundResult BoundDelapenaSelfNorm(double r, double alpha, double beta,
                                  double b) {
  RequireR(r);
  RequirePositive(beta, "beta");
  RequirePositive(b, "b");
  if (!(alpha >= 0.0)) throw InputError("bound: alpha must be >= 0");
  const double rate = beta * beta / (2.0 * b) + alpha * beta;
  return Make(std::exp(-r * r * rate), Formula::kDelapenaSelfNorm,
              {{"r", r}, {"alpha", alpha}, {"beta", beta}, {"b", b}});
}

BoundResult BoundDelapenaP(double r, double p, double K, double alpha,
                           double beta, double b) {
  RequireR(r);
  RequireExponent(p);
  RequirePositive(K, "K");
  RequirePositive(beta, "beta");
  RequirePositive(b, "b");
  if (!(alpha >= 0.0)) throw InputError("bound: alpha must be >= 0");
  const double rate = beta * beta / (2.0 * b * K) + alpha * beta / K;
  return Make(4.0 * std::exp(-PowR(r, p) * rate), Formula::kDelapenaP,
              {{"r", r}, {"p", p}, {"K", K}, {"alpha", alpha},
               {"beta", beta}, {"b", b}});
}

}  // namespace smoothmart
