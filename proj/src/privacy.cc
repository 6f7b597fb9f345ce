//
// Copyright 2026 The dpform Authors
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
//

#include "dpform/privacy.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dpform/error.h"
#include "dpform/random.h"

namespace dpform {
namespace {

constexpr double kRootBracketHigh = 40.0;
constexpr double kRootTolerance = 1e-12;
constexpr int kMaxRootIterations = 400;

double StandardNormalDensity(double y) {
  return std::exp(-0.5 * y * y) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

void PrivacyParams::Validate() const {
  std::ostringstream msg;
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    msg << "epsilon must be positive, got " << epsilon;
  } else if (!(delta > 0.0 && delta < 0.5)) {
    msg << "delta must lie in (0, 1/2), got " << delta;
  } else if (!(b > 0.0) || !std::isfinite(b)) {
    msg << "adjacency radius b must be positive, got " << b;
  } else {
    return;
  }
  Fail(ErrorCode::kInvalidArgument, msg.str());
}

double PrivacyParams::KDelta() const { return QInverse(delta); }

double PrivacyParams::MinimumSigma() const { return NoiseScale(*this); }

double QFunction(double y) {
  return 0.5 * std::erfc(y / std::numbers::sqrt2);
}

double QInverse(double delta) {
  if (!(delta > 0.0 && delta < 0.5)) {
    std::ostringstream msg;
    msg << "Q^-1 is defined here on (0, 1/2), got " << delta;
    Fail(ErrorCode::kDomain, msg.str());
  }
  // Q is strictly decreasing: Q(lo) >= delta > Q(hi).
  double lo = 0.0;
  double hi = kRootBracketHigh;
  double x = 1.0;
  for (int iter = 0; iter < kMaxRootIterations; ++iter) {
    const double residual = QFunction(x) - delta;
    if (residual == 0.0) return x;
    if (residual > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= kRootTolerance * std::max(1.0, x)) break;
    // Newton on Q(x) - delta; Q'(x) = -phi(x).
    const double density = StandardNormalDensity(x);
    double next = density > 0.0 ? x + residual / density : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const bool converged =
        std::abs(next - x) <= 0.01 * kRootTolerance * std::max(1.0, x);
    x = next;
    if (converged) break;
  }
  return x;
}

double KappaFromK(double k_delta, double epsilon) {
  return (k_delta + std::sqrt(k_delta * k_delta + 2.0 * epsilon)) /
         (2.0 * epsilon);
}

double Kappa(double delta, double epsilon) {
  PrivacyParams{epsilon, delta, 1.0}.Validate();
  return KappaFromK(QInverse(delta), epsilon);
}

double NoiseScale(const PrivacyParams& params) {
  params.Validate();
  return params.b * Kappa(params.delta, params.epsilon);
}

std::optional<std::string> TypicalRangeWarning(const PrivacyParams& params) {
  std::ostringstream msg;
  if (params.epsilon < 0.1 || params.epsilon > std::log(3.0)) {
    msg << "epsilon = " << params.epsilon
        << " is outside the typical range [0.1, ln 3]";
  }
  if (params.delta > 0.01) {
    if (msg.tellp() > 0) msg << "; ";
    msg << "delta = " << params.delta << " exceeds the typical limit 0.01";
  }
  if (msg.tellp() == 0) return std::nullopt;
  return msg.str();
}

std::vector<double> SampleNoise(double sigma, std::size_t steps,
                                std::uint64_t seed) {
  Require(sigma > 0.0 && std::isfinite(sigma),
          "noise scale sigma must be positive");
  NoiseStream stream(seed);
  std::vector<double> draws(steps);
  for (double& d : draws) d = stream.Gaussian(sigma);
  return draws;
}

bool IsAdjacent(std::span<const double> v, std::span<const double> w,
                double b) {
  Require(v.size() == w.size(), "trajectories must have equal length");
  Require(b > 0.0, "adjacency radius b must be positive");
  double sum = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double d = v[k] - w[k];
    sum += d * d;
  }
  return std::sqrt(sum) <= b;
}

}  // namespace dpform
