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

#ifndef DPFORM_PRIVACY_H_
#define DPFORM_PRIVACY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dpform {

// Per-agent Gaussian-mechanism parameters: leakage bound epsilon, failure
// probability delta and adjacency radius b (state units).
struct PrivacyParams {
  double epsilon = 0.0;
  double delta = 0.0;
  double b = 0.0;

  // Throws kInvalidArgument unless epsilon > 0, 0 < delta < 1/2, b > 0.
  void Validate() const;

  // Q^{-1}(delta).
  double KDelta() const;
  // b * kappa(delta, epsilon).
  double MinimumSigma() const;
};

// Gaussian upper tail, 1 - Phi(y).
double QFunction(double y);

// Inverse of QFunction on (0, 1/2). Bracketed Newton/bisection on [0, 40];
// |Q(result) - delta| <= 1e-12. Throws kDomain outside (0, 1/2).
double QInverse(double delta);

// (K + sqrt(K^2 + 2 epsilon)) / (2 epsilon) with K = Q^{-1}(delta).
double Kappa(double delta, double epsilon);

// Same formula with K_delta already known.
double KappaFromK(double k_delta, double epsilon);

// Minimal noise scale for (epsilon, delta)-privacy at radius b.
double NoiseScale(const PrivacyParams& params);

// Warning text when epsilon lies outside [0.1, ln 3] or delta > 0.01.
std::optional<std::string> TypicalRangeWarning(const PrivacyParams& params);

// `steps` i.i.d. N(0, sigma^2) draws, deterministic in `seed`.
std::vector<double> SampleNoise(double sigma, std::size_t steps,
                                std::uint64_t seed);

// True iff the l2 distance between two (finite, truncated) trajectories is at
// most b. Multi-dimensional trajectories are passed flattened.
bool IsAdjacent(std::span<const double> v, std::span<const double> w,
                double b);

// The privatized value an agent shares: (x + noise) - q, in that order.
inline double PrivatizedShare(double state, double noise, double offset) {
  return (state + noise) - offset;
}

}  // namespace dpform

#endif  // DPFORM_PRIVACY_H_
