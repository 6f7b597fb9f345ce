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

#include "dpform/sensitivity.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "dpform/error.h"
#include "dpform/privacy.h"

namespace dpform {
namespace {

void Validate(const SensitivityPoint& p) {
  PrivacyParams{p.epsilon, p.delta, p.b}.Validate();
  Require(p.n >= 2, "need at least two agents");
  Require(p.gamma > 0.0, "gamma must be positive");
  if (!(p.lambda2 > 0.0 && p.gamma * p.lambda2 < 2.0)) {
    std::ostringstream msg;
    msg << "need 0 < lambda2 < 2/gamma, got lambda2 = " << p.lambda2;
    Fail(ErrorCode::kDomain, msg.str());
  }
}

// gamma (N-1)^2 b^2 / (4 N lambda2 (2 - gamma lambda2)).
double Prefactor(const SensitivityPoint& p) {
  const double nm1 = p.n - 1.0;
  return p.gamma * nm1 * nm1 * p.b * p.b /
         (4.0 * p.n * p.lambda2 * (2.0 - p.gamma * p.lambda2));
}

}  // namespace

double LambdaAux(double k_delta, double epsilon) {
  return k_delta + std::sqrt(k_delta * k_delta + 2.0 * epsilon);
}

double PartialEpsilon(const SensitivityPoint& p) {
  Validate(p);
  const double k = QInverse(p.delta);
  const double eps = p.epsilon;
  const double lam = LambdaAux(k, eps);
  const double root = std::sqrt(k * k + 2.0 * eps);
  return Prefactor(p) * (2.0 * lam / (eps * eps * root) -
                         2.0 * lam * lam / (eps * eps * eps));
}

double PartialLambda2(const SensitivityPoint& p) {
  Validate(p);
  const double k = QInverse(p.delta);
  const double lam = LambdaAux(k, p.epsilon);
  return Prefactor(p) * lam * lam / (p.epsilon * p.epsilon) *
         (p.gamma / (2.0 - p.gamma * p.lambda2) - 1.0 / p.lambda2);
}

TopologyCutoffs ComputeTopologyCutoffsFromK(double epsilon, double k_delta,
                                            double gamma) {
  Require(epsilon > 0.0 && gamma > 0.0 && k_delta > 0.0,
          "cutoffs need epsilon, gamma and K_delta positive");
  const double e = epsilon;
  const double k2 = k_delta * k_delta;
  const double k4 = k2 * k2;

  TopologyCutoffs c;
  c.alpha = e * e + 1.5 * e * k2 + 1.0 / (gamma * gamma) + 0.5 * k4;
  const double root = std::sqrt(2.0 * e * k2 + k4);
  const double base = (2.0 * e * gamma + gamma * k2 + 2.0) / (2.0 * gamma);
  c.eta1 = base + 0.5 * root;
  c.eta2 = base - 0.5 * root;
  const double shift = k2 * (4.0 * e * e + 4.0 * e * k2 + k4) / (2.0 * root);
  c.above_radicand = shift + c.alpha;
  c.below_radicand = -shift + c.alpha;
  c.above_cutoff = c.eta1 - std::sqrt(c.above_radicand);
  c.below_cutoff = c.below_radicand >= 0.0
                       ? c.eta2 - std::sqrt(c.below_radicand)
                       : std::numeric_limits<double>::quiet_NaN();
  return c;
}

TopologyCutoffs ComputeTopologyCutoffs(double epsilon, double delta,
                                       double gamma) {
  PrivacyParams{epsilon, delta, 1.0}.Validate();
  return ComputeTopologyCutoffsFromK(epsilon, QInverse(delta), gamma);
}

std::string_view DominanceName(Dominance d) {
  return d == Dominance::kTopology ? "topology_dominant" : "epsilon_dominant";
}

SensitivityReport CompareSensitivity(const SensitivityPoint& p) {
  Validate(p);
  SensitivityReport r;
  r.d_epsilon = PartialEpsilon(p);
  r.d_lambda2 = PartialLambda2(p);
  r.verdict =
      r.d_lambda2 < r.d_epsilon ? Dominance::kTopology : Dominance::kEpsilon;

  const double k = QInverse(p.delta);
  const double eps = p.epsilon;
  const double g = p.gamma;
  const double l2 = p.lambda2;
  const double a = LambdaAux(k, eps) * std::sqrt(k * k + 2.0 * eps);
  r.quadratic = (eps * g / a - g) * l2 * l2 + (2.0 + eps * g - 2.0 * eps / a) * l2 - eps;
  r.quadratic_verdict =
      r.quadratic < 0.0 ? Dominance::kTopology : Dominance::kEpsilon;
  r.quadratic_agrees = r.quadratic_verdict == r.verdict;

  r.cutoffs = ComputeTopologyCutoffsFromK(eps, k, g);
  const bool above = l2 > r.cutoffs.above_cutoff;
  const bool below =
      !std::isnan(r.cutoffs.below_cutoff) && l2 < r.cutoffs.below_cutoff;
  r.cutoff_verdict =
      (above || below) ? Dominance::kTopology : Dominance::kEpsilon;
  r.cutoff_agrees = r.cutoff_verdict == r.verdict;
  r.in_validity_region = l2 < 1.0 / g;
  return r;
}

}  // namespace dpform
