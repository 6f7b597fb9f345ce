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

#ifndef DPFORM_SENSITIVITY_H_
#define DPFORM_SENSITIVITY_H_

#include <string_view>

namespace dpform {

// A point of the homogeneous steady-state bound, treated as a function of
// epsilon and lambda2.
struct SensitivityPoint {
  double epsilon = 0.0;
  double delta = 0.0;
  double b = 0.0;
  double gamma = 0.0;
  int n = 0;
  double lambda2 = 0.0;
};

// K_delta + sqrt(K_delta^2 + 2 epsilon).
double LambdaAux(double k_delta, double epsilon);

// Closed-form partial derivatives of the homogeneous bound.
double PartialEpsilon(const SensitivityPoint& p);
double PartialLambda2(const SensitivityPoint& p);

// Lambda2 cutoffs beyond which the bound reacts more to topology than to
// epsilon, evaluated from the published expressions.
struct TopologyCutoffs {
  double alpha = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  // Topology-dominant when lambda2 > above_cutoff.
  double above_cutoff = 0.0;
  // Topology-dominant when lambda2 < below_cutoff. NaN when its radicand is
  // negative (see below_radicand).
  double below_cutoff = 0.0;
  double above_radicand = 0.0;
  double below_radicand = 0.0;
};

TopologyCutoffs ComputeTopologyCutoffs(double epsilon, double delta,
                                       double gamma);
TopologyCutoffs ComputeTopologyCutoffsFromK(double epsilon, double k_delta,
                                            double gamma);

enum class Dominance { kTopology, kEpsilon };

std::string_view DominanceName(Dominance d);

struct SensitivityReport {
  double d_epsilon = 0.0;
  double d_lambda2 = 0.0;
  // kTopology when d_lambda2 < d_epsilon (the bound falls faster per unit of
  // lambda2 than per unit of epsilon).
  Dominance verdict = Dominance::kEpsilon;
  // (eps g / A - g) l2^2 + (2 + eps g - 2 eps / A) l2 - eps with
  // A = (K + sqrt(K^2 + 2 eps)) sqrt(K^2 + 2 eps).
  double quadratic = 0.0;
  Dominance quadratic_verdict = Dominance::kEpsilon;  // kTopology iff < 0
  bool quadratic_agrees = false;
  Dominance cutoff_verdict = Dominance::kEpsilon;
  bool cutoff_agrees = false;
  // Both partials are only guaranteed negative for lambda2 < 1/gamma.
  bool in_validity_region = false;
  TopologyCutoffs cutoffs;
};

SensitivityReport CompareSensitivity(const SensitivityPoint& p);

}  // namespace dpform

#endif  // DPFORM_SENSITIVITY_H_
