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

#ifndef DPFORM_BOUNDS_H_
#define DPFORM_BOUNDS_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dpform/graph.h"
#include "dpform/privacy.h"

namespace dpform {

// Diagonal noise model: diag(s_i^2) with s_i^2 = gamma^2 sum_j w_ij^2
// sigma_j^2. This is the per-agent variance with cross-agent correlations
// dropped.
Eigen::MatrixXd DiagonalNoiseCovariance(const WeightedGraph& graph,
                                        double gamma,
                                        std::span<const double> sigma);

// Exact covariance of the aggregated protocol noise gamma A v:
// gamma^2 A diag(sigma^2) A. Agents sharing a neighbor receive correlated
// noise, so this is not diagonal in general.
Eigen::MatrixXd ProtocolNoiseCovariance(const WeightedGraph& graph,
                                        double gamma,
                                        std::span<const double> sigma);

// Stationary agent-averaged squared deviation from consensus, trace(S)/N,
// where S solves S = (QPQ) S (QPQ)^T + Q C Q with Q = I - 11^T/N. Solved by
// fixed-point iteration until the trace changes by < 1e-13 relative (at most
// 1e6 iterations). `noise_covariance` must be symmetric N x N.
double ExactSteadyStateError(const PerronMatrix& perron,
                             const Eigen::MatrixXd& noise_covariance);

struct Sandwich {
  double lower = 0.0;
  double upper = 0.0;
};

// (min_i s_i^2 pi_i) K(P^2) and (max_i s_i^2 pi_i) K(P^2) for a diagonal
// noise covariance.
Sandwich KemenySandwich(const PerronMatrix& perron,
                        const Eigen::MatrixXd& diagonal_covariance);

// (N-1)/2 and (N-1) / (1 - (1 - gamma lambda2)^2): bounds on K(P^2).
Sandwich KemenyBounds(int n, double gamma, double lambda2);

// gamma (N-1)^2 max_sigma_sq / (N lambda2 (2 - gamma lambda2)).
double SteadyStateBoundFromSigma(int n, double gamma, double lambda2,
                                 double max_sigma_sq);

// Heterogeneous bound with sigma_i = b_i kappa(delta_i, epsilon_i). Validates
// connectivity and the step size first.
double HeterogeneousBound(const WeightedGraph& graph, double gamma,
                          std::span<const PrivacyParams> params);

// Homogeneous specialization, with lambda2 as a free parameter. Requires
// 0 < lambda2 < 2 / gamma.
double HomogeneousBound(double epsilon, double delta, double b, double gamma,
                        int n, double lambda2);

// Same, with K_delta supplied directly.
double HomogeneousBoundFromK(double epsilon, double k_delta, double b,
                             double gamma, int n, double lambda2);

// Everything the analysis says about one configuration.
struct BoundReport {
  bool connected = false;
  bool step_size_ok = false;
  bool homogeneous = false;
  double lambda2 = 0.0;
  double kemeny_p2 = 0.0;
  Sandwich kemeny_bounds;
  Sandwich sandwich;           // diagonal noise model
  double exact_ess = 0.0;      // diagonal noise model
  double exact_ess_protocol = 0.0;  // true protocol noise covariance
  double theorem_bound = 0.0;  // heterogeneous bound from max sigma_i^2
  double homogeneous_bound = 0.0;  // only when homogeneous, else NaN
};

// `sigma` are the noise scales actually used; `params` supplies the privacy
// parameters (one per agent). Throws on disconnected graphs or a bad step.
BoundReport ComputeBoundReport(const WeightedGraph& graph, double gamma,
                               std::span<const double> sigma,
                               std::span<const PrivacyParams> params);

// Smallest epsilon for which the homogeneous bound is <= target_error.
// Bisection on log(epsilon), starting on [1e-8, 1e8] and widening as needed.
double EpsilonThreshold(double lambda2, int n, double gamma, double delta,
                        double b, double target_error);

enum class ClosedFormKind { kImpossibility, kComplete, kCycle, kLine, kStar };

struct ClosedFormInputs {
  int n = 0;
  double gamma = 0.0;
  double delta = 0.0;
  double b = 0.0;
  double w = 1.0;
  double target_error = 0.0;
  double lambda2 = 0.0;  // used only by kImpossibility
};

// The published per-topology threshold expressions, evaluated literally as
// printed (including their apparent typos). Diagnostics only; the numeric
// threshold is authoritative.
double ClosedFormThreshold(ClosedFormKind kind, const ClosedFormInputs& in);

struct ThresholdRow {
  Topology topology = Topology::kComplete;
  int n = 0;
  double lambda2 = 0.0;
  double numeric = 0.0;
  double closed_form = 0.0;
  double relative_deviation = 0.0;  // (closed_form - numeric) / numeric
};

struct ThresholdTableParams {
  double delta = 0.01;
  double b = 5.0;
  double w = 1.0;
  double gamma = 1e-4;
  double target_error = 100.0;
};

// Thresholds for {complete, cycle, line, star} x N in `sizes`, row-major by
// topology.
std::vector<ThresholdRow> ThresholdTable(
    const ThresholdTableParams& params = {},
    std::span<const int> sizes = {});

// Homogeneous bound on an (epsilon, lambda2) grid; values[i][j] pairs
// epsilons[i] with lambda2s[j]. Rejects lambda2 outside (0, 2/gamma).
struct BoundSurface {
  std::vector<double> epsilons;
  std::vector<double> lambda2s;
  std::vector<std::vector<double>> values;
};
BoundSurface ComputeBoundSurface(std::span<const double> epsilons,
                                 std::span<const double> lambda2s, int n,
                                 double delta, double b, double gamma);

// n evenly spaced points from lo to hi inclusive.
std::vector<double> Linspace(double lo, double hi, int n);

}  // namespace dpform

#endif  // DPFORM_BOUNDS_H_
