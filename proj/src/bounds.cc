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

#include "dpform/bounds.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dpform/error.h"

namespace dpform {
namespace {

constexpr double kLyapunovTolerance = 1e-13;
constexpr int kLyapunovMaxIterations = 1000000;
constexpr double kThresholdTolerance = 1e-12;

void CheckSigma(const WeightedGraph& graph, std::span<const double> sigma) {
  Require(static_cast<int>(sigma.size()) == graph.node_count(),
          "need one sigma per agent");
  for (double s : sigma) {
    Require(s >= 0.0 && std::isfinite(s), "sigma must be non-negative");
  }
}

void CheckLambda2(double lambda2, double gamma) {
  if (!(lambda2 > 0.0) || !(gamma > 0.0) || !(gamma * lambda2 < 2.0)) {
    std::ostringstream msg;
    msg << "need 0 < lambda2 < 2/gamma (lambda2 = " << lambda2
        << ", gamma = " << gamma << ")";
    Fail(ErrorCode::kDomain, msg.str());
  }
}

}  // namespace

Eigen::MatrixXd DiagonalNoiseCovariance(const WeightedGraph& graph,
                                        double gamma,
                                        std::span<const double> sigma) {
  CheckSigma(graph, sigma);
  const int n = graph.node_count();
  Eigen::VectorXd s2 = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j : graph.Neighbors(i)) {
      const double w = graph.Weight(i, j);
      s2(i) += w * w * sigma[j] * sigma[j];
    }
  }
  return (gamma * gamma * s2).asDiagonal();
}

Eigen::MatrixXd ProtocolNoiseCovariance(const WeightedGraph& graph,
                                        double gamma,
                                        std::span<const double> sigma) {
  CheckSigma(graph, sigma);
  Eigen::VectorXd var(graph.node_count());
  for (int j = 0; j < graph.node_count(); ++j) var(j) = sigma[j] * sigma[j];
  const Eigen::MatrixXd& a = graph.Adjacency();
  return gamma * gamma * (a * var.asDiagonal() * a);
}

double ExactSteadyStateError(const PerronMatrix& perron,
                             const Eigen::MatrixXd& noise_covariance) {
  const int n = perron.size();
  Require(noise_covariance.rows() == n && noise_covariance.cols() == n,
          "noise covariance must be N x N");
  Require((noise_covariance - noise_covariance.transpose()).cwiseAbs().maxCoeff()
              <= 1e-12 * std::max(1.0, noise_covariance.cwiseAbs().maxCoeff()),
          "noise covariance must be symmetric");

  const Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n) -
                            Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  const Eigen::MatrixXd a = q * perron.matrix() * q;
  const Eigen::MatrixXd source = q * noise_covariance * q.transpose();

  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  double trace = 0.0;
  for (int iter = 0; iter < kLyapunovMaxIterations; ++iter) {
    s = a * s * a.transpose() + source;
    const double next = s.trace();
    if (!std::isfinite(next)) {
      Fail(ErrorCode::kNumerical, "steady-state covariance diverged");
    }
    if (std::abs(next - trace) <= kLyapunovTolerance * std::abs(next)) {
      return next / n;
    }
    trace = next;
  }
  if (trace == 0.0) return 0.0;
  Fail(ErrorCode::kNumerical,
       "steady-state covariance did not converge in 1e6 iterations");
}

Sandwich KemenySandwich(const PerronMatrix& perron,
                        const Eigen::MatrixXd& diagonal_covariance) {
  const int n = perron.size();
  Require(diagonal_covariance.rows() == n && diagonal_covariance.cols() == n,
          "noise covariance must be N x N");
  const Eigen::MatrixXd off_diagonal =
      diagonal_covariance -
      Eigen::MatrixXd(diagonal_covariance.diagonal().asDiagonal());
  Require(off_diagonal.cwiseAbs().maxCoeff() == 0.0,
          "the Kemeny sandwich needs uncorrelated (diagonal) noise");
  const Eigen::VectorXd pi = StationaryDistribution(perron);
  const Eigen::VectorXd weighted =
      diagonal_covariance.diagonal().cwiseProduct(pi);
  const double kemeny = KemenyConstantOfSquare(perron);
  return {weighted.minCoeff() * kemeny, weighted.maxCoeff() * kemeny};
}

Sandwich KemenyBounds(int n, double gamma, double lambda2) {
  const double contraction = 1.0 - gamma * lambda2;
  return {(n - 1) / 2.0, (n - 1) / (1.0 - contraction * contraction)};
}

double SteadyStateBoundFromSigma(int n, double gamma, double lambda2,
                                 double max_sigma_sq) {
  CheckLambda2(lambda2, gamma);
  Require(n >= 2, "need at least two agents");
  const double nm1 = n - 1.0;
  return gamma * nm1 * nm1 * max_sigma_sq /
         (n * lambda2 * (2.0 - gamma * lambda2));
}

double HeterogeneousBound(const WeightedGraph& graph, double gamma,
                          std::span<const PrivacyParams> params) {
  Require(static_cast<int>(params.size()) == graph.node_count(),
          "need privacy parameters for every agent");
  if (!IsConnected(graph)) {
    Fail(ErrorCode::kDisconnectedGraph, "graph is not connected");
  }
  const StepSizeCheck check = CheckStepSize(graph, gamma);
  if (!check.ok) Fail(ErrorCode::kStepSizeTooLarge, check.message);
  double max_sq = 0.0;
  for (const PrivacyParams& p : params) {
    const double sigma = NoiseScale(p);
    max_sq = std::max(max_sq, sigma * sigma);
  }
  return SteadyStateBoundFromSigma(graph.node_count(), gamma,
                                   AlgebraicConnectivity(graph), max_sq);
}

double HomogeneousBoundFromK(double epsilon, double k_delta, double b,
                             double gamma, int n, double lambda2) {
  Require(epsilon > 0.0 && b > 0.0, "epsilon and b must be positive");
  const double sigma = b * KappaFromK(k_delta, epsilon);
  return SteadyStateBoundFromSigma(n, gamma, lambda2, sigma * sigma);
}

double HomogeneousBound(double epsilon, double delta, double b, double gamma,
                        int n, double lambda2) {
  PrivacyParams{epsilon, delta, b}.Validate();
  return HomogeneousBoundFromK(epsilon, QInverse(delta), b, gamma, n, lambda2);
}

BoundReport ComputeBoundReport(const WeightedGraph& graph, double gamma,
                               std::span<const double> sigma,
                               std::span<const PrivacyParams> params) {
  CheckSigma(graph, sigma);
  const int n = graph.node_count();
  Require(static_cast<int>(params.size()) == n,
          "need privacy parameters for every agent");

  BoundReport report;
  report.connected = IsConnected(graph);
  const StepSizeCheck check = CheckStepSize(graph, gamma);
  report.step_size_ok = check.ok;
  if (!report.connected) {
    Fail(ErrorCode::kDisconnectedGraph, "graph is not connected");
  }
  if (!check.ok) Fail(ErrorCode::kStepSizeTooLarge, check.message);

  const PerronMatrix perron = PerronMatrix::Build(graph, gamma);
  report.lambda2 = AlgebraicConnectivity(graph);
  report.kemeny_p2 = KemenyConstantOfSquare(perron);
  report.kemeny_bounds = KemenyBounds(n, gamma, report.lambda2);

  const Eigen::MatrixXd diag = DiagonalNoiseCovariance(graph, gamma, sigma);
  report.sandwich = KemenySandwich(perron, diag);
  report.exact_ess = ExactSteadyStateError(perron, diag);
  report.exact_ess_protocol =
      ExactSteadyStateError(perron, ProtocolNoiseCovariance(graph, gamma, sigma));

  double max_sq = 0.0;
  for (double s : sigma) max_sq = std::max(max_sq, s * s);
  report.theorem_bound =
      SteadyStateBoundFromSigma(n, gamma, report.lambda2, max_sq);

  report.homogeneous = std::all_of(
      params.begin(), params.end(), [&](const PrivacyParams& p) {
        return p.epsilon == params[0].epsilon && p.delta == params[0].delta &&
               p.b == params[0].b;
      });
  report.homogeneous_bound =
      report.homogeneous
          ? HomogeneousBound(params[0].epsilon, params[0].delta, params[0].b,
                             gamma, n, report.lambda2)
          : std::numeric_limits<double>::quiet_NaN();
  return report;
}

double EpsilonThreshold(double lambda2, int n, double gamma, double delta,
                        double b, double target_error) {
  Require(target_error > 0.0, "target error must be positive");
  CheckLambda2(lambda2, gamma);
  Require(n >= 2, "need at least two agents");
  PrivacyParams{1.0, delta, b}.Validate();
  const double k_delta = QInverse(delta);

  // The bound is strictly decreasing in epsilon: f(lo) > 0 >= f(hi).
  auto excess = [&](double log_eps) {
    return std::log(HomogeneousBoundFromK(std::exp(log_eps), k_delta, b, gamma,
                                          n, lambda2)) -
           std::log(target_error);
  };
  double lo = std::log(1e-8);
  double hi = std::log(1e8);
  const double limit = std::log(std::numeric_limits<double>::max()) - 1.0;
  while (excess(lo) <= 0.0) {
    if (lo < -limit) {
      Fail(ErrorCode::kNumerical, "no epsilon threshold: target error too large");
    }
    hi = lo;
    lo -= std::log(1e4);
  }
  while (excess(hi) > 0.0) {
    if (hi > limit) {
      Fail(ErrorCode::kNumerical, "no epsilon threshold: target error too small");
    }
    lo = hi;
    hi += std::log(1e4);
  }
  while (hi - lo > kThresholdTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(hi);
}

double ClosedFormThreshold(ClosedFormKind kind, const ClosedFormInputs& in) {
  Require(in.n >= 2 && in.gamma > 0.0 && in.b > 0.0 && in.w > 0.0 &&
              in.target_error > 0.0,
          "closed-form threshold needs n >= 2 and positive gamma, b, w, e_R");
  const double k = QInverse(in.delta);
  const double n = in.n;
  const double nm1 = n - 1.0;
  const double g = in.gamma;
  const double b = in.b;
  const double w = in.w;
  const double e_r = in.target_error;

  switch (kind) {
    case ClosedFormKind::kImpossibility: {
      const double l2 = in.lambda2;
      CheckLambda2(l2, g);
      const double z1 = g * nm1 * nm1 / (2.0 - g * l2);
      return 2.0 * b * z1 / (n * e_r * l2) *
             (b + e_r * k * l2 * n / std::sqrt(e_r * z1 * l2 * n));
    }
    case ClosedFormKind::kComplete: {
      const double gap = 2.0 - g * w * n;
      return 2.0 * b * g * nm1 * nm1 / (n * n * e_r * w * gap) *
             (b + e_r * k * w * n * std::sqrt(gap) /
                      (nm1 * std::sqrt(e_r * g * w)));
    }
    case ClosedFormKind::kCycle:
    case ClosedFormKind::kLine: {
      const double angle =
          (kind == ClosedFormKind::kCycle ? 2.0 : 1.0) * std::numbers::pi / n;
      const double c = 1.0 - std::cos(angle);
      const double z = nm1 * nm1 * g / (1.0 - g * w * c);
      return b * z / (n * e_r * 2.0 * w * c) +
             k / std::sqrt(z * e_r * w * c * n);
    }
    case ClosedFormKind::kStar: {
      const double gap = 2.0 - g * w;
      return 2.0 * b * g * nm1 * nm1 / (n * e_r * w * gap) *
             (b + e_r * k * w * n * std::sqrt(gap) /
                      (nm1 * std::sqrt(e_r * g * w * n)));
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

ClosedFormKind ToClosedForm(Topology t) {
  switch (t) {
    case Topology::kComplete:
      return ClosedFormKind::kComplete;
    case Topology::kCycle:
      return ClosedFormKind::kCycle;
    case Topology::kLine:
      return ClosedFormKind::kLine;
    case Topology::kStar:
      return ClosedFormKind::kStar;
  }
  return ClosedFormKind::kImpossibility;
}

constexpr std::array<int, 4> kDefaultSizes = {10, 100, 1000, 10000};

}  // namespace

std::vector<ThresholdRow> ThresholdTable(const ThresholdTableParams& params,
                                         std::span<const int> sizes) {
  if (sizes.empty()) sizes = kDefaultSizes;
  std::vector<ThresholdRow> rows;
  for (Topology t : {Topology::kComplete, Topology::kCycle, Topology::kLine,
                     Topology::kStar}) {
    for (int n : sizes) {
      ThresholdRow row;
      row.topology = t;
      row.n = n;
      row.lambda2 = TopologyAlgebraicConnectivity(t, n, params.w);
      row.numeric = EpsilonThreshold(row.lambda2, n, params.gamma,
                                     params.delta, params.b,
                                     params.target_error);
      row.closed_form = ClosedFormThreshold(
          ToClosedForm(t), {n, params.gamma, params.delta, params.b, params.w,
                            params.target_error, row.lambda2});
      row.relative_deviation = (row.closed_form - row.numeric) / row.numeric;
      rows.push_back(row);
    }
  }
  return rows;
}

BoundSurface ComputeBoundSurface(std::span<const double> epsilons,
                                 std::span<const double> lambda2s, int n,
                                 double delta, double b, double gamma) {
  for (double l2 : lambda2s) CheckLambda2(l2, gamma);
  PrivacyParams{1.0, delta, b}.Validate();
  const double k_delta = QInverse(delta);
  BoundSurface surface;
  surface.epsilons.assign(epsilons.begin(), epsilons.end());
  surface.lambda2s.assign(lambda2s.begin(), lambda2s.end());
  for (double eps : epsilons) {
    std::vector<double> row;
    row.reserve(lambda2s.size());
    for (double l2 : lambda2s) {
      row.push_back(HomogeneousBoundFromK(eps, k_delta, b, gamma, n, l2));
    }
    surface.values.push_back(std::move(row));
  }
  return surface;
}

std::vector<double> Linspace(double lo, double hi, int n) {
  Require(n >= 1, "need at least one grid point");
  if (n == 1) return {lo};
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  out.back() = hi;
  return out;
}

}  // namespace dpform
