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

#ifndef DPFORM_FORMATION_H_
#define DPFORM_FORMATION_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dpform/graph.h"
#include "dpform/random.h"

namespace dpform {

// Desired relative offset between the endpoints of an edge: p_j - p_i.
struct EdgeOffset {
  int i = 0;
  int j = 0;
  Eigen::VectorXd delta;
};

// Formation anchor points, one row per agent, one column per dimension. Any
// translate of the anchors describes the same formation.
class FormationSpec {
 public:
  explicit FormationSpec(Eigen::MatrixXd anchors);

  // Recovers anchors (agent 0 at the origin) from per-edge offsets. Rejects
  // offsets that are not antisymmetric or not realizable around cycles.
  static FormationSpec FromOffsets(const WeightedGraph& graph,
                                   std::span<const EdgeOffset> offsets,
                                   double tolerance = 1e-9);

  int agents() const { return static_cast<int>(anchors_.rows()); }
  int dimensions() const { return static_cast<int>(anchors_.cols()); }
  const Eigen::MatrixXd& anchors() const { return anchors_; }

  // q for one dimension.
  Eigen::VectorXd Column(int dimension) const { return anchors_.col(dimension); }
  Eigen::VectorXd Offset(int i, int j) const;

 private:
  Eigen::MatrixXd anchors_;
};

// One noiseless consensus step in offset coordinates: P xbar.
Eigen::VectorXd NoiselessStep(const Eigen::VectorXd& xbar,
                              const PerronMatrix& perron);

// Node-level private update, agent by agent:
//   xbar_i + gamma * sum_j w_ij ((xbar_j + v_j) - xbar_i).
// Each agent uses its own state unperturbed; `noise` holds v_j for every agent.
Eigen::VectorXd NodeLevelPrivateStep(const WeightedGraph& graph, double gamma,
                                     const Eigen::VectorXd& xbar,
                                     const Eigen::VectorXd& noise);

// Network-level form of the same update: P xbar + gamma A v.
Eigen::VectorXd NetworkLevelPrivateStep(const PerronMatrix& perron,
                                        const WeightedGraph& graph,
                                        const Eigen::VectorXd& xbar,
                                        const Eigen::VectorXd& noise);

// Draws v_j ~ N(0, sigma_j^2) in agent order and applies the node-level step.
Eigen::VectorXd PrivateStep(const WeightedGraph& graph, double gamma,
                            const Eigen::VectorXd& xbar,
                            std::span<const double> sigma, NoiseStream& rng);

// Variance of the aggregated noise entering agent i:
// s_i^2 = gamma^2 sum_j w_ij^2 sigma_j^2.
Eigen::VectorXd AggregatedNoiseVariance(const WeightedGraph& graph,
                                        double gamma,
                                        std::span<const double> sigma);

// mean(x) 1 + q - mean(q) 1: where noiseless consensus would take x.
Eigen::VectorXd Beta(const Eigen::VectorXd& x, const Eigen::VectorXd& q);

// x - Beta(x, q).
Eigen::VectorXd FormationError(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& q);

// Agent-averaged squared error, |e|^2 / N.
double AggregateError(const Eigen::VectorXd& error);

// Per-step errors of a state trajectory (rows are time steps).
struct ErrorSeries {
  Eigen::MatrixXd error;           // (steps) x N
  std::vector<double> aggregate;   // per step
};
ErrorSeries ComputeErrorSeries(const Eigen::MatrixXd& states,
                               const Eigen::VectorXd& q);

// Fully resolved inputs of a Monte Carlo run.
struct SimulationSetup {
  WeightedGraph graph{1, {}};
  double gamma = 0.0;
  std::vector<double> sigma;  // per agent, may be zero
  Eigen::MatrixXd anchors;    // N x n
  Eigen::MatrixXd initial;    // N x n
  int horizon = 0;
  int trials = 0;
  std::uint64_t seed = 0;
};

// ceil(50 / (gamma * lambda2)).
int DefaultHorizon(const WeightedGraph& graph, double gamma);

// One scalar trajectory x(0..horizon) of the private protocol; rows are time
// steps. The simulated state is the actual position x; shared values are
// (x_j + v_j) - q_j.
Eigen::MatrixXd RunScalarTrial(const WeightedGraph& graph, double gamma,
                               std::span<const double> sigma,
                               const Eigen::VectorXd& q,
                               const Eigen::VectorXd& x0, int horizon,
                               NoiseStream& rng);

// Every dimension of trial `trial`, each driven by its own stream
// NoiseStream(seed, trial, dimension).
std::vector<Eigen::MatrixXd> RunTrial(const SimulationSetup& setup, int trial);

// Steady-state error estimate for one dimension.
struct EssEstimate {
  double value = 0.0;       // mean of the trial-averaged e_agg over the tail
  double half_width = 0.0;  // 95% half-width from per-trial tail means
  double tail_max = 0.0;    // max of the trial-averaged series over the tail
  double slope_per_100 = 0.0;
  bool mixing_ok = true;    // no significant tail slope above 1% of the mean
  int tail_start = 0;
};

struct SimulationResult {
  int horizon = 0;
  int trials = 0;
  std::vector<std::vector<double>> e_agg_mean;  // [dimension][step]
  std::vector<std::vector<double>> e_agg_ci;    // [dimension][step]
  std::vector<EssEstimate> ess;                 // [dimension]
  std::vector<Eigen::MatrixXd> first_trial;     // [dimension], steps x N
};

// Runs setup.trials independent trials on `jobs` worker threads. The result is
// bit-identical for any value of `jobs`.
SimulationResult Simulate(const SimulationSetup& setup, int jobs,
                          double tail_fraction = 0.25);

// Tail summary of a trial-averaged series. `trial_tail_means` holds, for each
// trial, that trial's mean e_agg over the same tail window.
EssEstimate SummarizeTail(std::span<const double> mean_series,
                          std::span<const double> trial_tail_means,
                          double tail_fraction);

}  // namespace dpform

#endif  // DPFORM_FORMATION_H_
