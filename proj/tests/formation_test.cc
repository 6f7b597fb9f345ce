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


#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dpform/error.h"
#include "dpform/formation.h"
#include "dpform/graph.h"

namespace dpform {
namespace {

Eigen::MatrixXd SquarePlusCentre() {
  Eigen::MatrixXd p(5, 2);
  p << 0, 0, -20, 20, 20, 20, 20, -20, -20, -20;
  return p;
}

SimulationSetup StarSetup(std::vector<double> sigma, int horizon, int trials) {
  SimulationSetup s;
  s.graph = BuildStandardTopology(Topology::kStar, 5, 1.0);
  s.gamma = 0.2;
  s.sigma = std::move(sigma);
  s.anchors = SquarePlusCentre();
  s.initial = Eigen::MatrixXd::Zero(5, 2);
  s.horizon = horizon;
  s.trials = trials;
  s.seed = 7;
  return s;
}

TEST(DynamicsTest, NodeAndNetworkFormsAgree) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 10;
    const WeightedGraph g = RandomConnectedGraph(n, 0.4, rng());
    const double gamma = 0.8 / g.MaxDegree();
    const PerronMatrix p = PerronMatrix::Build(g, gamma);
    Eigen::VectorXd x(n), v(n);
    for (int i = 0; i < n; ++i) {
      x(i) = 10 * normal(rng);
      v(i) = 3 * normal(rng);
    }
    const Eigen::VectorXd node = NodeLevelPrivateStep(g, gamma, x, v);
    const Eigen::VectorXd net = NetworkLevelPrivateStep(p, g, x, v);
    EXPECT_LT((node - net).cwiseAbs().maxCoeff(), 1e-12);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
    EXPECT_LT((NodeLevelPrivateStep(g, gamma, x, zero) - NoiselessStep(x, p))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
  }
}

// The simulated trajectory, run on actual states, matches the shifted-state
// network form driven by the same draws.
TEST(DynamicsTest, TrialMatchesNetworkFormOnSharedNoise) {
  const WeightedGraph g = RandomConnectedGraph(6, 0.4, 21);
  const double gamma = 0.7 / g.MaxDegree();
  const PerronMatrix p = PerronMatrix::Build(g, gamma);
  const std::vector<double> sigma = {0.5, 1.0, 1.5, 2.0, 0.7, 0.2};
  Eigen::VectorXd q(6), x0(6);
  q << 1, -2, 3, 0.5, -1, 4;
  x0 << 5, 4, 3, 2, 1, 0;
  NoiseStream sim_rng(99, 2, 1);
  const Eigen::MatrixXd states =
      RunScalarTrial(g, gamma, sigma, q, x0, 40, sim_rng);

  NoiseStream ref_rng(99, 2, 1);
  Eigen::VectorXd xbar = x0 - q;
  for (int k = 1; k <= 40; ++k) {
    Eigen::VectorXd v(6);
    for (int j = 0; j < 6; ++j) v(j) = ref_rng.Gaussian(sigma[j]);
    xbar = NetworkLevelPrivateStep(p, g, xbar, v);
    EXPECT_LT((states.row(k).transpose() - (xbar + q)).cwiseAbs().maxCoeff(),
              1e-12 * (1.0 + xbar.cwiseAbs().maxCoeff()))
        << "step " << k;
  }
}

TEST(DynamicsTest, MultiDimensionalRunIsPerDimensionScalarRuns) {
  const SimulationSetup s = StarSetup(std::vector<double>(5, 1.3), 30, 1);
  for (int trial : {0, 5}) {
    const std::vector<Eigen::MatrixXd> states = RunTrial(s, trial);
    ASSERT_EQ(states.size(), 2u);
    for (int l = 0; l < 2; ++l) {
      NoiseStream rng(s.seed, trial, l);
      const Eigen::MatrixXd scalar = RunScalarTrial(
          s.graph, s.gamma, s.sigma, s.anchors.col(l), s.initial.col(l),
          s.horizon, rng);
      EXPECT_EQ(states[l], scalar);
    }
  }
}

TEST(DynamicsTest, NoiselessRunReachesFormation) {
  const SimulationSetup s = StarSetup(std::vector<double>(5, 0.0), 100, 1);
  const std::vector<Eigen::MatrixXd> states = RunTrial(s, 0);
  for (int l = 0; l < 2; ++l) {
    const Eigen::VectorXd x = states[l].row(100).transpose();
    EXPECT_LT(FormationError(x, s.anchors.col(l)).cwiseAbs().maxCoeff(), 1e-6);
    // Starting from the origin the centroid stays at the origin, so agents
    // land on the anchors shifted by minus the anchor mean.
    const Eigen::VectorXd target =
        s.anchors.col(l).array() - s.anchors.col(l).mean();
    EXPECT_LT((x - target).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(ErrorTest, BetaAndTranslationInvariance) {
  Eigen::VectorXd x(3), q(3);
  x << 1, 2, 6;
  q << 0, 1, 2;
  const Eigen::VectorXd beta = Beta(x, q);
  EXPECT_NEAR(beta(0), 2.0, 1e-15);
  EXPECT_NEAR(beta(2), 4.0, 1e-15);
  const Eigen::VectorXd e = FormationError(x, q);
  EXPECT_NEAR(e.sum(), 0.0, 1e-14);
  const Eigen::VectorXd shifted = q.array() + 17.0;
  EXPECT_LT((FormationError(x, shifted) - e).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_NEAR(AggregateError(e), e.squaredNorm() / 3.0, 1e-15);
}

TEST(ErrorTest, AggregatedNoiseVarianceIsProtocolCovarianceDiagonal) {
  const WeightedGraph g = RandomConnectedGraph(7, 0.3, 4);
  const double gamma = 0.5 / g.MaxDegree();
  const std::vector<double> sigma = {1, 2, 3, 0.5, 0.25, 1.5, 0.8};
  Eigen::VectorXd s2(7);
  for (int i = 0; i < 7; ++i) s2(i) = sigma[i] * sigma[i];
  const Eigen::MatrixXd cov =
      gamma * gamma * g.Adjacency() * s2.asDiagonal() * g.Adjacency();
  EXPECT_LT((AggregatedNoiseVariance(g, gamma, sigma) - cov.diagonal())
                .cwiseAbs()
                .maxCoeff(),
            1e-14);
}

TEST(FormationSpecTest, RecoversAnchorsFromOffsets) {
  const WeightedGraph g = BuildStandardTopology(Topology::kCycle, 4, 1.0);
  Eigen::MatrixXd anchors(4, 2);
  anchors << 3, 3, 5, 3, 5, 6, 3, 6;
  const FormationSpec truth(anchors);
  std::vector<EdgeOffset> offsets;
  for (const Edge& e : g.edges()) {
    offsets.push_back({e.u, e.v, truth.Offset(e.u, e.v)});
  }
  const FormationSpec rebuilt = FormationSpec::FromOffsets(g, offsets);
  for (const Edge& e : g.edges()) {
    EXPECT_LT((rebuilt.Offset(e.u, e.v) - truth.Offset(e.u, e.v))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
  }
  EXPECT_EQ(rebuilt.anchors().row(0).norm(), 0.0);
}

TEST(FormationSpecTest, RejectsBadOffsets) {
  const WeightedGraph g = BuildStandardTopology(Topology::kCycle, 3, 1.0);
  Eigen::VectorXd d(1);
  d << 1.0;
  // 0->1, 1->2, 2->0 each +1 cannot close the loop.
  std::vector<EdgeOffset> loop = {{0, 1, d}, {1, 2, d}, {2, 0, d}};
  EXPECT_THROW(FormationSpec::FromOffsets(g, loop), Error);
  std::vector<EdgeOffset> asym = {{0, 1, d}, {1, 0, d}, {1, 2, d}, {2, 0, -2 * d}};
  EXPECT_THROW(FormationSpec::FromOffsets(g, asym), Error);
  std::vector<EdgeOffset> missing = {{0, 1, d}, {1, 2, d}};
  EXPECT_THROW(FormationSpec::FromOffsets(g, missing), Error);
}

TEST(SimulateTest, OutputIndependentOfWorkerCount) {
  const SimulationSetup s = StarSetup(std::vector<double>(5, 2.0), 60, 45);
  const SimulationResult one = Simulate(s, 1);
  for (int jobs : {2, 3, 8}) {
    const SimulationResult many = Simulate(s, jobs);
    EXPECT_EQ(one.e_agg_mean, many.e_agg_mean) << jobs;
    EXPECT_EQ(one.e_agg_ci, many.e_agg_ci) << jobs;
    for (int l = 0; l < 2; ++l) {
      EXPECT_EQ(one.first_trial[l], many.first_trial[l]);
      EXPECT_EQ(one.ess[l].value, many.ess[l].value);
    }
  }
}

TEST(SimulateTest, MeanSeriesAveragesTrials) {
  const SimulationSetup s = StarSetup(std::vector<double>(5, 1.0), 20, 5);
  const SimulationResult r = Simulate(s, 2);
  ASSERT_EQ(r.e_agg_mean.size(), 2u);
  ASSERT_EQ(r.e_agg_mean[0].size(), 21u);
  for (int l = 0; l < 2; ++l) {
    std::vector<double> manual(21, 0.0);
    for (int t = 0; t < 5; ++t) {
      const auto series =
          ComputeErrorSeries(RunTrial(s, t)[l], s.anchors.col(l));
      for (int k = 0; k <= 20; ++k) manual[k] += series.aggregate[k] / 5.0;
    }
    for (int k = 0; k <= 20; ++k) {
      EXPECT_NEAR(r.e_agg_mean[l][k], manual[k], 1e-12 * (1 + manual[k]));
    }
  }
}

TEST(SimulateTest, PropagatesWorkerErrors) {
  SimulationSetup s = StarSetup(std::vector<double>(4, 1.0), 10, 40);
  EXPECT_THROW(Simulate(s, 3), Error);
}

TEST(SummarizeTailTest, FlatAndTrendingSeries) {
  std::vector<double> flat(100, 2.0);
  std::vector<double> trial_means = {1.9, 2.1, 2.0, 2.0};
  const EssEstimate f = SummarizeTail(flat, trial_means, 0.25);
  EXPECT_DOUBLE_EQ(f.value, 2.0);
  EXPECT_DOUBLE_EQ(f.tail_max, 2.0);
  EXPECT_EQ(f.tail_start, 75);
  EXPECT_TRUE(f.mixing_ok);
  EXPECT_NEAR(f.slope_per_100, 0.0, 1e-12);
  // sd of {1.9, 2.1, 2, 2} is sqrt(0.02 / 3).
  EXPECT_NEAR(f.half_width, 1.959963984540054 * std::sqrt(0.02 / 3) / 2,
              1e-12);

  std::vector<double> ramp(100);
  for (int k = 0; k < 100; ++k) ramp[k] = 1.0 + 0.01 * k;
  const EssEstimate r = SummarizeTail(ramp, trial_means, 0.25);
  EXPECT_NEAR(r.slope_per_100, 1.0, 1e-9);
  EXPECT_FALSE(r.mixing_ok);
}

TEST(DefaultHorizonTest, ScalesWithMixingTime) {
  const WeightedGraph star = BuildStandardTopology(Topology::kStar, 5, 1.0);
  EXPECT_EQ(DefaultHorizon(star, 0.2), 250);
}

}  // namespace
}  // namespace dpform
