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

#include "dpform/formation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <queue>
#include <sstream>
#include <thread>

#include "dpform/error.h"
#include "dpform/privacy.h"

namespace dpform {
namespace {

// Trials per work unit. Fixed so that summation order, and therefore every
// output bit, is independent of the worker count.
constexpr int kTrialsPerChunk = 16;
constexpr double kZ95 = 1.959963984540054;

}  // namespace

FormationSpec::FormationSpec(Eigen::MatrixXd anchors)
    : anchors_(std::move(anchors)) {
  Require(anchors_.rows() >= 1 && anchors_.cols() >= 1,
          "formation needs at least one agent and one dimension");
  Require(anchors_.allFinite(), "formation anchors must be finite");
}

FormationSpec FormationSpec::FromOffsets(const WeightedGraph& graph,
                                         std::span<const EdgeOffset> offsets,
                                         double tolerance) {
  const int n = graph.node_count();
  Require(!offsets.empty(), "no offsets given");
  const Eigen::Index dims = offsets.front().delta.size();
  Require(dims >= 1, "offsets must have at least one dimension");

  // directed[i][j] = offset from i to j, filled from both orientations.
  std::vector<std::vector<std::optional<Eigen::VectorXd>>> directed(
      n, std::vector<std::optional<Eigen::VectorXd>>(n));
  for (const EdgeOffset& o : offsets) {
    Require(o.i >= 0 && o.i < n && o.j >= 0 && o.j < n && o.i != o.j,
            "offset endpoints out of range");
    Require(graph.Weight(o.i, o.j) > 0.0, "offset given for a non-edge");
    Require(o.delta.size() == dims, "offsets have inconsistent dimensions");
    if (directed[o.j][o.i]) {
      if ((*directed[o.j][o.i] + o.delta).cwiseAbs().maxCoeff() > tolerance) {
        std::ostringstream msg;
        msg << "offsets on edge (" << o.i + 1 << ", " << o.j + 1
            << ") are not antisymmetric";
        Fail(ErrorCode::kInvalidArgument, msg.str());
      }
    }
    directed[o.i][o.j] = o.delta;
    if (!directed[o.j][o.i]) directed[o.j][o.i] = -o.delta;
  }
  for (const Edge& e : graph.edges()) {
    if (!directed[e.u][e.v]) {
      std::ostringstream msg;
      msg << "missing offset for edge (" << e.u + 1 << ", " << e.v + 1 << ")";
      Fail(ErrorCode::kInvalidArgument, msg.str());
    }
  }

  Eigen::MatrixXd anchors = Eigen::MatrixXd::Zero(n, dims);
  std::vector<bool> placed(n, false);
  std::queue<int> frontier;
  placed[0] = true;
  frontier.push(0);
  while (!frontier.empty()) {
    const int i = frontier.front();
    frontier.pop();
    for (int j : graph.Neighbors(i)) {
      const Eigen::VectorXd expected =
          anchors.row(i).transpose() + *directed[i][j];
      if (!placed[j]) {
        anchors.row(j) = expected.transpose();
        placed[j] = true;
        frontier.push(j);
      } else if ((anchors.row(j).transpose() - expected).cwiseAbs().maxCoeff() >
                 tolerance) {
        std::ostringstream msg;
        msg << "offsets are not realizable: inconsistent around edge ("
            << i + 1 << ", " << j + 1 << ")";
        Fail(ErrorCode::kInvalidArgument, msg.str());
      }
    }
  }
  Require(std::all_of(placed.begin(), placed.end(), [](bool b) { return b; }),
          "offsets cannot place a disconnected graph");
  return FormationSpec(std::move(anchors));
}

Eigen::VectorXd FormationSpec::Offset(int i, int j) const {
  return (anchors_.row(j) - anchors_.row(i)).transpose();
}

Eigen::VectorXd NoiselessStep(const Eigen::VectorXd& xbar,
                              const PerronMatrix& perron) {
  Require(xbar.size() == perron.size(), "state length does not match P");
  return perron.matrix() * xbar;
}

Eigen::VectorXd NodeLevelPrivateStep(const WeightedGraph& graph, double gamma,
                                     const Eigen::VectorXd& xbar,
                                     const Eigen::VectorXd& noise) {
  const int n = graph.node_count();
  Require(xbar.size() == n && noise.size() == n,
          "state and noise length must equal the node count");
  Eigen::VectorXd next(n);
  for (int i = 0; i < n; ++i) {
    double pull = 0.0;
    for (int j : graph.Neighbors(i)) {
      pull += graph.Weight(i, j) * ((xbar(j) + noise(j)) - xbar(i));
    }
    next(i) = xbar(i) + gamma * pull;
  }
  return next;
}

Eigen::VectorXd NetworkLevelPrivateStep(const PerronMatrix& perron,
                                        const WeightedGraph& graph,
                                        const Eigen::VectorXd& xbar,
                                        const Eigen::VectorXd& noise) {
  Require(xbar.size() == perron.size() && noise.size() == perron.size(),
          "state and noise length must equal the node count");
  return perron.matrix() * xbar +
         perron.gamma() * (graph.Adjacency() * noise);
}

Eigen::VectorXd PrivateStep(const WeightedGraph& graph, double gamma,
                            const Eigen::VectorXd& xbar,
                            std::span<const double> sigma, NoiseStream& rng) {
  const int n = graph.node_count();
  Require(static_cast<int>(sigma.size()) == n, "need one sigma per agent");
  Eigen::VectorXd noise(n);
  for (int j = 0; j < n; ++j) noise(j) = rng.Gaussian(sigma[j]);
  return NodeLevelPrivateStep(graph, gamma, xbar, noise);
}

Eigen::VectorXd AggregatedNoiseVariance(const WeightedGraph& graph,
                                        double gamma,
                                        std::span<const double> sigma) {
  const int n = graph.node_count();
  Require(static_cast<int>(sigma.size()) == n, "need one sigma per agent");
  Eigen::VectorXd s2 = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j : graph.Neighbors(i)) {
      const double w = graph.Weight(i, j);
      s2(i) += w * w * sigma[j] * sigma[j];
    }
  }
  return gamma * gamma * s2;
}

Eigen::VectorXd Beta(const Eigen::VectorXd& x, const Eigen::VectorXd& q) {
  Require(x.size() == q.size(), "x and q must have equal length");
  const Eigen::Index n = x.size();
  return Eigen::VectorXd::Constant(n, x.mean()) + q -
         Eigen::VectorXd::Constant(n, q.mean());
}

Eigen::VectorXd FormationError(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& q) {
  return x - Beta(x, q);
}

double AggregateError(const Eigen::VectorXd& error) {
  return error.squaredNorm() / static_cast<double>(error.size());
}

ErrorSeries ComputeErrorSeries(const Eigen::MatrixXd& states,
                               const Eigen::VectorXd& q) {
  ErrorSeries series;
  series.error.resize(states.rows(), states.cols());
  series.aggregate.resize(states.rows());
  for (Eigen::Index k = 0; k < states.rows(); ++k) {
    const Eigen::VectorXd e = FormationError(states.row(k).transpose(), q);
    series.error.row(k) = e.transpose();
    series.aggregate[k] = AggregateError(e);
  }
  return series;
}

int DefaultHorizon(const WeightedGraph& graph, double gamma) {
  const double lambda2 = AlgebraicConnectivity(graph);
  if (!(lambda2 > 0.0) || !(gamma > 0.0)) {
    Fail(ErrorCode::kDisconnectedGraph,
         "default horizon needs a connected graph and gamma > 0");
  }
  return static_cast<int>(std::ceil(50.0 / (gamma * lambda2)));
}

Eigen::MatrixXd RunScalarTrial(const WeightedGraph& graph, double gamma,
                               std::span<const double> sigma,
                               const Eigen::VectorXd& q,
                               const Eigen::VectorXd& x0, int horizon,
                               NoiseStream& rng) {
  const int n = graph.node_count();
  Require(static_cast<int>(sigma.size()) == n, "need one sigma per agent");
  Require(q.size() == n && x0.size() == n,
          "formation and initial state must have one entry per agent");
  Require(horizon >= 0, "horizon must be non-negative");

  Eigen::MatrixXd states(horizon + 1, n);
  Eigen::VectorXd x = x0;
  states.row(0) = x.transpose();
  Eigen::VectorXd shared(n);
  for (int k = 1; k <= horizon; ++k) {
    for (int j = 0; j < n; ++j) {
      shared(j) = PrivatizedShare(x(j), rng.Gaussian(sigma[j]), q(j));
    }
    Eigen::VectorXd next(n);
    for (int i = 0; i < n; ++i) {
      const double own = x(i) - q(i);
      double pull = 0.0;
      for (int j : graph.Neighbors(i)) {
        pull += graph.Weight(i, j) * (shared(j) - own);
      }
      next(i) = own + gamma * pull + q(i);
    }
    x = next;
    states.row(k) = x.transpose();
  }
  return states;
}

std::vector<Eigen::MatrixXd> RunTrial(const SimulationSetup& setup,
                                      int trial) {
  const int dims = static_cast<int>(setup.anchors.cols());
  std::vector<Eigen::MatrixXd> out;
  out.reserve(dims);
  for (int l = 0; l < dims; ++l) {
    NoiseStream rng(setup.seed, static_cast<std::uint64_t>(trial),
                    static_cast<std::uint64_t>(l));
    out.push_back(RunScalarTrial(setup.graph, setup.gamma, setup.sigma,
                                 setup.anchors.col(l), setup.initial.col(l),
                                 setup.horizon, rng));
  }
  return out;
}

namespace {

struct TailWindow {
  int start = 0;
  int length = 0;
};

TailWindow MakeTail(int steps, double tail_fraction) {
  const int length = std::clamp(
      static_cast<int>(std::ceil(tail_fraction * steps)), 1, steps);
  return {steps - length, length};
}

struct ChunkSums {
  std::vector<std::vector<double>> sum;    // [dim][step]
  std::vector<std::vector<double>> sumsq;  // [dim][step]
};

}  // namespace

EssEstimate SummarizeTail(std::span<const double> mean_series,
                          std::span<const double> trial_tail_means,
                          double tail_fraction) {
  Require(!mean_series.empty(), "empty series");
  Require(tail_fraction > 0.0 && tail_fraction <= 1.0,
          "tail fraction must lie in (0, 1]");
  const int steps = static_cast<int>(mean_series.size());
  const TailWindow tail = MakeTail(steps, tail_fraction);

  EssEstimate est;
  est.tail_start = tail.start;
  double sum = 0.0;
  est.tail_max = mean_series[tail.start];
  for (int k = tail.start; k < steps; ++k) {
    sum += mean_series[k];
    est.tail_max = std::max(est.tail_max, mean_series[k]);
  }
  est.value = sum / tail.length;

  // Least-squares slope of the tail against the step index. A slope counts as
  // drift only when it also clears twice its standard error, so Monte Carlo
  // noise in a stationary tail does not trip the check.
  double slope_se = 0.0;
  if (tail.length >= 2) {
    const double k_mean = tail.start + 0.5 * (tail.length - 1);
    double sxy = 0.0;
    double sxx = 0.0;
    for (int k = tail.start; k < steps; ++k) {
      const double dk = k - k_mean;
      sxy += dk * (mean_series[k] - est.value);
      sxx += dk * dk;
    }
    const double slope = sxy / sxx;
    est.slope_per_100 = 100.0 * slope;
    if (tail.length >= 3) {
      double rss = 0.0;
      for (int k = tail.start; k < steps; ++k) {
        const double r = mean_series[k] - est.value - slope * (k - k_mean);
        rss += r * r;
      }
      slope_se = 100.0 * std::sqrt(rss / (tail.length - 2) / sxx);
    }
  }
  est.mixing_ok = est.value < 1e-12 ||
                  std::abs(est.slope_per_100) < 0.01 * est.value ||
                  std::abs(est.slope_per_100) <= 2.0 * slope_se;

  const std::size_t trials = trial_tail_means.size();
  if (trials >= 2) {
    double m = 0.0;
    for (double v : trial_tail_means) m += v;
    m /= static_cast<double>(trials);
    double ss = 0.0;
    for (double v : trial_tail_means) ss += (v - m) * (v - m);
    const double sd = std::sqrt(ss / static_cast<double>(trials - 1));
    est.half_width = kZ95 * sd / std::sqrt(static_cast<double>(trials));
  }
  return est;
}

SimulationResult Simulate(const SimulationSetup& setup, int jobs,
                          double tail_fraction) {
  const int n = setup.graph.node_count();
  const int dims = static_cast<int>(setup.anchors.cols());
  Require(setup.trials >= 1, "need at least one trial");
  Require(setup.horizon >= 1, "horizon must be at least 1");
  Require(setup.anchors.rows() == n && setup.initial.rows() == n &&
              setup.initial.cols() == dims,
          "formation and initial state must be N x n");
  Require(static_cast<int>(setup.sigma.size()) == n,
          "need one sigma per agent");
  Require(tail_fraction > 0.0 && tail_fraction <= 1.0,
          "tail fraction must lie in (0, 1]");

  const int steps = setup.horizon + 1;
  const TailWindow tail = MakeTail(steps, tail_fraction);
  const int chunks = (setup.trials + kTrialsPerChunk - 1) / kTrialsPerChunk;

  std::vector<ChunkSums> partial(chunks);
  // [dim][trial]
  std::vector<std::vector<double>> trial_tail(
      dims, std::vector<double>(setup.trials, 0.0));
  std::vector<Eigen::MatrixXd> first_trial;

  std::atomic<int> next_chunk{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (int c = next_chunk++; c < chunks; c = next_chunk++) {
        ChunkSums& sums = partial[c];
        sums.sum.assign(dims, std::vector<double>(steps, 0.0));
        sums.sumsq.assign(dims, std::vector<double>(steps, 0.0));
        const int begin = c * kTrialsPerChunk;
        const int end = std::min(setup.trials, begin + kTrialsPerChunk);
        for (int t = begin; t < end; ++t) {
          std::vector<Eigen::MatrixXd> states = RunTrial(setup, t);
          for (int l = 0; l < dims; ++l) {
            const ErrorSeries errors =
                ComputeErrorSeries(states[l], setup.anchors.col(l));
            double tail_sum = 0.0;
            for (int k = 0; k < steps; ++k) {
              const double e = errors.aggregate[k];
              sums.sum[l][k] += e;
              sums.sumsq[l][k] += e * e;
              if (k >= tail.start) tail_sum += e;
            }
            trial_tail[l][t] = tail_sum / tail.length;
          }
          if (t == 0) first_trial = std::move(states);
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  const int workers = std::clamp(jobs, 1, chunks);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  SimulationResult result;
  result.horizon = setup.horizon;
  result.trials = setup.trials;
  result.first_trial = std::move(first_trial);
  result.e_agg_mean.assign(dims, std::vector<double>(steps, 0.0));
  result.e_agg_ci.assign(dims, std::vector<double>(steps, 0.0));
  const double trials = setup.trials;
  for (int l = 0; l < dims; ++l) {
    std::vector<double> sum(steps, 0.0);
    std::vector<double> sumsq(steps, 0.0);
    for (const ChunkSums& chunk : partial) {
      for (int k = 0; k < steps; ++k) {
        sum[k] += chunk.sum[l][k];
        sumsq[k] += chunk.sumsq[l][k];
      }
    }
    for (int k = 0; k < steps; ++k) {
      const double mean = sum[k] / trials;
      result.e_agg_mean[l][k] = mean;
      if (setup.trials >= 2) {
        const double var =
            std::max(0.0, (sumsq[k] - trials * mean * mean) / (trials - 1.0));
        result.e_agg_ci[l][k] = kZ95 * std::sqrt(var / trials);
      }
    }
    result.ess.push_back(
        SummarizeTail(result.e_agg_mean[l], trial_tail[l], tail_fraction));
  }
  return result;
}

}  // namespace dpform
