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

#include "dpform/graph.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "dpform/error.h"
#include "dpform/random.h"

namespace dpform {
namespace {

constexpr double kStochasticTolerance = 1e-12;
constexpr double kUnitEigenvalueGap = 1e-13;

Eigen::VectorXd SymmetricEigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    Fail(ErrorCode::kNumerical, "symmetric eigendecomposition failed");
  }
  return solver.eigenvalues();  // ascending
}

}  // namespace

std::string_view TopologyName(Topology kind) {
  switch (kind) {
    case Topology::kComplete:
      return "complete";
    case Topology::kCycle:
      return "cycle";
    case Topology::kLine:
      return "line";
    case Topology::kStar:
      return "star";
  }
  return "unknown";
}

std::optional<Topology> ParseTopology(std::string_view name) {
  for (Topology kind : {Topology::kComplete, Topology::kCycle, Topology::kLine,
                        Topology::kStar}) {
    if (TopologyName(kind) == name) return kind;
  }
  return std::nullopt;
}

WeightedGraph::WeightedGraph(int node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  Require(node_count_ >= 1, "graph needs at least one node");
  adjacency_ = Eigen::MatrixXd::Zero(node_count_, node_count_);
  neighbors_.resize(node_count_);
  degrees_.assign(node_count_, 0.0);
  for (const Edge& e : edges_) {
    std::ostringstream where;
    where << "edge (" << e.u + 1 << ", " << e.v + 1 << ")";
    Require(e.u >= 0 && e.u < node_count_ && e.v >= 0 && e.v < node_count_,
            where.str() + ": endpoint out of range");
    Require(e.u != e.v, where.str() + ": self-loops are not allowed");
    Require(std::isfinite(e.weight) && e.weight > 0.0,
            where.str() + ": weight must be positive");
    Require(adjacency_(e.u, e.v) == 0.0, where.str() + ": duplicate edge");
    adjacency_(e.u, e.v) = e.weight;
    adjacency_(e.v, e.u) = e.weight;
    neighbors_[e.u].push_back(e.v);
    neighbors_[e.v].push_back(e.u);
    degrees_[e.u] += e.weight;
    degrees_[e.v] += e.weight;
  }
  for (auto& list : neighbors_) std::sort(list.begin(), list.end());
}

double WeightedGraph::MaxDegree() const {
  return *std::max_element(degrees_.begin(), degrees_.end());
}

WeightedGraph BuildStandardTopology(Topology kind, int n, double weight) {
  Require(std::isfinite(weight) && weight > 0.0, "weight must be positive");
  const int min_nodes = kind == Topology::kCycle ? 3 : 2;
  if (n < min_nodes) {
    std::ostringstream msg;
    msg << TopologyName(kind) << " topology needs n >= " << min_nodes
        << ", got " << n;
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
  std::vector<Edge> edges;
  switch (kind) {
    case Topology::kComplete:
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j, weight});
      }
      break;
    case Topology::kCycle:
      for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, weight});
      break;
    case Topology::kLine:
      for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, weight});
      break;
    case Topology::kStar:
      for (int i = 1; i < n; ++i) edges.push_back({0, i, weight});
      break;
  }
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph RandomConnectedGraph(int n, double extra_edge_probability,
                                   std::uint64_t seed) {
  Require(n >= 2, "random graph needs n >= 2");
  Require(extra_edge_probability >= 0.0 && extra_edge_probability <= 1.0,
          "edge probability must lie in [0, 1]");
  std::mt19937_64 rng(MixSeed(seed, 0x6772617068ULL, 0));
  // (0.1, 1.0]: reflect a [0, 0.9) draw.
  std::uniform_real_distribution<double> unit(0.0, 0.9);
  auto draw_weight = [&] { return 1.0 - unit(rng); };

  std::vector<Edge> edges;
  Eigen::MatrixXi present = Eigen::MatrixXi::Zero(n, n);
  auto add = [&](int a, int b) {
    edges.push_back({std::min(a, b), std::max(a, b), draw_weight()});
    present(a, b) = present(b, a) = 1;
  };

  // Pruefer decoding gives a uniformly random labelled tree.
  if (n == 2) {
    add(0, 1);
  } else {
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::vector<int> code(n - 2);
    for (int& c : code) c = pick(rng);
    std::vector<int> degree(n, 1);
    for (int c : code) ++degree[c];
    for (int c : code) {
      int leaf = 0;
      while (degree[leaf] != 1) ++leaf;
      add(leaf, c);
      --degree[leaf];
      --degree[c];
    }
    int a = -1;
    for (int i = 0; i < n; ++i) {
      if (degree[i] != 1) continue;
      if (a < 0) {
        a = i;
      } else {
        add(a, i);
        break;
      }
    }
  }

  std::bernoulli_distribution extra(extra_edge_probability);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!present(i, j) && extra(rng)) add(i, j);
    }
  }
  return WeightedGraph(n, std::move(edges));
}

Eigen::MatrixXd Laplacian(const WeightedGraph& graph) {
  const Eigen::MatrixXd& a = graph.Adjacency();
  Eigen::MatrixXd l = -a;
  for (int i = 0; i < graph.node_count(); ++i) l(i, i) = graph.Degree(i);
  return l;
}

Eigen::VectorXd LaplacianSpectrum(const WeightedGraph& graph) {
  return SymmetricEigenvalues(Laplacian(graph));
}

double AlgebraicConnectivity(const WeightedGraph& graph) {
  if (graph.node_count() < 2) return 0.0;
  const double lambda2 = LaplacianSpectrum(graph)(1);
  return lambda2 > kConnectivityTolerance ? lambda2 : 0.0;
}

bool IsConnected(const WeightedGraph& graph) {
  const int n = graph.node_count();
  std::vector<bool> seen(n, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int reached = 1;
  while (!frontier.empty()) {
    const int i = frontier.front();
    frontier.pop();
    for (int j : graph.Neighbors(i)) {
      if (seen[j]) continue;
      seen[j] = true;
      ++reached;
      frontier.push(j);
    }
  }
  return reached == n;
}

std::optional<std::string> ConnectivityDiagnostic(const WeightedGraph& graph) {
  const bool searched = IsConnected(graph);
  const double lambda2 = graph.node_count() < 2 ? 0.0 : LaplacianSpectrum(graph)(1);
  const bool spectral = lambda2 > kConnectivityTolerance;
  if (searched == spectral) return std::nullopt;
  std::ostringstream msg;
  msg << "connectivity mismatch: graph search says "
      << (searched ? "connected" : "disconnected") << " but lambda2 = "
      << lambda2 << "; using the graph-search result";
  return msg.str();
}

double TopologyAlgebraicConnectivity(Topology kind, int n, double weight) {
  switch (kind) {
    case Topology::kComplete:
      return weight * n;
    case Topology::kCycle:
      return 2.0 * weight * (1.0 - std::cos(2.0 * std::numbers::pi / n));
    case Topology::kLine:
      return 2.0 * weight * (1.0 - std::cos(std::numbers::pi / n));
    case Topology::kStar:
      return weight;
  }
  return 0.0;
}

StepSizeCheck CheckStepSize(const WeightedGraph& graph, double gamma) {
  StepSizeCheck check;
  int hub = 0;
  for (int i = 1; i < graph.node_count(); ++i) {
    if (graph.Degree(i) > graph.Degree(hub)) hub = i;
  }
  const double d_max = graph.Degree(hub);
  check.binding_node = hub;
  check.gamma_times_degree = gamma * d_max;
  check.max_step = d_max > 0.0 ? 1.0 / d_max : INFINITY;
  std::ostringstream msg;
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    check.ok = false;
    msg << "step size gamma must be positive and finite, got " << gamma;
  } else if (check.gamma_times_degree >= 1.0) {
    check.ok = false;
    msg << "step size too large: gamma * d_" << hub + 1 << " = "
        << check.gamma_times_degree
        << " >= 1 (need gamma * sum_j w_ij < 1 at every node, i.e. gamma < "
           "1/d_max = "
        << check.max_step << ")";
  }
  check.message = msg.str();
  return check;
}

PerronMatrix PerronMatrix::Build(const WeightedGraph& graph, double gamma) {
  if (!IsConnected(graph)) {
    Fail(ErrorCode::kDisconnectedGraph, "graph is not connected");
  }
  const StepSizeCheck check = CheckStepSize(graph, gamma);
  if (!check.ok) Fail(ErrorCode::kStepSizeTooLarge, check.message);

  const int n = graph.node_count();
  Eigen::MatrixXd p =
      Eigen::MatrixXd::Identity(n, n) - gamma * Laplacian(graph);

  const double asymmetry = (p - p.transpose()).cwiseAbs().maxCoeff();
  const double row_err = (p.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double col_err = (p.colwise().sum().array() - 1.0).abs().maxCoeff();
  if (asymmetry > 0.0 || row_err > kStochasticTolerance ||
      col_err > kStochasticTolerance || p.minCoeff() < 0.0) {
    Fail(ErrorCode::kNumerical,
         "constructed Perron matrix is not symmetric doubly stochastic");
  }
  return PerronMatrix(std::move(p), gamma);
}

Eigen::VectorXd PerronMatrix::Spectrum() const {
  return SymmetricEigenvalues(matrix_);
}

Eigen::VectorXd StationaryDistribution(const PerronMatrix& perron) {
  const int n = perron.size();
  Eigen::VectorXd pi = Eigen::VectorXd::Constant(n, 1.0 / n);
  const double residual =
      (pi.transpose() * perron.matrix() - pi.transpose()).cwiseAbs().maxCoeff();
  if (residual >= kStochasticTolerance) {
    Fail(ErrorCode::kNumerical, "uniform vector is not stationary for P");
  }
  return pi;
}

namespace {

double KemenyFromSpectrum(const Eigen::VectorXd& ascending) {
  // The largest eigenvalue is the unit eigenvalue; all others contribute.
  const Eigen::Index n = ascending.size();
  double k = 0.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double lambda = ascending(i);
    if (lambda >= 1.0 - kUnitEigenvalueGap) {
      Fail(ErrorCode::kNumerical,
           "chain has a repeated unit eigenvalue (disconnected graph)");
    }
    k += 1.0 / (1.0 - lambda);
  }
  return k;
}

}  // namespace

double KemenyConstant(const Eigen::MatrixXd& symmetric_transition) {
  return KemenyFromSpectrum(SymmetricEigenvalues(symmetric_transition));
}

double KemenyConstantOfSquare(const PerronMatrix& perron) {
  Eigen::VectorXd squared = perron.Spectrum().array().square();
  std::sort(squared.data(), squared.data() + squared.size());
  return KemenyFromSpectrum(squared);
}

}  // namespace dpform
