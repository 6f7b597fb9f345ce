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

#ifndef DPFORM_GRAPH_H_
#define DPFORM_GRAPH_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace dpform {

// Eigenvalues of the Laplacian above this are treated as nonzero.
inline constexpr double kConnectivityTolerance = 1e-9;

enum class Topology { kComplete, kCycle, kLine, kStar };

std::string_view TopologyName(Topology kind);
std::optional<Topology> ParseTopology(std::string_view name);

// Nodes are 0-based inside the library; file formats use 1-based indices.
struct Edge {
  int u = 0;
  int v = 0;
  double weight = 0.0;
};

// Undirected simple graph with strictly positive edge weights. Immutable once
// constructed; the constructor rejects self-loops, duplicate edges,
// out-of-range endpoints and non-positive weights.
class WeightedGraph {
 public:
  WeightedGraph(int node_count, std::vector<Edge> edges);

  int node_count() const { return node_count_; }
  const std::vector<Edge>& edges() const { return edges_; }

  // Weight of edge {i, j}, or 0 when absent.
  double Weight(int i, int j) const { return adjacency_(i, j); }
  const std::vector<int>& Neighbors(int i) const { return neighbors_[i]; }
  double Degree(int i) const { return degrees_[i]; }
  double MaxDegree() const;

  const Eigen::MatrixXd& Adjacency() const { return adjacency_; }

 private:
  int node_count_;
  std::vector<Edge> edges_;
  Eigen::MatrixXd adjacency_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<double> degrees_;
};

// Uniform-weight named topology. For the star, node 0 is the hub.
WeightedGraph BuildStandardTopology(Topology kind, int n, double weight);

// Random connected graph: a uniformly random labelled spanning tree plus each
// remaining pair independently with probability `extra_edge_probability`.
// Weights are uniform on (0.1, 1.0].
WeightedGraph RandomConnectedGraph(int n, double extra_edge_probability,
                                   std::uint64_t seed);

// L = D - A.
Eigen::MatrixXd Laplacian(const WeightedGraph& graph);

// Ascending eigenvalues of the Laplacian.
Eigen::VectorXd LaplacianSpectrum(const WeightedGraph& graph);

// Second smallest Laplacian eigenvalue. Clamped to 0 when within
// kConnectivityTolerance of zero.
double AlgebraicConnectivity(const WeightedGraph& graph);

// Breadth-first search. Authoritative when it disagrees with the spectrum.
bool IsConnected(const WeightedGraph& graph);

// Describes a disagreement between IsConnected and AlgebraicConnectivity > 0,
// or nullopt when they agree.
std::optional<std::string> ConnectivityDiagnostic(const WeightedGraph& graph);

// Closed-form algebraic connectivity of the uniform-weight named topologies.
double TopologyAlgebraicConnectivity(Topology kind, int n, double weight);

// Result of checking gamma against gamma * d_i < 1 for every node.
struct StepSizeCheck {
  bool ok = true;
  int binding_node = -1;  // node with the largest weighted degree
  double gamma_times_degree = 0.0;
  double max_step = 0.0;  // 1 / d_max
  std::string message;
};

StepSizeCheck CheckStepSize(const WeightedGraph& graph, double gamma);

// P = I - gamma L. Build() enforces connectivity and the step-size bound and
// verifies the result is symmetric and doubly stochastic.
class PerronMatrix {
 public:
  static PerronMatrix Build(const WeightedGraph& graph, double gamma);

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  double gamma() const { return gamma_; }
  int size() const { return static_cast<int>(matrix_.rows()); }

  // Ascending eigenvalues of P.
  Eigen::VectorXd Spectrum() const;

 private:
  PerronMatrix(Eigen::MatrixXd matrix, double gamma)
      : matrix_(std::move(matrix)), gamma_(gamma) {}

  Eigen::MatrixXd matrix_;
  double gamma_;
};

// Uniform vector 1/N. Verifies the left fixed-point residual is below 1e-12.
Eigen::VectorXd StationaryDistribution(const PerronMatrix& perron);

// Kemeny constant of a symmetric stochastic matrix, sum over the non-unit
// eigenvalues of 1 / (1 - lambda). Throws kNumerical when a second eigenvalue
// reaches 1 - 1e-13.
double KemenyConstant(const Eigen::MatrixXd& symmetric_transition);

// K(P^2) computed from the spectrum of P.
double KemenyConstantOfSquare(const PerronMatrix& perron);

}  // namespace dpform

#endif  // DPFORM_GRAPH_H_
