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

#ifndef DPFORM_CONFIG_H_
#define DPFORM_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dpform/formation.h"
#include "dpform/graph.h"
#include "dpform/privacy.h"

namespace dpform {

// How the graph was specified, kept so a config round-trips verbatim.
struct GraphSpec {
  std::optional<Topology> kind;  // named shorthand when set
  int n = 0;
  double w = 1.0;
  std::vector<Edge> edges;  // explicit list (0-based) when kind is unset

  WeightedGraph Build() const;
};

// A complete, reproducible run description. JSON layout:
//
//   {
//     "graph": {"kind": "star", "n": 5, "w": 1}
//              | {"nodes": 5, "edges": [[1, 2, 1.0], ...]},   // 1-indexed
//     "gamma": 0.2,
//     "horizon": 100,            // optional, default 50 / (gamma lambda2)
//     "trials": 1000,
//     "seed": 1,
//     "privacy": {"epsilon": e, "delta": d, "b": b} | [ {...}, ... ],
//     "sigma": 5.7 | [ ... ],    // optional override of b * kappa
//     "formation": [[0, 0], [-20, 20], ...],   // row per agent
//     "initial": [[...], ...],   // optional, default zeros
//     "out": "results"           // optional
//   }
struct RunConfig {
  GraphSpec graph;
  double gamma = 0.0;
  std::optional<int> horizon;
  int trials = 1000;
  std::uint64_t seed = 1;
  std::vector<PrivacyParams> privacy;  // one per agent after parsing
  bool homogeneous_privacy = true;
  std::optional<std::vector<double>> sigma_override;
  Eigen::MatrixXd formation;  // N x n
  std::optional<Eigen::MatrixXd> initial;
  std::string out_dir = "dpform_out";

  static RunConfig Parse(std::string_view json_text);
  static RunConfig Load(const std::string& path);

  // Five-agent star demo: w = 1, gamma = 1/5, epsilon = ln 3,
  // delta = 0.00135, b = 2, a square of side 40 around a centre agent,
  // 100 steps x 1000 trials.
  static RunConfig Demo();

  std::string ToJson() const;

  // Throws kInvalidArgument / kStepSizeTooLarge / kDisconnectedGraph naming
  // the violated constraint.
  void Validate() const;

  // Noise scale per agent: the override when given, else b_i kappa_i.
  std::vector<double> Sigma() const;

  int ResolvedHorizon() const;

  // Typical-range and other non-fatal notes.
  std::vector<std::string> Warnings() const;

  SimulationSetup ToSetup() const;
};

}  // namespace dpform

#endif  // DPFORM_CONFIG_H_
