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

#include "dpform/config.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "dpform/error.h"

namespace dpform {
namespace {

using nlohmann::json;

const json& Field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    Fail(ErrorCode::kInvalidArgument, std::string("config: missing '") + key + "'");
  }
  return *it;
}

double Number(const json& v, const std::string& what) {
  if (!v.is_number()) {
    Fail(ErrorCode::kInvalidArgument, "config: '" + what + "' must be a number");
  }
  return v.get<double>();
}

int Integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) {
    Fail(ErrorCode::kInvalidArgument,
         "config: '" + what + "' must be an integer");
  }
  return v.get<int>();
}

PrivacyParams ParsePrivacy(const json& v) {
  if (!v.is_object()) {
    Fail(ErrorCode::kInvalidArgument,
         "config: privacy entries must be {epsilon, delta, b} objects");
  }
  return {Number(Field(v, "epsilon"), "epsilon"),
          Number(Field(v, "delta"), "delta"), Number(Field(v, "b"), "b")};
}

Eigen::MatrixXd ParseMatrix(const json& v, const std::string& what) {
  if (!v.is_array() || v.empty() || !v[0].is_array() || v[0].empty()) {
    Fail(ErrorCode::kInvalidArgument,
         "config: '" + what + "' must be a non-empty array of rows");
  }
  const std::size_t rows = v.size();
  const std::size_t cols = v[0].size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!v[r].is_array() || v[r].size() != cols) {
      Fail(ErrorCode::kInvalidArgument,
           "config: '" + what + "' rows must all have the same length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(r, c) = Number(v[r][c], what);
    }
  }
  return m;
}

json MatrixToJson(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json PrivacyToJson(const PrivacyParams& p) {
  return {{"epsilon", p.epsilon}, {"delta", p.delta}, {"b", p.b}};
}

}  // namespace

WeightedGraph GraphSpec::Build() const {
  if (kind) return BuildStandardTopology(*kind, n, w);
  return WeightedGraph(n, edges);
}

RunConfig RunConfig::Parse(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kInvalidArgument, std::string("config: ") + e.what());
  }
  if (!root.is_object()) {
    Fail(ErrorCode::kInvalidArgument, "config: top level must be an object");
  }

  RunConfig cfg;
  const json& graph = Field(root, "graph");
  if (graph.contains("kind")) {
    const std::string name = Field(graph, "kind").get<std::string>();
    cfg.graph.kind = ParseTopology(name);
    if (!cfg.graph.kind) {
      Fail(ErrorCode::kInvalidArgument,
           "config: unknown graph kind '" + name +
               "' (expected complete, cycle, line or star)");
    }
    cfg.graph.n = Integer(Field(graph, "n"), "graph.n");
    cfg.graph.w = graph.contains("w") ? Number(graph["w"], "graph.w") : 1.0;
  } else {
    cfg.graph.n = Integer(Field(graph, "nodes"), "graph.nodes");
    const json& edges = Field(graph, "edges");
    if (!edges.is_array()) {
      Fail(ErrorCode::kInvalidArgument, "config: graph.edges must be an array");
    }
    for (const json& e : edges) {
      if (!e.is_array() || e.size() != 3) {
        Fail(ErrorCode::kInvalidArgument,
             "config: each edge must be [i, j, w] with 1-based i, j");
      }
      cfg.graph.edges.push_back({Integer(e[0], "edge i") - 1,
                                 Integer(e[1], "edge j") - 1,
                                 Number(e[2], "edge weight")});
    }
  }

  cfg.gamma = Number(Field(root, "gamma"), "gamma");
  if (root.contains("horizon")) {
    cfg.horizon = Integer(root["horizon"], "horizon");
  }
  if (root.contains("trials")) cfg.trials = Integer(root["trials"], "trials");
  if (root.contains("seed")) {
    const json& s = root["seed"];
    if (!s.is_number_unsigned() && !s.is_number_integer()) {
      Fail(ErrorCode::kInvalidArgument, "config: 'seed' must be an integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }

  const int n = cfg.graph.n;
  const json& privacy = Field(root, "privacy");
  if (privacy.is_array()) {
    cfg.homogeneous_privacy = false;
    for (const json& p : privacy) cfg.privacy.push_back(ParsePrivacy(p));
  } else {
    cfg.privacy.assign(std::max(n, 0), ParsePrivacy(privacy));
  }

  if (root.contains("sigma")) {
    const json& s = root["sigma"];
    if (s.is_array()) {
      std::vector<double> values;
      for (const json& v : s) values.push_back(Number(v, "sigma"));
      cfg.sigma_override = std::move(values);
    } else {
      cfg.sigma_override = std::vector<double>(std::max(n, 0), Number(s, "sigma"));
    }
  }

  cfg.formation = ParseMatrix(Field(root, "formation"), "formation");
  if (root.contains("initial")) {
    cfg.initial = ParseMatrix(root["initial"], "initial");
  }
  if (root.contains("out")) cfg.out_dir = root["out"].get<std::string>();
  return cfg;
}

RunConfig RunConfig::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

RunConfig RunConfig::Demo() {
  RunConfig cfg;
  cfg.graph.kind = Topology::kStar;
  cfg.graph.n = 5;
  cfg.graph.w = 1.0;
  cfg.gamma = 0.2;
  cfg.horizon = 100;
  cfg.trials = 1000;
  cfg.seed = 1;
  cfg.privacy.assign(5, PrivacyParams{std::log(3.0), 0.00135, 2.0});
  cfg.formation.resize(5, 2);
  cfg.formation << 0, 0,  //
      -20, 20,            //
      20, 20,             //
      20, -20,            //
      -20, -20;
  return cfg;
}

std::string RunConfig::ToJson() const {
  json root;
  if (graph.kind) {
    root["graph"] = {{"kind", std::string(TopologyName(*graph.kind))},
                     {"n", graph.n},
                     {"w", graph.w}};
  } else {
    json edges = json::array();
    for (const Edge& e : graph.edges) {
      edges.push_back({e.u + 1, e.v + 1, e.weight});
    }
    root["graph"] = {{"nodes", graph.n}, {"edges", edges}};
  }
  root["gamma"] = gamma;
  if (horizon) root["horizon"] = *horizon;
  root["trials"] = trials;
  root["seed"] = seed;
  if (homogeneous_privacy && !privacy.empty()) {
    root["privacy"] = PrivacyToJson(privacy.front());
  } else {
    json list = json::array();
    for (const PrivacyParams& p : privacy) list.push_back(PrivacyToJson(p));
    root["privacy"] = list;
  }
  if (sigma_override) root["sigma"] = *sigma_override;
  root["formation"] = MatrixToJson(formation);
  if (initial) root["initial"] = MatrixToJson(*initial);
  root["out"] = out_dir;
  return root.dump(2);
}

void RunConfig::Validate() const {
  const WeightedGraph g = graph.Build();
  const int n = g.node_count();
  Require(n >= 2, "config: need at least two agents");
  if (!IsConnected(g)) {
    Fail(ErrorCode::kDisconnectedGraph, "config: graph is not connected");
  }
  const StepSizeCheck check = CheckStepSize(g, gamma);
  if (!check.ok) Fail(ErrorCode::kStepSizeTooLarge, "config: " + check.message);

  if (static_cast<int>(privacy.size()) != n) {
    std::ostringstream msg;
    msg << "config: privacy list has " << privacy.size() << " entries for "
        << n << " agents";
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
  for (std::size_t i = 0; i < privacy.size(); ++i) {
    try {
      privacy[i].Validate();
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "config: agent " << i + 1 << ": " << e.what();
      Fail(ErrorCode::kInvalidArgument, msg.str());
    }
  }
  if (sigma_override) {
    Require(static_cast<int>(sigma_override->size()) == n,
            "config: sigma list must have one entry per agent");
    for (double s : *sigma_override) {
      Require(s >= 0.0 && std::isfinite(s),
              "config: sigma must be non-negative");
    }
  }
  Require(formation.rows() == n,
          "config: formation must have one row per agent");
  if (initial) {
    Require(initial->rows() == formation.rows() &&
                initial->cols() == formation.cols(),
            "config: initial must have the same shape as formation");
  }
  Require(trials >= 1, "config: trials must be at least 1");
  if (horizon) Require(*horizon >= 1, "config: horizon must be at least 1");
}

std::vector<double> RunConfig::Sigma() const {
  if (sigma_override) return *sigma_override;
  std::vector<double> sigma;
  sigma.reserve(privacy.size());
  for (const PrivacyParams& p : privacy) sigma.push_back(NoiseScale(p));
  return sigma;
}

int RunConfig::ResolvedHorizon() const {
  if (horizon) return *horizon;
  return DefaultHorizon(graph.Build(), gamma);
}

std::vector<std::string> RunConfig::Warnings() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < privacy.size(); ++i) {
    if (auto w = TypicalRangeWarning(privacy[i])) {
      std::ostringstream msg;
      msg << "agent " << i + 1 << ": " << *w;
      out.push_back(msg.str());
      if (homogeneous_privacy) break;
    }
  }
  if (sigma_override) {
    const std::vector<double> minimum = [&] {
      std::vector<double> s;
      for (const PrivacyParams& p : privacy) s.push_back(NoiseScale(p));
      return s;
    }();
    for (std::size_t i = 0; i < minimum.size(); ++i) {
      if ((*sigma_override)[i] < minimum[i]) {
        std::ostringstream msg;
        msg << "agent " << i + 1 << ": sigma " << (*sigma_override)[i]
            << " is below b*kappa = " << minimum[i]
            << "; the privacy guarantee does not hold";
        out.push_back(msg.str());
      }
    }
  }
  if (auto d = ConnectivityDiagnostic(graph.Build())) out.push_back(*d);
  return out;
}

SimulationSetup RunConfig::ToSetup() const {
  Validate();
  SimulationSetup setup;
  setup.graph = graph.Build();
  setup.gamma = gamma;
  setup.sigma = Sigma();
  setup.anchors = formation;
  setup.initial = initial ? *initial
                          : Eigen::MatrixXd::Zero(formation.rows(),
                                                  formation.cols());
  setup.horizon = ResolvedHorizon();
  setup.trials = trials;
  setup.seed = seed;
  return setup;
}

}  // namespace dpform
