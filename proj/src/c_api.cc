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

#include "dpform/dpform.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "dpform/bounds.h"
#include "dpform/config.h"
#include "dpform/error.h"
#include "dpform/formation.h"
#include "dpform/graph.h"
#include "dpform/privacy.h"
#include "dpform/report.h"
#include "dpform/sensitivity.h"

struct dpf_graph {
  dpform::WeightedGraph graph;
};

struct dpf_config {
  dpform::RunConfig config;
  std::vector<std::string> warnings;  // refreshed on query
};

struct dpf_simulation {
  dpform::SimulationResult result;
  Eigen::MatrixXd anchors;
  std::string config_json;
};

namespace {

using dpform::ErrorCode;

thread_local std::string g_last_error;

dpf_status StatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDomain:
      return DPF_ERR_INVALID_ARGUMENT;
    case ErrorCode::kStepSizeTooLarge:
    case ErrorCode::kDisconnectedGraph:
      return DPF_ERR_VALIDATION;
    case ErrorCode::kNumerical:
      return DPF_ERR_NUMERICAL;
    case ErrorCode::kIo:
      return DPF_ERR_IO;
    case ErrorCode::kInternal:
      return DPF_ERR_INTERNAL;
  }
  return DPF_ERR_INTERNAL;
}

dpf_status SetError(dpf_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
dpf_status Guard(F&& body) {
  try {
    body();
    return DPF_OK;
  } catch (const dpform::Error& e) {
    return SetError(StatusFor(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return SetError(DPF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return SetError(DPF_ERR_INTERNAL, e.what());
  } catch (...) {
    return SetError(DPF_ERR_INTERNAL, "unknown error");
  }
}

void NotNull(const void* p, const char* name) {
  dpform::Require(p != nullptr, std::string(name) + " must not be NULL");
}

void Capacity(std::size_t have, std::size_t need, const char* name) {
  if (have < need) {
    dpform::Fail(ErrorCode::kInvalidArgument,
                 std::string(name) + ": buffer holds " + std::to_string(have) +
                     " values, need " + std::to_string(need));
  }
}

void CopyMatrix(const Eigen::MatrixXd& m, double* out, std::size_t len) {
  NotNull(out, "out");
  const std::size_t need = static_cast<std::size_t>(m.size());
  Capacity(len, need, "matrix");
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out[r * m.cols() + c] = m(r, c);
    }
  }
}

dpform::Topology ToTopology(dpf_topology kind) {
  switch (kind) {
    case DPF_TOPOLOGY_COMPLETE:
      return dpform::Topology::kComplete;
    case DPF_TOPOLOGY_CYCLE:
      return dpform::Topology::kCycle;
    case DPF_TOPOLOGY_LINE:
      return dpform::Topology::kLine;
    case DPF_TOPOLOGY_STAR:
      return dpform::Topology::kStar;
  }
  dpform::Fail(ErrorCode::kInvalidArgument, "unknown topology");
}

dpf_topology FromTopology(dpform::Topology kind) {
  switch (kind) {
    case dpform::Topology::kComplete:
      return DPF_TOPOLOGY_COMPLETE;
    case dpform::Topology::kCycle:
      return DPF_TOPOLOGY_CYCLE;
    case dpform::Topology::kLine:
      return DPF_TOPOLOGY_LINE;
    case dpform::Topology::kStar:
      return DPF_TOPOLOGY_STAR;
  }
  return DPF_TOPOLOGY_COMPLETE;
}

std::vector<dpform::PrivacyParams> ToParams(const dpf_privacy* params,
                                            std::size_t count) {
  NotNull(params, "params");
  std::vector<dpform::PrivacyParams> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back({params[i].epsilon, params[i].delta, params[i].b});
  }
  return out;
}

void FillReport(const dpform::BoundReport& r, dpf_bound_report* out) {
  out->connected = r.connected;
  out->step_size_ok = r.step_size_ok;
  out->homogeneous = r.homogeneous;
  out->lambda2 = r.lambda2;
  out->kemeny_p2 = r.kemeny_p2;
  out->kemeny_lower = r.kemeny_bounds.lower;
  out->kemeny_upper = r.kemeny_bounds.upper;
  out->sandwich_lower = r.sandwich.lower;
  out->sandwich_upper = r.sandwich.upper;
  out->exact_ess = r.exact_ess;
  out->exact_ess_protocol = r.exact_ess_protocol;
  out->theorem_bound = r.theorem_bound;
  out->homogeneous_bound = r.homogeneous_bound;
}

void FillCutoffs(const dpform::TopologyCutoffs& c, dpf_topology_cutoffs* out) {
  out->alpha = c.alpha;
  out->eta1 = c.eta1;
  out->eta2 = c.eta2;
  out->above_cutoff = c.above_cutoff;
  out->below_cutoff = c.below_cutoff;
  out->above_radicand = c.above_radicand;
  out->below_radicand = c.below_radicand;
}

dpform::SensitivityPoint ToPoint(const dpf_sensitivity_point* p) {
  NotNull(p, "point");
  return {p->epsilon, p->delta, p->b, p->gamma, p->n, p->lambda2};
}

void CheckDimension(const dpf_simulation* sim, int dimension) {
  NotNull(sim, "sim");
  dpform::Require(dimension >= 0 &&
                      dimension < static_cast<int>(sim->result.ess.size()),
                  "dimension out of range");
}

}  // namespace

extern "C" {

const char* dpf_last_error(void) { return g_last_error.c_str(); }

const char* dpf_version(void) { return "1.0.0"; }

const char* dpf_status_name(dpf_status status) {
  switch (status) {
    case DPF_OK:
      return "ok";
    case DPF_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case DPF_ERR_VALIDATION:
      return "validation failed";
    case DPF_ERR_NUMERICAL:
      return "numerical failure";
    case DPF_ERR_IO:
      return "i/o error";
    case DPF_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

// ---- graphs ---------------------------------------------------------------

dpf_status dpf_graph_from_edges(int node_count, const int* u, const int* v,
                                const double* weight, size_t edge_count,
                                dpf_graph** out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = nullptr;
    if (edge_count > 0) {
      NotNull(u, "u");
      NotNull(v, "v");
      NotNull(weight, "weight");
    }
    std::vector<dpform::Edge> edges;
    edges.reserve(edge_count);
    for (std::size_t k = 0; k < edge_count; ++k) {
      edges.push_back({u[k], v[k], weight[k]});
    }
    *out = new dpf_graph{dpform::WeightedGraph(node_count, std::move(edges))};
  });
}

dpf_status dpf_graph_standard(dpf_topology kind, int n, double weight,
                              dpf_graph** out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = nullptr;
    *out = new dpf_graph{
        dpform::BuildStandardTopology(ToTopology(kind), n, weight)};
  });
}

dpf_status dpf_graph_random_connected(int n, double extra_edge_probability,
                                      uint64_t seed, dpf_graph** out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = nullptr;
    *out = new dpf_graph{
        dpform::RandomConnectedGraph(n, extra_edge_probability, seed)};
  });
}

void dpf_graph_destroy(dpf_graph* graph) { delete graph; }

int dpf_graph_node_count(const dpf_graph* graph) {
  return graph ? graph->graph.node_count() : 0;
}

dpf_status dpf_graph_max_degree(const dpf_graph* graph, double* out) {
  return Guard([&] {
    NotNull(graph, "graph");
    NotNull(out, "out");
    *out = graph->graph.MaxDegree();
  });
}

dpf_status dpf_graph_laplacian(const dpf_graph* graph, double* out,
                               size_t len) {
  return Guard([&] {
    NotNull(graph, "graph");
    CopyMatrix(dpform::Laplacian(graph->graph), out, len);
  });
}

dpf_status dpf_graph_algebraic_connectivity(const dpf_graph* graph,
                                            double* out) {
  return Guard([&] {
    NotNull(graph, "graph");
    NotNull(out, "out");
    *out = dpform::AlgebraicConnectivity(graph->graph);
  });
}

dpf_status dpf_graph_is_connected(const dpf_graph* graph, int* out) {
  return Guard([&] {
    NotNull(graph, "graph");
    NotNull(out, "out");
    *out = dpform::IsConnected(graph->graph) ? 1 : 0;
  });
}

dpf_status dpf_topology_algebraic_connectivity(dpf_topology kind, int n,
                                               double weight, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = dpform::TopologyAlgebraicConnectivity(ToTopology(kind), n, weight);
  });
}

dpf_status dpf_perron_matrix(const dpf_graph* graph, double gamma, double* out,
                             size_t len) {
  return Guard([&] {
    NotNull(graph, "graph");
    const auto perron = dpform::PerronMatrix::Build(graph->graph, gamma);
    CopyMatrix(perron.matrix(), out, len);
  });
}

dpf_status dpf_stationary_distribution(const dpf_graph* graph, double gamma,
                                       double* out, size_t len) {
  return Guard([&] {
    NotNull(graph, "graph");
    const auto perron = dpform::PerronMatrix::Build(graph->graph, gamma);
    const Eigen::VectorXd pi = dpform::StationaryDistribution(perron);
    CopyMatrix(pi, out, len);
  });
}

dpf_status dpf_kemeny_constant(const dpf_graph* graph, double gamma,
                               int squared, double* out) {
  return Guard([&] {
    NotNull(graph, "graph");
    NotNull(out, "out");
    const auto perron = dpform::PerronMatrix::Build(graph->graph, gamma);
    *out = squared ? dpform::KemenyConstantOfSquare(perron)
                   : dpform::KemenyConstant(perron.matrix());
  });
}

// ---- privacy --------------------------------------------------------------

double dpf_q_function(double y) { return dpform::QFunction(y); }

dpf_status dpf_q_inverse(double delta, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = dpform::QInverse(delta);
  });
}

dpf_status dpf_kappa(double delta, double epsilon, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = dpform::Kappa(delta, epsilon);
  });
}

dpf_status dpf_noise_scale(const dpf_privacy* params, double* out) {
  return Guard([&] {
    NotNull(params, "params");
    NotNull(out, "out");
    *out = dpform::NoiseScale({params->epsilon, params->delta, params->b});
  });
}

dpf_status dpf_sample_noise(double sigma, size_t count, uint64_t seed,
                            double* out) {
  return Guard([&] {
    if (count > 0) NotNull(out, "out");
    const std::vector<double> w = dpform::SampleNoise(sigma, count, seed);
    std::copy(w.begin(), w.end(), out);
  });
}

dpf_status dpf_is_adjacent(const double* v, const double* w, size_t len,
                           double b, int* out) {
  return Guard([&] {
    NotNull(out, "out");
    if (len > 0) {
      NotNull(v, "v");
      NotNull(w, "w");
    }
    *out = dpform::IsAdjacent(std::span<const double>(v, len),
                              std::span<const double>(w, len), b)
               ? 1
               : 0;
  });
}

// ---- bounds ---------------------------------------------------------------

dpf_status dpf_homogeneous_bound(double epsilon, double delta, double b,
                                 double gamma, int n, double lambda2,
                                 double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = dpform::HomogeneousBound(epsilon, delta, b, gamma, n, lambda2);
  });
}

dpf_status dpf_heterogeneous_bound(const dpf_graph* graph, double gamma,
                                   const dpf_privacy* params, size_t count,
                                   double* out) {
  return Guard([&] {
    NotNull(graph, "graph");
    NotNull(out, "out");
    const auto p = ToParams(params, count);
    *out = dpform::HeterogeneousBound(graph->graph, gamma, p);
  });
}

dpf_status dpf_bound_report_compute(const dpf_graph* graph, double gamma,
                                    const double* sigma,
                                    const dpf_privacy* params, size_t count,
                                    dpf_bound_report* out) {
  return Guard([&] {
    NotNull(graph, "graph");
    NotNull(out, "out");
    const auto p = ToParams(params, count);
    dpform::Require(count == static_cast<std::size_t>(graph->graph.node_count()),
                    "params must have one entry per node");
    std::vector<double> s;
    if (sigma) {
      s.assign(sigma, sigma + count);
    } else {
      for (const auto& q : p) s.push_back(dpform::NoiseScale(q));
    }
    FillReport(dpform::ComputeBoundReport(graph->graph, gamma, s, p), out);
  });
}

dpf_status dpf_epsilon_threshold(double lambda2, int n, double gamma,
                                 double delta, double b, double target_error,
                                 double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = dpform::EpsilonThreshold(lambda2, n, gamma, delta, b, target_error);
  });
}

dpf_status dpf_closed_form_threshold(dpf_closed_form kind, int n, double gamma,
                                     double delta, double b, double w,
                                     double target_error, double lambda2,
                                     double* out) {
  return Guard([&] {
    NotNull(out, "out");
    dpform::ClosedFormKind k;
    switch (kind) {
      case DPF_CLOSED_FORM_IMPOSSIBILITY:
        k = dpform::ClosedFormKind::kImpossibility;
        break;
      case DPF_CLOSED_FORM_COMPLETE:
        k = dpform::ClosedFormKind::kComplete;
        break;
      case DPF_CLOSED_FORM_CYCLE:
        k = dpform::ClosedFormKind::kCycle;
        break;
      case DPF_CLOSED_FORM_LINE:
        k = dpform::ClosedFormKind::kLine;
        break;
      case DPF_CLOSED_FORM_STAR:
        k = dpform::ClosedFormKind::kStar;
        break;
      default:
        dpform::Fail(ErrorCode::kInvalidArgument, "unknown closed form");
    }
    *out = dpform::ClosedFormThreshold(
        k, {n, gamma, delta, b, w, target_error, lambda2});
  });
}

dpf_status dpf_threshold_table(double delta, double b, double w, double gamma,
                               double target_error, dpf_threshold_row* rows,
                               size_t capacity, size_t* count) {
  return Guard([&] {
    NotNull(count, "count");
    const auto table =
        dpform::ThresholdTable({delta, b, w, gamma, target_error});
    *count = table.size();
    if (capacity > 0) NotNull(rows, "rows");
    Capacity(capacity, table.size(), "rows");
    for (std::size_t i = 0; i < table.size(); ++i) {
      rows[i] = {FromTopology(table[i].topology), table[i].n,
                 table[i].lambda2,  table[i].numeric,
                 table[i].closed_form, table[i].relative_deviation};
    }
  });
}

dpf_status dpf_bound_surface(const double* epsilons, size_t epsilon_count,
                             const double* lambda2s, size_t lambda2_count,
                             int n, double delta, double b, double gamma,
                             double* out) {
  return Guard([&] {
    NotNull(epsilons, "epsilons");
    NotNull(lambda2s, "lambda2s");
    NotNull(out, "out");
    const auto s = dpform::ComputeBoundSurface(
        std::span<const double>(epsilons, epsilon_count),
        std::span<const double>(lambda2s, lambda2_count), n, delta, b, gamma);
    for (std::size_t i = 0; i < epsilon_count; ++i) {
      for (std::size_t j = 0; j < lambda2_count; ++j) {
        out[i * lambda2_count + j] = s.values[i][j];
      }
    }
  });
}

// ---- sensitivity ----------------------------------------------------------

dpf_status dpf_partial_epsilon(const dpf_sensitivity_point* point,
                               double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = dpform::PartialEpsilon(ToPoint(point));
  });
}

dpf_status dpf_partial_lambda2(const dpf_sensitivity_point* point,
                               double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = dpform::PartialLambda2(ToPoint(point));
  });
}

dpf_status dpf_topology_cutoffs_compute(double epsilon, double delta,
                                        double gamma,
                                        dpf_topology_cutoffs* out) {
  return Guard([&] {
    NotNull(out, "out");
    FillCutoffs(dpform::ComputeTopologyCutoffs(epsilon, delta, gamma), out);
  });
}

dpf_status dpf_sensitivity_compare(const dpf_sensitivity_point* point,
                                   dpf_sensitivity_report* out) {
  return Guard([&] {
    NotNull(out, "out");
    const auto r = dpform::CompareSensitivity(ToPoint(point));
    using dpform::Dominance;
    out->d_epsilon = r.d_epsilon;
    out->d_lambda2 = r.d_lambda2;
    out->topology_dominant = r.verdict == Dominance::kTopology;
    out->quadratic = r.quadratic;
    out->quadratic_topology_dominant =
        r.quadratic_verdict == Dominance::kTopology;
    out->quadratic_agrees = r.quadratic_agrees;
    out->cutoff_topology_dominant = r.cutoff_verdict == Dominance::kTopology;
    out->cutoff_agrees = r.cutoff_agrees;
    out->in_validity_region = r.in_validity_region;
    FillCutoffs(r.cutoffs, &out->cutoffs);
  });
}

// ---- run configuration ----------------------------------------------------

dpf_status dpf_config_parse(const char* json_text, dpf_config** out) {
  return Guard([&] {
    NotNull(json_text, "json_text");
    NotNull(out, "out");
    *out = nullptr;
    *out = new dpf_config{dpform::RunConfig::Parse(json_text), {}};
  });
}

dpf_status dpf_config_load(const char* path, dpf_config** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    *out = nullptr;
    *out = new dpf_config{dpform::RunConfig::Load(path), {}};
  });
}

dpf_status dpf_config_demo(dpf_config** out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = new dpf_config{dpform::RunConfig::Demo(), {}};
  });
}

void dpf_config_destroy(dpf_config* config) { delete config; }

dpf_status dpf_config_set_seed(dpf_config* config, uint64_t seed) {
  return Guard([&] {
    NotNull(config, "config");
    config->config.seed = seed;
  });
}

dpf_status dpf_config_set_trials(dpf_config* config, int trials) {
  return Guard([&] {
    NotNull(config, "config");
    dpform::Require(trials >= 1, "trials must be at least 1");
    config->config.trials = trials;
  });
}

dpf_status dpf_config_set_horizon(dpf_config* config, int horizon) {
  return Guard([&] {
    NotNull(config, "config");
    dpform::Require(horizon >= 1, "horizon must be at least 1");
    config->config.horizon = horizon;
  });
}

dpf_status dpf_config_set_out_dir(dpf_config* config, const char* dir) {
  return Guard([&] {
    NotNull(config, "config");
    NotNull(dir, "dir");
    config->config.out_dir = dir;
  });
}

dpf_status dpf_config_set_uniform_sigma(dpf_config* config, double sigma) {
  return Guard([&] {
    NotNull(config, "config");
    dpform::Require(sigma >= 0.0 && std::isfinite(sigma),
                    "sigma must be non-negative");
    config->config.sigma_override =
        std::vector<double>(std::max(config->config.graph.n, 0), sigma);
  });
}

dpf_status dpf_config_validate(const dpf_config* config) {
  return Guard([&] {
    NotNull(config, "config");
    config->config.Validate();
  });
}

const char* dpf_config_out_dir(const dpf_config* config) {
  return config ? config->config.out_dir.c_str() : "";
}

int dpf_config_agent_count(const dpf_config* config) {
  return config ? static_cast<int>(config->config.formation.rows()) : 0;
}

int dpf_config_dimension_count(const dpf_config* config) {
  return config ? static_cast<int>(config->config.formation.cols()) : 0;
}

dpf_status dpf_config_horizon(const dpf_config* config, int* out) {
  return Guard([&] {
    NotNull(config, "config");
    NotNull(out, "out");
    *out = config->config.ResolvedHorizon();
  });
}

dpf_status dpf_config_sigma(const dpf_config* config, double* out,
                            size_t len) {
  return Guard([&] {
    NotNull(config, "config");
    NotNull(out, "out");
    const std::vector<double> s = config->config.Sigma();
    Capacity(len, s.size(), "sigma");
    std::copy(s.begin(), s.end(), out);
  });
}

size_t dpf_config_warning_count(const dpf_config* config) {
  if (!config) return 0;
  auto* mutable_config = const_cast<dpf_config*>(config);
  try {
    mutable_config->warnings = config->config.Warnings();
  } catch (const std::exception& e) {
    mutable_config->warnings = {e.what()};
  }
  return mutable_config->warnings.size();
}

const char* dpf_config_warning(const dpf_config* config, size_t index) {
  if (!config || index >= config->warnings.size()) return nullptr;
  return config->warnings[index].c_str();
}

dpf_status dpf_config_to_json(const dpf_config* config, char* buffer,
                              size_t capacity, size_t* needed) {
  return Guard([&] {
    NotNull(config, "config");
    const std::string text = config->config.ToJson();
    if (needed) *needed = text.size() + 1;
    if (capacity == 0) return;
    NotNull(buffer, "buffer");
    const std::size_t n = std::min(capacity - 1, text.size());
    std::memcpy(buffer, text.data(), n);
    buffer[n] = '\0';
    Capacity(capacity, text.size() + 1, "json buffer");
  });
}

dpf_status dpf_config_bound_report(const dpf_config* config,
                                   dpf_bound_report* out) {
  return Guard([&] {
    NotNull(config, "config");
    NotNull(out, "out");
    const auto& c = config->config;
    c.Validate();
    FillReport(dpform::ComputeBoundReport(c.graph.Build(), c.gamma, c.Sigma(),
                                          c.privacy),
               out);
  });
}

// ---- simulation -----------------------------------------------------------

dpf_status dpf_simulate(const dpf_config* config, int jobs,
                        dpf_simulation** out) {
  return Guard([&] {
    NotNull(config, "config");
    NotNull(out, "out");
    *out = nullptr;
    if (jobs <= 0) {
      jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
    const dpform::SimulationSetup setup = config->config.ToSetup();
    auto* sim = new dpf_simulation{dpform::Simulate(setup, jobs), setup.anchors,
                                   config->config.ToJson()};
    *out = sim;
  });
}

void dpf_simulation_destroy(dpf_simulation* sim) { delete sim; }

int dpf_simulation_dimensions(const dpf_simulation* sim) {
  return sim ? static_cast<int>(sim->result.ess.size()) : 0;
}

int dpf_simulation_horizon(const dpf_simulation* sim) {
  return sim ? sim->result.horizon : 0;
}

int dpf_simulation_trials(const dpf_simulation* sim) {
  return sim ? sim->result.trials : 0;
}

dpf_status dpf_simulation_ess(const dpf_simulation* sim, int dimension,
                              dpf_ess_estimate* out) {
  return Guard([&] {
    CheckDimension(sim, dimension);
    NotNull(out, "out");
    const dpform::EssEstimate& e = sim->result.ess[dimension];
    *out = {e.value,        e.half_width, e.tail_max,
            e.slope_per_100, e.mixing_ok,  e.tail_start};
  });
}

dpf_status dpf_simulation_e_agg(const dpf_simulation* sim, int dimension,
                                double* mean, double* ci, size_t len) {
  return Guard([&] {
    CheckDimension(sim, dimension);
    NotNull(mean, "mean");
    const auto& m = sim->result.e_agg_mean[dimension];
    Capacity(len, m.size(), "e_agg");
    std::copy(m.begin(), m.end(), mean);
    if (ci) {
      const auto& c = sim->result.e_agg_ci[dimension];
      std::copy(c.begin(), c.end(), ci);
    }
  });
}

dpf_status dpf_simulation_first_trial_error(const dpf_simulation* sim,
                                            int agent, int dimension,
                                            double* out, size_t len) {
  return Guard([&] {
    CheckDimension(sim, dimension);
    NotNull(out, "out");
    const Eigen::MatrixXd& states = sim->result.first_trial[dimension];
    dpform::Require(agent >= 0 && agent < states.cols(),
                    "agent out of range");
    const auto series =
        dpform::ComputeErrorSeries(states, sim->anchors.col(dimension));
    Capacity(len, static_cast<std::size_t>(series.error.rows()), "error");
    for (Eigen::Index k = 0; k < series.error.rows(); ++k) {
      out[k] = series.error(k, agent);
    }
  });
}

dpf_status dpf_simulation_final_residual(const dpf_simulation* sim,
                                         double* out) {
  return Guard([&] {
    NotNull(sim, "sim");
    NotNull(out, "out");
    double worst = 0.0;
    for (std::size_t l = 0; l < sim->result.first_trial.size(); ++l) {
      const auto series = dpform::ComputeErrorSeries(
          sim->result.first_trial[l],
          sim->anchors.col(static_cast<Eigen::Index>(l)));
      worst = std::max(
          worst, series.error.row(series.error.rows() - 1).cwiseAbs().maxCoeff());
    }
    *out = worst;
  });
}

dpf_status dpf_simulation_write_csv(const dpf_simulation* sim,
                                    const char* dir) {
  return Guard([&] {
    NotNull(sim, "sim");
    NotNull(dir, "dir");
    dpform::WriteSimulationOutputs(dir, sim->result, sim->anchors,
                                   sim->config_json);
  });
}

}  // extern "C"
