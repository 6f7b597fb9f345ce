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


// Exercises libdpform strictly through its C header.

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dpform/dpform.h"

namespace {

TEST(CApiTest, VersionAndStatusNames) {
  EXPECT_STREQ(dpf_version(), "1.0.0");
  EXPECT_STREQ(dpf_status_name(DPF_OK), "ok");
  EXPECT_STREQ(dpf_status_name(DPF_ERR_NUMERICAL), "numerical failure");
}

TEST(CApiTest, GraphLifecycle) {
  const int u[] = {0, 1, 2};
  const int v[] = {1, 2, 3};
  const double w[] = {1.0, 0.5, 2.0};
  dpf_graph* g = nullptr;
  ASSERT_EQ(dpf_graph_from_edges(4, u, v, w, 3, &g), DPF_OK);
  EXPECT_EQ(dpf_graph_node_count(g), 4);
  double d = 0.0;
  ASSERT_EQ(dpf_graph_max_degree(g, &d), DPF_OK);
  EXPECT_DOUBLE_EQ(d, 2.5);
  int connected = 0;
  ASSERT_EQ(dpf_graph_is_connected(g, &connected), DPF_OK);
  EXPECT_EQ(connected, 1);
  std::vector<double> lap(16);
  ASSERT_EQ(dpf_graph_laplacian(g, lap.data(), lap.size()), DPF_OK);
  EXPECT_DOUBLE_EQ(lap[0], 1.0);
  EXPECT_DOUBLE_EQ(lap[1], -1.0);
  EXPECT_DOUBLE_EQ(lap[2 * 4 + 2], 2.5);
  EXPECT_EQ(dpf_graph_laplacian(g, lap.data(), 15), DPF_ERR_INVALID_ARGUMENT);
  EXPECT_NE(std::string(dpf_last_error()).find("need 16"), std::string::npos);
  dpf_graph_destroy(g);
  dpf_graph_destroy(nullptr);
}

TEST(CApiTest, RejectsBadGraphs) {
  const int u[] = {0};
  const int v[] = {0};
  const double w[] = {1.0};
  dpf_graph* g = reinterpret_cast<dpf_graph*>(0x1);
  EXPECT_EQ(dpf_graph_from_edges(2, u, v, w, 1, &g), DPF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(g, nullptr);
  EXPECT_NE(std::string(dpf_last_error()).find("self-loop"), std::string::npos);
  EXPECT_EQ(dpf_graph_standard(DPF_TOPOLOGY_CYCLE, 2, 1.0, &g),
            DPF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(dpf_graph_standard(DPF_TOPOLOGY_STAR, 5, 1.0, nullptr),
            DPF_ERR_INVALID_ARGUMENT);
}

TEST(CApiTest, PerronAndKemeny) {
  dpf_graph* g = nullptr;
  ASSERT_EQ(dpf_graph_standard(DPF_TOPOLOGY_STAR, 5, 1.0, &g), DPF_OK);
  std::vector<double> p(25);
  ASSERT_EQ(dpf_perron_matrix(g, 0.2, p.data(), p.size()), DPF_OK);
  EXPECT_NEAR(p[0], 0.2, 1e-15);
  EXPECT_NEAR(p[1], 0.2, 1e-15);
  EXPECT_NEAR(p[6], 0.8, 1e-15);
  EXPECT_EQ(dpf_perron_matrix(g, 0.25, p.data(), p.size()), DPF_ERR_VALIDATION);
  EXPECT_NE(std::string(dpf_last_error()).find("step size"), std::string::npos);
  std::vector<double> pi(5);
  ASSERT_EQ(dpf_stationary_distribution(g, 0.2, pi.data(), pi.size()), DPF_OK);
  for (double x : pi) EXPECT_NEAR(x, 0.2, 1e-15);
  // Star, gamma 1/5: P eigenvalues {1, 0.8 (x3), 0}; K(P) = 3/0.2 + 1 = 16
  // and K(P^2) = 3/0.36 + 1.
  double k = 0.0;
  ASSERT_EQ(dpf_kemeny_constant(g, 0.2, 0, &k), DPF_OK);
  EXPECT_NEAR(k, 16.0, 1e-11);
  ASSERT_EQ(dpf_kemeny_constant(g, 0.2, 1, &k), DPF_OK);
  EXPECT_NEAR(k, 3.0 / 0.36 + 1.0, 1e-11);
  double l2 = 0.0;
  ASSERT_EQ(dpf_graph_algebraic_connectivity(g, &l2), DPF_OK);
  EXPECT_NEAR(l2, 1.0, 1e-12);
  ASSERT_EQ(dpf_topology_algebraic_connectivity(DPF_TOPOLOGY_COMPLETE, 7, 2.0, &l2),
            DPF_OK);
  EXPECT_DOUBLE_EQ(l2, 14.0);
  dpf_graph_destroy(g);
}

TEST(CApiTest, PrivacyFunctions) {
  EXPECT_NEAR(dpf_q_function(3.0), 0.0013498980316300945, 1e-17);
  double k = 0.0;
  ASSERT_EQ(dpf_q_inverse(0.00135, &k), DPF_OK);
  EXPECT_NEAR(k, 2.9999769927033931, 1e-10);
  EXPECT_EQ(dpf_q_inverse(0.5, &k), DPF_ERR_INVALID_ARGUMENT);
  double kappa = 0.0;
  ASSERT_EQ(dpf_kappa(0.01, 0.1, &kappa), DPF_OK);
  EXPECT_NEAR(kappa, 23.476458057296716, 1e-10);
  const dpf_privacy params{std::log(3.0), 0.00135, 2.0};
  double sigma = 0.0;
  ASSERT_EQ(dpf_noise_scale(&params, &sigma), DPF_OK);
  EXPECT_NEAR(sigma, 5.776543603017169, 1e-12);
  std::vector<double> a(100), b(100);
  ASSERT_EQ(dpf_sample_noise(1.0, a.size(), 5, a.data()), DPF_OK);
  ASSERT_EQ(dpf_sample_noise(1.0, b.size(), 5, b.data()), DPF_OK);
  EXPECT_EQ(a, b);
  int adj = 0;
  const double x[] = {0, 0};
  const double y[] = {0.6, 0.8};
  ASSERT_EQ(dpf_is_adjacent(x, y, 2, 1.0, &adj), DPF_OK);
  EXPECT_EQ(adj, 1);
}

TEST(CApiTest, BoundsAndThresholds) {
  double bound = 0.0;
  ASSERT_EQ(dpf_homogeneous_bound(std::log(3.0), 0.00135, 2.0, 0.2, 5, 1.0,
                                  &bound),
            DPF_OK);
  EXPECT_NEAR(bound, 11.86433991024305, 1e-10);
  EXPECT_EQ(dpf_homogeneous_bound(1.0, 0.01, 1.0, 0.2, 5, 10.0, &bound),
            DPF_ERR_INVALID_ARGUMENT);

  dpf_graph* g = nullptr;
  ASSERT_EQ(dpf_graph_standard(DPF_TOPOLOGY_STAR, 5, 1.0, &g), DPF_OK);
  std::vector<dpf_privacy> params(5, {std::log(3.0), 0.00135, 2.0});
  dpf_bound_report r{};
  ASSERT_EQ(dpf_bound_report_compute(g, 0.2, nullptr, params.data(), 5, &r),
            DPF_OK);
  EXPECT_EQ(r.homogeneous, 1);
  EXPECT_NEAR(r.theorem_bound, 11.86433991024305, 1e-9);
  EXPECT_LE(r.sandwich_lower, r.exact_ess);
  EXPECT_LE(r.exact_ess, r.sandwich_upper);
  ASSERT_EQ(dpf_heterogeneous_bound(g, 0.2, params.data(), 5, &bound), DPF_OK);
  EXPECT_NEAR(bound, r.theorem_bound, 1e-12);
  dpf_graph_destroy(g);

  std::vector<dpf_threshold_row> rows(16);
  size_t count = 0;
  EXPECT_EQ(dpf_threshold_table(0.01, 5, 1, 1e-4, 100, rows.data(), 4, &count),
            DPF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(count, 16u);
  ASSERT_EQ(dpf_threshold_table(0.01, 5, 1, 1e-4, 100, rows.data(), rows.size(),
                                &count),
            DPF_OK);
  EXPECT_EQ(rows[0].topology, DPF_TOPOLOGY_COMPLETE);
  EXPECT_NEAR(rows[0].numeric, 0.0074093, 1e-6);
  double eps = 0.0;
  ASSERT_EQ(dpf_epsilon_threshold(10.0, 10, 1e-4, 0.01, 5, 100, &eps), DPF_OK);
  EXPECT_DOUBLE_EQ(eps, rows[0].numeric);
  double printed = 0.0;
  ASSERT_EQ(dpf_closed_form_threshold(DPF_CLOSED_FORM_COMPLETE, 10, 1e-4, 0.01,
                                      5, 1, 100, 0, &printed),
            DPF_OK);
  EXPECT_DOUBLE_EQ(printed, rows[0].closed_form);

  const double e[] = {0.2, 0.4};
  const double l[] = {1.0, 2.0, 3.0};
  double surface[6];
  ASSERT_EQ(dpf_bound_surface(e, 2, l, 3, 50, 0.01, 5, 0.02, surface), DPF_OK);
  ASSERT_EQ(dpf_homogeneous_bound(0.4, 0.01, 5, 0.02, 50, 2.0, &bound), DPF_OK);
  EXPECT_DOUBLE_EQ(surface[1 * 3 + 1], bound);
}

TEST(CApiTest, Sensitivity) {
  dpf_topology_cutoffs c{};
  ASSERT_EQ(dpf_topology_cutoffs_compute(0.01, 0.00135, 0.1, &c), DPF_OK);
  EXPECT_NEAR(c.above_cutoff, 5.55134, 1e-3);
  const dpf_sensitivity_point star{0.01, 0.00135, 1.0, 0.1, 10, 1.0};
  dpf_sensitivity_report r{};
  ASSERT_EQ(dpf_sensitivity_compare(&star, &r), DPF_OK);
  EXPECT_EQ(r.topology_dominant, 0);
  EXPECT_EQ(r.in_validity_region, 1);
  double d = 0.0;
  ASSERT_EQ(dpf_partial_lambda2(&star, &d), DPF_OK);
  EXPECT_DOUBLE_EQ(d, r.d_lambda2);
  ASSERT_EQ(dpf_partial_epsilon(&star, &d), DPF_OK);
  EXPECT_DOUBLE_EQ(d, r.d_epsilon);
  const dpf_sensitivity_point bad{0.01, 0.00135, 1.0, 0.1, 10, 25.0};
  EXPECT_EQ(dpf_sensitivity_compare(&bad, &r), DPF_ERR_INVALID_ARGUMENT);
}

TEST(CApiTest, ConfigLifecycle) {
  dpf_config* cfg = nullptr;
  ASSERT_EQ(dpf_config_demo(&cfg), DPF_OK);
  EXPECT_EQ(dpf_config_agent_count(cfg), 5);
  EXPECT_EQ(dpf_config_dimension_count(cfg), 2);
  EXPECT_EQ(dpf_config_validate(cfg), DPF_OK);
  EXPECT_EQ(dpf_config_warning_count(cfg), 0u);
  EXPECT_EQ(dpf_config_warning(cfg, 0), nullptr);
  size_t needed = 0;
  ASSERT_EQ(dpf_config_to_json(cfg, nullptr, 0, &needed), DPF_OK);
  std::vector<char> text(needed);
  ASSERT_EQ(dpf_config_to_json(cfg, text.data(), text.size(), nullptr), DPF_OK);
  EXPECT_EQ(std::strlen(text.data()) + 1, needed);
  char small[8];
  EXPECT_EQ(dpf_config_to_json(cfg, small, sizeof(small), nullptr),
            DPF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(std::strlen(small), 7u);

  dpf_config* copy = nullptr;
  ASSERT_EQ(dpf_config_parse(text.data(), &copy), DPF_OK);
  EXPECT_EQ(dpf_config_validate(copy), DPF_OK);
  dpf_config_destroy(copy);

  int horizon = 0;
  ASSERT_EQ(dpf_config_horizon(cfg, &horizon), DPF_OK);
  EXPECT_EQ(horizon, 100);
  EXPECT_EQ(dpf_config_set_trials(cfg, 0), DPF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(dpf_config_set_uniform_sigma(cfg, -1.0), DPF_ERR_INVALID_ARGUMENT);
  ASSERT_EQ(dpf_config_set_uniform_sigma(cfg, 0.5), DPF_OK);
  std::vector<double> sigma(5);
  ASSERT_EQ(dpf_config_sigma(cfg, sigma.data(), sigma.size()), DPF_OK);
  EXPECT_EQ(sigma, std::vector<double>(5, 0.5));
  EXPECT_EQ(dpf_config_warning_count(cfg), 5u);
  ASSERT_NE(dpf_config_warning(cfg, 0), nullptr);
  ASSERT_EQ(dpf_config_set_out_dir(cfg, "elsewhere"), DPF_OK);
  EXPECT_STREQ(dpf_config_out_dir(cfg), "elsewhere");
  dpf_config_destroy(cfg);

  EXPECT_EQ(dpf_config_parse("{", &cfg), DPF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(dpf_config_load("/nonexistent.json", &cfg), DPF_ERR_IO);
  EXPECT_EQ(dpf_config_parse(R"({"graph": {"kind": "star", "n": 5},
      "gamma": 0.3, "privacy": {"epsilon": 1, "delta": 0.01, "b": 1},
      "formation": [[0],[0],[0],[0],[0]]})", &cfg), DPF_OK);
  EXPECT_EQ(dpf_config_validate(cfg), DPF_ERR_VALIDATION);
  dpf_bound_report r{};
  EXPECT_EQ(dpf_config_bound_report(cfg, &r), DPF_ERR_VALIDATION);
  dpf_simulation* sim = nullptr;
  EXPECT_EQ(dpf_simulate(cfg, 1, &sim), DPF_ERR_VALIDATION);
  EXPECT_EQ(sim, nullptr);
  dpf_config_destroy(cfg);
}

TEST(CApiTest, SimulationLifecycle) {
  dpf_config* cfg = nullptr;
  ASSERT_EQ(dpf_config_demo(&cfg), DPF_OK);
  ASSERT_EQ(dpf_config_set_trials(cfg, 40), DPF_OK);
  ASSERT_EQ(dpf_config_set_horizon(cfg, 50), DPF_OK);
  dpf_simulation* sim = nullptr;
  ASSERT_EQ(dpf_simulate(cfg, 2, &sim), DPF_OK);
  EXPECT_EQ(dpf_simulation_dimensions(sim), 2);
  EXPECT_EQ(dpf_simulation_horizon(sim), 50);
  EXPECT_EQ(dpf_simulation_trials(sim), 40);
  dpf_ess_estimate e{};
  ASSERT_EQ(dpf_simulation_ess(sim, 1, &e), DPF_OK);
  EXPECT_GT(e.value, 0.0);
  EXPECT_GE(e.tail_max, e.value);
  EXPECT_EQ(dpf_simulation_ess(sim, 2, &e), DPF_ERR_INVALID_ARGUMENT);
  std::vector<double> mean(51), ci(51);
  ASSERT_EQ(dpf_simulation_e_agg(sim, 0, mean.data(), ci.data(), 51), DPF_OK);
  EXPECT_EQ(dpf_simulation_e_agg(sim, 0, mean.data(), nullptr, 50),
            DPF_ERR_INVALID_ARGUMENT);
  std::vector<double> err(51);
  ASSERT_EQ(dpf_simulation_first_trial_error(sim, 0, 0, err.data(), 51), DPF_OK);
  EXPECT_EQ(dpf_simulation_first_trial_error(sim, 5, 0, err.data(), 51),
            DPF_ERR_INVALID_ARGUMENT);

  const auto dir = std::filesystem::path(::testing::TempDir()) / "dpform_capi";
  ASSERT_EQ(dpf_simulation_write_csv(sim, dir.string().c_str()), DPF_OK);
  EXPECT_TRUE(std::filesystem::exists(dir / "trajectory.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "summary.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "config.json"));
  dpf_simulation_destroy(sim);

  ASSERT_EQ(dpf_config_set_uniform_sigma(cfg, 0.0), DPF_OK);
  ASSERT_EQ(dpf_config_set_horizon(cfg, 100), DPF_OK);
  ASSERT_EQ(dpf_simulate(cfg, 0, &sim), DPF_OK);
  double residual = 1.0;
  ASSERT_EQ(dpf_simulation_final_residual(sim, &residual), DPF_OK);
  EXPECT_LT(residual, 1e-6);
  dpf_simulation_destroy(sim);
  dpf_config_destroy(cfg);
}

TEST(CApiTest, NullArguments) {
  EXPECT_EQ(dpf_graph_max_degree(nullptr, nullptr), DPF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(dpf_kappa(0.01, 1.0, nullptr), DPF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(dpf_config_validate(nullptr), DPF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(dpf_simulation_ess(nullptr, 0, nullptr), DPF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(dpf_graph_node_count(nullptr), 0);
}

}  // namespace
