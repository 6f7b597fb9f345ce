/*
 * Copyright 2026 The dpform Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to libdpform: differentially private formation control, its
 * steady-state error bounds, privacy threshold design and sensitivity
 * analysis.
 *
 * Conventions:
 *  - Every fallible call returns dpf_status. On failure, dpf_last_error()
 *    returns a message for the calling thread until its next failing call.
 *  - Handles (dpf_graph, dpf_config, dpf_simulation) are opaque, owned by the
 *    caller and released with the matching *_destroy function. Destroy
 *    functions accept NULL.
 *  - Node indices are 0-based. Matrices are written row-major.
 *  - Output buffers are caller-allocated; a too-small buffer is
 *    DPF_ERR_INVALID_ARGUMENT.
 */

#ifndef DPFORM_DPFORM_H_
#define DPFORM_DPFORM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(DPFORM_BUILDING)
#define DPF_API __declspec(dllexport)
#else
#define DPF_API __declspec(dllimport)
#endif
#else
#define DPF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dpf_status {
  DPF_OK = 0,
  DPF_ERR_INVALID_ARGUMENT = 1,
  /* Step size or connectivity precondition violated. */
  DPF_ERR_VALIDATION = 2,
  DPF_ERR_NUMERICAL = 3,
  DPF_ERR_IO = 4,
  DPF_ERR_INTERNAL = 5
} dpf_status;

typedef enum dpf_topology {
  DPF_TOPOLOGY_COMPLETE = 0,
  DPF_TOPOLOGY_CYCLE = 1,
  DPF_TOPOLOGY_LINE = 2,
  DPF_TOPOLOGY_STAR = 3
} dpf_topology;

typedef enum dpf_closed_form {
  DPF_CLOSED_FORM_IMPOSSIBILITY = 0,
  DPF_CLOSED_FORM_COMPLETE = 1,
  DPF_CLOSED_FORM_CYCLE = 2,
  DPF_CLOSED_FORM_LINE = 3,
  DPF_CLOSED_FORM_STAR = 4
} dpf_closed_form;

typedef struct dpf_graph dpf_graph;
typedef struct dpf_config dpf_config;
typedef struct dpf_simulation dpf_simulation;

DPF_API const char* dpf_last_error(void);
DPF_API const char* dpf_version(void);
DPF_API const char* dpf_status_name(dpf_status status);

/* ---- graphs ---------------------------------------------------------- */

DPF_API dpf_status dpf_graph_from_edges(int node_count, const int* u,
                                        const int* v, const double* weight,
                                        size_t edge_count, dpf_graph** out);
/* Star graphs use node 0 as the hub. */
DPF_API dpf_status dpf_graph_standard(dpf_topology kind, int n, double weight,
                                      dpf_graph** out);
DPF_API dpf_status dpf_graph_random_connected(int n,
                                              double extra_edge_probability,
                                              uint64_t seed, dpf_graph** out);
DPF_API void dpf_graph_destroy(dpf_graph* graph);

DPF_API int dpf_graph_node_count(const dpf_graph* graph);
DPF_API dpf_status dpf_graph_max_degree(const dpf_graph* graph, double* out);
/* N*N entries. */
DPF_API dpf_status dpf_graph_laplacian(const dpf_graph* graph, double* out,
                                       size_t len);
DPF_API dpf_status dpf_graph_algebraic_connectivity(const dpf_graph* graph,
                                                    double* out);
DPF_API dpf_status dpf_graph_is_connected(const dpf_graph* graph, int* out);
DPF_API dpf_status dpf_topology_algebraic_connectivity(dpf_topology kind,
                                                       int n, double weight,
                                                       double* out);

/* P = I - gamma L; DPF_ERR_VALIDATION when gamma * d_max >= 1 or the graph
 * is disconnected. */
DPF_API dpf_status dpf_perron_matrix(const dpf_graph* graph, double gamma,
                                     double* out, size_t len);
DPF_API dpf_status dpf_stationary_distribution(const dpf_graph* graph,
                                               double gamma, double* out,
                                               size_t len);
/* Kemeny constant of P, or of P^2 when `squared` is nonzero. */
DPF_API dpf_status dpf_kemeny_constant(const dpf_graph* graph, double gamma,
                                       int squared, double* out);

/* ---- privacy ----------------------------------------------------------- */

typedef struct dpf_privacy {
  double epsilon;
  double delta;
  double b;
} dpf_privacy;

DPF_API double dpf_q_function(double y);
DPF_API dpf_status dpf_q_inverse(double delta, double* out);
DPF_API dpf_status dpf_kappa(double delta, double epsilon, double* out);
DPF_API dpf_status dpf_noise_scale(const dpf_privacy* params, double* out);
DPF_API dpf_status dpf_sample_noise(double sigma, size_t count, uint64_t seed,
                                    double* out);
DPF_API dpf_status dpf_is_adjacent(const double* v, const double* w,
                                   size_t len, double b, int* out);

/* ---- bounds ------------------------------------------------------------ */

typedef struct dpf_bound_report {
  int connected;
  int step_size_ok;
  int homogeneous;
  double lambda2;
  double kemeny_p2;
  double kemeny_lower;
  double kemeny_upper;
  /* Sandwich and exact value under uncorrelated per-agent noise. */
  double sandwich_lower;
  double sandwich_upper;
  double exact_ess;
  /* Exact value under the protocol's actual (correlated) noise. */
  double exact_ess_protocol;
  double theorem_bound;
  /* NaN unless every agent shares the same privacy parameters. */
  double homogeneous_bound;
} dpf_bound_report;

DPF_API dpf_status dpf_homogeneous_bound(double epsilon, double delta,
                                         double b, double gamma, int n,
                                         double lambda2, double* out);
DPF_API dpf_status dpf_heterogeneous_bound(const dpf_graph* graph,
                                           double gamma,
                                           const dpf_privacy* params,
                                           size_t count, double* out);
/* `sigma` may be NULL, meaning b_i * kappa_i for each agent. */
DPF_API dpf_status dpf_bound_report_compute(const dpf_graph* graph,
                                            double gamma, const double* sigma,
                                            const dpf_privacy* params,
                                            size_t count,
                                            dpf_bound_report* out);

DPF_API dpf_status dpf_epsilon_threshold(double lambda2, int n, double gamma,
                                         double delta, double b,
                                         double target_error, double* out);
/* `lambda2` is read only for DPF_CLOSED_FORM_IMPOSSIBILITY. */
DPF_API dpf_status dpf_closed_form_threshold(dpf_closed_form kind, int n,
                                             double gamma, double delta,
                                             double b, double w,
                                             double target_error,
                                             double lambda2, double* out);

typedef struct dpf_threshold_row {
  dpf_topology topology;
  int n;
  double lambda2;
  double numeric;
  double closed_form;
  double relative_deviation;
} dpf_threshold_row;

/* 16 rows: {complete, cycle, line, star} x N in {10, 100, 1000, 10000}. */
DPF_API dpf_status dpf_threshold_table(double delta, double b, double w,
                                       double gamma, double target_error,
                                       dpf_threshold_row* rows,
                                       size_t capacity, size_t* count);

/* out[i * lambda2_count + j] pairs epsilons[i] with lambda2s[j]. */
DPF_API dpf_status dpf_bound_surface(const double* epsilons,
                                     size_t epsilon_count,
                                     const double* lambda2s,
                                     size_t lambda2_count, int n,
                                     double delta, double b, double gamma,
                                     double* out);

/* ---- sensitivity ------------------------------------------------------- */

typedef struct dpf_sensitivity_point {
  double epsilon;
  double delta;
  double b;
  double gamma;
  int n;
  double lambda2;
} dpf_sensitivity_point;

typedef struct dpf_topology_cutoffs {
  double alpha;
  double eta1;
  double eta2;
  double above_cutoff;
  double below_cutoff;
  double above_radicand;
  double below_radicand;
} dpf_topology_cutoffs;

typedef struct dpf_sensitivity_report {
  double d_epsilon;
  double d_lambda2;
  int topology_dominant;
  double quadratic;
  int quadratic_topology_dominant;
  int quadratic_agrees;
  int cutoff_topology_dominant;
  int cutoff_agrees;
  int in_validity_region;
  dpf_topology_cutoffs cutoffs;
} dpf_sensitivity_report;

DPF_API dpf_status dpf_partial_epsilon(const dpf_sensitivity_point* point,
                                       double* out);
DPF_API dpf_status dpf_partial_lambda2(const dpf_sensitivity_point* point,
                                       double* out);
DPF_API dpf_status dpf_topology_cutoffs_compute(double epsilon, double delta,
                                                double gamma,
                                                dpf_topology_cutoffs* out);
DPF_API dpf_status dpf_sensitivity_compare(const dpf_sensitivity_point* point,
                                           dpf_sensitivity_report* out);

/* ---- run configuration and simulation ---------------------------------- */

DPF_API dpf_status dpf_config_parse(const char* json_text, dpf_config** out);
DPF_API dpf_status dpf_config_load(const char* path, dpf_config** out);
/* Five-agent star demo with a square-plus-centre formation. */
DPF_API dpf_status dpf_config_demo(dpf_config** out);
DPF_API void dpf_config_destroy(dpf_config* config);

DPF_API dpf_status dpf_config_set_seed(dpf_config* config, uint64_t seed);
DPF_API dpf_status dpf_config_set_trials(dpf_config* config, int trials);
DPF_API dpf_status dpf_config_set_horizon(dpf_config* config, int horizon);
DPF_API dpf_status dpf_config_set_out_dir(dpf_config* config, const char* dir);
/* Forces every agent's noise scale to `sigma` (0 gives the noiseless run). */
DPF_API dpf_status dpf_config_set_uniform_sigma(dpf_config* config,
                                                double sigma);

DPF_API dpf_status dpf_config_validate(const dpf_config* config);
/* Valid until the config is modified or destroyed. */
DPF_API const char* dpf_config_out_dir(const dpf_config* config);
DPF_API int dpf_config_agent_count(const dpf_config* config);
DPF_API int dpf_config_dimension_count(const dpf_config* config);
DPF_API dpf_status dpf_config_horizon(const dpf_config* config, int* out);
DPF_API dpf_status dpf_config_sigma(const dpf_config* config, double* out,
                                    size_t len);
/* Non-fatal notes (typical privacy range, under-provisioned sigma). */
DPF_API size_t dpf_config_warning_count(const dpf_config* config);
DPF_API const char* dpf_config_warning(const dpf_config* config, size_t index);
/* Writes at most `capacity` bytes including the terminator; `needed` (may be
 * NULL) receives the full length plus one. */
DPF_API dpf_status dpf_config_to_json(const dpf_config* config, char* buffer,
                                      size_t capacity, size_t* needed);
DPF_API dpf_status dpf_config_bound_report(const dpf_config* config,
                                           dpf_bound_report* out);

typedef struct dpf_ess_estimate {
  double value;
  double half_width;
  double tail_max;
  double slope_per_100;
  int mixing_ok;
  int tail_start;
} dpf_ess_estimate;

/* jobs <= 0 selects the hardware concurrency. Output does not depend on jobs. */
DPF_API dpf_status dpf_simulate(const dpf_config* config, int jobs,
                                dpf_simulation** out);
DPF_API void dpf_simulation_destroy(dpf_simulation* sim);

DPF_API int dpf_simulation_dimensions(const dpf_simulation* sim);
DPF_API int dpf_simulation_horizon(const dpf_simulation* sim);
DPF_API int dpf_simulation_trials(const dpf_simulation* sim);
DPF_API dpf_status dpf_simulation_ess(const dpf_simulation* sim, int dimension,
                                      dpf_ess_estimate* out);
/* horizon + 1 entries each; `ci` may be NULL. */
DPF_API dpf_status dpf_simulation_e_agg(const dpf_simulation* sim,
                                        int dimension, double* mean,
                                        double* ci, size_t len);
/* Formation error of one agent in one dimension over the first trial. */
DPF_API dpf_status dpf_simulation_first_trial_error(const dpf_simulation* sim,
                                                    int agent, int dimension,
                                                    double* out, size_t len);
/* max_i,l |e_i(horizon)| of the first trial. */
DPF_API dpf_status dpf_simulation_final_residual(const dpf_simulation* sim,
                                                 double* out);
/* trajectory.csv, summary.csv and config.json. */
DPF_API dpf_status dpf_simulation_write_csv(const dpf_simulation* sim,
                                            const char* dir);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* DPFORM_DPFORM_H_ */
