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


// dpform command-line tool. Links only the C API in libdpform.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpform/dpform.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

// Thrown to unwind out of a subcommand with a dpf_status attached.
struct CommandError {
  dpf_status status;
  std::string message;
};

void Check(dpf_status status, const char* what) {
  if (status != DPF_OK) {
    throw CommandError{status, std::string(what) + ": " + dpf_last_error()};
  }
}

int ExitCodeFor(dpf_status status) {
  switch (status) {
    case DPF_OK:
      return kExitOk;
    case DPF_ERR_INVALID_ARGUMENT:
    case DPF_ERR_VALIDATION:
      return kExitValidation;
    case DPF_ERR_NUMERICAL:
      return kExitNumerical;
    default:
      return kExitOther;
  }
}

std::string Num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

// Full round-trip precision for CSV output.
std::string Exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct ConfigHandle {
  dpf_config* ptr = nullptr;
  ~ConfigHandle() { dpf_config_destroy(ptr); }
};

struct SimulationHandle {
  dpf_simulation* ptr = nullptr;
  ~SimulationHandle() { dpf_simulation_destroy(ptr); }
};

struct GraphHandle {
  dpf_graph* ptr = nullptr;
  ~GraphHandle() { dpf_graph_destroy(ptr); }
};

struct RunOptions {
  std::string config_path;
  std::uint64_t seed = 0;
  int trials = 0;
  int horizon = 0;
  int jobs = 0;
  std::string out_dir;
  bool noiseless = false;
};

void AddRunFlags(CLI::App* cmd, RunOptions& opt) {
  cmd->add_option("--config", opt.config_path,
                  "JSON run configuration (default: five-agent star demo)");
  cmd->add_option("--seed", opt.seed, "Master seed (overrides config)");
  cmd->add_option("--trials", opt.trials, "Monte Carlo trials")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--horizon", opt.horizon, "Time steps per trial")
      ->check(CLI::PositiveNumber);
}

void LoadConfig(const RunOptions& opt, CLI::App* cmd, ConfigHandle& cfg) {
  if (opt.config_path.empty()) {
    Check(dpf_config_demo(&cfg.ptr), "demo config");
  } else {
    Check(dpf_config_load(opt.config_path.c_str(), &cfg.ptr), "config");
  }
  if (cmd->count("--seed")) Check(dpf_config_set_seed(cfg.ptr, opt.seed), "seed");
  if (cmd->count("--trials")) {
    Check(dpf_config_set_trials(cfg.ptr, opt.trials), "trials");
  }
  if (cmd->count("--horizon")) {
    Check(dpf_config_set_horizon(cfg.ptr, opt.horizon), "horizon");
  }
  if (!opt.out_dir.empty()) {
    Check(dpf_config_set_out_dir(cfg.ptr, opt.out_dir.c_str()), "out");
  }
  if (opt.noiseless) {
    Check(dpf_config_set_uniform_sigma(cfg.ptr, 0.0), "noiseless");
  }
  Check(dpf_config_validate(cfg.ptr), "config validation");
  const std::size_t warnings = dpf_config_warning_count(cfg.ptr);
  for (std::size_t i = 0; i < warnings; ++i) {
    std::printf("warning: %s\n", dpf_config_warning(cfg.ptr, i));
  }
}

void PrintBoundReport(const dpf_bound_report& r) {
  std::printf("lambda2                 %s\n", Num(r.lambda2).c_str());
  std::printf("kemeny K(P^2)           %s  in (%s, %s]\n",
              Num(r.kemeny_p2).c_str(), Num(r.kemeny_lower).c_str(),
              Num(r.kemeny_upper).c_str());
  std::printf("uncorrelated noise model:\n");
  std::printf("  exact e_ss            %s\n", Num(r.exact_ess).c_str());
  std::printf("  kemeny sandwich       [%s, %s]\n",
              Num(r.sandwich_lower).c_str(), Num(r.sandwich_upper).c_str());
  std::printf("protocol noise (shared neighbour draws):\n");
  std::printf("  exact e_ss            %s\n", Num(r.exact_ess_protocol).c_str());
  std::printf("theorem bound           %s per dimension\n",
              Num(r.theorem_bound).c_str());
  if (r.homogeneous) {
    std::printf("homogeneous bound       %s\n", Num(r.homogeneous_bound).c_str());
  }
}

int RunSimulate(CLI::App* cmd, const RunOptions& opt) {
  ConfigHandle cfg;
  LoadConfig(opt, cmd, cfg);

  dpf_bound_report report{};
  Check(dpf_config_bound_report(cfg.ptr, &report), "bound");
  int horizon = 0;
  Check(dpf_config_horizon(cfg.ptr, &horizon), "horizon");

  SimulationHandle sim;
  Check(dpf_simulate(cfg.ptr, opt.jobs, &sim.ptr), "simulate");
  const int dims = dpf_simulation_dimensions(sim.ptr);
  std::printf("agents %d, dimensions %d, horizon %d, trials %d\n",
              dpf_config_agent_count(cfg.ptr), dims, horizon,
              dpf_simulation_trials(sim.ptr));
  std::printf("theorem bound %s per dimension\n",
              Num(report.theorem_bound).c_str());

  bool within = true;
  for (int l = 0; l < dims; ++l) {
    dpf_ess_estimate e{};
    Check(dpf_simulation_ess(sim.ptr, l, &e), "ess");
    const bool ok = e.value <= report.theorem_bound || e.value < 1e-12;
    within = within && ok;
    std::printf(
        "dimension %d: e_ss estimate %s +/- %s (tail max %s, steps %d..%d) %s\n",
        l + 1, Num(e.value).c_str(), Num(e.half_width).c_str(),
        Num(e.tail_max).c_str(), e.tail_start, horizon,
        ok ? "<= bound" : "EXCEEDS bound");
    if (!e.mixing_ok) {
      std::printf(
          "warning: dimension %d tail still drifting (%s per 100 steps); "
          "increase --horizon\n",
          l + 1, Num(e.slope_per_100).c_str());
    }
  }

  // Single-run pointwise comparison for agent 1, dimension 1. This is an
  // empirical observation only, so it never fails the run.
  std::vector<double> e11(static_cast<std::size_t>(horizon) + 1);
  Check(dpf_simulation_first_trial_error(sim.ptr, 0, 0, e11.data(), e11.size()),
        "trajectory");
  int above = 0;
  for (double v : e11) above += std::fabs(v) > report.theorem_bound;
  if (above > 0) {
    std::printf(
        "warning: |e_11(k)| exceeded the bound at %d of %zu steps in trial 1\n",
        above, e11.size());
  }

  double residual = 0.0;
  Check(dpf_simulation_final_residual(sim.ptr, &residual), "residual");
  std::printf("final formation residual (trial 1) %s\n", Num(residual).c_str());

  const std::string dir = dpf_config_out_dir(cfg.ptr);
  Check(dpf_simulation_write_csv(sim.ptr, dir.c_str()), "write");
  for (const char* name : {"trajectory.csv", "summary.csv", "config.json"}) {
    std::printf("wrote %s\n",
                (std::filesystem::path(dir) / name).string().c_str());
  }
  if (!within) std::printf("warning: an estimate exceeds the bound\n");
  return kExitOk;
}

int RunBounds(CLI::App* cmd, const RunOptions& opt) {
  ConfigHandle cfg;
  LoadConfig(opt, cmd, cfg);
  dpf_bound_report report{};
  Check(dpf_config_bound_report(cfg.ptr, &report), "bound");
  PrintBoundReport(report);
  return kExitOk;
}

struct DesignOptions {
  std::string kind = "complete";
  int n = 10;
  double delta = 0.01;
  double b = 5.0;
  double w = 1.0;
  double gamma = 1e-4;
  double target_error = 100.0;
  bool table1 = false;
};

const char* TopologyLabel(dpf_topology t) {
  switch (t) {
    case DPF_TOPOLOGY_COMPLETE:
      return "complete";
    case DPF_TOPOLOGY_CYCLE:
      return "cycle";
    case DPF_TOPOLOGY_LINE:
      return "line";
    case DPF_TOPOLOGY_STAR:
      return "star";
  }
  return "?";
}

int RunDesign(const DesignOptions& opt) {
  if (opt.table1) {
    std::vector<dpf_threshold_row> rows(16);
    std::size_t count = 0;
    Check(dpf_threshold_table(opt.delta, opt.b, opt.w, opt.gamma,
                              opt.target_error, rows.data(), rows.size(),
                              &count),
          "table");
    std::printf("%-9s %6s %16s %16s %16s %12s\n", "topology", "N", "lambda2",
                "numeric", "printed_form", "deviation");
    std::vector<const dpf_threshold_row*> discrepancies;
    for (std::size_t i = 0; i < count; ++i) {
      const dpf_threshold_row& r = rows[i];
      std::printf("%-9s %6d %16s %16s %16s %12s\n", TopologyLabel(r.topology),
                  r.n, Num(r.lambda2).c_str(), Num(r.numeric).c_str(),
                  Num(r.closed_form).c_str(),
                  Num(r.relative_deviation).c_str());
      if (std::fabs(r.relative_deviation) > 0.02) discrepancies.push_back(&r);
    }
    std::printf("discrepancy report: %zu of %zu printed-form values deviate "
                "from the numeric threshold by more than 2%%\n",
                discrepancies.size(), count);
    for (const dpf_threshold_row* r : discrepancies) {
      std::printf("  %s N=%d: printed form %s vs numeric %s\n",
                  TopologyLabel(r->topology), r->n,
                  Num(r->closed_form).c_str(), Num(r->numeric).c_str());
    }
    return kExitOk;
  }

  static const std::vector<std::pair<std::string, dpf_topology>> kKinds = {
      {"complete", DPF_TOPOLOGY_COMPLETE},
      {"cycle", DPF_TOPOLOGY_CYCLE},
      {"line", DPF_TOPOLOGY_LINE},
      {"star", DPF_TOPOLOGY_STAR}};
  dpf_topology kind = DPF_TOPOLOGY_COMPLETE;
  for (const auto& [name, value] : kKinds) {
    if (name == opt.kind) kind = value;
  }
  double lambda2 = 0.0;
  Check(dpf_topology_algebraic_connectivity(kind, opt.n, opt.w, &lambda2),
        "topology");
  double numeric = 0.0;
  Check(dpf_epsilon_threshold(lambda2, opt.n, opt.gamma, opt.delta, opt.b,
                              opt.target_error, &numeric),
        "threshold");
  double printed = 0.0;
  Check(dpf_closed_form_threshold(static_cast<dpf_closed_form>(kind + 1),
                                  opt.n, opt.gamma, opt.delta, opt.b, opt.w,
                                  opt.target_error, lambda2, &printed),
        "closed form");
  std::printf("topology          %s\n", opt.kind.c_str());
  std::printf("N                 %d\n", opt.n);
  std::printf("lambda2           %s\n", Num(lambda2).c_str());
  std::printf("epsilon threshold %s\n", Num(numeric).c_str());
  std::printf("printed form      %s\n", Num(printed).c_str());
  std::printf("deviation         %s\n",
              Num((printed - numeric) / numeric).c_str());
  return kExitOk;
}

struct SweepOptions {
  int n = 50;
  double delta = 0.01;
  double gamma = 0.02;
  double b = 5.0;
  double eps_min = 0.1;
  double eps_max = 1.0;
  int eps_steps = 50;
  double lambda2_max = 50.0;
  int lambda2_steps = 50;
  std::string out_dir;
};

int RunSweep(const SweepOptions& opt) {
  if (opt.eps_steps < 1 || opt.lambda2_steps < 1) {
    throw CommandError{DPF_ERR_INVALID_ARGUMENT, "grid needs at least one step"};
  }
  if (!(opt.lambda2_max > 0.0 && opt.lambda2_max * opt.gamma < 2.0)) {
    throw CommandError{DPF_ERR_INVALID_ARGUMENT,
                       "lambda2 grid must lie in (0, 2/gamma)"};
  }
  std::vector<double> eps(opt.eps_steps);
  for (int i = 0; i < opt.eps_steps; ++i) {
    eps[i] = opt.eps_steps == 1
                 ? opt.eps_min
                 : opt.eps_min + (opt.eps_max - opt.eps_min) * i /
                                     (opt.eps_steps - 1);
  }
  // Uniform grid on (0, lambda2_max], excluding the disconnected end.
  std::vector<double> lam(opt.lambda2_steps);
  for (int j = 0; j < opt.lambda2_steps; ++j) {
    lam[j] = opt.lambda2_max * (j + 1) / opt.lambda2_steps;
  }
  std::vector<double> values(eps.size() * lam.size());
  Check(dpf_bound_surface(eps.data(), eps.size(), lam.data(), lam.size(),
                          opt.n, opt.delta, opt.b, opt.gamma, values.data()),
        "surface");

  int eps_violations = 0;
  int lambda_violations = 0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    for (std::size_t j = 0; j < lam.size(); ++j) {
      const double v = values[i * lam.size() + j];
      if (i > 0 && !(v < values[(i - 1) * lam.size() + j])) ++eps_violations;
      if (j > 0 && lam[j] * opt.gamma <= 1.0 &&
          !(v < values[i * lam.size() + j - 1])) {
        ++lambda_violations;
      }
    }
  }

  const std::string dir = opt.out_dir.empty() ? "dpform_out" : opt.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::string path = (std::filesystem::path(dir) / "surface.csv").string();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (ec || !out) throw CommandError{DPF_ERR_IO, "cannot write " + path};
  out << "epsilon,lambda2,bound\n";
  for (std::size_t i = 0; i < eps.size(); ++i) {
    for (std::size_t j = 0; j < lam.size(); ++j) {
      out << Exact(eps[i]) << ',' << Exact(lam[j]) << ','
          << Exact(values[i * lam.size() + j]) << '\n';
    }
    out << '\n';
  }
  std::printf("grid %d x %d, N=%d, delta=%s, gamma=%s, b=%s\n", opt.eps_steps,
              opt.lambda2_steps, opt.n, Num(opt.delta).c_str(),
              Num(opt.gamma).c_str(), Num(opt.b).c_str());
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  std::printf("bound range [%s, %s]\n", Num(*lo).c_str(), Num(*hi).c_str());
  std::printf("monotonicity violations: epsilon %d, lambda2 (up to 1/gamma) %d\n",
              eps_violations, lambda_violations);
  std::printf("wrote %s\n", path.c_str());
  return kExitOk;
}

struct SensitivityOptions {
  double epsilon = 0.01;
  double delta = 0.00135;
  double gamma = 0.1;
  double lambda2 = 1.0;
  int n = 10;
  double b = 1.0;
};

int RunSensitivity(const SensitivityOptions& opt) {
  const dpf_sensitivity_point point{opt.epsilon, opt.delta, opt.b,
                                    opt.gamma,   opt.n,     opt.lambda2};
  dpf_sensitivity_report r{};
  Check(dpf_sensitivity_compare(&point, &r), "sensitivity");
  auto verdict = [](int topology) {
    return topology ? "topology_dominant" : "epsilon_dominant";
  };
  std::printf("d e_ss / d epsilon     %s\n", Num(r.d_epsilon).c_str());
  std::printf("d e_ss / d lambda2     %s\n", Num(r.d_lambda2).c_str());
  std::printf("verdict                %s\n", verdict(r.topology_dominant));
  std::printf("proof quadratic        %s (%s, %s)\n", Num(r.quadratic).c_str(),
              verdict(r.quadratic_topology_dominant),
              r.quadratic_agrees ? "agrees" : "DISAGREES with partials");
  std::printf("alpha                  %s\n", Num(r.cutoffs.alpha).c_str());
  std::printf("eta1                   %s\n", Num(r.cutoffs.eta1).c_str());
  std::printf("eta2                   %s\n", Num(r.cutoffs.eta2).c_str());
  std::printf("above cutoff           %s (topology dominant for larger lambda2)\n",
              Num(r.cutoffs.above_cutoff).c_str());
  if (std::isnan(r.cutoffs.below_cutoff)) {
    std::printf("below cutoff           undefined (radicand %s < 0)\n",
                Num(r.cutoffs.below_radicand).c_str());
  } else {
    std::printf(
        "below cutoff           %s (topology dominant for smaller lambda2)\n",
        Num(r.cutoffs.below_cutoff).c_str());
  }
  std::printf("cutoff verdict         %s (%s)\n",
              verdict(r.cutoff_topology_dominant),
              r.cutoff_agrees ? "agrees" : "DISAGREES with partials");
  if (!r.in_validity_region) {
    std::printf(
        "note: lambda2 >= 1/gamma; the partials are only both negative for "
        "lambda2 < 1/gamma, so the verdict is outside its validity region\n");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private formation control: simulation, "
               "error bounds, privacy design and sensitivity analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", dpf_version());

  RunOptions sim_opt;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo run with CSV output and the error bound");
  AddRunFlags(simulate, sim_opt);
  simulate->add_option("--jobs", sim_opt.jobs,
                       "Worker threads (default: available parallelism)");
  simulate->add_option("--out", sim_opt.out_dir, "Output directory");
  simulate->add_flag("--noiseless", sim_opt.noiseless,
                     "Force every noise scale to zero");

  RunOptions bound_opt;
  CLI::App* bounds = app.add_subcommand(
      "bounds", "Steady-state error bounds and exact values for a config");
  AddRunFlags(bounds, bound_opt);

  DesignOptions design_opt;
  CLI::App* design = app.add_subcommand(
      "design", "Smallest epsilon meeting a target steady-state error");
  design->add_option("--kind", design_opt.kind, "complete, cycle, line or star")
      ->check(CLI::IsMember({"complete", "cycle", "line", "star"}));
  design->add_option("--n", design_opt.n, "Number of agents");
  design->add_option("--delta", design_opt.delta, "Privacy delta");
  design->add_option("--b", design_opt.b, "Adjacency parameter");
  design->add_option("--w", design_opt.w, "Edge weight");
  design->add_option("--gamma", design_opt.gamma, "Step size");
  design->add_option("--e-r", design_opt.target_error, "Target error");
  design->add_flag("--table1", design_opt.table1,
                   "Four topologies at N = 10, 100, 1000, 10000");

  SweepOptions sweep_opt;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Bound over an (epsilon, lambda2) grid as CSV");
  sweep->add_option("--n", sweep_opt.n, "Number of agents");
  sweep->add_option("--delta", sweep_opt.delta, "Privacy delta");
  sweep->add_option("--gamma", sweep_opt.gamma, "Step size");
  sweep->add_option("--b", sweep_opt.b, "Adjacency parameter");
  sweep->add_option("--eps-min", sweep_opt.eps_min, "Smallest epsilon");
  sweep->add_option("--eps-max", sweep_opt.eps_max, "Largest epsilon");
  sweep->add_option("--eps-steps", sweep_opt.eps_steps, "Epsilon grid size");
  sweep->add_option("--lambda2-max", sweep_opt.lambda2_max,
                    "Largest lambda2 (grid spans (0, max])");
  sweep->add_option("--lambda2-steps", sweep_opt.lambda2_steps,
                    "Lambda2 grid size");
  sweep->add_option("--out", sweep_opt.out_dir, "Output directory");

  SensitivityOptions sens_opt;
  CLI::App* sensitivity = app.add_subcommand(
      "sensitivity", "Partials of the bound and the topology cutoffs");
  sensitivity->add_option("--epsilon", sens_opt.epsilon, "Privacy epsilon");
  sensitivity->add_option("--delta", sens_opt.delta, "Privacy delta");
  sensitivity->add_option("--gamma", sens_opt.gamma, "Step size");
  sensitivity->add_option("--lambda2", sens_opt.lambda2,
                          "Algebraic connectivity");
  sensitivity->add_option("--n", sens_opt.n, "Number of agents");
  sensitivity->add_option("--b", sens_opt.b, "Adjacency parameter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*simulate) return RunSimulate(simulate, sim_opt);
    if (*bounds) return RunBounds(bounds, bound_opt);
    if (*design) return RunDesign(design_opt);
    if (*sweep) return RunSweep(sweep_opt);
    if (*sensitivity) return RunSensitivity(sens_opt);
  } catch (const CommandError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return ExitCodeFor(e.status);
  }
  return kExitOther;
}
