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

#include "dpform/report.h"

#include <charconv>
#include <filesystem>
#include <fstream>

#include "dpform/error.h"

namespace dpform {

std::string RoundTrip(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) Fail(ErrorCode::kInternal, "number formatting");
  return std::string(buf, end);
}

void WriteTrajectoryCsv(std::ostream& out, const SimulationResult& result,
                        const Eigen::MatrixXd& anchors) {
  out << "step,agent,dimension,state,error\n";
  const int dims = static_cast<int>(result.first_trial.size());
  if (dims == 0) return;
  std::vector<ErrorSeries> errors;
  for (int l = 0; l < dims; ++l) {
    errors.push_back(ComputeErrorSeries(result.first_trial[l], anchors.col(l)));
  }
  const Eigen::Index steps = result.first_trial[0].rows();
  const Eigen::Index agents = result.first_trial[0].cols();
  for (Eigen::Index k = 0; k < steps; ++k) {
    for (Eigen::Index i = 0; i < agents; ++i) {
      for (int l = 0; l < dims; ++l) {
        out << k << ',' << i + 1 << ',' << l + 1 << ','
            << RoundTrip(result.first_trial[l](k, i)) << ','
            << RoundTrip(errors[l].error(k, i)) << '\n';
      }
    }
  }
}

void WriteSummaryCsv(std::ostream& out, const SimulationResult& result) {
  out << "step,dimension,e_agg_mean,e_agg_ci\n";
  for (std::size_t l = 0; l < result.e_agg_mean.size(); ++l) {
    for (std::size_t k = 0; k < result.e_agg_mean[l].size(); ++k) {
      out << k << ',' << l + 1 << ',' << RoundTrip(result.e_agg_mean[l][k])
          << ',' << RoundTrip(result.e_agg_ci[l][k]) << '\n';
    }
  }
}

void WriteSurfaceCsv(std::ostream& out, const BoundSurface& surface) {
  out << "epsilon,lambda2,bound\n";
  for (std::size_t i = 0; i < surface.epsilons.size(); ++i) {
    for (std::size_t j = 0; j < surface.lambda2s.size(); ++j) {
      out << RoundTrip(surface.epsilons[i]) << ','
          << RoundTrip(surface.lambda2s[j]) << ','
          << RoundTrip(surface.values[i][j]) << '\n';
    }
    // Blank line between scans for gnuplot's splot.
    out << '\n';
  }
}

void WriteSimulationOutputs(const std::string& dir,
                            const SimulationResult& result,
                            const Eigen::MatrixXd& anchors,
                            const std::string& config_json) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create output directory '" + dir + "'");
  auto open = [&](const char* name) {
    const std::filesystem::path path = std::filesystem::path(dir) / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) Fail(ErrorCode::kIo, "cannot write '" + path.string() + "'");
    return f;
  };
  {
    std::ofstream f = open("trajectory.csv");
    WriteTrajectoryCsv(f, result, anchors);
  }
  {
    std::ofstream f = open("summary.csv");
    WriteSummaryCsv(f, result);
  }
  {
    std::ofstream f = open("config.json");
    f << config_json << '\n';
  }
}

}  // namespace dpform
