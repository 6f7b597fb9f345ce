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

#ifndef DPFORM_REPORT_H_
#define DPFORM_REPORT_H_

#include <ostream>
#include <string>

#include "dpform/bounds.h"
#include "dpform/formation.h"

namespace dpform {

// Shortest decimal text that parses back to exactly `value`.
std::string RoundTrip(double value);

// step,agent,dimension,state,error for the first trial (1-based agent and
// dimension indices).
void WriteTrajectoryCsv(std::ostream& out, const SimulationResult& result,
                        const Eigen::MatrixXd& anchors);

// step,dimension,e_agg_mean,e_agg_ci.
void WriteSummaryCsv(std::ostream& out, const SimulationResult& result);

// epsilon,lambda2,bound.
void WriteSurfaceCsv(std::ostream& out, const BoundSurface& surface);

// Writes trajectory.csv, summary.csv and config.json into `dir`, creating it
// if needed.
void WriteSimulationOutputs(const std::string& dir,
                            const SimulationResult& result,
                            const Eigen::MatrixXd& anchors,
                            const std::string& config_json);

}  // namespace dpform

#endif  // DPFORM_REPORT_H_
