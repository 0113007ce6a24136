// Copyright 2026 The qisep authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QISEP_REPORT_HPP_
#define QISEP_REPORT_HPP_

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qisep/metrics.hpp"

namespace qisep {

// Everything a single separation run leaves behind. Serialized as JSON with
// sorted keys, so identical runs yield byte-identical files apart from the
// "timing" subtree.
struct SeparationReport {
  std::string entry;
  std::string mode;  // "supervised" or "transfer"
  std::vector<EvalTriple> per_source;
  double best_fitness = 0.0;
  std::size_t generations = 0;
  std::string trace_csv;  // path of the exported trace, relative to out_dir
  std::map<std::string, std::string> config_snapshot;  // excludes io.out_dir
  MetricClamps clamps;
  bool declip_all_clipped = false;
  double fidelity_diagnostic = -1.0;  // mean frame-pair fidelity; -1 = off
  std::map<std::string, double> timing_s;

  nlohmann::json to_json() const;
  static SeparationReport from_json(const nlohmann::json& j);
};

// Structural validation against the published schema
// (docs/report_schema.json). Throws std::runtime_error on violations.
void validate_report_json(const nlohmann::json& j);

// CSV helpers shared by the CLI and the experiment driver.
std::string trace_to_csv(const std::vector<double>& best,
                         const std::vector<double>& mean);
std::string curve_to_csv(const std::vector<double>& curve);

}  // namespace qisep

#endif  // QISEP_REPORT_HPP_
