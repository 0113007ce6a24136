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

#include "qisep/report.hpp"

#include <sstream>
#include <stdexcept>

namespace qisep {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error("report schema violation: " + what);
}

}  // namespace

nlohmann::json SeparationReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["entry"] = entry;
  j["mode"] = mode;
  j["per_source"] = nlohmann::json::array();
  for (const auto& t : per_source) {
    j["per_source"].push_back({{"sdr", t.sdr}, {"sir", t.sir}, {"sar", t.sar}});
  }
  j["fitness"] = {{"best", best_fitness},
                  {"generations", generations},
                  {"trace_csv", trace_csv}};
  j["config"] = config_snapshot;
  j["flags"] = {{"sdr_capped", clamps.sdr_capped},
                {"sir_denominator_clamped", clamps.sir_denominator},
                {"sar_clamped", clamps.sar_clamped},
                {"declip_all_clipped", declip_all_clipped}};
  if (fidelity_diagnostic >= 0.0) {
    j["diagnostics"] = {{"mean_frame_fidelity", fidelity_diagnostic}};
  }
  j["timing"] = timing_s;
  return j;
}

SeparationReport SeparationReport::from_json(const nlohmann::json& j) {
  validate_report_json(j);
  SeparationReport r;
  r.entry = j.at("entry").get<std::string>();
  r.mode = j.at("mode").get<std::string>();
  for (const auto& t : j.at("per_source")) {
    r.per_source.push_back({t.at("sdr").get<double>(),
                            t.at("sir").get<double>(),
                            t.at("sar").get<double>()});
  }
  r.best_fitness = j.at("fitness").at("best").get<double>();
  r.generations = j.at("fitness").at("generations").get<std::size_t>();
  r.trace_csv = j.at("fitness").at("trace_csv").get<std::string>();
  r.config_snapshot =
      j.at("config").get<std::map<std::string, std::string>>();
  r.clamps.sdr_capped = j.at("flags").at("sdr_capped").get<bool>();
  r.clamps.sir_denominator =
      j.at("flags").at("sir_denominator_clamped").get<bool>();
  r.clamps.sar_clamped = j.at("flags").at("sar_clamped").get<bool>();
  r.declip_all_clipped = j.at("flags").at("declip_all_clipped").get<bool>();
  if (j.contains("diagnostics")) {
    r.fidelity_diagnostic =
        j.at("diagnostics").at("mean_frame_fidelity").get<double>();
  }
  r.timing_s = j.at("timing").get<std::map<std::string, double>>();
  return r;
}

void validate_report_json(const nlohmann::json& j) {
  require(j.is_object(), "root must be an object");
  require(j.value("schema_version", 0) == 1, "schema_version must be 1");
  require(j.contains("entry") && j["entry"].is_string(), "entry: string");
  require(j.contains("mode") && j["mode"].is_string(), "mode: string");
  require(j.contains("per_source") && j["per_source"].is_array() &&
              !j["per_source"].empty(),
          "per_source: non-empty array");
  for (const auto& t : j["per_source"]) {
    require(t.is_object() && t.contains("sdr") && t.contains("sir") &&
                t.contains("sar") && t["sdr"].is_number() &&
                t["sir"].is_number() && t["sar"].is_number(),
            "per_source entries need numeric sdr/sir/sar");
  }
  require(j.contains("fitness") && j["fitness"].is_object(),
          "fitness: object");
  const auto& f = j["fitness"];
  require(f.contains("best") && f["best"].is_number(), "fitness.best: number");
  require(f.contains("generations") && f["generations"].is_number_unsigned(),
          "fitness.generations: unsigned");
  require(f.contains("trace_csv") && f["trace_csv"].is_string(),
          "fitness.trace_csv: string");
  require(j.contains("config") && j["config"].is_object(), "config: object");
  require(j.contains("flags") && j["flags"].is_object(), "flags: object");
  for (const char* key : {"sdr_capped", "sir_denominator_clamped",
                          "sar_clamped", "declip_all_clipped"}) {
    require(j["flags"].contains(key) && j["flags"][key].is_boolean(),
            std::string("flags.") + key + ": boolean");
  }
  require(j.contains("timing") && j["timing"].is_object(), "timing: object");
}

std::string trace_to_csv(const std::vector<double>& best,
                         const std::vector<double>& mean) {
  if (best.size() != mean.size()) {
    throw std::invalid_argument("trace_to_csv: length mismatch");
  }
  std::ostringstream out;
  out.precision(17);
  out << "generation,best,mean\n";
  for (std::size_t t = 0; t < best.size(); ++t) {
    out << t << "," << best[t] << "," << mean[t] << "\n";
  }
  return out.str();
}

std::string curve_to_csv(const std::vector<double>& curve) {
  std::ostringstream out;
  out.precision(17);
  out << "t,p_opt\n";
  for (std::size_t t = 0; t < curve.size(); ++t) {
    out << t << "," << curve[t] << "\n";
  }
  return out.str();
}

}  // namespace qisep
