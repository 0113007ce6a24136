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

#ifndef QISEP_EXPERIMENT_HPP_
#define QISEP_EXPERIMENT_HPP_

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qisep/config.hpp"
#include "qisep/manifest.hpp"
#include "qisep/mixture.hpp"
#include "qisep/recipes.hpp"
#include "qisep/report.hpp"
#include "qisep/sepmodel.hpp"

namespace qisep {

// One mixture with its references and realized noise, ready to separate.
struct EntryData {
  std::string name;
  std::vector<double> mixture;
  std::vector<std::vector<double>> references;
  std::vector<double> noise;
  double sample_rate = 0.0;
};

EntryData entry_from_mixture(const std::string& name, const MixtureResult& m);
EntryData entry_from_manifest(const ManifestEntry& entry);

struct PipelineResult {
  SeparatedSources sources;  // aligned to the references, post-processed
  MaskParams masks;
  double best_fitness = 0.0;
  FitnessTrace trace;
  std::vector<EvalTriple> per_source;
  MetricClamps clamps;
  bool declip_all_clipped = false;
  double fidelity_diagnostic = -1.0;
  std::map<std::string, double> timing_s;
};

// Per-mixture optimization: genome -> band masks -> aligned fitness, then
// post-processing and metrics on the winner.
PipelineResult separate_supervised(const EntryData& entry,
                                   const RunConfig& config);

// Applies fixed mask parameters (no optimization), then post-processing and
// metrics.
PipelineResult apply_mask_params(const EntryData& entry,
                                 const MaskParams& params,
                                 const RunConfig& config);

// Optimizes one genome whose fitness is the mean over the training entries.
// All entries must share source count and sample rate.
MaskParams train_transfer(const std::vector<EntryData>& train,
                          const RunConfig& config, FitnessTrace* trace = nullptr,
                          double* best_fitness = nullptr);

struct ExperimentOptions {
  RunConfig config;
  std::string mode = "batch";  // "batch" or "datasize"
  std::optional<std::string> manifest_path;  // otherwise synthetic recipe
  RecipeConfig recipe;
  std::size_t n_mixtures = 6;  // batch mode synthetic entry count
  std::size_t n_train = 8;     // datasize mode synthetic counts
  std::size_t n_test = 3;
  std::vector<double> fractions = {0.10, 0.25, 0.50, 0.75};
};

struct FractionRow {
  double fraction = 0.0;
  std::size_t n_train_used = 0;
  double mean_sdr = 0.0;
  double mean_sir = 0.0;
  double mean_sar = 0.0;
  bool degenerate_masks = false;
  MaskParams params;
};

struct ExperimentResult {
  std::vector<SeparationReport> reports;
  std::vector<FractionRow> fraction_rows;  // datasize mode only
  // Trace CSV contents keyed by file name (the names reports point at).
  std::map<std::string, std::string> trace_files;
  std::vector<std::string> errors;  // per-entry failures
  int exit_code = 0;                // 0 ok, 1 partial failure
};

// Runs the configured experiment; pure computation, no file output.
// Failing entries are recorded and skipped, they do not abort the batch.
ExperimentResult run_experiment(const ExperimentOptions& options);

// Writes reports (JSON), traces (CSV), summaries and optional audio under
// config.out_dir.
void write_experiment_outputs(const ExperimentResult& result,
                              const ExperimentOptions& options);

// Mask parameter (de)serialization used by transfer mode.
nlohmann::json mask_params_to_json(const MaskParams& params);
MaskParams mask_params_from_json(const nlohmann::json& j);

// True when no band distinguishes any pair of sources (all-equal masks).
bool masks_degenerate(const MaskParams& params);

}  // namespace qisep

#endif  // QISEP_EXPERIMENT_HPP_
