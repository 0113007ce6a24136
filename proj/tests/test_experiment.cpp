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

#include "qisep/experiment.hpp"

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "qisep/rng.hpp"

namespace qisep {
namespace {

namespace fs = std::filesystem;

RunConfig small_run_config() {
  RunConfig c;
  c.qiga.population_size = 12;
  c.qiga.max_generations = 8;
  c.qiga.seed = 5;
  c.n_bands = 8;
  c.frame_len = 256;
  c.hop = 128;
  c.sample_rate = 8000.0;
  return c;
}

RecipeConfig small_recipe() {
  RecipeConfig r;
  r.name = "tones";
  r.duration_s = 0.25;
  r.sample_rate = 8000.0;
  r.snr_db = 10.0;
  r.n_bands = 8;
  return r;
}

EntryData make_entry(std::uint64_t seed) {
  const RecipeConfig recipe = small_recipe();
  const MixtureResult m = synthesize_mixture(make_recipe(recipe, seed), seed);
  return entry_from_mixture("entry_" + std::to_string(seed), m);
}

TEST(SupervisedPipelineTest, ProducesAlignedReportableResult) {
  const EntryData entry = make_entry(3);
  const RunConfig config = small_run_config();
  const PipelineResult result = separate_supervised(entry, config);

  ASSERT_EQ(result.sources.signals.size(), 2u);
  EXPECT_EQ(result.sources.signals[0].size(), entry.mixture.size());
  ASSERT_EQ(result.per_source.size(), 2u);
  EXPECT_EQ(result.trace.generations(), 9u);
  // Elitism keeps the trace non-decreasing.
  for (std::size_t t = 1; t < result.trace.best.size(); ++t) {
    EXPECT_GE(result.trace.best[t], result.trace.best[t - 1]);
  }
  EXPECT_EQ(result.masks.n_sources, 2u);
  EXPECT_EQ(result.masks.n_bands, config.n_bands);
  EXPECT_GT(result.timing_s.at("total"), 0.0);
}

TEST(SupervisedPipelineTest, DeterministicForFixedSeed) {
  const EntryData entry = make_entry(4);
  const RunConfig config = small_run_config();
  const PipelineResult a = separate_supervised(entry, config);
  const PipelineResult b = separate_supervised(entry, config);
  EXPECT_EQ(a.best_fitness, b.best_fitness);
  EXPECT_EQ(a.trace.best, b.trace.best);
  EXPECT_EQ(a.sources.signals, b.sources.signals);
  for (std::size_t i = 0; i < a.per_source.size(); ++i) {
    EXPECT_EQ(a.per_source[i].sdr, b.per_source[i].sdr);
  }
}

TEST(SupervisedPipelineTest, EncodeDiagnosticIsOptional) {
  const EntryData entry = make_entry(5);
  RunConfig config = small_run_config();
  config.qiga.max_generations = 2;
  EXPECT_EQ(separate_supervised(entry, config).fidelity_diagnostic, -1.0);
  config.encode_diagnostic = true;
  const double f = separate_supervised(entry, config).fidelity_diagnostic;
  EXPECT_GE(f, 0.0);
  EXPECT_LE(f, 1.0);
}

TEST(TransferTest, TrainThenApplyKeepsSourceCount) {
  std::vector<EntryData> train = {make_entry(10), make_entry(11)};
  RunConfig config = small_run_config();
  config.qiga.max_generations = 5;
  FitnessTrace trace;
  double best = 0.0;
  const MaskParams params = train_transfer(train, config, &trace, &best);
  EXPECT_EQ(params.n_sources, 2u);
  EXPECT_EQ(params.n_bands, config.n_bands);
  EXPECT_EQ(trace.generations(), 6u);
  EXPECT_FALSE(masks_degenerate(params));

  const EntryData test_entry = make_entry(99);
  const PipelineResult applied =
      apply_mask_params(test_entry, params, config);
  EXPECT_EQ(applied.per_source.size(), 2u);
  EXPECT_EQ(applied.trace.generations(), 0u);
}

TEST(TransferTest, MixedEntriesRejected) {
  std::vector<EntryData> train = {make_entry(12)};
  EntryData other = make_entry(13);
  other.references.pop_back();  // different source count
  train.push_back(other);
  EXPECT_THROW(train_transfer(train, small_run_config()),
               std::invalid_argument);
  EXPECT_THROW(train_transfer({}, small_run_config()), std::invalid_argument);
}

TEST(MaskParamsJsonTest, RoundTrip) {
  MaskParams params;
  params.n_sources = 2;
  params.n_bands = 3;
  params.gains = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  params.band_edges = {0.0, 100.0, 1000.0, 4000.0};
  const MaskParams back = mask_params_from_json(mask_params_to_json(params));
  EXPECT_EQ(back.gains, params.gains);
  EXPECT_EQ(back.band_edges, params.band_edges);

  nlohmann::json broken = mask_params_to_json(params);
  broken["gains"] = std::vector<double>{0.1};
  EXPECT_THROW(mask_params_from_json(broken), std::runtime_error);
}

TEST(MasksDegenerateTest, DetectsAllEqualMasks) {
  MaskParams params;
  params.n_sources = 2;
  params.n_bands = 2;
  params.gains = {0.5, 0.5, 0.5, 0.5};
  params.band_edges = {0.0, 1000.0, 4000.0};
  EXPECT_TRUE(masks_degenerate(params));
  params.gains[0] = 0.9;
  EXPECT_FALSE(masks_degenerate(params));
}

TEST(ExperimentTest, BatchModeWritesReportsAndTraces) {
  ExperimentOptions options;
  options.config = small_run_config();
  options.config.qiga.max_generations = 3;
  options.config.out_dir =
      (fs::temp_directory_path() / "qisep_exp_batch").string();
  options.recipe = small_recipe();
  options.n_mixtures = 2;
  fs::remove_all(options.config.out_dir);

  const ExperimentResult result = run_experiment(options);
  EXPECT_EQ(result.exit_code, 0);
  ASSERT_EQ(result.reports.size(), 2u);
  EXPECT_EQ(result.trace_files.size(), 2u);
  for (const auto& report : result.reports) {
    EXPECT_EQ(report.mode, "supervised");
    EXPECT_NO_THROW(validate_report_json(report.to_json()));
    EXPECT_EQ(report.config_snapshot.count("io.out_dir"), 0u);
  }

  write_experiment_outputs(result, options);
  EXPECT_TRUE(fs::exists(fs::path(options.config.out_dir) /
                         "report_mix_000.json"));
  EXPECT_TRUE(fs::exists(fs::path(options.config.out_dir) /
                         "trace_mix_001.csv"));
  EXPECT_TRUE(fs::exists(fs::path(options.config.out_dir) / "summary.csv"));
  fs::remove_all(options.config.out_dir);
}

TEST(ExperimentTest, DatasizeModeEmitsFractionRows) {
  ExperimentOptions options;
  options.mode = "datasize";
  options.config = small_run_config();
  options.config.qiga.population_size = 8;
  options.config.qiga.max_generations = 3;
  options.recipe = small_recipe();
  options.recipe.name = "ambands";
  options.n_train = 4;
  options.n_test = 2;
  options.config.out_dir =
      (fs::temp_directory_path() / "qisep_exp_ds").string();
  fs::remove_all(options.config.out_dir);

  const ExperimentResult result = run_experiment(options);
  EXPECT_EQ(result.exit_code, 0);
  ASSERT_EQ(result.fraction_rows.size(), 4u);
  EXPECT_EQ(result.fraction_rows[0].fraction, 0.10);
  EXPECT_EQ(result.fraction_rows[0].n_train_used, 1u);
  EXPECT_EQ(result.fraction_rows[3].n_train_used, 3u);
  // Transfer reports: fractions x test entries.
  EXPECT_EQ(result.reports.size(), 4u * options.n_test);

  write_experiment_outputs(result, options);
  EXPECT_TRUE(fs::exists(fs::path(options.config.out_dir) /
                         "datasize_summary.csv"));
  EXPECT_TRUE(fs::exists(fs::path(options.config.out_dir) /
                         "params_frac25.json"));
  fs::remove_all(options.config.out_dir);
}

TEST(ExperimentTest, UnknownModeIsConfigError) {
  ExperimentOptions options;
  options.config = small_run_config();
  options.mode = "mystery";
  EXPECT_THROW(run_experiment(options), ConfigError);
}

TEST(ExperimentTest, ReportsAreByteIdenticalAcrossRuns) {
  ExperimentOptions options;
  options.config = small_run_config();
  options.config.qiga.max_generations = 3;
  options.recipe = small_recipe();
  options.n_mixtures = 1;

  const ExperimentResult a = run_experiment(options);
  options.config.out_dir = "elsewhere";  // must not affect report bytes
  const ExperimentResult b = run_experiment(options);
  ASSERT_EQ(a.reports.size(), 1u);
  ASSERT_EQ(b.reports.size(), 1u);

  nlohmann::json ja = a.reports[0].to_json();
  nlohmann::json jb = b.reports[0].to_json();
  ja.erase("timing");
  jb.erase("timing");
  EXPECT_EQ(ja.dump(2), jb.dump(2));
  EXPECT_EQ(a.trace_files, b.trace_files);
}

}  // namespace
}  // namespace qisep
