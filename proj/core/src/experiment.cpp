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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qisep/metrics.hpp"
#include "qisep/qstate.hpp"
#include "qisep/rng.hpp"
#include "qisep/wav.hpp"

namespace qisep {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t tag,
                       std::uint64_t index) {
  return RngStream::keyed(seed, RngOp::kRecipe, tag, index).next_u64();
}

std::string zero_pad(std::size_t value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

SeparatedSources align_estimates(const SeparatedSources& estimates,
                                 const std::vector<std::vector<double>>& refs) {
  const std::vector<std::size_t> perm = align_sources(refs, estimates.signals);
  SeparatedSources aligned;
  aligned.signals.resize(refs.size());
  for (std::size_t i = 0; i < refs.size(); ++i) {
    aligned.signals[i] = estimates.signals[perm[i]];
  }
  return aligned;
}

// Mean fidelity between the encoded states of consecutive MFCC frames; a
// cheap correlation diagnostic on the feature encoding.
double encoding_diagnostic(const EntryData& entry, const RunConfig& config) {
  StftConfig stft_cfg = config.stft_config();
  stft_cfg.sample_rate = entry.sample_rate;
  const MfccMatrix m =
      mfcc(entry.mixture, stft_cfg, config.n_mels, config.n_mfcc);
  if (m.frames.size() < 2) return -1.0;
  const FeatureScaler scaler = FeatureScaler::fit(m);
  auto angles = scale_mfcc(m, scaler);
  const std::size_t frames = std::min<std::size_t>(angles.size(), 9);
  std::vector<StateVector4> states;
  for (std::size_t t = 0; t < frames; ++t) {
    std::vector<double> a = angles[t];
    if (a.size() % 2 != 0) a.push_back(0.0);
    states.push_back(encode_features(a));
  }
  double acc = 0.0;
  for (std::size_t t = 0; t + 1 < states.size(); ++t) {
    acc += fidelity(states[t], states[t + 1]);
  }
  return acc / static_cast<double>(states.size() - 1);
}

struct PreparedEntry {
  const EntryData* entry = nullptr;
  Spectrogram spectrogram;
};

PreparedEntry prepare(const EntryData& entry, const RunConfig& config) {
  if (entry.references.empty()) {
    throw std::invalid_argument("entry '" + entry.name + "' has no references");
  }
  for (const auto& ref : entry.references) {
    if (ref.size() != entry.mixture.size()) {
      throw std::invalid_argument("entry '" + entry.name +
                                  "': reference length mismatch");
    }
  }
  if (!entry.noise.empty() && entry.noise.size() != entry.mixture.size()) {
    throw std::invalid_argument("entry '" + entry.name +
                                "': noise length mismatch");
  }
  StftConfig stft_cfg = config.stft_config();
  stft_cfg.sample_rate = entry.sample_rate;
  PreparedEntry prepared;
  prepared.entry = &entry;
  prepared.spectrogram = stft(entry.mixture, stft_cfg);
  return prepared;
}

std::vector<double> noise_or_zeros(const EntryData& entry) {
  if (!entry.noise.empty()) return entry.noise;
  return std::vector<double>(entry.mixture.size(), 0.0);
}

double entry_fitness(const PreparedEntry& prepared, const MaskParams& params,
                     const RunConfig& config,
                     const std::vector<double>& noise) {
  const EntryData& entry = *prepared.entry;
  SeparatedSources est =
      apply_masks(prepared.spectrogram, params, entry.mixture.size());
  SeparatedSources aligned = align_estimates(est, entry.references);
  return fitness(aligned, entry.references, noise, config.weights);
}

PipelineResult finish_pipeline(const PreparedEntry& prepared,
                               const MaskParams& params,
                               const RunConfig& config) {
  const EntryData& entry = *prepared.entry;
  const std::vector<double> noise = noise_or_zeros(entry);

  SeparatedSources est =
      apply_masks(prepared.spectrogram, params, entry.mixture.size());
  SeparatedSources aligned = align_estimates(est, entry.references);

  PipelineResult result;
  result.masks = params;
  PostprocFlags pflags;
  for (auto& signal : aligned.signals) {
    signal = postprocess(signal, config.postproc, entry.sample_rate, &pflags);
  }
  result.declip_all_clipped = pflags.declip_all_clipped;
  result.sources = std::move(aligned);
  for (std::size_t i = 0; i < entry.references.size(); ++i) {
    result.per_source.push_back(evaluate_triple(
        entry.references[i], result.sources.signals[i], noise,
        &result.clamps));
  }
  return result;
}

}  // namespace

EntryData entry_from_mixture(const std::string& name, const MixtureResult& m) {
  EntryData entry;
  entry.name = name;
  entry.mixture = m.mixture;
  entry.references = m.references;
  entry.noise = m.noise;
  entry.sample_rate = m.sample_rate;
  return entry;
}

EntryData entry_from_manifest(const ManifestEntry& manifest_entry) {
  EntryData entry;
  entry.name = fs::path(manifest_entry.mixture).stem().string();
  const WavData mix = read_wav(manifest_entry.mixture);
  entry.mixture = mix.samples;
  entry.sample_rate = static_cast<double>(mix.sample_rate);
  for (const auto& ref_path : manifest_entry.references) {
    const WavData ref = read_wav(ref_path);
    if (ref.sample_rate != mix.sample_rate) {
      throw std::runtime_error("entry '" + manifest_entry.mixture +
                               "': sample-rate mismatch with reference '" +
                               ref_path + "'");
    }
    std::vector<double> samples = ref.samples;
    samples.resize(entry.mixture.size(), 0.0);
    entry.references.push_back(std::move(samples));
  }
  if (manifest_entry.noise) {
    const WavData noise = read_wav(*manifest_entry.noise);
    if (noise.sample_rate != mix.sample_rate) {
      throw std::runtime_error("entry '" + manifest_entry.mixture +
                               "': sample-rate mismatch with noise '" +
                               *manifest_entry.noise + "'");
    }
    entry.noise = noise.samples;
    entry.noise.resize(entry.mixture.size(), 0.0);
  }
  return entry;
}

PipelineResult separate_supervised(const EntryData& entry,
                                   const RunConfig& config) {
  config.validate();
  const auto t_start = Clock::now();
  const PreparedEntry prepared = prepare(entry, config);
  const std::vector<double> noise = noise_or_zeros(entry);
  const std::size_t n_sources = entry.references.size();
  const std::size_t genome_len = n_sources * config.n_bands;

  const auto evaluator = [&](const Genome& g) {
    const MaskParams params =
        decode_genome(g, n_sources, config.n_bands, entry.sample_rate);
    return entry_fitness(prepared, params, config, noise);
  };

  const auto t_opt = Clock::now();
  const QigaResult ga = run(config.qiga, genome_len, evaluator);
  const double optimize_s = seconds_since(t_opt);

  const MaskParams best_params =
      decode_genome(ga.best, n_sources, config.n_bands, entry.sample_rate);
  PipelineResult result = finish_pipeline(prepared, best_params, config);
  result.best_fitness = ga.best_fitness;
  result.trace = ga.trace;
  if (config.encode_diagnostic) {
    result.fidelity_diagnostic = encoding_diagnostic(entry, config);
  }
  result.timing_s["optimize"] = optimize_s;
  result.timing_s["total"] = seconds_since(t_start);
  return result;
}

PipelineResult apply_mask_params(const EntryData& entry,
                                 const MaskParams& params,
                                 const RunConfig& config) {
  config.validate();
  const auto t_start = Clock::now();
  const PreparedEntry prepared = prepare(entry, config);
  if (params.n_sources != entry.references.size()) {
    throw std::invalid_argument("apply_mask_params: source count mismatch");
  }
  PipelineResult result = finish_pipeline(prepared, params, config);
  result.best_fitness =
      entry_fitness(prepared, params, config, noise_or_zeros(entry));
  result.timing_s["total"] = seconds_since(t_start);
  return result;
}

MaskParams train_transfer(const std::vector<EntryData>& train,
                          const RunConfig& config, FitnessTrace* trace,
                          double* best_fitness) {
  config.validate();
  if (train.empty()) {
    throw std::invalid_argument("train_transfer: empty training set");
  }
  const std::size_t n_sources = train.front().references.size();
  const double sample_rate = train.front().sample_rate;
  std::vector<PreparedEntry> prepared;
  std::vector<std::vector<double>> noises;
  prepared.reserve(train.size());
  for (const auto& entry : train) {
    if (entry.references.size() != n_sources ||
        entry.sample_rate != sample_rate) {
      throw std::invalid_argument(
          "train_transfer: entries must share source count and sample rate");
    }
    prepared.push_back(prepare(entry, config));
    noises.push_back(noise_or_zeros(entry));
  }

  const std::size_t genome_len = n_sources * config.n_bands;
  const auto evaluator = [&](const Genome& g) {
    const MaskParams params =
        decode_genome(g, n_sources, config.n_bands, sample_rate);
    double acc = 0.0;
    for (std::size_t e = 0; e < prepared.size(); ++e) {
      acc += entry_fitness(prepared[e], params, config, noises[e]);
    }
    return acc / static_cast<double>(prepared.size());
  };

  const QigaResult ga = run(config.qiga, genome_len, evaluator);
  if (trace) *trace = ga.trace;
  if (best_fitness) *best_fitness = ga.best_fitness;
  return decode_genome(ga.best, n_sources, config.n_bands, sample_rate);
}

bool masks_degenerate(const MaskParams& params) {
  if (params.n_sources < 2) return false;
  double spread = 0.0;
  for (std::size_t b = 0; b < params.n_bands; ++b) {
    double lo = params.gain(0, b), hi = params.gain(0, b);
    for (std::size_t i = 1; i < params.n_sources; ++i) {
      lo = std::min(lo, params.gain(i, b));
      hi = std::max(hi, params.gain(i, b));
    }
    spread = std::max(spread, hi - lo);
  }
  return spread < 1e-6;
}

namespace {

SeparationReport make_report(const std::string& entry_name,
                             const std::string& mode,
                             const PipelineResult& pipeline,
                             const RunConfig& config,
                             const std::string& trace_csv) {
  SeparationReport report;
  report.entry = entry_name;
  report.mode = mode;
  report.per_source = pipeline.per_source;
  report.best_fitness = pipeline.best_fitness;
  report.generations = pipeline.trace.generations();
  report.trace_csv = trace_csv;
  report.config_snapshot = config.to_map();
  // The output directory is environment, not configuration of the result;
  // dropping it keeps reports byte-identical across destinations.
  report.config_snapshot.erase("io.out_dir");
  report.clamps = pipeline.clamps;
  report.declip_all_clipped = pipeline.declip_all_clipped;
  report.fidelity_diagnostic = pipeline.fidelity_diagnostic;
  report.timing_s = pipeline.timing_s;
  return report;
}

std::vector<EntryData> synthetic_entries(const ExperimentOptions& options,
                                         std::uint64_t tag, std::size_t count,
                                         const std::string& prefix) {
  std::vector<EntryData> entries;
  entries.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint64_t seed = sub_seed(options.config.qiga.seed, tag, k);
    const MixtureResult m =
        synthesize_mixture(make_recipe(options.recipe, seed), seed);
    entries.push_back(entry_from_mixture(prefix + zero_pad(k, 3), m));
  }
  return entries;
}

void run_batch(const ExperimentOptions& options, ExperimentResult& result) {
  std::vector<EntryData> entries;
  if (options.manifest_path) {
    const DatasetManifest manifest = read_manifest(*options.manifest_path);
    for (const auto& me : manifest.entries) {
      try {
        entries.push_back(entry_from_manifest(me));
      } catch (const std::exception& e) {
        result.errors.push_back(e.what());
      }
    }
  } else {
    entries = synthetic_entries(options, 1, options.n_mixtures, "mix_");
  }
  for (const auto& entry : entries) {
    try {
      const PipelineResult pipeline =
          separate_supervised(entry, options.config);
      const std::string trace_name = "trace_" + entry.name + ".csv";
      result.trace_files[trace_name] =
          trace_to_csv(pipeline.trace.best, pipeline.trace.mean);
      result.reports.push_back(make_report(entry.name, "supervised", pipeline,
                                           options.config, trace_name));
    } catch (const std::exception& e) {
      result.errors.push_back("entry '" + entry.name + "': " + e.what());
    }
  }
}

void run_datasize(const ExperimentOptions& options, ExperimentResult& result) {
  const std::vector<EntryData> train =
      synthetic_entries(options, 2, options.n_train, "train_");
  const std::vector<EntryData> test =
      synthetic_entries(options, 3, options.n_test, "test_");

  for (std::size_t fi = 0; fi < options.fractions.size(); ++fi) {
    const double fraction = options.fractions[fi];
    const std::size_t n_used = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(
               fraction * static_cast<double>(options.n_train))));

    // Seeded subsample of the training entries.
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    RngStream rng =
        RngStream::keyed(options.config.qiga.seed, RngOp::kSubsample, fi);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      const std::size_t j = i + rng.uniform_index(order.size() - i);
      std::swap(order[i], order[j]);
    }
    std::vector<EntryData> subset;
    for (std::size_t i = 0; i < std::min(n_used, order.size()); ++i) {
      subset.push_back(train[order[i]]);
    }

    try {
      FractionRow row;
      row.fraction = fraction;
      row.n_train_used = subset.size();
      FitnessTrace train_trace;
      row.params = train_transfer(subset, options.config, &train_trace);
      row.degenerate_masks = masks_degenerate(row.params);

      const std::string pct =
          std::to_string(static_cast<int>(std::llround(fraction * 100.0)));
      const std::string trace_name = "trace_train_frac" + pct + ".csv";
      result.trace_files[trace_name] =
          trace_to_csv(train_trace.best, train_trace.mean);

      double sum_sdr = 0.0, sum_sir = 0.0, sum_sar = 0.0;
      std::size_t count = 0;
      for (const auto& entry : test) {
        const PipelineResult pipeline =
            apply_mask_params(entry, row.params, options.config);
        for (const auto& t : pipeline.per_source) {
          sum_sdr += t.sdr;
          sum_sir += t.sir;
          sum_sar += t.sar;
          ++count;
        }
        result.reports.push_back(make_report(entry.name + "_frac" + pct,
                                             "transfer", pipeline,
                                             options.config, trace_name));
      }
      row.mean_sdr = sum_sdr / static_cast<double>(count);
      row.mean_sir = sum_sir / static_cast<double>(count);
      row.mean_sar = sum_sar / static_cast<double>(count);
      result.fraction_rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      result.errors.push_back("fraction " + std::to_string(fraction) + ": " +
                              e.what());
    }
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentOptions& options) {
  options.config.validate();
  options.recipe.validate();
  if (options.mode != "batch" && options.mode != "datasize") {
    throw ConfigError("experiment: unknown mode '" + options.mode + "'");
  }
  ExperimentResult result;
  if (options.mode == "batch") {
    run_batch(options, result);
  } else {
    run_datasize(options, result);
  }
  result.exit_code = result.errors.empty() ? 0 : 1;
  return result;
}

void write_experiment_outputs(const ExperimentResult& result,
                              const ExperimentOptions& options) {
  const fs::path out_dir = options.config.out_dir;
  fs::create_directories(out_dir);

  for (const auto& report : result.reports) {
    std::ofstream json_out(out_dir / ("report_" + report.entry + ".json"));
    json_out << report.to_json().dump(2) << "\n";
  }
  for (const auto& [name, csv] : result.trace_files) {
    std::ofstream trace_out(out_dir / name);
    trace_out << csv;
  }

  std::ostringstream summary;
  summary.precision(17);
  summary << "entry,mode,mean_sdr,mean_sir,mean_sar,best_fitness\n";
  for (const auto& report : result.reports) {
    double s = 0, i = 0, a = 0;
    for (const auto& t : report.per_source) {
      s += t.sdr;
      i += t.sir;
      a += t.sar;
    }
    const double n = static_cast<double>(report.per_source.size());
    summary << report.entry << "," << report.mode << "," << s / n << ","
            << i / n << "," << a / n << "," << report.best_fitness << "\n";
  }
  std::ofstream summary_out(out_dir / "summary.csv");
  summary_out << summary.str();

  if (!result.fraction_rows.empty()) {
    std::ostringstream ds;
    ds.precision(17);
    ds << "fraction,n_train,mean_sdr,mean_sir,mean_sar,degenerate\n";
    for (const auto& row : result.fraction_rows) {
      ds << row.fraction << "," << row.n_train_used << "," << row.mean_sdr
         << "," << row.mean_sir << "," << row.mean_sar << ","
         << (row.degenerate_masks ? "true" : "false") << "\n";
      const std::string pct =
          std::to_string(static_cast<int>(std::llround(row.fraction * 100.0)));
      std::ofstream params_out(out_dir / ("params_frac" + pct + ".json"));
      params_out << mask_params_to_json(row.params).dump(2) << "\n";
    }
    std::ofstream ds_out(out_dir / "datasize_summary.csv");
    ds_out << ds.str();
  }

  if (!result.errors.empty()) {
    std::ofstream err_out(out_dir / "errors.log");
    for (const auto& e : result.errors) err_out << e << "\n";
  }
}

nlohmann::json mask_params_to_json(const MaskParams& params) {
  nlohmann::json j;
  j["n_sources"] = params.n_sources;
  j["n_bands"] = params.n_bands;
  j["gains"] = params.gains;
  j["band_edges"] = params.band_edges;
  return j;
}

MaskParams mask_params_from_json(const nlohmann::json& j) {
  MaskParams params;
  params.n_sources = j.at("n_sources").get<std::size_t>();
  params.n_bands = j.at("n_bands").get<std::size_t>();
  params.gains = j.at("gains").get<std::vector<double>>();
  params.band_edges = j.at("band_edges").get<std::vector<double>>();
  if (params.gains.size() != params.n_sources * params.n_bands ||
      params.band_edges.size() != params.n_bands + 1) {
    throw std::runtime_error("mask_params_from_json: inconsistent sizes");
  }
  return params;
}

}  // namespace qisep
