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
//
// Command line front end: mix / separate / eval / encode / convergence /
// experiment.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qisep/config.hpp"
#include "qisep/experiment.hpp"
#include "qisep/manifest.hpp"
#include "qisep/metrics.hpp"
#include "qisep/mixture.hpp"
#include "qisep/qstate.hpp"
#include "qisep/recipes.hpp"
#include "qisep/report.hpp"
#include "qisep/wav.hpp"

namespace {

namespace fs = std::filesystem;
using qisep::ConfigError;
using qisep::RunConfig;

std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

std::vector<double> parse_taps(const std::string& s) {
  std::vector<double> taps;
  for (const auto& tok : split_list(s)) taps.push_back(std::stod(tok));
  if (taps.empty()) throw ConfigError("empty filter tap list");
  return taps;
}

RunConfig build_config(const std::string& config_path,
                       const std::vector<std::string>& overrides,
                       const std::string& out_dir) {
  RunConfig config =
      config_path.empty() ? RunConfig{} : qisep::load_config_file(config_path);
  std::map<std::string, std::string> kv;
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--set expects key=value, got '" + item + "'");
    }
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  config = qisep::apply_overrides(config, kv);
  if (!out_dir.empty()) config.out_dir = out_dir;
  config.validate();
  return config;
}

qisep::EntryData load_entry(const std::string& mixture_path,
                            const std::vector<std::string>& ref_paths,
                            const std::string& noise_path) {
  qisep::ManifestEntry entry;
  entry.mixture = mixture_path;
  entry.references = ref_paths;
  if (!noise_path.empty()) entry.noise = noise_path;
  return qisep::entry_from_manifest(entry);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int cmd_mix(const std::string& recipe_name, std::size_t n_sources,
            double duration, double sample_rate, double snr_db, bool no_noise,
            double band_overlap, const std::vector<std::string>& source_files,
            const std::string& filter_spec, std::uint64_t seed,
            const std::string& out_dir) {
  qisep::MixtureSpec spec;
  if (!source_files.empty()) {
    std::uint32_t rate = 0;
    for (const auto& path : source_files) {
      const qisep::WavData wav = qisep::read_wav(path);
      if (rate != 0 && wav.sample_rate != rate) {
        throw std::runtime_error("mix: sources disagree on sample rate");
      }
      rate = wav.sample_rate;
      spec.sources.push_back(wav.samples);
    }
    spec.sample_rate = static_cast<double>(rate);
    if (filter_spec.empty()) {
      spec.filters.assign(spec.sources.size(), {1.0});
    } else {
      for (const auto& taps : split_list(filter_spec, ';')) {
        spec.filters.push_back(parse_taps(taps));
      }
    }
    if (!no_noise) spec.target_snr_db = snr_db;
  } else {
    qisep::RecipeConfig recipe;
    recipe.name = recipe_name;
    recipe.n_sources = n_sources;
    recipe.duration_s = duration;
    recipe.sample_rate = sample_rate;
    recipe.band_overlap = band_overlap;
    recipe.snr_db = no_noise ? std::nullopt : std::optional<double>(snr_db);
    spec = qisep::make_recipe(recipe, seed);
  }

  const qisep::MixtureResult m = qisep::synthesize_mixture(spec, seed);
  fs::create_directories(out_dir);
  const auto rate = static_cast<std::uint32_t>(m.sample_rate);
  qisep::write_wav((fs::path(out_dir) / "mixture.wav").string(), m.mixture,
                   rate);
  qisep::DatasetManifest manifest;
  qisep::ManifestEntry entry;
  entry.mixture = "mixture.wav";
  for (std::size_t i = 0; i < m.references.size(); ++i) {
    const std::string name = "source_" + std::to_string(i) + ".wav";
    qisep::write_wav((fs::path(out_dir) / name).string(), m.references[i],
                     rate);
    entry.references.push_back(name);
  }
  qisep::write_wav((fs::path(out_dir) / "noise.wav").string(), m.noise, rate);
  entry.noise = "noise.wav";
  manifest.entries.push_back(entry);
  qisep::write_manifest(manifest, (fs::path(out_dir) / "manifest.tsv").string());

  std::cout << "wrote mixture with " << m.references.size() << " sources to "
            << out_dir << " (gain " << m.gain << ")\n";
  return 0;
}

int cmd_separate(const std::string& mixture_path,
                 const std::vector<std::string>& ref_paths,
                 const std::string& noise_path, const std::string& params_path,
                 const RunConfig& config) {
  qisep::EntryData entry = load_entry(mixture_path, ref_paths, noise_path);
  entry.name = fs::path(mixture_path).stem().string();

  qisep::PipelineResult result;
  std::string mode;
  if (params_path.empty()) {
    mode = "supervised";
    result = qisep::separate_supervised(entry, config);
  } else {
    mode = "transfer";
    std::ifstream in(params_path);
    if (!in) throw std::runtime_error("cannot open " + params_path);
    nlohmann::json j;
    in >> j;
    result = qisep::apply_mask_params(entry, qisep::mask_params_from_json(j),
                                      config);
  }

  fs::create_directories(config.out_dir);
  const auto rate = static_cast<std::uint32_t>(entry.sample_rate);
  if (config.write_audio) {
    for (std::size_t i = 0; i < result.sources.signals.size(); ++i) {
      qisep::write_wav((fs::path(config.out_dir) /
                        (entry.name + "_est_" + std::to_string(i) + ".wav"))
                           .string(),
                       result.sources.signals[i], rate);
    }
  }

  qisep::SeparationReport report;
  report.entry = entry.name;
  report.mode = mode;
  report.per_source = result.per_source;
  report.best_fitness = result.best_fitness;
  report.generations = result.trace.generations();
  report.trace_csv = "trace_" + entry.name + ".csv";
  report.config_snapshot = config.to_map();
  report.config_snapshot.erase("io.out_dir");
  report.clamps = result.clamps;
  report.declip_all_clipped = result.declip_all_clipped;
  report.fidelity_diagnostic = result.fidelity_diagnostic;
  report.timing_s = result.timing_s;
  write_text(fs::path(config.out_dir) / ("report_" + entry.name + ".json"),
             report.to_json().dump(2) + "\n");
  write_text(fs::path(config.out_dir) / report.trace_csv,
             qisep::trace_to_csv(result.trace.best, result.trace.mean));

  std::cout << "separated " << entry.name << " (" << mode << "), best fitness "
            << result.best_fitness << "\n";
  for (std::size_t i = 0; i < result.per_source.size(); ++i) {
    std::cout << "  source " << i << ": SDR " << result.per_source[i].sdr
              << " dB, SIR " << result.per_source[i].sir << " dB, SAR "
              << result.per_source[i].sar << " dB\n";
  }
  return 0;
}

int cmd_eval(const std::vector<std::string>& ref_paths,
             const std::vector<std::string>& est_paths,
             const std::string& noise_path) {
  if (ref_paths.size() != est_paths.size() || ref_paths.empty()) {
    throw ConfigError("eval: need matching --refs and --estimates lists");
  }
  std::vector<std::vector<double>> refs, ests;
  std::uint32_t rate = 0;
  std::size_t length = 0;
  for (const auto& p : ref_paths) {
    const qisep::WavData wav = qisep::read_wav(p);
    rate = wav.sample_rate;
    length = std::max(length, wav.samples.size());
    refs.push_back(wav.samples);
  }
  for (const auto& p : est_paths) {
    const qisep::WavData wav = qisep::read_wav(p);
    if (wav.sample_rate != rate) {
      throw std::runtime_error("eval: sample-rate mismatch at " + p);
    }
    length = std::max(length, wav.samples.size());
    ests.push_back(wav.samples);
  }
  std::vector<double> noise(length, 0.0);
  if (!noise_path.empty()) {
    noise = qisep::read_wav(noise_path).samples;
    noise.resize(length, 0.0);
  }
  for (auto& r : refs) r.resize(length, 0.0);
  for (auto& e : ests) e.resize(length, 0.0);

  const std::vector<std::size_t> perm = qisep::align_sources(refs, ests);
  nlohmann::json j;
  j["permutation"] = perm;
  j["per_source"] = nlohmann::json::array();
  qisep::MetricClamps clamps;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const qisep::EvalTriple t =
        qisep::evaluate_triple(refs[i], ests[perm[i]], noise, &clamps);
    j["per_source"].push_back(
        {{"sdr", t.sdr}, {"sir", t.sir}, {"sar", t.sar}});
  }
  j["flags"] = {{"sdr_capped", clamps.sdr_capped},
                {"sir_denominator_clamped", clamps.sir_denominator},
                {"sar_clamped", clamps.sar_clamped}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_encode(const std::string& angles_csv, const std::string& input_path,
               std::size_t frame_index, const RunConfig& config,
               const std::string& out_path) {
  std::vector<double> angles;
  if (!angles_csv.empty()) {
    for (const auto& tok : split_list(angles_csv)) {
      angles.push_back(std::stod(tok));
    }
  } else {
    if (input_path.empty()) {
      throw ConfigError("encode: provide --angles or --input");
    }
    const qisep::WavData wav = qisep::read_wav(input_path);
    qisep::StftConfig stft_cfg = config.stft_config();
    stft_cfg.sample_rate = static_cast<double>(wav.sample_rate);
    const qisep::MfccMatrix m =
        qisep::mfcc(wav.samples, stft_cfg, config.n_mels, config.n_mfcc);
    if (frame_index >= m.frames.size()) {
      throw ConfigError("encode: frame index out of range (have " +
                        std::to_string(m.frames.size()) + " frames)");
    }
    const qisep::FeatureScaler scaler = qisep::FeatureScaler::fit(m);
    angles = qisep::scale_mfcc(m, scaler)[frame_index];
  }
  if (angles.size() % 2 != 0) angles.push_back(0.0);

  const qisep::StateVector4 state = qisep::encode_features(angles);
  std::ostringstream csv;
  csv.precision(17);
  csv << "basis_index,re,im\n";
  for (int i = 0; i < qisep::StateVector4::kDim; ++i) {
    csv << i << "," << state.amps[i].real() << "," << state.amps[i].imag()
        << "\n";
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    write_text(out_path, csv.str());
  }
  return 0;
}

int cmd_convergence(double alpha, double beta, double p0, std::size_t t_max,
                    const std::string& out_path) {
  qisep::ConvergenceModel model;
  model.alpha = alpha;
  model.beta = beta;
  model.p0 = p0;
  const std::string csv = qisep::curve_to_csv(
      qisep::convergence_curve(model, t_max));
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    write_text(out_path, csv);
  }
  return 0;
}

int cmd_experiment(const std::string& mode, const std::string& manifest_path,
                   const std::string& recipe_name, std::size_t n_sources,
                   double duration, double snr_db, double band_overlap,
                   std::size_t n_mixtures, std::size_t n_train,
                   std::size_t n_test, const RunConfig& config) {
  qisep::ExperimentOptions options;
  options.config = config;
  options.mode = mode;
  if (!manifest_path.empty()) options.manifest_path = manifest_path;
  options.recipe.name = recipe_name;
  options.recipe.n_sources = n_sources;
  options.recipe.duration_s = duration;
  options.recipe.sample_rate = config.sample_rate;
  options.recipe.snr_db = snr_db;
  options.recipe.band_overlap = band_overlap;
  options.n_mixtures = n_mixtures;
  options.n_train = n_train;
  options.n_test = n_test;

  const qisep::ExperimentResult result = qisep::run_experiment(options);
  qisep::write_experiment_outputs(result, options);

  std::cout << "experiment (" << mode << "): " << result.reports.size()
            << " reports in " << config.out_dir << "\n";
  for (const auto& row : result.fraction_rows) {
    std::cout << "  fraction " << row.fraction << " (" << row.n_train_used
              << " train): mean SDR " << row.mean_sdr << " dB\n";
  }
  for (const auto& err : result.errors) {
    std::cerr << "error: " << err << "\n";
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-inspired genetic source separation toolkit"};
  app.require_subcommand(1);

  // mix
  auto* mix = app.add_subcommand("mix", "Synthesize a mixture");
  std::string mix_recipe = "tones";
  std::size_t mix_sources = 2;
  double mix_duration = 1.0, mix_rate = 8000.0, mix_snr = 10.0;
  double mix_overlap = 0.25;
  bool mix_no_noise = false;
  std::vector<std::string> mix_files;
  std::string mix_filters, mix_out = "out";
  std::uint64_t mix_seed = 0;
  mix->add_option("--recipe", mix_recipe, "tones | ambands | moving");
  mix->add_option("--sources", mix_files,
                  "WAV files to mix instead of a recipe")
      ->delimiter(',');
  mix->add_option("--filters", mix_filters,
                  "per-source FIR taps, e.g. '1;0.5,0.25'");
  mix->add_option("--n-sources", mix_sources, "recipe source count");
  mix->add_option("--duration", mix_duration, "seconds");
  mix->add_option("--sample-rate", mix_rate, "Hz");
  mix->add_option("--snr", mix_snr, "white-noise SNR in dB");
  mix->add_flag("--no-noise", mix_no_noise, "disable the noise term");
  mix->add_option("--band-overlap", mix_overlap, "ambands overlap in [0,1)");
  mix->add_option("--seed", mix_seed, "random seed");
  mix->add_option("--out", mix_out, "output directory");

  // separate
  auto* separate = app.add_subcommand("separate", "Optimize and write sources");
  std::string sep_mixture, sep_noise, sep_params, sep_config, sep_out;
  std::vector<std::string> sep_refs, sep_sets;
  separate->add_option("--mixture", sep_mixture, "mixture WAV")->required();
  separate->add_option("--refs", sep_refs, "reference WAVs (supervised mode)")
      ->delimiter(',')
      ->required();
  separate->add_option("--noise", sep_noise, "realized noise WAV");
  separate->add_option("--mask-params", sep_params,
                       "mask parameter JSON (transfer mode)");
  separate->add_option("--config", sep_config, "config file");
  separate->add_option("--set", sep_sets, "config override key=value");
  separate->add_option("--out", sep_out, "output directory");

  // eval
  auto* eval = app.add_subcommand("eval", "Metrics for existing estimates");
  std::vector<std::string> eval_refs, eval_ests;
  std::string eval_noise;
  eval->add_option("--refs", eval_refs, "reference WAVs")
      ->delimiter(',')
      ->required();
  eval->add_option("--estimates", eval_ests, "estimate WAVs")
      ->delimiter(',')
      ->required();
  eval->add_option("--noise", eval_noise, "noise WAV");

  // encode
  auto* encode = app.add_subcommand("encode", "Dump PQC amplitudes as CSV");
  std::string enc_angles, enc_input, enc_out, enc_config;
  std::size_t enc_frame = 0;
  encode->add_option("--angles", enc_angles,
                     "comma-separated angles in [0, pi]");
  encode->add_option("--input", enc_input, "WAV input (MFCC route)");
  encode->add_option("--frame", enc_frame, "frame index for --input");
  encode->add_option("--config", enc_config, "config file");
  encode->add_option("--out", enc_out, "CSV path (default stdout)");

  // convergence
  auto* convergence =
      app.add_subcommand("convergence", "Convergence model curve CSV");
  double conv_alpha = 0.1, conv_beta = 0.0, conv_p0 = 0.0;
  std::size_t conv_tmax = 100;
  std::string conv_out;
  convergence->add_option("--alpha", conv_alpha, "operator effectiveness");
  convergence->add_option("--beta", conv_beta, "exploration decay");
  convergence->add_option("--p0", conv_p0, "initial probability");
  convergence->add_option("--tmax", conv_tmax, "generations");
  convergence->add_option("--out", conv_out, "CSV path (default stdout)");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Batch / data-size runs");
  std::string exp_mode = "batch", exp_manifest, exp_recipe = "tones";
  std::string exp_config, exp_out;
  std::vector<std::string> exp_sets;
  std::size_t exp_sources = 2, exp_n = 6, exp_train = 8, exp_test = 3;
  double exp_duration = 1.0, exp_snr = 10.0, exp_overlap = 0.25;
  experiment->add_option("--mode", exp_mode, "batch | datasize");
  experiment->add_option("--manifest", exp_manifest, "dataset manifest (TSV)");
  experiment->add_option("--recipe", exp_recipe, "tones | ambands | moving");
  experiment->add_option("--n-sources", exp_sources, "recipe source count");
  experiment->add_option("--duration", exp_duration, "seconds per mixture");
  experiment->add_option("--snr", exp_snr, "white-noise SNR in dB");
  experiment->add_option("--band-overlap", exp_overlap, "ambands overlap");
  experiment->add_option("--n", exp_n, "batch mixture count");
  experiment->add_option("--n-train", exp_train, "datasize training mixtures");
  experiment->add_option("--n-test", exp_test, "datasize test mixtures");
  experiment->add_option("--config", exp_config, "config file");
  experiment->add_option("--set", exp_sets, "config override key=value");
  experiment->add_option("--out", exp_out, "output directory");

  try {
    app.parse(argc, argv);

    if (mix->parsed()) {
      return cmd_mix(mix_recipe, mix_sources, mix_duration, mix_rate, mix_snr,
                     mix_no_noise, mix_overlap, mix_files, mix_filters,
                     mix_seed, mix_out);
    }
    if (separate->parsed()) {
      return cmd_separate(sep_mixture, sep_refs, sep_noise, sep_params,
                          build_config(sep_config, sep_sets, sep_out));
    }
    if (eval->parsed()) {
      return cmd_eval(eval_refs, eval_ests, eval_noise);
    }
    if (encode->parsed()) {
      return cmd_encode(enc_angles, enc_input, enc_frame,
                        build_config(enc_config, {}, ""), enc_out);
    }
    if (convergence->parsed()) {
      return cmd_convergence(conv_alpha, conv_beta, conv_p0, conv_tmax,
                             conv_out);
    }
    if (experiment->parsed()) {
      return cmd_experiment(exp_mode, exp_manifest, exp_recipe, exp_sources,
                            exp_duration, exp_snr, exp_overlap, exp_n,
                            exp_train, exp_test,
                            build_config(exp_config, exp_sets, exp_out));
    }
    return 2;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
