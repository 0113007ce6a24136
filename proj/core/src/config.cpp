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

#include "qisep/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace qisep {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double parse_double(const std::string& key, const std::string& value) {
  if (value == "inf") return std::numeric_limits<double>::infinity();
  if (value == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for " + key + ": '" + value +
                      "'");
  }
}

std::size_t parse_size(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size() || v < 0) throw std::invalid_argument(value);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("config: bad count value for " + key + ": '" + value +
                      "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("config: bad seed value for " + key + ": '" + value +
                      "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config: bad boolean for " + key + ": '" + value + "'");
}

}  // namespace

StftConfig RunConfig::stft_config() const {
  StftConfig c;
  c.frame_len = frame_len;
  c.hop = hop;
  c.sample_rate = sample_rate;
  return c;
}

void RunConfig::validate() const {
  qiga.validate();
  weights.validate();
  stft_config().validate();
  postproc.compressor.validate();
  if (n_bands == 0) throw ConfigError("config: masks.n_bands must be >= 1");
  if (n_mfcc > n_mels) throw ConfigError("config: io.n_mfcc must be <= io.n_mels");
  const double total = train_fraction + val_fraction + test_fraction;
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("config: io split fractions must sum to 1");
  }
}

std::map<std::string, std::string> RunConfig::to_map() const {
  std::map<std::string, std::string> kv;
  kv["qiga.population_size"] = std::to_string(qiga.population_size);
  kv["qiga.max_generations"] = std::to_string(qiga.max_generations);
  kv["qiga.crossover_prob"] = format_double(qiga.crossover_prob);
  kv["qiga.mutation_prob"] = format_double(qiga.mutation_prob);
  kv["qiga.desired_fitness"] = format_double(qiga.desired_fitness);
  kv["qiga.mutation_angle_max"] = format_double(qiga.mutation_angle_max);
  kv["qiga.tournament_size"] = std::to_string(qiga.tournament_size);
  kv["qiga.elitism"] = std::to_string(qiga.elitism);
  kv["qiga.seed"] = std::to_string(qiga.seed);
  kv["masks.n_bands"] = std::to_string(n_bands);
  kv["metrics.w_sdr"] = format_double(weights.w_sdr);
  kv["metrics.w_sir"] = format_double(weights.w_sir);
  kv["metrics.w_sar"] = format_double(weights.w_sar);
  kv["metrics.w_corr"] = format_double(weights.w_corr);
  kv["postproc.enabled"] = postproc.enabled ? "true" : "false";
  kv["postproc.bandpass"] = postproc.bandpass_enabled ? "true" : "false";
  kv["postproc.compress"] = postproc.compress_enabled ? "true" : "false";
  kv["postproc.declip"] = postproc.declip_enabled ? "true" : "false";
  kv["postproc.bandpass_low_hz"] = format_double(postproc.bandpass.low_hz);
  kv["postproc.bandpass_high_hz"] = format_double(postproc.bandpass.high_hz);
  kv["postproc.threshold"] = format_double(postproc.compressor.threshold);
  kv["postproc.ratio"] = format_double(postproc.compressor.ratio);
  kv["postproc.clip_level"] = format_double(postproc.clip_level);
  kv["io.sample_rate"] = format_double(sample_rate);
  kv["io.frame_len"] = std::to_string(frame_len);
  kv["io.hop"] = std::to_string(hop);
  kv["io.n_mels"] = std::to_string(n_mels);
  kv["io.n_mfcc"] = std::to_string(n_mfcc);
  kv["io.train_fraction"] = format_double(train_fraction);
  kv["io.val_fraction"] = format_double(val_fraction);
  kv["io.test_fraction"] = format_double(test_fraction);
  kv["io.write_audio"] = write_audio ? "true" : "false";
  kv["io.encode_diagnostic"] = encode_diagnostic ? "true" : "false";
  kv["io.out_dir"] = out_dir;
  return kv;
}

RunConfig RunConfig::from_map(const std::map<std::string, std::string>& kv) {
  RunConfig c;
  for (const auto& [key, value] : kv) {
    if (key == "qiga.population_size") {
      c.qiga.population_size = parse_size(key, value);
    } else if (key == "qiga.max_generations") {
      c.qiga.max_generations = parse_size(key, value);
    } else if (key == "qiga.crossover_prob") {
      c.qiga.crossover_prob = parse_double(key, value);
    } else if (key == "qiga.mutation_prob") {
      c.qiga.mutation_prob = parse_double(key, value);
    } else if (key == "qiga.desired_fitness") {
      c.qiga.desired_fitness = parse_double(key, value);
    } else if (key == "qiga.mutation_angle_max") {
      c.qiga.mutation_angle_max = parse_double(key, value);
    } else if (key == "qiga.tournament_size") {
      c.qiga.tournament_size = parse_size(key, value);
    } else if (key == "qiga.elitism") {
      c.qiga.elitism = parse_size(key, value);
    } else if (key == "qiga.seed") {
      c.qiga.seed = parse_u64(key, value);
    } else if (key == "masks.n_bands") {
      c.n_bands = parse_size(key, value);
    } else if (key == "metrics.w_sdr") {
      c.weights.w_sdr = parse_double(key, value);
    } else if (key == "metrics.w_sir") {
      c.weights.w_sir = parse_double(key, value);
    } else if (key == "metrics.w_sar") {
      c.weights.w_sar = parse_double(key, value);
    } else if (key == "metrics.w_corr") {
      c.weights.w_corr = parse_double(key, value);
    } else if (key == "postproc.enabled") {
      c.postproc.enabled = parse_bool(key, value);
    } else if (key == "postproc.bandpass") {
      c.postproc.bandpass_enabled = parse_bool(key, value);
    } else if (key == "postproc.compress") {
      c.postproc.compress_enabled = parse_bool(key, value);
    } else if (key == "postproc.declip") {
      c.postproc.declip_enabled = parse_bool(key, value);
    } else if (key == "postproc.bandpass_low_hz") {
      c.postproc.bandpass.low_hz = parse_double(key, value);
    } else if (key == "postproc.bandpass_high_hz") {
      c.postproc.bandpass.high_hz = parse_double(key, value);
    } else if (key == "postproc.threshold") {
      c.postproc.compressor.threshold = parse_double(key, value);
    } else if (key == "postproc.ratio") {
      c.postproc.compressor.ratio = parse_double(key, value);
    } else if (key == "postproc.clip_level") {
      c.postproc.clip_level = parse_double(key, value);
    } else if (key == "io.sample_rate") {
      c.sample_rate = parse_double(key, value);
    } else if (key == "io.frame_len") {
      c.frame_len = parse_size(key, value);
    } else if (key == "io.hop") {
      c.hop = parse_size(key, value);
    } else if (key == "io.n_mels") {
      c.n_mels = parse_size(key, value);
    } else if (key == "io.n_mfcc") {
      c.n_mfcc = parse_size(key, value);
    } else if (key == "io.train_fraction") {
      c.train_fraction = parse_double(key, value);
    } else if (key == "io.val_fraction") {
      c.val_fraction = parse_double(key, value);
    } else if (key == "io.test_fraction") {
      c.test_fraction = parse_double(key, value);
    } else if (key == "io.write_audio") {
      c.write_audio = parse_bool(key, value);
    } else if (key == "io.encode_diagnostic") {
      c.encode_diagnostic = parse_bool(key, value);
    } else if (key == "io.out_dir") {
      c.out_dir = value;
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  return c;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(line_no) +
                        " is not key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config: empty key on line " + std::to_string(line_no));
    }
    kv[key] = value;
  }
  return kv;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();

  // File values override built-in defaults.
  std::map<std::string, std::string> merged = RunConfig{}.to_map();
  for (const auto& [k, v] : parse_config_text(buffer.str())) merged[k] = v;
  return RunConfig::from_map(merged);
}

std::string config_to_text(const RunConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const auto& [key, value] : config.to_map()) {
    const std::string prefix = key.substr(0, key.find('.'));
    if (prefix != section) {
      if (!section.empty()) out << "\n";
      out << "# " << prefix << " section\n";
      section = prefix;
    }
    out << key << " = " << value << "\n";
  }
  return out.str();
}

void write_config_file(const RunConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("config: cannot write '" + path + "'");
  out << config_to_text(config);
}

RunConfig apply_overrides(const RunConfig& base,
                          const std::map<std::string, std::string>& overrides) {
  std::map<std::string, std::string> merged = base.to_map();
  for (const auto& [k, v] : overrides) {
    if (merged.find(k) == merged.end()) {
      throw ConfigError("config: unknown key '" + k + "'");
    }
    merged[k] = v;
  }
  return RunConfig::from_map(merged);
}

}  // namespace qisep
