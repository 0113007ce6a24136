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

#ifndef QISEP_CONFIG_HPP_
#define QISEP_CONFIG_HPP_

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>

#include "qisep/features.hpp"
#include "qisep/metrics.hpp"
#include "qisep/postproc.hpp"
#include "qisep/qiga.hpp"

namespace qisep {

// Raised for malformed config files or values; the CLI maps it to exit 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Full run configuration. Dotted flat keys, one section per subsystem:
// qiga.*, masks.*, metrics.*, postproc.*, io.*.
struct RunConfig {
  QigaConfig qiga;
  FitnessWeights weights;
  PostprocConfig postproc;
  std::size_t n_bands = 16;

  // io section
  double sample_rate = 8000.0;
  std::size_t frame_len = 1024;
  std::size_t hop = 512;
  std::size_t n_mels = 40;
  std::size_t n_mfcc = 13;
  double train_fraction = 0.8;
  double val_fraction = 0.1;
  double test_fraction = 0.1;
  bool write_audio = true;
  bool encode_diagnostic = false;
  std::string out_dir = "out";

  StftConfig stft_config() const;
  void validate() const;

  // Flat key=value view; io.out_dir is included here but excluded from
  // report snapshots (see report.hpp).
  std::map<std::string, std::string> to_map() const;
  static RunConfig from_map(const std::map<std::string, std::string>& kv);
};

// key = value lines, '#' comments, blank lines ignored. Unknown keys are
// rejected so typos fail loudly.
std::map<std::string, std::string> parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);
void write_config_file(const RunConfig& config, const std::string& path);

// Applies "section.key=value" overrides on top of a base config.
RunConfig apply_overrides(const RunConfig& base,
                          const std::map<std::string, std::string>& overrides);

std::string config_to_text(const RunConfig& config);

}  // namespace qisep

#endif  // QISEP_CONFIG_HPP_
