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

#ifndef QISEP_MANIFEST_HPP_
#define QISEP_MANIFEST_HPP_

#include <optional>
#include <string>
#include <vector>

namespace qisep {

struct ManifestEntry {
  std::string mixture;
  std::vector<std::string> references;  // comma-separated in the file
  std::optional<std::string> noise;
  std::optional<std::string> label;
};

// Line-oriented, tab-separated:
//   mixture.wav <TAB> ref1.wav,ref2.wav [<TAB> noise.wav|-] [<TAB> label|-]
// '#' lines are comments; an optional "#split <train> <val> <test>" header
// overrides the default 0.8/0.1/0.1 split.
struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  double train_fraction = 0.8;
  double val_fraction = 0.1;
  double test_fraction = 0.1;

  void validate() const;
};

DatasetManifest read_manifest(const std::string& path);
void write_manifest(const DatasetManifest& manifest, const std::string& path);

}  // namespace qisep

#endif  // QISEP_MANIFEST_HPP_
