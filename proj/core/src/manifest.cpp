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

#include "qisep/manifest.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qisep {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

}  // namespace

void DatasetManifest::validate() const {
  const double total = train_fraction + val_fraction + test_fraction;
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("manifest: split fractions must sum to 1");
  }
  std::set<std::string> seen;
  for (const auto& entry : entries) {
    if (entry.mixture.empty() || entry.references.empty()) {
      throw std::invalid_argument(
          "manifest: every entry needs a mixture and references");
    }
    std::vector<std::string> paths = entry.references;
    paths.push_back(entry.mixture);
    if (entry.noise) paths.push_back(*entry.noise);
    for (const auto& p : paths) {
      if (!seen.insert(p).second) {
        throw std::invalid_argument("manifest: duplicate path '" + p + "'");
      }
    }
  }
}

DatasetManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("read_manifest: cannot open '" + path + "'");
  }
  DatasetManifest manifest;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream header(line.substr(1));
      std::string tag;
      header >> tag;
      if (tag == "split") {
        if (!(header >> manifest.train_fraction >> manifest.val_fraction >>
              manifest.test_fraction)) {
          throw std::runtime_error("read_manifest: malformed #split header");
        }
      }
      continue;
    }
    const std::vector<std::string> cols = split(line, '\t');
    if (cols.size() < 2) {
      throw std::runtime_error("read_manifest: line " +
                               std::to_string(line_no) +
                               " needs mixture and reference columns");
    }
    ManifestEntry entry;
    entry.mixture = cols[0];
    entry.references = split(cols[1], ',');
    if (cols.size() > 2 && cols[2] != "-" && !cols[2].empty()) {
      entry.noise = cols[2];
    }
    if (cols.size() > 3 && cols[3] != "-" && !cols[3].empty()) {
      entry.label = cols[3];
    }
    manifest.entries.push_back(std::move(entry));
  }
  manifest.validate();
  return manifest;
}

void write_manifest(const DatasetManifest& manifest, const std::string& path) {
  manifest.validate();
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_manifest: cannot open '" + path + "'");
  }
  out << "#split " << manifest.train_fraction << " " << manifest.val_fraction
      << " " << manifest.test_fraction << "\n";
  for (const auto& entry : manifest.entries) {
    out << entry.mixture << "\t";
    for (std::size_t i = 0; i < entry.references.size(); ++i) {
      if (i) out << ",";
      out << entry.references[i];
    }
    out << "\t" << (entry.noise ? *entry.noise : "-");
    out << "\t" << (entry.label ? *entry.label : "-") << "\n";
  }
}

}  // namespace qisep
