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

#ifndef QISEP_SEPMODEL_HPP_
#define QISEP_SEPMODEL_HPP_

#include <cstddef>
#include <vector>

#include "qisep/features.hpp"
#include "qisep/qiga.hpp"

namespace qisep {

// Per-source, per-band soft mask gains plus the band layout they refer to.
struct MaskParams {
  std::size_t n_sources = 0;
  std::size_t n_bands = 0;
  std::vector<double> gains;       // n_sources x n_bands, row-major, in [0,1]
  std::vector<double> band_edges;  // n_bands + 1 Hz values, mel-spaced

  double gain(std::size_t source, std::size_t band) const {
    return gains[source * n_bands + band];
  }
  double& gain(std::size_t source, std::size_t band) {
    return gains[source * n_bands + band];
  }
};

struct SeparatedSources {
  std::vector<std::vector<double>> signals;
};

// Mel-spaced band edges spanning [0, sample_rate / 2], strictly increasing.
std::vector<double> mel_band_edges(std::size_t n_bands, double sample_rate);

// Decodes |beta|^2 of each genome qubit into a gain, row-major by
// (source, band). Genome length must equal n_sources * n_bands.
MaskParams decode_genome(const Genome& g, std::size_t n_sources,
                         std::size_t n_bands, double sample_rate);

// Wiener-style normalized band masks applied to the mixture spectrogram
// (mixture phase kept), one istft per source. When target_len is nonzero the
// outputs are zero-padded or truncated to that length.
SeparatedSources apply_masks(const Spectrogram& mixture_spec,
                             const MaskParams& params,
                             std::size_t target_len = 0);

// Mean absolute Pearson correlation over unordered source pairs; a
// zero-variance signal contributes 0 to its pairs. Returns 0 for a single
// source.
double correlation_penalty(const SeparatedSources& sources);

}  // namespace qisep

#endif  // QISEP_SEPMODEL_HPP_
