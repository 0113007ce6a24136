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

#ifndef QISEP_POSTPROC_HPP_
#define QISEP_POSTPROC_HPP_

#include <cstddef>
#include <vector>

namespace qisep {

struct BandpassConfig {
  double low_hz = 50.0;
  // 0 means "auto": resolved to 0.45 * sample_rate when the filter runs.
  double high_hz = 0.0;

  double resolved_high(double sample_rate) const;
  void validate(double sample_rate) const;
};

struct CompressorConfig {
  double threshold = 0.5;  // amplitude, in (0, 1]
  double ratio = 4.0;      // >= 1

  void validate() const;
};

struct PostprocConfig {
  bool enabled = true;
  bool bandpass_enabled = true;
  bool compress_enabled = true;
  bool declip_enabled = true;
  BandpassConfig bandpass;
  CompressorConfig compressor;
  double clip_level = 0.999;
};

// Brick-wall bandpass: an exact full-length DFT with bins outside
// [low, high] zeroed. The masking is an orthogonal projection, so applying
// the same band twice reproduces the first output to fp precision.
std::vector<double> bandpass(const std::vector<double>& signal,
                             const BandpassConfig& config, double sample_rate);

// Static compression curve: samples over the threshold are mapped to
// sign(x) * (threshold + (|x| - threshold) / ratio).
std::vector<double> compress(const std::vector<double>& signal,
                             const CompressorConfig& config);

struct DeclipResult {
  std::vector<double> samples;
  // Set when every sample is clipped; the signal is returned unchanged.
  bool all_clipped = false;
};

// Replaces maximal runs of samples with |x| >= clip_level by cubic Hermite
// interpolation between the nearest unclipped neighbors (one-sided
// difference slopes). Runs touching a boundary hold the inner neighbor's
// value.
DeclipResult declip(const std::vector<double>& signal, double clip_level);

struct PostprocFlags {
  bool declip_all_clipped = false;
};

// Full refinement chain: bandpass, compression, de-clipping, in that order.
std::vector<double> postprocess(const std::vector<double>& signal,
                                const PostprocConfig& config,
                                double sample_rate,
                                PostprocFlags* flags = nullptr);

}  // namespace qisep

#endif  // QISEP_POSTPROC_HPP_
