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

#ifndef QISEP_FEATURES_HPP_
#define QISEP_FEATURES_HPP_

#include <complex>
#include <cstddef>
#include <vector>

namespace qisep {

enum class Window { kHann };

struct StftConfig {
  std::size_t frame_len = 1024;  // power of two
  std::size_t hop = 512;
  Window window = Window::kHann;
  double sample_rate = 16000.0;

  std::size_t n_bins() const { return frame_len / 2 + 1; }
  // Throws std::invalid_argument on violated constraints.
  void validate() const;
};

struct Spectrogram {
  std::vector<std::vector<std::complex<double>>> frames;  // T x n_bins
  StftConfig config;

  std::size_t n_frames() const { return frames.size(); }
  std::size_t n_bins() const { return config.n_bins(); }
  double bin_hz(std::size_t bin) const {
    return static_cast<double>(bin) * config.sample_rate /
           static_cast<double>(config.frame_len);
  }
};

struct MfccMatrix {
  std::vector<std::vector<double>> frames;  // T x n_mfcc
  std::size_t n_mels = 40;
  std::size_t n_mfcc = 13;
};

// Per-coefficient affine range used to map MFCCs onto rotation angles.
struct FeatureScaler {
  std::vector<double> min;
  std::vector<double> max;

  static FeatureScaler fit(const MfccMatrix& m);
  static FeatureScaler fit(const std::vector<MfccMatrix>& ms);
};

// Hann-windowed overlapping frames, one-sided bins. Signal must be at least
// frame_len samples long.
Spectrogram stft(const std::vector<double>& signal, const StftConfig& config);

// Overlap-add inverse, normalized by the window overlap sum. Requires
// hop == frame_len / 2 (constant-overlap-add for Hann).
std::vector<double> istft(const Spectrogram& spec);

// Natural istft output length for a frame count.
std::size_t istft_length(const StftConfig& config, std::size_t n_frames);

// Log-mel energies (floored at 1e-10) through an orthonormal DCT-II;
// coefficient 0 is kept. Requires n_mfcc <= n_mels <= frame_len / 2.
MfccMatrix mfcc(const std::vector<double>& signal, const StftConfig& config,
                std::size_t n_mels, std::size_t n_mfcc);

// Affine map per coefficient, min -> 0 and max -> pi, clamped; a degenerate
// coefficient (max == min) maps to pi/2.
std::vector<std::vector<double>> scale_mfcc(const MfccMatrix& m,
                                            const FeatureScaler& scaler);

// HTK mel scale.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

}  // namespace qisep

#endif  // QISEP_FEATURES_HPP_
