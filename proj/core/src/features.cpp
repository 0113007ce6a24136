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

#include "qisep/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qisep/fft.hpp"

namespace qisep {

namespace {

constexpr double kLogFloor = 1e-10;

// Periodic Hann, COLA-exact at hop = frame_len / 2.
std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) /
                                static_cast<double>(n));
  }
  return w;
}

}  // namespace

void StftConfig::validate() const {
  if (!is_power_of_two(frame_len)) {
    throw std::invalid_argument("StftConfig: frame_len must be a power of two");
  }
  if (hop == 0 || hop > frame_len) {
    throw std::invalid_argument("StftConfig: hop must be in [1, frame_len]");
  }
  if (!(sample_rate > 0.0)) {
    throw std::invalid_argument("StftConfig: sample_rate must be positive");
  }
}

Spectrogram stft(const std::vector<double>& signal, const StftConfig& config) {
  config.validate();
  if (signal.size() < config.frame_len) {
    throw std::invalid_argument(
        "stft: signal shorter than one frame (" +
        std::to_string(signal.size()) + " < " +
        std::to_string(config.frame_len) + ")");
  }
  const std::size_t n = config.frame_len;
  const std::size_t n_frames = 1 + (signal.size() - n) / config.hop;
  const std::vector<double> window = hann_window(n);

  Spectrogram spec;
  spec.config = config;
  spec.frames.resize(n_frames);
  std::vector<std::complex<double>> buf(n);
  for (std::size_t t = 0; t < n_frames; ++t) {
    const std::size_t start = t * config.hop;
    for (std::size_t i = 0; i < n; ++i) {
      buf[i] = {signal[start + i] * window[i], 0.0};
    }
    fft_pow2(buf, false);
    spec.frames[t].assign(buf.begin(), buf.begin() +
                                           static_cast<long>(config.n_bins()));
  }
  return spec;
}

std::size_t istft_length(const StftConfig& config, std::size_t n_frames) {
  if (n_frames == 0) return 0;
  return (n_frames - 1) * config.hop + config.frame_len;
}

std::vector<double> istft(const Spectrogram& spec) {
  const StftConfig& config = spec.config;
  config.validate();
  if (config.hop * 2 != config.frame_len) {
    throw std::invalid_argument(
        "istft: hop must equal frame_len / 2 (constant overlap-add)");
  }
  const std::size_t n = config.frame_len;
  const std::size_t n_bins = config.n_bins();
  const std::size_t out_len = istft_length(config, spec.n_frames());
  std::vector<double> out(out_len, 0.0);
  std::vector<double> overlap(out_len, 0.0);
  const std::vector<double> window = hann_window(n);

  std::vector<std::complex<double>> buf(n);
  for (std::size_t t = 0; t < spec.n_frames(); ++t) {
    const auto& frame = spec.frames[t];
    if (frame.size() != n_bins) {
      throw std::invalid_argument("istft: frame bin count inconsistent");
    }
    // Rebuild the full spectrum from the one-sided half (Hermitian symmetry).
    for (std::size_t k = 0; k < n_bins; ++k) buf[k] = frame[k];
    for (std::size_t k = 1; k + 1 < n_bins; ++k) buf[n - k] = std::conj(frame[k]);
    fft_pow2(buf, true);
    const std::size_t start = t * config.hop;
    for (std::size_t i = 0; i < n; ++i) {
      out[start + i] += buf[i].real();
      overlap[start + i] += window[i];
    }
  }
  for (std::size_t i = 0; i < out_len; ++i) {
    if (overlap[i] > 1e-8) out[i] /= overlap[i];
  }
  return out;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MfccMatrix mfcc(const std::vector<double>& signal, const StftConfig& config,
                std::size_t n_mels, std::size_t n_mfcc) {
  if (n_mfcc > n_mels || n_mels > config.frame_len / 2 || n_mfcc == 0) {
    throw std::invalid_argument(
        "mfcc: need n_mfcc <= n_mels <= frame_len / 2 and n_mfcc > 0");
  }
  const Spectrogram spec = stft(signal, config);
  const std::size_t n_bins = config.n_bins();

  // Triangular mel filterbank, unit peaks, spanning [0, sample_rate / 2].
  const double mel_hi = hz_to_mel(config.sample_rate / 2.0);
  std::vector<double> centers(n_mels + 2);
  for (std::size_t m = 0; m < n_mels + 2; ++m) {
    centers[m] = mel_to_hz(mel_hi * static_cast<double>(m) /
                           static_cast<double>(n_mels + 1));
  }
  std::vector<std::vector<double>> bank(n_mels,
                                        std::vector<double>(n_bins, 0.0));
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double lo = centers[m], mid = centers[m + 1], hi = centers[m + 2];
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * config.sample_rate /
                       static_cast<double>(config.frame_len);
      if (f > lo && f < mid) {
        bank[m][k] = (f - lo) / (mid - lo);
      } else if (f >= mid && f < hi) {
        bank[m][k] = (hi - f) / (hi - mid);
      }
    }
  }

  // Orthonormal DCT-II basis over n_mels points.
  std::vector<std::vector<double>> dct(n_mfcc, std::vector<double>(n_mels));
  const double norm0 = std::sqrt(1.0 / static_cast<double>(n_mels));
  const double normk = std::sqrt(2.0 / static_cast<double>(n_mels));
  for (std::size_t j = 0; j < n_mfcc; ++j) {
    for (std::size_t m = 0; m < n_mels; ++m) {
      dct[j][m] = (j == 0 ? norm0 : normk) *
                  std::cos(M_PI * static_cast<double>(j) *
                           (static_cast<double>(m) + 0.5) /
                           static_cast<double>(n_mels));
    }
  }

  MfccMatrix out;
  out.n_mels = n_mels;
  out.n_mfcc = n_mfcc;
  out.frames.resize(spec.n_frames());
  std::vector<double> mel_energy(n_mels);
  for (std::size_t t = 0; t < spec.n_frames(); ++t) {
    for (std::size_t m = 0; m < n_mels; ++m) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n_bins; ++k) {
        acc += bank[m][k] * std::norm(spec.frames[t][k]);
      }
      mel_energy[m] = std::log(std::max(acc, kLogFloor));
    }
    out.frames[t].resize(n_mfcc);
    for (std::size_t j = 0; j < n_mfcc; ++j) {
      double acc = 0.0;
      for (std::size_t m = 0; m < n_mels; ++m) acc += dct[j][m] * mel_energy[m];
      out.frames[t][j] = acc;
    }
  }
  return out;
}

FeatureScaler FeatureScaler::fit(const MfccMatrix& m) {
  return fit(std::vector<MfccMatrix>{m});
}

FeatureScaler FeatureScaler::fit(const std::vector<MfccMatrix>& ms) {
  FeatureScaler s;
  for (const auto& m : ms) {
    for (const auto& frame : m.frames) {
      if (s.min.empty()) {
        s.min = frame;
        s.max = frame;
        continue;
      }
      if (frame.size() != s.min.size()) {
        throw std::invalid_argument("FeatureScaler::fit: ragged coefficients");
      }
      for (std::size_t j = 0; j < frame.size(); ++j) {
        s.min[j] = std::min(s.min[j], frame[j]);
        s.max[j] = std::max(s.max[j], frame[j]);
      }
    }
  }
  if (s.min.empty()) {
    throw std::invalid_argument("FeatureScaler::fit: no frames");
  }
  return s;
}

std::vector<std::vector<double>> scale_mfcc(const MfccMatrix& m,
                                            const FeatureScaler& scaler) {
  if (scaler.min.size() != scaler.max.size()) {
    throw std::invalid_argument("scale_mfcc: malformed scaler");
  }
  std::vector<std::vector<double>> out(m.frames.size());
  for (std::size_t t = 0; t < m.frames.size(); ++t) {
    const auto& frame = m.frames[t];
    if (frame.size() != scaler.min.size()) {
      throw std::invalid_argument("scale_mfcc: coefficient count mismatch");
    }
    out[t].resize(frame.size());
    for (std::size_t j = 0; j < frame.size(); ++j) {
      const double lo = scaler.min[j], hi = scaler.max[j];
      if (hi <= lo) {
        out[t][j] = M_PI / 2.0;
        continue;
      }
      double v = (frame[j] - lo) / (hi - lo) * M_PI;
      out[t][j] = std::clamp(v, 0.0, M_PI);
    }
  }
  return out;
}

}  // namespace qisep
