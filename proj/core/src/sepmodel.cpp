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

#include "qisep/sepmodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qisep {

namespace {

constexpr double kMaskEpsilon = 1e-8;

}  // namespace

std::vector<double> mel_band_edges(std::size_t n_bands, double sample_rate) {
  if (n_bands == 0 || !(sample_rate > 0.0)) {
    throw std::invalid_argument("mel_band_edges: invalid arguments");
  }
  const double mel_hi = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges(n_bands + 1);
  for (std::size_t b = 0; b <= n_bands; ++b) {
    edges[b] = mel_to_hz(mel_hi * static_cast<double>(b) /
                         static_cast<double>(n_bands));
  }
  edges.front() = 0.0;
  edges.back() = sample_rate / 2.0;
  return edges;
}

MaskParams decode_genome(const Genome& g, std::size_t n_sources,
                         std::size_t n_bands, double sample_rate) {
  if (g.qubits.size() != n_sources * n_bands) {
    throw std::invalid_argument(
        "decode_genome: genome length " + std::to_string(g.qubits.size()) +
        " != n_sources * n_bands = " + std::to_string(n_sources * n_bands));
  }
  MaskParams params;
  params.n_sources = n_sources;
  params.n_bands = n_bands;
  params.band_edges = mel_band_edges(n_bands, sample_rate);
  params.gains.resize(g.qubits.size());
  for (std::size_t j = 0; j < g.qubits.size(); ++j) {
    params.gains[j] = std::clamp(std::norm(g.qubits[j].beta), 0.0, 1.0);
  }
  return params;
}

SeparatedSources apply_masks(const Spectrogram& mixture_spec,
                             const MaskParams& params,
                             std::size_t target_len) {
  if (params.n_sources == 0 || params.n_bands == 0) {
    throw std::invalid_argument("apply_masks: empty mask parameters");
  }
  if (params.band_edges.size() != params.n_bands + 1) {
    throw std::invalid_argument("apply_masks: band edge count mismatch");
  }
  const double nyquist = mixture_spec.config.sample_rate / 2.0;
  if (std::abs(params.band_edges.back() - nyquist) > 1e-6) {
    throw std::invalid_argument(
        "apply_masks: band edges do not span the spectrogram bandwidth");
  }

  // Band index per bin: largest b with edges[b] <= f; Nyquist folds into the
  // last band.
  const std::size_t n_bins = mixture_spec.n_bins();
  std::vector<std::size_t> bin_band(n_bins, 0);
  for (std::size_t k = 0; k < n_bins; ++k) {
    const double f = mixture_spec.bin_hz(k);
    std::size_t b = params.n_bands - 1;
    for (std::size_t e = 0; e + 1 < params.band_edges.size(); ++e) {
      if (f >= params.band_edges[e] && f < params.band_edges[e + 1]) {
        b = e;
        break;
      }
    }
    bin_band[k] = b;
  }

  // Normalized masks: m_i(b) = g_i(b) / (sum_k g_k(b) + eps).
  std::vector<double> denom(params.n_bands, kMaskEpsilon);
  for (std::size_t i = 0; i < params.n_sources; ++i) {
    for (std::size_t b = 0; b < params.n_bands; ++b) {
      denom[b] += params.gain(i, b);
    }
  }

  SeparatedSources out;
  out.signals.resize(params.n_sources);
  Spectrogram masked;
  masked.config = mixture_spec.config;
  for (std::size_t i = 0; i < params.n_sources; ++i) {
    masked.frames = mixture_spec.frames;
    for (auto& frame : masked.frames) {
      if (frame.size() != n_bins) {
        throw std::invalid_argument("apply_masks: inconsistent bin count");
      }
      for (std::size_t k = 0; k < n_bins; ++k) {
        frame[k] *= params.gain(i, bin_band[k]) / denom[bin_band[k]];
      }
    }
    out.signals[i] = istft(masked);
    if (target_len > 0) out.signals[i].resize(target_len, 0.0);
  }
  return out;
}

double correlation_penalty(const SeparatedSources& sources) {
  const std::size_t n = sources.signals.size();
  if (n < 2) return 0.0;
  const std::size_t len = sources.signals.front().size();

  std::vector<double> means(n, 0.0), sds(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (sources.signals[i].size() != len) {
      throw std::invalid_argument("correlation_penalty: length mismatch");
    }
    for (double v : sources.signals[i]) means[i] += v;
    means[i] /= static_cast<double>(len);
    for (double v : sources.signals[i]) {
      sds[i] += (v - means[i]) * (v - means[i]);
    }
    sds[i] = std::sqrt(sds[i]);
  }

  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ++pairs;
      if (sds[i] < 1e-15 || sds[j] < 1e-15) continue;
      double cov = 0.0;
      for (std::size_t t = 0; t < len; ++t) {
        cov += (sources.signals[i][t] - means[i]) *
               (sources.signals[j][t] - means[j]);
      }
      total += std::abs(cov / (sds[i] * sds[j]));
    }
  }
  return total / static_cast<double>(pairs);
}

}  // namespace qisep
