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

#include "qisep/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qisep/rng.hpp"

namespace qisep {

namespace {

std::vector<double> convolve(const std::vector<double>& signal,
                             const std::vector<double>& taps) {
  std::vector<double> out(signal.size() + taps.size() - 1, 0.0);
  for (std::size_t i = 0; i < signal.size(); ++i) {
    for (std::size_t k = 0; k < taps.size(); ++k) {
      out[i + k] += taps[k] * signal[i];
    }
  }
  return out;
}

double energy(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

double peak(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

void MixtureSpec::validate() const {
  if (sources.empty()) {
    throw std::invalid_argument("MixtureSpec: no sources");
  }
  if (filters.size() != sources.size()) {
    throw std::invalid_argument("MixtureSpec: one filter per source required");
  }
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (sources[i].empty()) {
      throw std::invalid_argument("MixtureSpec: empty source signal");
    }
    if (filters[i].empty()) {
      throw std::invalid_argument("MixtureSpec: empty mixing filter");
    }
  }
  if (!(sample_rate > 0.0)) {
    throw std::invalid_argument("MixtureSpec: sample_rate must be positive");
  }
  if (!noise.empty() && target_snr_db.has_value()) {
    throw std::invalid_argument(
        "MixtureSpec: provide either explicit noise or a target SNR, not both");
  }
}

MixtureResult synthesize_mixture(const MixtureSpec& spec, std::uint64_t seed) {
  spec.validate();

  std::size_t length = 0;
  std::vector<std::vector<double>> images(spec.sources.size());
  for (std::size_t i = 0; i < spec.sources.size(); ++i) {
    images[i] = convolve(spec.sources[i], spec.filters[i]);
    length = std::max(length, images[i].size());
  }
  for (auto& image : images) image.resize(length, 0.0);

  std::vector<double> clean(length, 0.0);
  for (const auto& image : images) {
    for (std::size_t t = 0; t < length; ++t) clean[t] += image[t];
  }

  std::vector<double> noise(length, 0.0);
  if (!spec.noise.empty()) {
    noise = spec.noise;
    noise.resize(length, 0.0);
  } else if (spec.target_snr_db.has_value()) {
    RngStream rng = RngStream::keyed(seed, RngOp::kNoise);
    double raw_energy = 0.0;
    for (std::size_t t = 0; t < length; ++t) {
      noise[t] = rng.normal();
      raw_energy += noise[t] * noise[t];
    }
    const double clean_energy = energy(clean);
    if (clean_energy > 0.0 && raw_energy > 0.0) {
      const double target_ratio = std::pow(10.0, *spec.target_snr_db / 10.0);
      const double scale =
          std::sqrt(clean_energy / (raw_energy * target_ratio));
      for (double& v : noise) v *= scale;
    } else {
      std::fill(noise.begin(), noise.end(), 0.0);
    }
  }

  MixtureResult result;
  result.sample_rate = spec.sample_rate;
  result.mixture.resize(length);
  for (std::size_t t = 0; t < length; ++t) {
    result.mixture[t] = clean[t] + noise[t];
  }

  double joint_peak = peak(result.mixture);
  for (const auto& image : images) joint_peak = std::max(joint_peak, peak(image));
  joint_peak = std::max(joint_peak, peak(noise));
  result.gain = joint_peak > 0.0 ? 0.9 / joint_peak : 1.0;

  for (double& v : result.mixture) v *= result.gain;
  for (auto& image : images) {
    for (double& v : image) v *= result.gain;
  }
  for (double& v : noise) v *= result.gain;

  result.references = std::move(images);
  result.noise = std::move(noise);
  return result;
}

}  // namespace qisep
