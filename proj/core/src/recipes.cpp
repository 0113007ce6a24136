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

#include "qisep/recipes.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qisep/postproc.hpp"
#include "qisep/rng.hpp"
#include "qisep/sepmodel.hpp"

namespace qisep {

namespace {

// Integer cycle count over the duration keeps tone energy in its bins.
double snap_frequency(double hz, double duration_s) {
  const double cycles = std::max(1.0, std::round(hz * duration_s));
  return cycles / duration_s;
}

std::vector<double> tone(double hz, double phase, std::size_t n, double sr) {
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    out[t] = std::sin(2.0 * M_PI * hz * static_cast<double>(t) / sr + phase);
  }
  return out;
}

std::vector<double> band_noise(double lo, double hi, std::size_t n, double sr,
                               RngStream& rng) {
  std::vector<double> white(n);
  for (double& v : white) v = rng.normal();
  BandpassConfig band;
  band.low_hz = lo;
  band.high_hz = hi;
  return bandpass(white, band, sr);
}

MixtureSpec tones_recipe(const RecipeConfig& config, std::uint64_t seed) {
  const std::size_t n = static_cast<std::size_t>(
      std::llround(config.duration_s * config.sample_rate));
  const std::vector<double> edges =
      mel_band_edges(config.n_bands, config.sample_rate);

  MixtureSpec spec;
  spec.sample_rate = config.sample_rate;
  for (std::size_t i = 0; i < config.n_sources; ++i) {
    RngStream rng = RngStream::keyed(seed, RngOp::kRecipe, i);
    // Spread the sources over well-separated mel bands.
    const std::size_t band =
        ((i + 1) * config.n_bands) / (config.n_sources + 1);
    const double lo = edges[band], hi = edges[band + 1];
    const double center = 0.5 * (lo + hi);
    const double jitter = rng.uniform(-0.15, 0.15) * (hi - lo);
    const double hz = snap_frequency(center + jitter, config.duration_s);
    spec.sources.push_back(tone(hz, rng.uniform(0.0, 2.0 * M_PI), n,
                                config.sample_rate));
    spec.filters.push_back({1.0});
  }
  spec.target_snr_db = config.snr_db;
  return spec;
}

MixtureSpec ambands_recipe(const RecipeConfig& config, std::uint64_t seed) {
  const std::size_t n = static_cast<std::size_t>(
      std::llround(config.duration_s * config.sample_rate));
  const double nyquist = config.sample_rate / 2.0;
  const double lo = 200.0;
  const double hi = 0.65 * nyquist;
  const double span = hi - lo;
  const double width =
      span / (static_cast<double>(config.n_sources) -
              config.band_overlap *
                  static_cast<double>(config.n_sources - 1));

  MixtureSpec spec;
  spec.sample_rate = config.sample_rate;
  for (std::size_t i = 0; i < config.n_sources; ++i) {
    RngStream rng = RngStream::keyed(seed, RngOp::kRecipe, i);
    const double start = lo + static_cast<double>(i) * width *
                                  (1.0 - config.band_overlap);
    const double jitter = rng.uniform(-0.03, 0.03) * span;
    const double band_lo = std::max(20.0, start + jitter);
    const double band_hi = std::min(nyquist - 1.0, start + width + jitter);
    std::vector<double> src =
        band_noise(band_lo, band_hi, n, config.sample_rate, rng);

    // Slow amplitude modulation so the sources are non-stationary.
    const double mod_hz = rng.uniform(1.0, 3.0);
    const double mod_phase = rng.uniform(0.0, 2.0 * M_PI);
    for (std::size_t t = 0; t < n; ++t) {
      const double env =
          1.0 + 0.5 * std::sin(2.0 * M_PI * mod_hz * static_cast<double>(t) /
                                   config.sample_rate +
                               mod_phase);
      src[t] *= env;
    }
    spec.sources.push_back(std::move(src));
    spec.filters.push_back({1.0});
  }
  spec.target_snr_db = config.snr_db;
  return spec;
}

MixtureSpec moving_recipe(const RecipeConfig& config, std::uint64_t seed) {
  MixtureSpec spec = tones_recipe(config, seed ^ 0x5CEA0ULL);
  const std::size_t n = spec.sources.front().size();
  for (std::size_t i = 0; i < spec.sources.size(); ++i) {
    RngStream rng = RngStream::keyed(seed, RngOp::kRecipe, 100 + i);
    const double from = rng.uniform(0.2, 1.0);
    const double to = rng.uniform(0.2, 1.0);
    for (std::size_t t = 0; t < n; ++t) {
      const double u = static_cast<double>(t) / static_cast<double>(n - 1);
      spec.sources[i][t] *= from + (to - from) * u;
    }
  }
  return spec;
}

}  // namespace

void RecipeConfig::validate() const {
  if (name != "tones" && name != "ambands" && name != "moving") {
    throw std::invalid_argument("RecipeConfig: unknown recipe '" + name + "'");
  }
  if (n_sources < 1) {
    throw std::invalid_argument("RecipeConfig: need at least one source");
  }
  if (!(duration_s > 0.0) || !(sample_rate > 0.0)) {
    throw std::invalid_argument("RecipeConfig: invalid duration or rate");
  }
  if (!(band_overlap >= 0.0 && band_overlap < 1.0)) {
    throw std::invalid_argument("RecipeConfig: band_overlap must be in [0, 1)");
  }
  if (n_bands < n_sources + 1) {
    throw std::invalid_argument("RecipeConfig: n_bands too small");
  }
}

MixtureSpec make_recipe(const RecipeConfig& config, std::uint64_t seed) {
  config.validate();
  if (config.name == "tones") return tones_recipe(config, seed);
  if (config.name == "ambands") return ambands_recipe(config, seed);
  return moving_recipe(config, seed);
}

}  // namespace qisep
