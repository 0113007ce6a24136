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

#include "qisep/postproc.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "qisep/fft.hpp"

namespace qisep {

double BandpassConfig::resolved_high(double sample_rate) const {
  return high_hz > 0.0 ? high_hz : 0.45 * sample_rate;
}

void BandpassConfig::validate(double sample_rate) const {
  const double high = resolved_high(sample_rate);
  if (!(low_hz >= 0.0) || !(low_hz < high) || !(high <= sample_rate / 2.0)) {
    throw std::invalid_argument(
        "BandpassConfig: need 0 <= low < high <= sample_rate / 2");
  }
}

void CompressorConfig::validate() const {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw std::invalid_argument("CompressorConfig: threshold must be in (0, 1]");
  }
  if (!(ratio >= 1.0)) {
    throw std::invalid_argument("CompressorConfig: ratio must be >= 1");
  }
}

std::vector<double> bandpass(const std::vector<double>& signal,
                             const BandpassConfig& config,
                             double sample_rate) {
  config.validate(sample_rate);
  if (signal.empty()) return {};
  const double high = config.resolved_high(sample_rate);
  const std::size_t n = signal.size();

  std::vector<std::complex<double>> spectrum(n);
  for (std::size_t i = 0; i < n; ++i) spectrum[i] = {signal[i], 0.0};
  spectrum = dft(spectrum, false);

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t folded = k <= n / 2 ? k : n - k;
    const double f =
        static_cast<double>(folded) * sample_rate / static_cast<double>(n);
    if (f < config.low_hz || f > high) spectrum[k] = {0.0, 0.0};
  }

  spectrum = dft(spectrum, true);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = spectrum[i].real();
  return out;
}

std::vector<double> compress(const std::vector<double>& signal,
                             const CompressorConfig& config) {
  config.validate();
  std::vector<double> out(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const double x = signal[i];
    const double mag = std::abs(x);
    if (mag <= config.threshold) {
      out[i] = x;
    } else {
      const double compressed =
          config.threshold + (mag - config.threshold) / config.ratio;
      out[i] = std::copysign(compressed, x);
    }
  }
  return out;
}

namespace {

// Cubic Hermite on [0, 1] with endpoint values p0/p1 and tangents m0/m1
// already scaled to the interval.
double hermite(double t, double p0, double p1, double m0, double m1) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * p0 + (t3 - 2.0 * t2 + t) * m0 +
         (-2.0 * t3 + 3.0 * t2) * p1 + (t3 - t2) * m1;
}

}  // namespace

DeclipResult declip(const std::vector<double>& signal, double clip_level) {
  if (!(clip_level > 0.0 && clip_level <= 1.0)) {
    throw std::invalid_argument("declip: clip_level must be in (0, 1]");
  }
  DeclipResult result;
  result.samples = signal;
  if (signal.empty()) return result;

  auto clipped = [&](std::size_t i) {
    return std::abs(signal[i]) >= clip_level;
  };

  const std::size_t n = signal.size();
  std::size_t i = 0;
  bool any_unclipped = false;
  while (i < n) {
    if (!clipped(i)) {
      any_unclipped = true;
      ++i;
      continue;
    }
    std::size_t run_end = i;  // inclusive
    while (run_end + 1 < n && clipped(run_end + 1)) ++run_end;

    const bool has_left = i > 0;
    const bool has_right = run_end + 1 < n;
    if (has_left && has_right) {
      const std::size_t left = i - 1;
      const std::size_t right = run_end + 1;
      const double span = static_cast<double>(right - left);
      const double p0 = signal[left];
      const double p1 = signal[right];
      const double slope0 = left > 0 ? signal[left] - signal[left - 1] : 0.0;
      const double slope1 =
          right + 1 < n ? signal[right + 1] - signal[right] : 0.0;
      for (std::size_t j = i; j <= run_end; ++j) {
        const double t = static_cast<double>(j - left) / span;
        result.samples[j] =
            hermite(t, p0, p1, slope0 * span, slope1 * span);
      }
    } else if (has_left) {
      for (std::size_t j = i; j <= run_end; ++j) {
        result.samples[j] = signal[i - 1];
      }
    } else if (has_right) {
      for (std::size_t j = i; j <= run_end; ++j) {
        result.samples[j] = signal[run_end + 1];
      }
    }
    i = run_end + 1;
  }

  if (!any_unclipped) {
    result.samples = signal;
    result.all_clipped = true;
  }
  return result;
}

std::vector<double> postprocess(const std::vector<double>& signal,
                                const PostprocConfig& config,
                                double sample_rate, PostprocFlags* flags) {
  if (!config.enabled) return signal;
  std::vector<double> out = signal;
  if (config.bandpass_enabled) {
    out = bandpass(out, config.bandpass, sample_rate);
  }
  if (config.compress_enabled) {
    out = compress(out, config.compressor);
  }
  if (config.declip_enabled) {
    DeclipResult r = declip(out, config.clip_level);
    if (flags) flags->declip_all_clipped |= r.all_clipped;
    out = std::move(r.samples);
  }
  return out;
}

}  // namespace qisep
