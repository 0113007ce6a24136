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

#include "qisep/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace qisep {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_pow2(std::vector<std::complex<double>>& data, bool inverse) {
  const std::size_t n = data.size();
  if (!is_power_of_two(n)) {
    throw std::invalid_argument("fft_pow2: length must be a power of two");
  }
  if (n == 1) return;

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    double angle = 2.0 * M_PI / static_cast<double>(len);
    if (!inverse) angle = -angle;
    const std::complex<double> wstep(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        auto u = data[i + k];
        auto v = data[i + k + len / 2] * w;
        data[i + k] = u + v;
        data[i + k + len / 2] = u - v;
        w *= wstep;
      }
    }
  }

  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& x : data) x *= scale;
  }
}

namespace {

// Bluestein's chirp-z: re-expresses a length-n DFT as a convolution that a
// power-of-two FFT can evaluate.
std::vector<std::complex<double>> bluestein(
    const std::vector<std::complex<double>>& input, bool inverse) {
  const std::size_t n = input.size();
  std::size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;

  const double sign = inverse ? 1.0 : -1.0;
  std::vector<std::complex<double>> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    // angle = sign * pi * k^2 / n, with k^2 reduced mod 2n to keep precision.
    std::size_t ksq = (k * k) % (2 * n);
    double angle = sign * M_PI * static_cast<double>(ksq) /
                   static_cast<double>(n);
    chirp[k] = {std::cos(angle), std::sin(angle)};
  }

  std::vector<std::complex<double>> a(m, {0.0, 0.0});
  std::vector<std::complex<double>> b(m, {0.0, 0.0});
  for (std::size_t k = 0; k < n; ++k) a[k] = input[k] * chirp[k];
  for (std::size_t k = 0; k < n; ++k) {
    b[k] = std::conj(chirp[k]);
    if (k != 0) b[m - k] = std::conj(chirp[k]);
  }

  fft_pow2(a, false);
  fft_pow2(b, false);
  for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
  fft_pow2(a, true);

  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp[k];
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& x : out) x *= scale;
  }
  return out;
}

}  // namespace

std::vector<std::complex<double>> dft(
    const std::vector<std::complex<double>>& input, bool inverse) {
  if (input.empty()) {
    throw std::invalid_argument("dft: empty input");
  }
  if (is_power_of_two(input.size())) {
    std::vector<std::complex<double>> data = input;
    fft_pow2(data, inverse);
    return data;
  }
  return bluestein(input, inverse);
}

}  // namespace qisep
