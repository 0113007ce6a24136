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

#ifndef QISEP_MIXTURE_HPP_
#define QISEP_MIXTURE_HPP_

#include <cstdint>
#include <optional>
#include <vector>

namespace qisep {

// Convolutive mixing recipe: x(t) = sum_i (a_i * s_i)(t) + n(t).
struct MixtureSpec {
  std::vector<std::vector<double>> sources;  // N mono signals
  std::vector<std::vector<double>> filters;  // N FIR taps (length 1 = gain)
  std::vector<double> noise;                 // explicit noise, may be empty
  std::optional<double> target_snr_db;       // white noise at this SNR instead
  double sample_rate = 16000.0;

  void validate() const;
};

struct MixtureResult {
  std::vector<double> mixture;
  // Source images conv(a_i, s_i), scaled by the common gain; these are the
  // separation references.
  std::vector<std::vector<double>> references;
  std::vector<double> noise;  // realized noise, scaled by the common gain
  double gain = 1.0;          // joint peak normalization factor
  double sample_rate = 16000.0;
};

// Exact discrete convolution per source, summed, plus noise, then jointly
// peak-normalized to 0.9 full scale. The seed feeds noise generation only.
MixtureResult synthesize_mixture(const MixtureSpec& spec, std::uint64_t seed);

}  // namespace qisep

#endif  // QISEP_MIXTURE_HPP_
