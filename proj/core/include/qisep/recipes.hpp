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

#ifndef QISEP_RECIPES_HPP_
#define QISEP_RECIPES_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "qisep/mixture.hpp"

namespace qisep {

// Self-contained synthetic scenes:
//   "tones"   - sinusoids parked in disjoint mel bands
//   "ambands" - amplitude-modulated noise bands with adjustable overlap
//   "moving"  - sources with drifting gains (crude source-mobility analog)
struct RecipeConfig {
  std::string name = "tones";
  std::size_t n_sources = 2;
  double duration_s = 1.0;
  double sample_rate = 8000.0;
  std::optional<double> snr_db = 10.0;  // white-noise level; nullopt = clean
  double band_overlap = 0.25;           // ambands only, fraction in [0, 1)
  std::size_t n_bands = 16;             // mel band layout for tone placement

  void validate() const;
};

MixtureSpec make_recipe(const RecipeConfig& config, std::uint64_t seed);

}  // namespace qisep

#endif  // QISEP_RECIPES_HPP_
