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

#ifndef QISEP_RNG_HPP_
#define QISEP_RNG_HPP_

#include <cstdint>
#include <cstddef>

namespace qisep {

// Stream identifiers used to key per-operator random streams. Keeping the
// keying explicit makes every draw reproducible regardless of evaluation
// order or parallelism.
enum class RngOp : std::uint64_t {
  kInit = 1,
  kSelect = 2,
  kCrossover = 3,
  kMutate = 4,
  kNoise = 5,
  kSubsample = 6,
  kRecipe = 7,
};

// Deterministic counter-keyed PRNG stream (splitmix64). The same key yields
// the same sequence on every platform; no global state.
class RngStream {
 public:
  static RngStream keyed(std::uint64_t seed, std::uint64_t a = 0,
                         std::uint64_t b = 0, std::uint64_t c = 0);
  static RngStream keyed(std::uint64_t seed, RngOp op, std::uint64_t b = 0,
                         std::uint64_t c = 0);

  std::uint64_t next_u64();

  // Uniform in [0, 1).
  double next_unit();

  // Uniform in [lo, hi).
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller (consumes two draws per call).
  double normal();

  // Uniform index in [0, n); n must be positive.
  std::size_t uniform_index(std::size_t n);

 private:
  explicit RngStream(std::uint64_t state) : state_(state) {}
  std::uint64_t state_;
};

}  // namespace qisep

#endif  // QISEP_RNG_HPP_
