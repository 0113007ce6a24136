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

#include "qisep/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace qisep {

namespace {

// splitmix64 finalizer (Sebastiano Vigna, public domain reference code).
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream RngStream::keyed(std::uint64_t seed, std::uint64_t a,
                           std::uint64_t b, std::uint64_t c) {
  std::uint64_t s = mix64(seed);
  s = mix64(s ^ a);
  s = mix64(s ^ b);
  s = mix64(s ^ c);
  return RngStream(s);
}

RngStream RngStream::keyed(std::uint64_t seed, RngOp op, std::uint64_t b,
                           std::uint64_t c) {
  return keyed(seed, static_cast<std::uint64_t>(op), b, c);
}

std::uint64_t RngStream::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double RngStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * next_unit();
}

double RngStream::normal() {
  // 1 - u lies in (0, 1], keeping the log argument positive.
  double u = 1.0 - next_unit();
  double v = next_unit();
  double r = std::sqrt(-2.0 * std::log(u));
  return r * std::cos(2.0 * M_PI * v);
}

std::size_t RngStream::uniform_index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
  return static_cast<std::size_t>(next_u64() % n);
}

}  // namespace qisep
