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

#ifndef QISEP_WAV_HPP_
#define QISEP_WAV_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace qisep {

struct WavData {
  std::vector<double> samples;  // mono, in [-1, 1]
  std::uint32_t sample_rate = 0;
};

// Reads PCM16 or 32-bit float RIFF/WAVE; stereo is downmixed by averaging.
// Throws std::runtime_error naming the missing or unsupported chunk.
WavData read_wav(const std::string& path);

// Writes mono PCM16 (round-to-nearest, no dithering).
void write_wav(const std::string& path, const std::vector<double>& samples,
               std::uint32_t sample_rate);

}  // namespace qisep

#endif  // QISEP_WAV_HPP_
