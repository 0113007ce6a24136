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

#ifndef QISEP_FFT_HPP_
#define QISEP_FFT_HPP_

#include <complex>
#include <cstddef>
#include <vector>

namespace qisep {

bool is_power_of_two(std::size_t n);

// In-place iterative radix-2 transform; data.size() must be a power of two.
// Forward applies no scaling; inverse applies 1/n.
void fft_pow2(std::vector<std::complex<double>>& data, bool inverse);

// DFT of arbitrary length (Bluestein when the length is not a power of two).
// Same scaling convention as fft_pow2.
std::vector<std::complex<double>> dft(
    const std::vector<std::complex<double>>& input, bool inverse);

}  // namespace qisep

#endif  // QISEP_FFT_HPP_
