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

#ifndef QISEP_QSTATE_HPP_
#define QISEP_QSTATE_HPP_

#include <array>
#include <complex>
#include <vector>

namespace qisep {

// One (alpha, beta) amplitude pair: alpha|0> + beta|1>, |alpha|^2+|beta|^2=1.
struct QubitPair {
  std::complex<double> alpha{1.0, 0.0};
  std::complex<double> beta{0.0, 0.0};

  double norm_sq() const;
  // Scales to unit norm. Throws std::invalid_argument on a zero vector.
  QubitPair normalized() const;
};

// Ry(theta) with the standard half-angle convention,
// [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]].
QubitPair rotate_y(const QubitPair& q, double theta);

// Four-qubit state. Basis index packs qubit 0 as the most significant bit:
// index = q0*8 + q1*4 + q2*2 + q3.
struct StateVector4 {
  static constexpr int kNumQubits = 4;
  static constexpr int kDim = 16;

  std::array<std::complex<double>, kDim> amps{};

  static StateVector4 zero_state();        // |0000>
  static StateVector4 basis(int index);    // one basis amplitude set to 1

  double norm_sq() const;
};

StateVector4 apply_hadamard(const StateVector4& state, int qubit);
StateVector4 apply_ry(const StateVector4& state, int qubit, double theta);
StateVector4 apply_cnot(const StateVector4& state, int control, int target);

// Feature-encoding circuit: H on qubits 0 and 3, then per angle pair
// (a, b): CNOT(0,1), Ry(a) on qubit 1, CNOT(1,2), Ry(b) on qubit 2,
// CNOT(2,3). Angles are expected in [0, pi]; the length must be even and
// at least 2.
StateVector4 encode_features(const std::vector<double>& angles);

// |<a|b>|^2 in [0, 1].
double fidelity(const StateVector4& a, const StateVector4& b);

}  // namespace qisep

#endif  // QISEP_QSTATE_HPP_
