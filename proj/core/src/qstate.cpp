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

#include "qisep/qstate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qisep {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_qubit(int qubit) {
  if (qubit < 0 || qubit >= StateVector4::kNumQubits) {
    throw std::invalid_argument("qubit index out of range: " +
                                std::to_string(qubit));
  }
}

// Qubit 0 is the most significant bit of the basis index.
int bit_mask(int qubit) { return 1 << (StateVector4::kNumQubits - 1 - qubit); }

}  // namespace

double QubitPair::norm_sq() const {
  return std::norm(alpha) + std::norm(beta);
}

QubitPair QubitPair::normalized() const {
  double n = std::sqrt(norm_sq());
  if (n < 1e-15) {
    throw std::invalid_argument("cannot normalize a zero amplitude pair");
  }
  return {alpha / n, beta / n};
}

QubitPair rotate_y(const QubitPair& q, double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("rotate_y: non-finite angle");
  }
  double c = std::cos(theta / 2.0);
  double s = std::sin(theta / 2.0);
  return {c * q.alpha - s * q.beta, s * q.alpha + c * q.beta};
}

StateVector4 StateVector4::zero_state() { return basis(0); }

StateVector4 StateVector4::basis(int index) {
  if (index < 0 || index >= kDim) {
    throw std::invalid_argument("basis index out of range");
  }
  StateVector4 s;
  s.amps[static_cast<std::size_t>(index)] = {1.0, 0.0};
  return s;
}

double StateVector4::norm_sq() const {
  double total = 0.0;
  for (const auto& a : amps) total += std::norm(a);
  return total;
}

StateVector4 apply_hadamard(const StateVector4& state, int qubit) {
  check_qubit(qubit);
  StateVector4 out = state;
  int mask = bit_mask(qubit);
  for (int i = 0; i < StateVector4::kDim; ++i) {
    if (i & mask) continue;
    auto a = state.amps[static_cast<std::size_t>(i)];
    auto b = state.amps[static_cast<std::size_t>(i | mask)];
    out.amps[static_cast<std::size_t>(i)] = (a + b) * kInvSqrt2;
    out.amps[static_cast<std::size_t>(i | mask)] = (a - b) * kInvSqrt2;
  }
  return out;
}

StateVector4 apply_ry(const StateVector4& state, int qubit, double theta) {
  check_qubit(qubit);
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("apply_ry: non-finite angle");
  }
  double c = std::cos(theta / 2.0);
  double s = std::sin(theta / 2.0);
  StateVector4 out = state;
  int mask = bit_mask(qubit);
  for (int i = 0; i < StateVector4::kDim; ++i) {
    if (i & mask) continue;
    auto a = state.amps[static_cast<std::size_t>(i)];
    auto b = state.amps[static_cast<std::size_t>(i | mask)];
    out.amps[static_cast<std::size_t>(i)] = c * a - s * b;
    out.amps[static_cast<std::size_t>(i | mask)] = s * a + c * b;
  }
  return out;
}

StateVector4 apply_cnot(const StateVector4& state, int control, int target) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) {
    throw std::invalid_argument("apply_cnot: control equals target");
  }
  StateVector4 out = state;
  int cmask = bit_mask(control);
  int tmask = bit_mask(target);
  for (int i = 0; i < StateVector4::kDim; ++i) {
    if ((i & cmask) && !(i & tmask)) {
      out.amps[static_cast<std::size_t>(i)] =
          state.amps[static_cast<std::size_t>(i | tmask)];
      out.amps[static_cast<std::size_t>(i | tmask)] =
          state.amps[static_cast<std::size_t>(i)];
    }
  }
  return out;
}

StateVector4 encode_features(const std::vector<double>& angles) {
  if (angles.empty() || angles.size() % 2 != 0) {
    throw std::invalid_argument(
        "encode_features: angle count must be even and at least 2, got " +
        std::to_string(angles.size()));
  }
  StateVector4 state = StateVector4::zero_state();
  state = apply_hadamard(state, 0);
  state = apply_hadamard(state, 3);
  for (std::size_t k = 0; k + 1 < angles.size(); k += 2) {
    state = apply_cnot(state, 0, 1);
    state = apply_ry(state, 1, angles[k]);
    state = apply_cnot(state, 1, 2);
    state = apply_ry(state, 2, angles[k + 1]);
    state = apply_cnot(state, 2, 3);
  }
  return state;
}

double fidelity(const StateVector4& a, const StateVector4& b) {
  std::complex<double> inner{0.0, 0.0};
  for (int i = 0; i < StateVector4::kDim; ++i) {
    inner += std::conj(a.amps[static_cast<std::size_t>(i)]) *
             b.amps[static_cast<std::size_t>(i)];
  }
  double f = std::norm(inner);
  if (f < 0.0) return 0.0;
  if (f > 1.0 && f < 1.0 + 1e-9) return 1.0;
  return f;
}

}  // namespace qisep
