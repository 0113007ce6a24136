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

#ifndef QISEP_METRICS_HPP_
#define QISEP_METRICS_HPP_

#include <cstddef>
#include <vector>

#include "qisep/sepmodel.hpp"

namespace qisep {

// All metric outputs are clamped into [-kMetricCapDb, +kMetricCapDb] so
// perfect reconstructions report a finite cap instead of infinity.
constexpr double kMetricCapDb = 300.0;

struct EvalTriple {
  double sdr = 0.0;
  double sir = 0.0;
  double sar = 0.0;
};

struct FitnessWeights {
  double w_sdr = 0.5;
  double w_sir = 0.3;
  double w_sar = 0.2;
  double w_corr = 1.0;

  void validate() const;  // rejects all-zero weights or negatives
};

// Records which clamp rules fired while computing metrics.
struct MetricClamps {
  bool sdr_capped = false;
  bool sir_denominator = false;
  bool sar_clamped = false;

  void merge(const MetricClamps& other);
  bool any() const { return sdr_capped || sir_denominator || sar_clamped; }
};

// 10 log10(sum s^2 / sum (s - s_hat)^2), capped at +300 dB when the error
// energy drops below 1e-30 of the signal energy. Reference must be nonzero.
double sdr(const std::vector<double>& reference,
           const std::vector<double>& estimate,
           MetricClamps* clamps = nullptr);

// 10 log10(sum s^2 / (sum (s_hat - s)^2 - sum n^2)), denominator clamped at
// 1e-12 of the signal energy. With zero noise this reduces to sdr exactly.
double sir(const std::vector<double>& reference,
           const std::vector<double>& estimate,
           const std::vector<double>& noise, MetricClamps* clamps = nullptr);

// 10 log10(sum (s_hat - n)^2 / sum (s_hat - s)^2), both energies floored at
// 1e-30 absolute.
double sar(const std::vector<double>& reference,
           const std::vector<double>& estimate,
           const std::vector<double>& noise, MetricClamps* clamps = nullptr);

EvalTriple evaluate_triple(const std::vector<double>& reference,
                           const std::vector<double>& estimate,
                           const std::vector<double>& noise,
                           MetricClamps* clamps = nullptr);

// Composite objective: w_sdr mean(SDR) + w_sir mean(SIR) + w_sar mean(SAR)
// - w_corr correlation_penalty. Estimates must already be aligned to the
// references (see align_sources).
double fitness(const SeparatedSources& estimates,
               const std::vector<std::vector<double>>& references,
               const std::vector<double>& noise, const FitnessWeights& weights,
               MetricClamps* clamps = nullptr);

// Permutation p maximizing mean sdr(references[i], estimates[p[i]]),
// exhaustive over all orderings; ties break to the lexicographically
// smallest permutation. Supports up to 6 sources.
std::vector<std::size_t> align_sources(
    const std::vector<std::vector<double>>& references,
    const std::vector<std::vector<double>>& estimates);

}  // namespace qisep

#endif  // QISEP_METRICS_HPP_
