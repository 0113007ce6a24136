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

#include "qisep/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qisep {

namespace {

double energy(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

double diff_energy(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void check_lengths(const std::vector<double>& a, const std::vector<double>& b,
                   const char* where) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument(std::string(where) + ": length mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
}

double clamp_db(double db) {
  return std::clamp(db, -kMetricCapDb, kMetricCapDb);
}

}  // namespace

void FitnessWeights::validate() const {
  if (w_sdr < 0.0 || w_sir < 0.0 || w_sar < 0.0 || w_corr < 0.0) {
    throw std::invalid_argument("FitnessWeights: weights must be >= 0");
  }
  if (w_sdr == 0.0 && w_sir == 0.0 && w_sar == 0.0 && w_corr == 0.0) {
    throw std::invalid_argument("FitnessWeights: not all weights may be zero");
  }
}

void MetricClamps::merge(const MetricClamps& other) {
  sdr_capped |= other.sdr_capped;
  sir_denominator |= other.sir_denominator;
  sar_clamped |= other.sar_clamped;
}

double sdr(const std::vector<double>& reference,
           const std::vector<double>& estimate, MetricClamps* clamps) {
  check_lengths(reference, estimate, "sdr");
  const double signal = energy(reference);
  if (signal <= 0.0) {
    throw std::invalid_argument("sdr: reference is all-zero");
  }
  const double error = diff_energy(reference, estimate);
  if (error < 1e-30 * signal) {
    if (clamps) clamps->sdr_capped = true;
    return kMetricCapDb;
  }
  return clamp_db(10.0 * std::log10(signal / error));
}

double sir(const std::vector<double>& reference,
           const std::vector<double>& estimate,
           const std::vector<double>& noise, MetricClamps* clamps) {
  check_lengths(reference, estimate, "sir");
  check_lengths(reference, noise, "sir");
  const double signal = energy(reference);
  if (signal <= 0.0) {
    throw std::invalid_argument("sir: reference is all-zero");
  }
  const double noise_energy = energy(noise);
  if (noise_energy == 0.0) {
    return sdr(reference, estimate, clamps);
  }
  const double delta = 1e-12 * signal;
  double denom = diff_energy(estimate, reference) - noise_energy;
  if (denom < delta) {
    if (clamps) clamps->sir_denominator = true;
    denom = delta;
  }
  return clamp_db(10.0 * std::log10(signal / denom));
}

double sar(const std::vector<double>& reference,
           const std::vector<double>& estimate,
           const std::vector<double>& noise, MetricClamps* clamps) {
  check_lengths(reference, estimate, "sar");
  check_lengths(reference, noise, "sar");
  constexpr double kDelta = 1e-30;
  double num = diff_energy(estimate, noise);
  double den = diff_energy(estimate, reference);
  if (num < kDelta || den < kDelta) {
    if (clamps) clamps->sar_clamped = true;
    num = std::max(num, kDelta);
    den = std::max(den, kDelta);
  }
  return clamp_db(10.0 * std::log10(num / den));
}

EvalTriple evaluate_triple(const std::vector<double>& reference,
                           const std::vector<double>& estimate,
                           const std::vector<double>& noise,
                           MetricClamps* clamps) {
  EvalTriple t;
  t.sdr = sdr(reference, estimate, clamps);
  t.sir = sir(reference, estimate, noise, clamps);
  t.sar = sar(reference, estimate, noise, clamps);
  return t;
}

double fitness(const SeparatedSources& estimates,
               const std::vector<std::vector<double>>& references,
               const std::vector<double>& noise, const FitnessWeights& weights,
               MetricClamps* clamps) {
  weights.validate();
  if (estimates.signals.size() != references.size() || references.empty()) {
    throw std::invalid_argument("fitness: source count mismatch");
  }
  double sum_sdr = 0.0, sum_sir = 0.0, sum_sar = 0.0;
  for (std::size_t i = 0; i < references.size(); ++i) {
    const EvalTriple t =
        evaluate_triple(references[i], estimates.signals[i], noise, clamps);
    sum_sdr += t.sdr;
    sum_sir += t.sir;
    sum_sar += t.sar;
  }
  const double n = static_cast<double>(references.size());
  return weights.w_sdr * (sum_sdr / n) + weights.w_sir * (sum_sir / n) +
         weights.w_sar * (sum_sar / n) -
         weights.w_corr * correlation_penalty(estimates);
}

std::vector<std::size_t> align_sources(
    const std::vector<std::vector<double>>& references,
    const std::vector<std::vector<double>>& estimates) {
  const std::size_t n = references.size();
  if (n == 0 || estimates.size() != n) {
    throw std::invalid_argument("align_sources: source count mismatch");
  }
  if (n > 6) {
    throw std::invalid_argument(
        "align_sources: unsupported source count (max 6), got " +
        std::to_string(n));
  }

  // Pairwise SDRs once; permutations only sum them.
  std::vector<std::vector<double>> pair_sdr(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      pair_sdr[i][j] = sdr(references[i], estimates[j]);
    }
  }

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> best = perm;
  double best_score = -std::numeric_limits<double>::infinity();
  do {
    double score = 0.0;
    for (std::size_t i = 0; i < n; ++i) score += pair_sdr[i][perm[i]];
    // Strict inequality keeps the first (lexicographically smallest) winner.
    if (score > best_score) {
      best_score = score;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace qisep
