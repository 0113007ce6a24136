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

#include "qisep/qiga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qisep {

namespace {

constexpr double kZeroNormSq = 1e-24;

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
  }
}

std::pair<Genome, Genome> blend_or_throw(const Genome& p1, const Genome& p2,
                                         double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Genome o1, o2;
  o1.qubits.resize(p1.qubits.size());
  o2.qubits.resize(p1.qubits.size());
  for (std::size_t j = 0; j < p1.qubits.size(); ++j) {
    QubitPair a{c * p1.qubits[j].alpha + s * p2.qubits[j].alpha,
                c * p1.qubits[j].beta + s * p2.qubits[j].beta};
    QubitPair b{c * p2.qubits[j].alpha + s * p1.qubits[j].alpha,
                c * p2.qubits[j].beta + s * p1.qubits[j].beta};
    if (a.norm_sq() < kZeroNormSq || b.norm_sq() < kZeroNormSq) {
      throw std::invalid_argument(
          "blend_genomes: parent amplitudes cancel at qubit " +
          std::to_string(j));
    }
    o1.qubits[j] = a.normalized();
    o2.qubits[j] = b.normalized();
  }
  return {std::move(o1), std::move(o2)};
}

// Indices sorted by descending fitness, ties to lower index.
std::vector<std::size_t> rank_by_fitness(const std::vector<double>& fitnesses) {
  std::vector<std::size_t> order(fitnesses.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return fitnesses[a] > fitnesses[b];
                   });
  return order;
}

}  // namespace

void QigaConfig::validate() const {
  check_probability(crossover_prob, "crossover_prob");
  check_probability(mutation_prob, "mutation_prob");
  if (population_size < 2) {
    throw std::invalid_argument("population_size must be at least 2");
  }
  if (elitism >= population_size) {
    throw std::invalid_argument("elitism must be below population_size");
  }
  if (tournament_size == 0 || tournament_size > population_size) {
    throw std::invalid_argument(
        "tournament_size must be in [1, population_size]");
  }
  if (!(mutation_angle_max >= 0.0) || !std::isfinite(mutation_angle_max)) {
    throw std::invalid_argument("mutation_angle_max must be finite and >= 0");
  }
}

void ConvergenceModel::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("ConvergenceModel: alpha must be in [0, 1]");
  }
  if (!(beta >= 0.0)) {
    throw std::invalid_argument("ConvergenceModel: beta must be >= 0");
  }
  if (!(p0 >= 0.0 && p0 <= 1.0)) {
    throw std::invalid_argument("ConvergenceModel: p0 must be in [0, 1]");
  }
}

std::vector<Genome> init_population(const QigaConfig& config,
                                    std::size_t genome_len) {
  config.validate();
  if (genome_len == 0) {
    throw std::invalid_argument("init_population: genome_len must be >= 1");
  }
  std::vector<Genome> population(config.population_size);
  for (std::size_t i = 0; i < config.population_size; ++i) {
    RngStream rng = RngStream::keyed(config.seed, RngOp::kInit, i);
    population[i].qubits.resize(genome_len);
    for (std::size_t j = 0; j < genome_len; ++j) {
      const double phi = rng.uniform(0.0, M_PI);
      population[i].qubits[j] = {std::cos(phi / 2.0), std::sin(phi / 2.0)};
    }
  }
  return population;
}

std::pair<Genome, Genome> blend_genomes(const Genome& p1, const Genome& p2,
                                        double phi) {
  if (p1.qubits.size() != p2.qubits.size()) {
    throw std::invalid_argument("blend_genomes: parent length mismatch");
  }
  return blend_or_throw(p1, p2, phi);
}

std::pair<Genome, Genome> crossover(const Genome& p1, const Genome& p2,
                                    RngStream& rng) {
  if (p1.qubits.size() != p2.qubits.size()) {
    throw std::invalid_argument("crossover: parent length mismatch");
  }
  const double phi = rng.uniform(0.0, M_PI / 2.0);
  try {
    return blend_or_throw(p1, p2, phi);
  } catch (const std::invalid_argument&) {
  }
  const double retry = rng.uniform(0.0, M_PI / 2.0);
  try {
    return blend_or_throw(p1, p2, retry);
  } catch (const std::invalid_argument&) {
  }
  return {p1, p2};
}

Genome mutate(const Genome& g, const QigaConfig& config, RngStream& rng) {
  Genome out = g;
  for (auto& q : out.qubits) {
    if (rng.next_unit() < config.mutation_prob) {
      const double theta =
          rng.uniform(-config.mutation_angle_max, config.mutation_angle_max);
      q = rotate_y(q, theta).normalized();
    }
  }
  return out;
}

std::vector<std::size_t> select(const std::vector<double>& fitnesses,
                                const QigaConfig& config, RngStream& rng) {
  config.validate();
  const std::size_t n = fitnesses.size();
  if (n == 0) throw std::invalid_argument("select: empty fitness vector");
  if (config.tournament_size > n) {
    throw std::invalid_argument("select: tournament larger than population");
  }
  const std::size_t pool_size = config.population_size - config.elitism;
  std::vector<std::size_t> pool;
  pool.reserve(pool_size);
  std::vector<std::size_t> scratch(n);
  std::iota(scratch.begin(), scratch.end(), 0);
  for (std::size_t slot = 0; slot < pool_size; ++slot) {
    // Partial Fisher-Yates: tournament contestants are distinct.
    std::size_t winner = n;
    for (std::size_t k = 0; k < config.tournament_size; ++k) {
      const std::size_t pick = k + rng.uniform_index(n - k);
      std::swap(scratch[k], scratch[pick]);
      const std::size_t cand = scratch[k];
      if (winner == n || fitnesses[cand] > fitnesses[winner] ||
          (fitnesses[cand] == fitnesses[winner] && cand < winner)) {
        winner = cand;
      }
    }
    pool.push_back(winner);
  }
  return pool;
}

QigaResult run(const QigaConfig& config, std::size_t genome_len,
               const FitnessFn& evaluator) {
  config.validate();
  if (!evaluator) throw std::invalid_argument("run: evaluator not set");

  std::vector<Genome> population = init_population(config, genome_len);

  QigaResult result;
  result.best_fitness = -std::numeric_limits<double>::infinity();
  std::vector<double> fitnesses(population.size());

  auto evaluate_all = [&](std::size_t generation) {
    double sum = 0.0;
    for (std::size_t i = 0; i < population.size(); ++i) {
      try {
        fitnesses[i] = evaluator(population[i]);
      } catch (const std::exception& e) {
        throw std::runtime_error("fitness evaluation failed at generation " +
                                 std::to_string(generation) + ", individual " +
                                 std::to_string(i) + ": " + e.what());
      }
      sum += fitnesses[i];
      if (fitnesses[i] > result.best_fitness) {
        result.best_fitness = fitnesses[i];
        result.best = population[i];
      }
    }
    const std::size_t best_idx = rank_by_fitness(fitnesses)[0];
    result.trace.best.push_back(fitnesses[best_idx]);
    result.trace.mean.push_back(sum / static_cast<double>(population.size()));
  };

  evaluate_all(0);

  std::size_t t = 0;
  while (t < config.max_generations &&
         result.best_fitness < config.desired_fitness) {
    const std::vector<std::size_t> order = rank_by_fitness(fitnesses);

    std::vector<Genome> next;
    next.reserve(config.population_size);
    for (std::size_t e = 0; e < config.elitism; ++e) {
      next.push_back(population[order[e]]);
    }

    RngStream select_rng = RngStream::keyed(config.seed, RngOp::kSelect, t);
    const std::vector<std::size_t> pool =
        select(fitnesses, config, select_rng);

    std::vector<Genome> offspring;
    offspring.reserve(pool.size());
    for (std::size_t p = 0; p + 1 < pool.size(); p += 2) {
      RngStream cx = RngStream::keyed(config.seed, RngOp::kCrossover, t, p / 2);
      const Genome& a = population[pool[p]];
      const Genome& b = population[pool[p + 1]];
      if (cx.next_unit() < config.crossover_prob) {
        auto [o1, o2] = crossover(a, b, cx);
        offspring.push_back(std::move(o1));
        offspring.push_back(std::move(o2));
      } else {
        offspring.push_back(a);
        offspring.push_back(b);
      }
    }
    if (pool.size() % 2 == 1) {
      offspring.push_back(population[pool.back()]);
    }

    for (std::size_t i = 0; i < offspring.size(); ++i) {
      RngStream mrng = RngStream::keyed(config.seed, RngOp::kMutate, t, i);
      next.push_back(mutate(offspring[i], config, mrng));
    }

    population = std::move(next);
    ++t;
    evaluate_all(t);
  }
  return result;
}

std::vector<double> convergence_curve(const ConvergenceModel& model,
                                      std::size_t t_max) {
  model.validate();
  std::vector<double> curve;
  curve.reserve(t_max + 1);
  double p = model.p0;
  curve.push_back(p);
  for (std::size_t t = 0; t < t_max; ++t) {
    const double exploration = 1.0 / (1.0 + model.beta * static_cast<double>(t));
    p += model.alpha * exploration * (1.0 - p);
    curve.push_back(p);
  }
  return curve;
}

}  // namespace qisep
