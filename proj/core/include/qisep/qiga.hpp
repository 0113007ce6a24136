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

#ifndef QISEP_QIGA_HPP_
#define QISEP_QIGA_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "qisep/qstate.hpp"
#include "qisep/rng.hpp"

namespace qisep {

// One individual: a vector of independent amplitude pairs. |beta|^2 of each
// pair decodes to one separation-model parameter in [0, 1].
struct Genome {
  std::vector<QubitPair> qubits;
};

struct QigaConfig {
  std::size_t population_size = 50;
  std::size_t max_generations = 100;
  double crossover_prob = 0.8;
  double mutation_prob = 0.1;
  // Stop once best fitness reaches this value; +inf disables the check.
  double desired_fitness = std::numeric_limits<double>::infinity();
  double mutation_angle_max = 0.3141592653589793;  // pi / 10
  std::size_t tournament_size = 2;
  std::size_t elitism = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

// Parameters of the closed-form convergence recurrence
// P(t+1) = P(t) + alpha * (1 / (1 + beta t)) * (1 - P(t)).
struct ConvergenceModel {
  double alpha = 0.1;  // operator effectiveness, in [0, 1]
  double beta = 0.0;   // exploration decay, >= 0
  double p0 = 0.0;     // initial probability

  void validate() const;
};

struct FitnessTrace {
  std::vector<double> best;
  std::vector<double> mean;

  std::size_t generations() const { return best.size(); }
};

using FitnessFn = std::function<double(const Genome&)>;

struct QigaResult {
  Genome best;
  double best_fitness = 0.0;
  FitnessTrace trace;
};

// Each qubit set to (cos(phi/2), sin(phi/2)) with phi uniform in [0, pi];
// deterministic for a fixed config.seed.
std::vector<Genome> init_population(const QigaConfig& config,
                                    std::size_t genome_len);

// Superposition blend with a fixed angle: per qubit,
// o1 = normalize(cos(phi) p1 + sin(phi) p2), o2 the mirror image.
// Throws std::invalid_argument when a qubit combination cancels to zero.
std::pair<Genome, Genome> blend_genomes(const Genome& p1, const Genome& p2,
                                        double phi);

// Draws phi uniform in [0, pi/2] and blends. A cancelled qubit triggers one
// re-draw of phi; if that also cancels the parents are returned unchanged.
std::pair<Genome, Genome> crossover(const Genome& p1, const Genome& p2,
                                    RngStream& rng);

// Each qubit independently rotated by Ry(theta), theta uniform in
// [-mutation_angle_max, +mutation_angle_max], with probability mutation_prob.
Genome mutate(const Genome& g, const QigaConfig& config, RngStream& rng);

// Tournament selection (without replacement inside a tournament) until the
// pool holds population_size - elitism indices; ties break to lower index.
std::vector<std::size_t> select(const std::vector<double>& fitnesses,
                                const QigaConfig& config, RngStream& rng);

// Full optimization loop with elitism. The evaluator must be pure; its
// failures abort with the generation and individual in the message. The
// trace holds one entry per evaluated generation (initial population
// included), so it has at most max_generations + 1 entries.
QigaResult run(const QigaConfig& config, std::size_t genome_len,
               const FitnessFn& evaluator);

// P(0..t_max) of the convergence recurrence; length t_max + 1.
std::vector<double> convergence_curve(const ConvergenceModel& model,
                                      std::size_t t_max);

}  // namespace qisep

#endif  // QISEP_QIGA_HPP_
