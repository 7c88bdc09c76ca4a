// Copyright 2026 The nodealloc Authors.
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

// Extended genetic algorithm for node-combination search.
//
// An individual is a combination of nodes; its genes are the nodes. One
// generation runs:
//   1. crossover: pairs of distinct combinations exchange one node each;
//      children that would hold the same node twice are dropped,
//   2. swap mutation: two nodes inside a combination trade places. Since a
//      combination is a set this yields the same combination with the same
//      fitness; the copy is appended to the pool and so gains roulette mass,
//   3. selection: the best individuals pass unconditionally (elitism), the
//      rest are drawn with replacement from a roulette wheel over the pool.
// Every random decision comes from one seeded engine in a fixed order, so a
// run is a pure function of (fleet, request, config).

#ifndef NODEALLOC_EGA_H_
#define NODEALLOC_EGA_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "nodealloc/fitness.h"
#include "nodealloc/inventory.h"

namespace nodealloc {

using Rng = std::mt19937_64;

struct EgaConfig {
  // Expected to be >= the fleet size; smaller values only produce a warning.
  int population_size = 20;
  int max_generations = 100;
  int elitism_count = 1;
  int crossover_pairs_per_generation = 20;
  // Per-individual chance of a swap mutation in each generation.
  double mutation_probability = 0.1;
  std::uint64_t rng_seed = 0;
  ShapeMode mode = ShapeMode::kAbsolute;
  // Stop after this many generations without a lower best deviation.
  std::optional<int> stop_on_stagnation;
};

// Defaults for a population size: one crossover pair per individual.
EgaConfig DefaultEgaConfig(int population_size);

// Throws Error(kValidation) for an unusable config and Error(kInfeasible)
// when the request needs more nodes than the fleet has. Returns warnings
// for soft violations (population smaller than the fleet).
std::vector<std::string> ValidateEgaConfig(const EgaConfig& config,
                                           const Fleet& fleet,
                                           const Request& request);

// Reads `key = value` lines whose keys are the EgaConfig field names. `#`
// starts a comment. Keys not present keep their value from `base`.
EgaConfig LoadEgaConfig(std::istream& in, EgaConfig base = {});

struct Individual {
  Combination combo;
  FitnessReport report;

  friend bool operator==(const Individual&, const Individual&) = default;
};

// Evaluates combinations for one (fleet, request, mode) and memoizes the
// reports. Not thread-safe; one per run.
class Evaluator {
 public:
  Evaluator(const Fleet& fleet, const Request& request, ShapeMode mode);

  Individual Make(Combination combo);

  const Fleet& fleet() const { return *fleet_; }
  const Request& request() const { return *request_; }
  ShapeMode mode() const { return mode_; }
  std::size_t cache_size() const { return cache_.size(); }

 private:
  const Fleet* fleet_;
  const Request* request_;
  ShapeMode mode_;
  std::map<std::vector<int>, FitnessReport> cache_;
};

struct GenerationTrace {
  int generation_index = 0;
  double best_fitness_deviation = 0.0;
  double mean_fitness_deviation = 0.0;
  double mean_match_ratio = 0.0;
  Combination best_combo;

  friend bool operator==(const GenerationTrace&,
                         const GenerationTrace&) = default;
};

// config.population_size random combinations. Duplicates across the
// population are allowed; duplicates inside a combination are not.
std::vector<Individual> InitPopulation(Evaluator& evaluator,
                                       const EgaConfig& config, Rng& rng);
// Seeds its own engine from config.rng_seed.
std::vector<Individual> InitPopulation(const Fleet& fleet,
                                       const Request& request,
                                       const EgaConfig& config);

// Ids ordered as the sorted capacity profile: highest capacity first, equal
// capacities by ascending id.
std::vector<int> ProfileOrder(const Combination& combo, const Fleet& fleet);

// Exchanges the node at `position_a` of parent_a's ProfileOrder with the
// node at `position_b` of parent_b's. Returns the children that still hold
// distinct nodes (0, 1 or 2 of them).
std::vector<Individual> CrossoverAt(const Individual& parent_a,
                                    const Individual& parent_b,
                                    std::size_t position_a,
                                    std::size_t position_b,
                                    Evaluator& evaluator);
// Same position in both parents.
std::vector<Individual> CrossoverAt(const Individual& parent_a,
                                    const Individual& parent_b,
                                    std::size_t position,
                                    Evaluator& evaluator);
// Positions drawn uniformly and independently for each parent.
std::vector<Individual> Crossover(const Individual& parent_a,
                                  const Individual& parent_b, Rng& rng,
                                  Evaluator& evaluator);

// Interchanges two randomly chosen nodes. The result is set-equal to the
// input and carries its report unchanged.
Individual SwapMutation(const Individual& individual, Rng& rng);

// Mutates each of the current pool members with `probability` and appends
// the mutants. Returns the number appended.
std::size_t ApplyMutation(std::vector<Individual>& pool, double probability,
                          Rng& rng);

// Raw weight 1 / (1 + fitness_deviation), rescaled to sum to 100.
std::vector<double> RouletteWeights(std::span<const Individual> pool);

// The config.elitism_count best of the pool, followed by draws with
// replacement from the roulette wheel up to config.population_size.
std::vector<Individual> SelectNextGeneration(std::span<const Individual> pool,
                                             const EgaConfig& config,
                                             Rng& rng);

GenerationTrace SummarizeGeneration(int generation_index,
                                    std::span<const Individual> population);

struct EvolveResult {
  Individual best;
  // One entry per generation, starting with the initial population.
  std::vector<GenerationTrace> traces;
  std::vector<std::string> warnings;
};

EvolveResult Evolve(const Fleet& fleet, const Request& request,
                    const EgaConfig& config);

// CSV with header
// generation,best_fitness_deviation,mean_fitness_deviation,mean_match_ratio,best_combo
void WriteTraceCsv(std::span<const GenerationTrace> traces, std::ostream& out);

}  // namespace nodealloc

#endif  // NODEALLOC_EGA_H_
