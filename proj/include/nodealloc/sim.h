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

// Convergence experiments: a seeded synthetic fleet, a set of requests, an
// exhaustive baseline per request, and repeated genetic searches for every
// (request, population size) cell.

#ifndef NODEALLOC_SIM_H_
#define NODEALLOC_SIM_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "nodealloc/ega.h"
#include "nodealloc/exact.h"
#include "nodealloc/fitness.h"
#include "nodealloc/inventory.h"

namespace nodealloc {

inline constexpr std::uint64_t kDefaultFleetSeed = 2007;
// Relative distance from the optimum's match ratio that counts as the
// population-mean curve having reached the plateau.
inline constexpr double kPlateauBand = 0.01;

// Requests of 3, 4 and 5 nodes with ratios 50:30:20, 40:20:20:20 and
// 30:20:20:20:10, tolerance 5%.
std::vector<Request> DefaultCases();

struct ExperimentSpec {
  int fleet_size = 20;
  std::vector<int> capacity_choices = {50, 60, 70, 80, 90, 100};
  std::uint64_t fleet_seed = kDefaultFleetSeed;
  std::vector<Request> cases = DefaultCases();
  std::vector<int> population_sizes = {20, 40};
  int repetitions = 100;
  // Template for every run. population_size, crossover pairs (population / 2)
  // and rng_seed are set per run.
  EgaConfig ega;
  // Worker threads; 0 picks the hardware concurrency. Results do not depend
  // on it.
  int threads = 0;
};

// Throws Error(kValidation) for an unusable spec.
void ValidateExperimentSpec(const ExperimentSpec& spec);

// spec.fleet_size nodes with ids 1..fleet_size and capacities drawn
// uniformly from spec.capacity_choices. If no node drew 100, one randomly
// chosen node is raised to 100. Classes are derived.
Fleet GenerateFleet(const ExperimentSpec& spec);

// SplitMix64 finalizer.
std::uint64_t Mix64(std::uint64_t x);
// Seed of one run: fleet_seed, case index, population size and repetition
// folded in that order with h = Mix64(h ^ (v + 0x9e3779b97f4a7c15)).
std::uint64_t RunSeed(std::uint64_t fleet_seed, std::size_t case_index,
                      int population_size, int repetition);

// First generation whose best deviation is <= target, if any.
std::optional<int> GenerationsToReach(std::span<const GenerationTrace> traces,
                                      double target_deviation);

// Median with unreached runs ordered after every reached one. Empty when the
// median itself falls on an unreached run.
std::optional<double> CensoredMedian(std::span<const std::optional<int>> values);

struct CurvePoint {
  int generation = 0;
  double mean_match_ratio = 0.0;
  double mean_best_fitness_deviation = 0.0;
};

// Always built with every field given; Request has no default value.
struct CellReport {
  std::size_t case_index = 0;
  Request request;
  int population_size = 0;
  ExactResult exact;
  // Per repetition.
  std::vector<std::optional<int>> generations_to_optimum{};
  std::vector<double> final_best_deviation{};
  std::optional<double> median_generations_to_optimum{};
  double success_rate = 0.0;
  // Mean over repetitions of each generation's trace. Runs that stopped
  // early hold their last value.
  std::vector<CurvePoint> curve{};
  // First generation where the mean match ratio is within kPlateauBand of
  // the optimum's match ratio.
  std::optional<int> generations_to_plateau{};
};

struct ExperimentReport {
  ExperimentSpec spec;
  Fleet fleet;
  std::vector<CellReport> cells;
};

// Cells are ordered by case, then by population size.
ExperimentReport RunExperiment(const ExperimentSpec& spec);

nlohmann::json SummaryJson(const ExperimentReport& report);

// Writes summary.json, curve_<case>_<pop>.csv (case numbered from 1) and
// fleet.csv into `dir`, creating it if needed. Returns the summary path.
std::filesystem::path WriteExperiment(const ExperimentReport& report,
                                      const std::filesystem::path& dir);

}  // namespace nodealloc

#endif  // NODEALLOC_SIM_H_
