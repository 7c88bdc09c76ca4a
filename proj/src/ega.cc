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

#include "nodealloc/ega.h"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <utility>

#include "nodealloc/serialize.h"

namespace nodealloc {
namespace {

std::string_view Trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

template <typename T>
T ParseConfigNumber(std::string_view key, std::string_view text, int line) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::kParse,
                "config line " + std::to_string(line) + ": bad value '" +
                    std::string(text) + "' for " + std::string(key));
  }
  return value;
}

const Individual& BestOf(std::span<const Individual> population) {
  return *std::min_element(
      population.begin(), population.end(),
      [](const Individual& a, const Individual& b) {
        return RanksBefore(a.combo, a.report, b.combo, b.report);
      });
}

}  // namespace

std::vector<int> ProfileOrder(const Combination& combo, const Fleet& fleet) {
  std::vector<int> ids = combo.ids();
  std::stable_sort(ids.begin(), ids.end(), [&fleet](int x, int y) {
    return fleet.CapacityOf(x) > fleet.CapacityOf(y);
  });
  return ids;
}

EgaConfig DefaultEgaConfig(int population_size) {
  EgaConfig config;
  config.population_size = population_size;
  config.crossover_pairs_per_generation = population_size;
  return config;
}

std::vector<std::string> ValidateEgaConfig(const EgaConfig& config,
                                           const Fleet& fleet,
                                           const Request& request) {
  auto invalid = [](const std::string& message) {
    throw Error(ErrorKind::kValidation, message);
  };
  if (config.population_size < 2) invalid("population_size must be >= 2");
  if (config.max_generations < 1) invalid("max_generations must be >= 1");
  if (config.elitism_count < 1) invalid("elitism_count must be >= 1");
  if (config.elitism_count >= config.population_size) {
    invalid("elitism_count must be smaller than population_size");
  }
  if (config.crossover_pairs_per_generation < 1) {
    invalid("crossover_pairs_per_generation must be >= 1");
  }
  if (!(config.mutation_probability >= 0.0 &&
        config.mutation_probability <= 1.0)) {
    invalid("mutation_probability must be in [0, 1]");
  }
  if (config.stop_on_stagnation && *config.stop_on_stagnation < 1) {
    invalid("stop_on_stagnation must be >= 1 when set");
  }
  if (fleet.empty()) invalid("fleet is empty");
  if (static_cast<std::size_t>(request.n_request()) > fleet.size()) {
    throw Error(ErrorKind::kInfeasible,
                "request needs " + std::to_string(request.n_request()) +
                    " nodes but the fleet has " +
                    std::to_string(fleet.size()));
  }
  std::vector<std::string> warnings;
  if (static_cast<std::size_t>(config.population_size) < fleet.size()) {
    warnings.push_back("population_size " +
                       std::to_string(config.population_size) +
                       " is smaller than the fleet size " +
                       std::to_string(fleet.size()));
  }
  return warnings;
}

EgaConfig LoadEgaConfig(std::istream& in, EgaConfig base) {
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = raw;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) {
      text = text.substr(0, hash);
    }
    text = Trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kParse, "config line " + std::to_string(line) +
                                         ": expected key = value");
    }
    const std::string_view key = Trim(text.substr(0, eq));
    const std::string_view value = Trim(text.substr(eq + 1));
    if (key == "population_size") {
      base.population_size = ParseConfigNumber<int>(key, value, line);
    } else if (key == "max_generations") {
      base.max_generations = ParseConfigNumber<int>(key, value, line);
    } else if (key == "elitism_count") {
      base.elitism_count = ParseConfigNumber<int>(key, value, line);
    } else if (key == "crossover_pairs_per_generation") {
      base.crossover_pairs_per_generation =
          ParseConfigNumber<int>(key, value, line);
    } else if (key == "mutation_probability") {
      base.mutation_probability = ParseConfigNumber<double>(key, value, line);
    } else if (key == "rng_seed") {
      base.rng_seed = ParseConfigNumber<std::uint64_t>(key, value, line);
    } else if (key == "mode") {
      base.mode = ParseShapeMode(value);
    } else if (key == "stop_on_stagnation") {
      if (value == "none" || value.empty()) {
        base.stop_on_stagnation.reset();
      } else {
        base.stop_on_stagnation = ParseConfigNumber<int>(key, value, line);
      }
    } else {
      throw Error(ErrorKind::kParse, "config line " + std::to_string(line) +
                                         ": unknown key '" + std::string(key) +
                                         "'");
    }
  }
  return base;
}

Evaluator::Evaluator(const Fleet& fleet, const Request& request,
                     ShapeMode mode)
    : fleet_(&fleet), request_(&request), mode_(mode) {}

Individual Evaluator::Make(Combination combo) {
  auto it = cache_.find(combo.ids());
  if (it == cache_.end()) {
    it = cache_.emplace(combo.ids(), Evaluate(combo, *fleet_, *request_, mode_))
             .first;
  }
  return Individual{std::move(combo), it->second};
}

std::vector<Individual> InitPopulation(Evaluator& evaluator,
                                       const EgaConfig& config, Rng& rng) {
  const std::vector<int> ids = evaluator.fleet().SortedIds();
  const int n = evaluator.request().n_request();
  if (static_cast<std::size_t>(n) > ids.size()) {
    throw Error(ErrorKind::kInfeasible,
                "request needs " + std::to_string(n) +
                    " nodes but the fleet has " + std::to_string(ids.size()));
  }
  std::vector<Individual> population;
  population.reserve(config.population_size);
  for (int i = 0; i < config.population_size; ++i) {
    std::vector<int> picked;
    picked.reserve(n);
    std::sample(ids.begin(), ids.end(), std::back_inserter(picked), n, rng);
    population.push_back(evaluator.Make(Combination(std::move(picked))));
  }
  return population;
}

std::vector<Individual> InitPopulation(const Fleet& fleet,
                                       const Request& request,
                                       const EgaConfig& config) {
  Evaluator evaluator(fleet, request, config.mode);
  Rng rng(config.rng_seed);
  return InitPopulation(evaluator, config, rng);
}

std::vector<Individual> CrossoverAt(const Individual& parent_a,
                                    const Individual& parent_b,
                                    std::size_t position_a,
                                    std::size_t position_b,
                                    Evaluator& evaluator) {
  if (position_a >= parent_a.combo.size() ||
      position_b >= parent_b.combo.size()) {
    throw Error(ErrorKind::kValidation, "crossover position out of range");
  }
  const std::vector<int> a = ProfileOrder(parent_a.combo, evaluator.fleet());
  const std::vector<int> b = ProfileOrder(parent_b.combo, evaluator.fleet());
  auto child_of = [](std::vector<int> genes, std::size_t slot, int incoming) {
    genes[slot] = incoming;
    return genes;
  };
  std::vector<Individual> children;
  for (std::vector<int> genes : {child_of(a, position_a, b[position_b]),
                                 child_of(b, position_b, a[position_a])}) {
    std::sort(genes.begin(), genes.end());
    if (std::adjacent_find(genes.begin(), genes.end()) != genes.end()) {
      continue;
    }
    children.push_back(
        evaluator.Make(Combination::FromSorted(std::move(genes))));
  }
  return children;
}

std::vector<Individual> CrossoverAt(const Individual& parent_a,
                                    const Individual& parent_b,
                                    std::size_t position,
                                    Evaluator& evaluator) {
  return CrossoverAt(parent_a, parent_b, position, position, evaluator);
}

std::vector<Individual> Crossover(const Individual& parent_a,
                                  const Individual& parent_b, Rng& rng,
                                  Evaluator& evaluator) {
  std::uniform_int_distribution<std::size_t> pick_a(
      0, parent_a.combo.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_b(
      0, parent_b.combo.size() - 1);
  const std::size_t position_a = pick_a(rng);
  const std::size_t position_b = pick_b(rng);
  return CrossoverAt(parent_a, parent_b, position_a, position_b, evaluator);
}

Individual SwapMutation(const Individual& individual, Rng& rng) {
  std::vector<int> genes = individual.combo.ids();
  if (genes.size() >= 2) {
    std::uniform_int_distribution<std::size_t> pick(0, genes.size() - 1);
    const std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    while (j == i) j = pick(rng);
    std::swap(genes[i], genes[j]);
  }
  // A combination is a set: canonicalizing undoes the interchange.
  return Individual{Combination(std::move(genes)), individual.report};
}

std::size_t ApplyMutation(std::vector<Individual>& pool, double probability,
                          Rng& rng) {
  std::bernoulli_distribution coin(probability);
  const std::size_t original = pool.size();
  for (std::size_t i = 0; i < original; ++i) {
    if (coin(rng)) pool.push_back(SwapMutation(pool[i], rng));
  }
  return pool.size() - original;
}

std::vector<double> RouletteWeights(std::span<const Individual> pool) {
  std::vector<double> weights;
  weights.reserve(pool.size());
  for (const Individual& individual : pool) {
    weights.push_back(1.0 / (1.0 + individual.report.fitness_deviation));
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w = w / total * 100.0;
  return weights;
}

std::vector<Individual> SelectNextGeneration(std::span<const Individual> pool,
                                             const EgaConfig& config,
                                             Rng& rng) {
  if (pool.empty()) {
    throw Error(ErrorKind::kValidation, "cannot select from an empty pool");
  }
  const std::size_t elites = std::min<std::size_t>(
      static_cast<std::size_t>(config.elitism_count), pool.size());
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + elites, order.end(),
                    [&](std::size_t x, std::size_t y) {
                      const Individual& a = pool[x];
                      const Individual& b = pool[y];
                      if (a.combo == b.combo) return x < y;
                      return RanksBefore(a.combo, a.report, b.combo, b.report);
                    });

  std::vector<Individual> next;
  next.reserve(config.population_size);
  for (std::size_t i = 0; i < elites; ++i) next.push_back(pool[order[i]]);

  const std::vector<double> weights = RouletteWeights(pool);
  std::discrete_distribution<std::size_t> wheel(weights.begin(),
                                                weights.end());
  while (next.size() < static_cast<std::size_t>(config.population_size)) {
    next.push_back(pool[wheel(rng)]);
  }
  return next;
}

GenerationTrace SummarizeGeneration(int generation_index,
                                    std::span<const Individual> population) {
  GenerationTrace trace;
  trace.generation_index = generation_index;
  const Individual& best = BestOf(population);
  trace.best_fitness_deviation = best.report.fitness_deviation;
  trace.best_combo = best.combo;
  double deviation_sum = 0.0;
  double ratio_sum = 0.0;
  for (const Individual& individual : population) {
    deviation_sum += individual.report.fitness_deviation;
    ratio_sum += individual.report.match_ratio;
  }
  const double size = static_cast<double>(population.size());
  trace.mean_fitness_deviation = deviation_sum / size;
  trace.mean_match_ratio = ratio_sum / size;
  return trace;
}

EvolveResult Evolve(const Fleet& fleet, const Request& request,
                    const EgaConfig& config) {
  EvolveResult result;
  result.warnings = ValidateEgaConfig(config, fleet, request);

  Evaluator evaluator(fleet, request, config.mode);
  Rng rng(config.rng_seed);
  std::vector<Individual> population =
      InitPopulation(evaluator, config, rng);
  result.traces.push_back(SummarizeGeneration(0, population));
  result.best = BestOf(population);

  std::uniform_int_distribution<std::size_t> pick_parent(
      0, population.size() - 1);
  int stagnant = 0;
  for (int generation = 1; generation <= config.max_generations;
       ++generation) {
    std::vector<Individual> pool = population;
    for (int pair = 0; pair < config.crossover_pairs_per_generation; ++pair) {
      const std::size_t i = pick_parent(rng);
      std::vector<std::size_t> partners;
      for (std::size_t k = 0; k < population.size(); ++k) {
        if (!(population[k].combo == population[i].combo)) {
          partners.push_back(k);
        }
      }
      if (partners.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick_partner(
          0, partners.size() - 1);
      const std::size_t j = partners[pick_partner(rng)];
      for (Individual& child :
           Crossover(population[i], population[j], rng, evaluator)) {
        pool.push_back(std::move(child));
      }
    }
    ApplyMutation(pool, config.mutation_probability, rng);
    population = SelectNextGeneration(pool, config, rng);

    result.traces.push_back(SummarizeGeneration(generation, population));
    const Individual& best = BestOf(population);
    if (best.report.fitness_deviation < result.best.report.fitness_deviation) {
      stagnant = 0;
    } else {
      ++stagnant;
    }
    if (RanksBefore(best.combo, best.report, result.best.combo,
                    result.best.report)) {
      result.best = best;
    }
    if (config.stop_on_stagnation && stagnant >= *config.stop_on_stagnation) {
      break;
    }
  }
  return result;
}

void WriteTraceCsv(std::span<const GenerationTrace> traces,
                   std::ostream& out) {
  out << "generation,best_fitness_deviation,mean_fitness_deviation,"
         "mean_match_ratio,best_combo\n";
  for (const GenerationTrace& trace : traces) {
    out << trace.generation_index << ','
        << FormatNumber(trace.best_fitness_deviation) << ','
        << FormatNumber(trace.mean_fitness_deviation) << ','
        << FormatNumber(trace.mean_match_ratio) << ','
        << trace.best_combo.ToString() << '\n';
  }
}

}  // namespace nodealloc
