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
#include <numeric>
#include <set>
#include <sstream>

#include "gtest/gtest.h"
#include "nodealloc/exact.h"

namespace nodealloc {
namespace {

Fleet FleetOf(const std::vector<int>& capacities) {
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < capacities.size(); ++i) {
    nodes.push_back(Node{static_cast<int>(i) + 1, capacities[i], 1});
  }
  return Fleet(nodes);
}

Fleet TenNodeFleet() {
  return FleetOf({80, 90, 100, 100, 90, 90, 50, 80, 50, 70});
}

Fleet TwentyNodeFleet() {
  return FleetOf({100, 90, 80, 70, 60, 50, 90, 80, 70, 60,
                  50, 100, 80, 60, 70, 90, 50, 80, 60, 70});
}

void ExpectValid(const Individual& individual, int n) {
  const auto& ids = individual.combo.ids();
  ASSERT_EQ(ids.size(), static_cast<std::size_t>(n));
  EXPECT_TRUE(std::is_sorted(ids.begin(), ids.end()));
  EXPECT_TRUE(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
}

class EgaTest : public ::testing::Test {
 protected:
  Fleet fleet_ = TenNodeFleet();
  Request request_ = Request::Create({50, 30, 20});
  Evaluator evaluator_{fleet_, request_, ShapeMode::kAbsolute};

  Individual Make(std::vector<int> ids) {
    return evaluator_.Make(Combination(std::move(ids)));
  }
};

TEST_F(EgaTest, InitPopulationIsSeededAndValid) {
  EgaConfig config = DefaultEgaConfig(20);
  config.rng_seed = 77;
  const auto first = InitPopulation(fleet_, request_, config);
  const auto second = InitPopulation(fleet_, request_, config);
  ASSERT_EQ(first.size(), 20u);
  EXPECT_EQ(first, second);
  for (const Individual& individual : first) {
    ExpectValid(individual, 3);
    EXPECT_EQ(individual.report,
              Evaluate(individual.combo, fleet_, request_));
  }
  config.rng_seed = 78;
  EXPECT_NE(InitPopulation(fleet_, request_, config), first);
}

TEST(InitPopulationTest, SingleFeasibleCombination) {
  const Fleet fleet = FleetOf({50, 30, 20});
  EgaConfig config = DefaultEgaConfig(4);
  const auto population =
      InitPopulation(fleet, Request::Create({50, 30, 20}), config);
  ASSERT_EQ(population.size(), 4u);
  for (const Individual& individual : population) {
    EXPECT_EQ(individual.combo.ids(), (std::vector<int>{1, 2, 3}));
  }
}

TEST(InitPopulationTest, FiveOfTwenty) {
  const Fleet fleet = TwentyNodeFleet();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EgaConfig config = DefaultEgaConfig(20);
    config.rng_seed = seed;
    for (const Individual& individual :
         InitPopulation(fleet, Request::Create({30, 20, 20, 20, 10}), config)) {
      ExpectValid(individual, 5);
    }
  }
}

TEST(InitPopulationTest, Infeasible) {
  try {
    InitPopulation(FleetOf({50, 50}), Request::Create({50, 30, 20}),
                   DefaultEgaConfig(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
  }
}

// With equal capacities the profile order is the id order.
class UniformCrossoverTest : public ::testing::Test {
 protected:
  Fleet fleet_ = FleetOf(std::vector<int>(10, 50));
  Request request_ = Request::Create({50, 30, 20});
  Evaluator evaluator_{fleet_, request_, ShapeMode::kAbsolute};

  Individual Make(std::vector<int> ids) {
    return evaluator_.Make(Combination(std::move(ids)));
  }
};

TEST_F(UniformCrossoverTest, DisjointParents) {
  const auto children = CrossoverAt(Make({1, 2, 3}), Make({4, 5, 6}), 0,
                                    evaluator_);
  ASSERT_EQ(children.size(), 2u);
  EXPECT_EQ(children[0].combo.ids(), (std::vector<int>{2, 3, 4}));
  EXPECT_EQ(children[1].combo.ids(), (std::vector<int>{1, 5, 6}));
  EXPECT_EQ(children[0].report,
            Evaluate(Combination({2, 3, 4}), fleet_, request_));
}

TEST_F(UniformCrossoverTest, DropsChildWithRepeatedNode) {
  // Position 0 moves node 3 into [1,2,3], giving [3,2,3].
  const auto children = CrossoverAt(Make({1, 2, 3}), Make({3, 4, 5}), 0,
                                    evaluator_);
  ASSERT_EQ(children.size(), 1u);
  EXPECT_EQ(children[0].combo.ids(), (std::vector<int>{1, 4, 5}));

  // Position 1 of [1,2,3] x [2,3,4] gives [1,3,3] and [2,2,4].
  const auto both = CrossoverAt(Make({1, 2, 3}), Make({2, 3, 4}), 1, evaluator_);
  EXPECT_TRUE(both.empty());
}

TEST_F(UniformCrossoverTest, IdenticalParents) {
  const Individual parent = Make({1, 2, 3});
  for (std::size_t position = 0; position < 3; ++position) {
    const auto children = CrossoverAt(parent, parent, position, evaluator_);
    ASSERT_EQ(children.size(), 2u);
    EXPECT_EQ(children[0], parent);
    EXPECT_EQ(children[1], parent);
  }
  EXPECT_THROW(CrossoverAt(parent, parent, 3, evaluator_), Error);
}

TEST_F(UniformCrossoverTest, IndependentPositions) {
  // Node 1 (slot 0 of A) for node 6 (slot 2 of B).
  const auto children =
      CrossoverAt(Make({1, 2, 3}), Make({4, 5, 6}), 0, 2, evaluator_);
  ASSERT_EQ(children.size(), 2u);
  EXPECT_EQ(children[0].combo.ids(), (std::vector<int>{2, 3, 6}));
  EXPECT_EQ(children[1].combo.ids(), (std::vector<int>{1, 4, 5}));
}

TEST_F(EgaTest, CrossoverUsesCapacityProfileOrder) {
  // Profile orders: [3,2,1] (100,90,80) and [4,5,6] (100,90,90).
  EXPECT_EQ(ProfileOrder(Combination({1, 2, 3}), fleet_),
            (std::vector<int>{3, 2, 1}));
  const auto children = CrossoverAt(Make({1, 2, 3}), Make({4, 5, 6}), 0,
                                    evaluator_);
  ASSERT_EQ(children.size(), 2u);
  EXPECT_EQ(children[0].combo.ids(), (std::vector<int>{1, 2, 4}));
  EXPECT_EQ(children[1].combo.ids(), (std::vector<int>{3, 5, 6}));
}

TEST_F(EgaTest, CrossoverSoundnessProperty) {
  Rng rng(1);
  const std::vector<int> ids = fleet_.SortedIds();
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> a, b;
    std::sample(ids.begin(), ids.end(), std::back_inserter(a), 3, rng);
    std::sample(ids.begin(), ids.end(), std::back_inserter(b), 3, rng);
    const Individual pa = Make(a), pb = Make(b);
    std::set<int> parent_union(a.begin(), a.end());
    parent_union.insert(b.begin(), b.end());
    for (const Individual& child : Crossover(pa, pb, rng, evaluator_)) {
      ExpectValid(child, 3);
      for (int id : child.combo.ids()) EXPECT_TRUE(parent_union.contains(id));
    }
  }
}

TEST_F(EgaTest, SwapMutationKeepsCombinationAndFitness) {
  Rng rng(5);
  const Individual original = Make({1, 2, 3});
  for (int i = 0; i < 50; ++i) {
    const Individual mutated = SwapMutation(original, rng);
    EXPECT_EQ(mutated.combo, original.combo);
    EXPECT_EQ(mutated.report, original.report);
    EXPECT_EQ(Evaluate(mutated.combo, fleet_, request_), original.report);
  }
}

TEST_F(EgaTest, MutationAppendsToPool) {
  Rng rng(9);
  std::vector<Individual> pool = {Make({1, 2, 3}), Make({4, 5, 6})};
  EXPECT_EQ(ApplyMutation(pool, 1.0, rng), 2u);
  ASSERT_EQ(pool.size(), 4u);
  EXPECT_EQ(pool[2], pool[0]);
  EXPECT_EQ(pool[3], pool[1]);
  EXPECT_EQ(ApplyMutation(pool, 0.0, rng), 0u);
  EXPECT_EQ(pool.size(), 4u);

  std::vector<Individual> single = {Make({7, 8, 9})};
  std::size_t appended = 0;
  for (int i = 0; i < 2000; ++i) {
    std::vector<Individual> copy = single;
    appended += ApplyMutation(copy, 0.25, rng);
  }
  EXPECT_NEAR(appended / 2000.0, 0.25, 0.04);
}

TEST(RouletteWeightsTest, Examples) {
  auto with_deviation = [](double d) {
    Individual individual;
    individual.report.fitness_deviation = d;
    return individual;
  };
  EXPECT_EQ(RouletteWeights(std::vector{with_deviation(40)}),
            std::vector<double>{100.0});
  EXPECT_EQ(RouletteWeights(std::vector{with_deviation(3), with_deviation(3)}),
            (std::vector<double>{50.0, 50.0}));
  const auto weights =
      RouletteWeights(std::vector{with_deviation(0), with_deviation(1)});
  EXPECT_NEAR(weights[0], 200.0 / 3.0, 1e-12);
  EXPECT_NEAR(weights[1], 100.0 / 3.0, 1e-12);
}

TEST(RouletteWeightsTest, NormalizedAndPositive) {
  Rng rng(0);
  std::uniform_real_distribution<double> deviation(0.0, 500.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Individual> pool(1 + trial);
    for (Individual& individual : pool) {
      individual.report.fitness_deviation = deviation(rng);
    }
    const auto weights = RouletteWeights(pool);
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    EXPECT_NEAR(total, 100.0, 100.0 * 1e-9);
    for (double w : weights) EXPECT_GT(w, 0.0);
  }
}

TEST_F(EgaTest, SelectionKeepsEliteAndSize) {
  // [7,9,10] is the unique optimum of this instance.
  std::vector<Individual> pool;
  for (int i = 0; i < 30; ++i) pool.push_back(Make({1, 2, 3}));
  pool.push_back(Make({7, 9, 10}));
  EgaConfig config = DefaultEgaConfig(20);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto next = SelectNextGeneration(pool, config, rng);
    ASSERT_EQ(next.size(), 20u);
    EXPECT_EQ(next[0].combo.ids(), (std::vector<int>{7, 9, 10}));
  }
  Rng a(3), b(3);
  EXPECT_EQ(SelectNextGeneration(pool, config, a),
            SelectNextGeneration(pool, config, b));

  config.elitism_count = 3;
  pool.push_back(Make({1, 7, 9}));
  Rng rng(4);
  const auto next = SelectNextGeneration(pool, config, rng);
  EXPECT_EQ(next[0].combo.ids(), (std::vector<int>{7, 9, 10}));
  EXPECT_EQ(next[1].combo.ids(), (std::vector<int>{1, 7, 9}));
  EXPECT_EQ(next[2].combo.ids(), (std::vector<int>{1, 2, 3}));
}

TEST_F(EgaTest, SelectionIsProportionalToWeights) {
  // Deviations 0 and 1 give the wheel 2/3 and 1/3.
  const Fleet fleet = FleetOf({50, 50, 51});
  const Request request = Request::Create({50, 50});
  Evaluator evaluator(fleet, request, ShapeMode::kAbsolute);
  const std::vector<Individual> pool = {
      evaluator.Make(Combination({1, 2})), evaluator.Make(Combination({1, 3}))};
  ASSERT_EQ(pool[0].report.fitness_deviation, 0.0);
  ASSERT_EQ(pool[1].report.fitness_deviation, 2.0);
  EgaConfig config = DefaultEgaConfig(1001);
  Rng rng(8);
  const auto next = SelectNextGeneration(pool, config, rng);
  const auto first = std::count(next.begin() + 1, next.end(), pool[0]);
  // Raw weights 1 and 1/3: share 0.75.
  EXPECT_NEAR(first / 1000.0, 0.75, 0.05);
}

TEST(EvolveTest, PerfectIndividualAtGenerationZero) {
  const Fleet fleet = FleetOf({50, 30, 20});
  EgaConfig config = DefaultEgaConfig(4);
  config.max_generations = 5;
  const EvolveResult result =
      Evolve(fleet, Request::Create({50, 30, 20}), config);
  EXPECT_EQ(result.best.report.fitness_deviation, 0.0);
  EXPECT_EQ(result.traces.front().best_fitness_deviation, 0.0);
  EXPECT_EQ(result.traces.size(), 6u);
  EXPECT_EQ(result.traces.front().generation_index, 0);
}

TEST(EvolveTest, PropertiesAcrossSeeds) {
  const Fleet fleet = TwentyNodeFleet();
  const std::vector<Request> requests = {Request::Create({50, 30, 20}),
                                         Request::Create({40, 20, 20, 20}),
                                         Request::Create({30, 20, 20, 20, 10})};
  std::vector<double> optimum;
  for (const Request& request : requests) {
    optimum.push_back(SolveExact(fleet, request).best_report.fitness_deviation);
  }
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t c = seed % requests.size();
    EgaConfig config = DefaultEgaConfig(20);
    config.rng_seed = seed;
    config.max_generations = 30;
    const EvolveResult result = Evolve(fleet, requests[c], config);
    ASSERT_EQ(result.traces.size(), 31u);
    for (std::size_t g = 1; g < result.traces.size(); ++g) {
      EXPECT_LE(result.traces[g].best_fitness_deviation,
                result.traces[g - 1].best_fitness_deviation);
    }
    EXPECT_EQ(result.best.report.fitness_deviation,
              result.traces.back().best_fitness_deviation);
    EXPECT_EQ(result.best.combo, result.traces.back().best_combo);
    EXPECT_GE(result.best.report.fitness_deviation, optimum[c]);
    EXPECT_EQ(result.best.report,
              Evaluate(result.best.combo, fleet, requests[c]));
    EXPECT_EQ(Evolve(fleet, requests[c], config).traces, result.traces);
  }
}

TEST(EvolveTest, ValidityFuzz) {
  // Re-implements the generation loop to inspect every individual.
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int fleet_size = 5 + static_cast<int>(seed % 16);
    std::vector<int> caps(fleet_size);
    Rng caps_rng(seed);
    for (int& c : caps) c = 10 * (1 + static_cast<int>(caps_rng() % 10));
    const Fleet fleet = FleetOf(caps);
    const Request request =
        seed % 2 ? Request::Create({40, 20, 20, 20}) : Request::Create({60, 40});
    Evaluator evaluator(fleet, request, ShapeMode::kAbsolute);
    EgaConfig config = DefaultEgaConfig(10);
    config.mutation_probability = 0.5;
    Rng rng(seed);
    auto population = InitPopulation(evaluator, config, rng);
    for (int generation = 0; generation < 20; ++generation) {
      std::vector<Individual> pool = population;
      for (int pair = 0; pair < config.crossover_pairs_per_generation; ++pair) {
        for (auto& child : Crossover(population[pair % population.size()],
                                     population[(pair + 1) % population.size()],
                                     rng, evaluator)) {
          pool.push_back(child);
        }
      }
      ApplyMutation(pool, config.mutation_probability, rng);
      for (const Individual& individual : pool) {
        ExpectValid(individual, request.n_request());
        EXPECT_EQ(individual.report, Evaluate(individual.combo, fleet, request));
      }
      population = SelectNextGeneration(pool, config, rng);
      ASSERT_EQ(population.size(), 10u);
    }
  }
}

TEST(EvolveTest, StagnationStopsEarly) {
  const Fleet fleet = FleetOf({50, 30, 20, 90});
  EgaConfig config = DefaultEgaConfig(4);
  config.max_generations = 100;
  config.stop_on_stagnation = 3;
  const EvolveResult result =
      Evolve(fleet, Request::Create({50, 30, 20}), config);
  ASSERT_LT(result.traces.size(), 101u);
  const std::size_t last = result.traces.size() - 1;
  for (std::size_t g = last - 3; g < last; ++g) {
    EXPECT_EQ(result.traces[g].best_fitness_deviation,
              result.traces[last].best_fitness_deviation);
  }
}

TEST(EvolveTest, ConfigValidation) {
  const Fleet fleet = TenNodeFleet();
  const Request request = Request::Create({50, 30, 20});
  auto kind_of = [&](EgaConfig config) {
    try {
      ValidateEgaConfig(config, fleet, request);
    } catch (const Error& e) {
      return e.kind();
    }
    ADD_FAILURE() << "accepted";
    return ErrorKind::kIo;
  };
  EgaConfig config = DefaultEgaConfig(20);
  EXPECT_TRUE(ValidateEgaConfig(config, fleet, request).empty());
  config.population_size = 5;
  EXPECT_EQ(ValidateEgaConfig(config, fleet, request).size(), 1u);

  config = DefaultEgaConfig(20);
  config.elitism_count = 20;
  EXPECT_EQ(kind_of(config), ErrorKind::kValidation);
  config = DefaultEgaConfig(1);
  EXPECT_EQ(kind_of(config), ErrorKind::kValidation);
  config = DefaultEgaConfig(20);
  config.mutation_probability = 1.5;
  EXPECT_EQ(kind_of(config), ErrorKind::kValidation);
  config = DefaultEgaConfig(20);
  config.max_generations = 0;
  EXPECT_EQ(kind_of(config), ErrorKind::kValidation);
  config = DefaultEgaConfig(20);
  config.stop_on_stagnation = 0;
  EXPECT_EQ(kind_of(config), ErrorKind::kValidation);

  try {
    ValidateEgaConfig(DefaultEgaConfig(20), FleetOf({50, 50}), request);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
  }
}

TEST(LoadEgaConfigTest, ParsesFieldNames) {
  std::istringstream in(
      "# tuned\n"
      "population_size = 40\n"
      "max_generations=15\n"
      "elitism_count = 2  # keep two\n"
      "crossover_pairs_per_generation = 7\n"
      "mutation_probability = 0.25\n"
      "rng_seed = 18446744073709551615\n"
      "mode = telescoping\n"
      "stop_on_stagnation = 4\n");
  const EgaConfig config = LoadEgaConfig(in);
  EXPECT_EQ(config.population_size, 40);
  EXPECT_EQ(config.max_generations, 15);
  EXPECT_EQ(config.elitism_count, 2);
  EXPECT_EQ(config.crossover_pairs_per_generation, 7);
  EXPECT_EQ(config.mutation_probability, 0.25);
  EXPECT_EQ(config.rng_seed, 18446744073709551615ULL);
  EXPECT_EQ(config.mode, ShapeMode::kTelescoping);
  EXPECT_EQ(config.stop_on_stagnation, 4);

  std::istringstream partial("stop_on_stagnation = none\n");
  EgaConfig base = DefaultEgaConfig(30);
  base.stop_on_stagnation = 9;
  const EgaConfig merged = LoadEgaConfig(partial, base);
  EXPECT_EQ(merged.population_size, 30);
  EXPECT_FALSE(merged.stop_on_stagnation.has_value());

  std::istringstream unknown("population = 4\n");
  EXPECT_THROW(LoadEgaConfig(unknown), Error);
  std::istringstream bad("max_generations = ten\n");
  EXPECT_THROW(LoadEgaConfig(bad), Error);
  std::istringstream no_equals("max_generations 10\n");
  EXPECT_THROW(LoadEgaConfig(no_equals), Error);
}

TEST(TraceCsvTest, Format) {
  GenerationTrace trace;
  trace.generation_index = 0;
  trace.best_fitness_deviation = 80;
  trace.mean_fitness_deviation = 152.5;
  trace.mean_match_ratio = 2.35;
  trace.best_combo = Combination({7, 9, 10});
  std::ostringstream out;
  WriteTraceCsv(std::vector{trace}, out);
  EXPECT_EQ(out.str(),
            "generation,best_fitness_deviation,mean_fitness_deviation,"
            "mean_match_ratio,best_combo\n0,80,152.5,2.35,7+9+10\n");
}

}  // namespace
}  // namespace nodealloc
