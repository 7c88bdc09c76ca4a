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

#include "nodealloc/sim.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>
#include <utility>

#include "nodealloc/serialize.h"

namespace nodealloc {
namespace {

struct RunOutcome {
  std::optional<int> generations_to_optimum;
  double final_best_deviation = 0.0;
  std::vector<GenerationTrace> traces;
};

std::vector<CurvePoint> AggregateCurve(std::span<const RunOutcome> runs) {
  std::size_t length = 0;
  for (const RunOutcome& run : runs) {
    length = std::max(length, run.traces.size());
  }
  std::vector<CurvePoint> curve(length);
  for (std::size_t g = 0; g < length; ++g) {
    double ratio_sum = 0.0;
    double deviation_sum = 0.0;
    for (const RunOutcome& run : runs) {
      const GenerationTrace& trace = run.traces[std::min(g, run.traces.size() - 1)];
      ratio_sum += trace.mean_match_ratio;
      deviation_sum += trace.best_fitness_deviation;
    }
    const double n = static_cast<double>(runs.size());
    curve[g] = {static_cast<int>(g), ratio_sum / n, deviation_sum / n};
  }
  return curve;
}

nlohmann::json OptionalJson(const std::optional<double>& value) {
  return value ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

nlohmann::json OptionalJson(const std::optional<int>& value) {
  return value ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

}  // namespace

std::vector<Request> DefaultCases() {
  return {
      Request::Create({50, 30, 20}),
      Request::Create({40, 20, 20, 20}),
      Request::Create({30, 20, 20, 20, 10}),
  };
}

void ValidateExperimentSpec(const ExperimentSpec& spec) {
  auto invalid = [](const std::string& message) {
    throw Error(ErrorKind::kValidation, message);
  };
  if (spec.fleet_size < 1) invalid("fleet_size must be >= 1");
  if (spec.capacity_choices.empty()) invalid("capacity_choices is empty");
  for (int capacity : spec.capacity_choices) {
    if (capacity < kMinCapacityPct || capacity > kMaxCapacityPct) {
      invalid("capacity choice " + std::to_string(capacity) +
              " outside [1, 100]");
    }
  }
  if (spec.cases.empty()) invalid("no request cases");
  for (const Request& request : spec.cases) {
    if (request.n_request() > spec.fleet_size) {
      throw Error(ErrorKind::kInfeasible,
                  "a case requests " + std::to_string(request.n_request()) +
                      " nodes from a fleet of " +
                      std::to_string(spec.fleet_size));
    }
  }
  if (spec.population_sizes.empty()) invalid("no population sizes");
  for (int population : spec.population_sizes) {
    if (population < 2) invalid("population sizes must be >= 2");
  }
  if (spec.repetitions < 1) invalid("repetitions must be >= 1");
  if (spec.threads < 0) invalid("threads must be >= 0");
}

Fleet GenerateFleet(const ExperimentSpec& spec) {
  Rng rng(spec.fleet_seed);
  std::uniform_int_distribution<std::size_t> choice(
      0, spec.capacity_choices.size() - 1);
  std::vector<Node> nodes;
  nodes.reserve(spec.fleet_size);
  bool has_reference = false;
  for (int id = 1; id <= spec.fleet_size; ++id) {
    const int capacity = spec.capacity_choices[choice(rng)];
    has_reference = has_reference || capacity == kMaxCapacityPct;
    nodes.push_back(Node{id, capacity, 1});
  }
  if (!has_reference) {
    std::uniform_int_distribution<std::size_t> slot(0, nodes.size() - 1);
    nodes[slot(rng)].capacity_pct = kMaxCapacityPct;
  }
  return DeriveClasses(Fleet(std::move(nodes)));
}

std::uint64_t Mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t RunSeed(std::uint64_t fleet_seed, std::size_t case_index,
                      int population_size, int repetition) {
  constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t h = Mix64(fleet_seed);
  for (std::uint64_t v : {static_cast<std::uint64_t>(case_index),
                          static_cast<std::uint64_t>(population_size),
                          static_cast<std::uint64_t>(repetition)}) {
    h = Mix64(h ^ (v + kGolden));
  }
  return h;
}

std::optional<int> GenerationsToReach(std::span<const GenerationTrace> traces,
                                      double target_deviation) {
  for (const GenerationTrace& trace : traces) {
    if (trace.best_fitness_deviation <= target_deviation) {
      return trace.generation_index;
    }
  }
  return std::nullopt;
}

std::optional<double> CensoredMedian(
    std::span<const std::optional<int>> values) {
  if (values.empty()) return std::nullopt;
  std::vector<std::optional<int>> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const std::optional<int>& a, const std::optional<int>& b) {
              if (!a) return false;
              if (!b) return true;
              return *a < *b;
            });
  const std::size_t n = sorted.size();
  const auto& upper = sorted[n / 2];
  if (n % 2 == 1) {
    return upper ? std::optional<double>(*upper) : std::nullopt;
  }
  const auto& lower = sorted[n / 2 - 1];
  if (!lower || !upper) return std::nullopt;
  return (*lower + *upper) / 2.0;
}

ExperimentReport RunExperiment(const ExperimentSpec& spec) {
  ValidateExperimentSpec(spec);
  ExperimentReport report;
  report.spec = spec;
  report.fleet = GenerateFleet(spec);

  std::vector<ExactResult> baselines;
  baselines.reserve(spec.cases.size());
  for (const Request& request : spec.cases) {
    baselines.push_back(SolveExact(report.fleet, request, spec.ega.mode));
  }

  const std::size_t pops = spec.population_sizes.size();
  const std::size_t reps = static_cast<std::size_t>(spec.repetitions);
  const std::size_t total = spec.cases.size() * pops * reps;
  std::vector<RunOutcome> outcomes(total);

  auto run_one = [&](std::size_t job) {
    const std::size_t c = job / (pops * reps);
    const std::size_t p = (job / reps) % pops;
    const int rep = static_cast<int>(job % reps);
    const int population = spec.population_sizes[p];

    EgaConfig config = spec.ega;
    config.population_size = population;
    config.crossover_pairs_per_generation = population;
    config.rng_seed = RunSeed(spec.fleet_seed, c, population, rep);

    EvolveResult evolved = Evolve(report.fleet, spec.cases[c], config);
    RunOutcome& out = outcomes[job];
    out.generations_to_optimum = GenerationsToReach(
        evolved.traces, baselines[c].best_report.fitness_deviation);
    out.final_best_deviation = evolved.best.report.fitness_deviation;
    out.traces = std::move(evolved.traces);
  };

  const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(
      total, spec.threads > 0 ? static_cast<std::size_t>(spec.threads)
                              : hardware);
  if (workers <= 1) {
    for (std::size_t job = 0; job < total; ++job) run_one(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t job = next++; job < total; job = next++) {
              run_one(job);
            }
          } catch (...) {
            errors[w] = std::current_exception();
            next = total;
          }
        });
      }
    }
    for (const auto& error : errors) {
      if (error) std::rethrow_exception(error);
    }
  }

  for (std::size_t c = 0; c < spec.cases.size(); ++c) {
    for (std::size_t p = 0; p < pops; ++p) {
      const std::span<const RunOutcome> runs(
          outcomes.data() + (c * pops + p) * reps, reps);
      CellReport cell{
          .case_index = c,
          .request = spec.cases[c],
          .population_size = spec.population_sizes[p],
          .exact = baselines[c],
      };
      std::size_t reached = 0;
      for (const RunOutcome& run : runs) {
        cell.generations_to_optimum.push_back(run.generations_to_optimum);
        cell.final_best_deviation.push_back(run.final_best_deviation);
        if (run.generations_to_optimum) ++reached;
      }
      cell.median_generations_to_optimum =
          CensoredMedian(cell.generations_to_optimum);
      cell.success_rate =
          static_cast<double>(reached) / static_cast<double>(reps);
      cell.curve = AggregateCurve(runs);
      const double target = cell.exact.best_report.match_ratio;
      for (const CurvePoint& point : cell.curve) {
        if (std::abs(point.mean_match_ratio - target) <=
            kPlateauBand * target) {
          cell.generations_to_plateau = point.generation;
          break;
        }
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

nlohmann::json SummaryJson(const ExperimentReport& report) {
  const ExperimentSpec& spec = report.spec;
  nlohmann::json cases = nlohmann::json::array();
  for (const Request& request : spec.cases) cases.push_back(request);

  nlohmann::json summary;
  summary["spec"] = {
      {"fleet_size", spec.fleet_size},
      {"capacity_choices", spec.capacity_choices},
      {"fleet_seed", spec.fleet_seed},
      {"cases", cases},
      {"population_sizes", spec.population_sizes},
      {"repetitions", spec.repetitions},
      {"max_generations", spec.ega.max_generations},
      {"elitism_count", spec.ega.elitism_count},
      {"mutation_probability", spec.ega.mutation_probability},
      {"mode", ShapeModeName(spec.ega.mode)},
      {"stop_on_stagnation", OptionalJson(spec.ega.stop_on_stagnation)},
  };

  nlohmann::json cells = nlohmann::json::array();
  for (const CellReport& cell : report.cells) {
    nlohmann::json generations = nlohmann::json::array();
    for (const auto& g : cell.generations_to_optimum) {
      generations.push_back(OptionalJson(g));
    }
    double final_sum = 0.0;
    for (double d : cell.final_best_deviation) final_sum += d;
    cells.push_back({
        {"case", cell.case_index + 1},
        {"request", cell.request},
        {"population_size", cell.population_size},
        {"exact", cell.exact},
        {"median_generations_to_optimum",
         OptionalJson(cell.median_generations_to_optimum)},
        {"success_rate", cell.success_rate},
        {"generations_to_plateau", OptionalJson(cell.generations_to_plateau)},
        {"mean_final_best_deviation",
         final_sum / static_cast<double>(cell.final_best_deviation.size())},
        {"generations_to_optimum", generations},
    });
  }
  summary["cells"] = cells;
  return summary;
}

std::filesystem::path WriteExperiment(const ExperimentReport& report,
                                      const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorKind::kIo,
                "cannot create " + dir.string() + ": " + ec.message());
  }
  auto open = [](const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
    return out;
  };

  const auto summary_path = dir / "summary.json";
  {
    std::ofstream out = open(summary_path);
    out << SummaryJson(report).dump(2) << '\n';
  }
  for (const CellReport& cell : report.cells) {
    const auto name = "curve_" + std::to_string(cell.case_index + 1) + "_" +
                      std::to_string(cell.population_size) + ".csv";
    std::ofstream out = open(dir / name);
    out << "generation,mean_match_ratio,mean_best_fitness_deviation\n";
    for (const CurvePoint& point : cell.curve) {
      out << point.generation << ',' << FormatNumber(point.mean_match_ratio)
          << ',' << FormatNumber(point.mean_best_fitness_deviation) << '\n';
    }
  }
  SaveFleetFile(report.fleet, dir / "fleet.csv");
  return summary_path;
}

}  // namespace nodealloc
