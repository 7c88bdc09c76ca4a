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

#include "nodealloc/cli.h"

#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nodealloc/ega.h"
#include "nodealloc/exact.h"
#include "nodealloc/fitness.h"
#include "nodealloc/inventory.h"
#include "nodealloc/serialize.h"
#include "nodealloc/sim.h"

namespace nodealloc {
namespace {

std::vector<int> ParseIntList(const std::string& text, const char* what) {
  std::vector<int> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) {
      ++used;
    }
    if (item.empty() || used != item.size()) {
      throw Error(ErrorKind::kParse,
                  std::string(what) + ": '" + item + "' is not an integer");
    }
    values.push_back(value);
  }
  if (values.empty()) {
    throw Error(ErrorKind::kParse, std::string(what) + " is empty");
  }
  return values;
}

// Flags shared by the solver subcommands.
struct ProblemFlags {
  std::string fleet_path;
  std::string ratios;
  double tolerance = kDefaultTolerancePct;
  std::string mode = "absolute";
  std::string exclude;

  void Register(CLI::App& cmd) {
    cmd.add_option("--fleet", fleet_path, "Fleet file (id,capacity_pct[,class])")
        ->required();
    cmd.add_option("--ratios", ratios,
                   "Child-process capacity ratios, e.g. 50,30,20")
        ->required();
    cmd.add_option("--tolerance", tolerance, "Tolerance T in percent")
        ->capture_default_str();
    cmd.add_option("--mode", mode, "Shape deviation: absolute|telescoping")
        ->capture_default_str();
    cmd.add_option("--exclude", exclude,
                   "Comma-separated node ids that are not available");
  }

  Fleet LoadAvailableFleet() const {
    Fleet fleet = LoadFleetFile(fleet_path);
    if (exclude.empty()) return fleet;
    const std::vector<int> ids = ParseIntList(exclude, "--exclude");
    return AvailabilitySubset(fleet, std::set<int>(ids.begin(), ids.end()));
  }

  Request MakeRequest() const {
    return Request::Create(ParseIntList(ratios, "--ratios"), tolerance);
  }
};

void CheckFeasible(const Fleet& fleet, const Request& request) {
  if (static_cast<std::size_t>(request.n_request()) > fleet.size()) {
    throw Error(ErrorKind::kInfeasible,
                "request needs " + std::to_string(request.n_request()) +
                    " nodes but only " + std::to_string(fleet.size()) +
                    " are available");
  }
}

EgaConfig LoadConfigFile(const std::string& path, EgaConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open config file " + path);
  return LoadEgaConfig(in, base);
}

struct EgaFlags {
  std::string config_path;
  int population = 0;
  int generations = 0;
  std::uint64_t seed = 0;
  CLI::Option* population_opt = nullptr;
  CLI::Option* generations_opt = nullptr;
  CLI::Option* seed_opt = nullptr;

  void Register(CLI::App& cmd) {
    cmd.add_option("--config", config_path,
                   "key = value file with EgaConfig field names");
    population_opt = cmd.add_option("--pop", population, "Population size");
    generations_opt =
        cmd.add_option("--generations", generations, "Maximum generations");
    seed_opt = cmd.add_option("--seed", seed, "RNG seed");
  }

  // Defaults, then the config file, then explicit flags.
  EgaConfig Build(ShapeMode mode, CLI::Option* mode_opt) const {
    EgaConfig config = DefaultEgaConfig(EgaConfig{}.population_size);
    if (!config_path.empty()) config = LoadConfigFile(config_path, config);
    if (population_opt->count() > 0) {
      config.population_size = population;
      config.crossover_pairs_per_generation = population;
    }
    if (generations_opt->count() > 0) config.max_generations = generations;
    if (seed_opt->count() > 0) config.rng_seed = seed;
    if (mode_opt->count() > 0 || config_path.empty()) config.mode = mode;
    return config;
  }
};

int RunAllocate(const ProblemFlags& problem, const EgaFlags& ega,
                const std::string& solver, const std::string& out_dir,
                CLI::Option* mode_opt, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const Fleet fleet = problem.LoadAvailableFleet();
  const Request request = problem.MakeRequest();
  const ShapeMode mode = ParseShapeMode(problem.mode);
  CheckFeasible(fleet, request);

  nlohmann::json outcome;
  outcome["request"] = request;
  outcome["solver"] = solver;
  if (solver == "exact") {
    const ExactResult result = SolveExact(fleet, request, mode);
    outcome["mode"] = ShapeModeName(mode);
    outcome["best"] = result.best;
    outcome["report"] = result.best_report;
    outcome["trace_path"] = nullptr;
  } else {
    const EgaConfig config = ega.Build(mode, mode_opt);
    const EvolveResult result = Evolve(fleet, request, config);
    for (const std::string& warning : result.warnings) {
      err << "warning: " << warning << '\n';
    }
    outcome["mode"] = ShapeModeName(config.mode);
    outcome["best"] = result.best.combo;
    outcome["report"] = result.best.report;
    outcome["trace_path"] = nullptr;
    if (!out_dir.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(out_dir, ec);
      const auto trace_path = std::filesystem::path(out_dir) / "trace.csv";
      std::ofstream trace(trace_path);
      if (ec || !trace) {
        throw Error(ErrorKind::kIo, "cannot write " + trace_path.string());
      }
      WriteTraceCsv(result.traces, trace);
      outcome["trace_path"] = trace_path.string();
    }
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;
  outcome["wall_time_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  out << outcome.dump(2) << '\n';
  return kExitOk;
}

int RunExact(const ProblemFlags& problem, std::ostream& out) {
  const Fleet fleet = problem.LoadAvailableFleet();
  const Request request = problem.MakeRequest();
  const ShapeMode mode = ParseShapeMode(problem.mode);
  CheckFeasible(fleet, request);

  nlohmann::json result = SolveExact(fleet, request, mode);
  result["request"] = request;
  result["mode"] = ShapeModeName(mode);
  out << result.dump(2) << '\n';
  return kExitOk;
}

int RunValidate(const std::string& fleet_path, std::ostream& out,
                std::ostream& err) {
  std::ifstream in(fleet_path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open fleet file " + fleet_path);
  const std::vector<FleetDiagnostic> diagnostics = ValidateFleet(in);

  nlohmann::json listing = nlohmann::json::array();
  for (const FleetDiagnostic& d : diagnostics) {
    err << fleet_path << ':' << d.line << ": " << ErrorKindName(d.kind)
        << ": " << d.message << '\n';
    listing.push_back(
        {{"line", d.line}, {"kind", ErrorKindName(d.kind)}, {"message", d.message}});
  }
  out << nlohmann::json{{"fleet", fleet_path},
                        {"ok", diagnostics.empty()},
                        {"diagnostics", listing}}
             .dump(2)
      << '\n';
  return diagnostics.empty() ? kExitOk : ExitCodeFor(diagnostics.front().kind);
}

}  // namespace

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return kExitParse;
    case ErrorKind::kValidation:
    case ErrorKind::kUnknownId: return kExitValidation;
    case ErrorKind::kInfeasible: return kExitInfeasible;
    case ErrorKind::kIo: return kExitIo;
  }
  return kExitInternal;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Select cluster node combinations matching a capacity request",
               "nodealloc"};
  app.require_subcommand(1);

  ProblemFlags allocate_problem;
  EgaFlags allocate_ega;
  std::string solver = "ega";
  std::string allocate_out;
  auto* allocate = app.add_subcommand("allocate", "Pick the best combination");
  allocate_problem.Register(*allocate);
  allocate_ega.Register(*allocate);
  allocate->add_option("--solver", solver, "ega|exact")
      ->check(CLI::IsMember({"ega", "exact"}))
      ->capture_default_str();
  allocate->add_option("--out", allocate_out,
                       "Directory for trace.csv (ega only)");

  ProblemFlags exact_problem;
  auto* exact = app.add_subcommand("exact", "Exhaustive search with statistics");
  exact_problem.Register(*exact);

  ExperimentSpec spec;
  std::string sim_out = "sim_out";
  std::string sim_config;
  std::string sim_mode = "absolute";
  std::vector<int> sim_pops;
  auto* simulate =
      app.add_subcommand("simulate", "Run the convergence experiment suite");
  simulate->add_option("--seed", spec.fleet_seed, "Fleet seed")
      ->capture_default_str();
  simulate->add_option("--repetitions", spec.repetitions, "Runs per cell")
      ->capture_default_str();
  simulate->add_option("--pop", sim_pops, "Population sizes (default 20,40)")
      ->delimiter(',');
  simulate->add_option("--generations", spec.ega.max_generations,
                       "Maximum generations per run")
      ->capture_default_str();
  simulate->add_option("--fleet-size", spec.fleet_size, "Synthetic fleet size")
      ->capture_default_str();
  simulate->add_option("--mode", sim_mode, "absolute|telescoping")
      ->capture_default_str();
  simulate->add_option("--threads", spec.threads, "Worker threads (0 = all)")
      ->capture_default_str();
  simulate->add_option("--config", sim_config, "EgaConfig template file");
  simulate->add_option("--out", sim_out, "Output directory")
      ->capture_default_str();

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a fleet file");
  validate->add_option("--fleet", validate_path, "Fleet file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*allocate) {
      return RunAllocate(allocate_problem, allocate_ega, solver, allocate_out,
                         allocate->get_option("--mode"), out, err);
    }
    if (*exact) return RunExact(exact_problem, out);
    if (*simulate) {
      if (!sim_config.empty()) {
        const int generations = spec.ega.max_generations;
        spec.ega = LoadConfigFile(sim_config, spec.ega);
        if (simulate->get_option("--generations")->count() > 0) {
          spec.ega.max_generations = generations;
        }
      }
      if (!sim_pops.empty()) spec.population_sizes = sim_pops;
      if (simulate->get_option("--mode")->count() > 0 || sim_config.empty()) {
        spec.ega.mode = ParseShapeMode(sim_mode);
      }
      const ExperimentReport report = RunExperiment(spec);
      out << WriteExperiment(report, sim_out).string() << '\n';
      return kExitOk;
    }
    return RunValidate(validate_path, out, err);
  } catch (const Error& e) {
    err << "error (" << ErrorKindName(e.kind()) << "): " << e.what() << '\n';
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace nodealloc
