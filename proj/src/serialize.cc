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

#include "nodealloc/serialize.h"

#include <array>
#include <charconv>

namespace nodealloc {

std::string FormatNumber(double value) {
  std::array<char, 32> buffer;
  auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(),
                                 value);
  return std::string(buffer.data(), end);
}

void to_json(nlohmann::json& j, const FitnessReport& report) {
  j = nlohmann::json{
      {"total_capacity_pct", report.total_capacity_pct},
      {"capacity_deviation", report.capacity_deviation},
      {"shape_deviation", report.shape_deviation},
      {"fitness_deviation", report.fitness_deviation},
      {"match_ratio", report.match_ratio},
      {"within_capacity_tolerance", report.within_capacity_tolerance},
      {"within_shape_tolerance", report.within_shape_tolerance},
  };
}

void from_json(const nlohmann::json& j, FitnessReport& report) {
  j.at("total_capacity_pct").get_to(report.total_capacity_pct);
  j.at("capacity_deviation").get_to(report.capacity_deviation);
  j.at("shape_deviation").get_to(report.shape_deviation);
  j.at("fitness_deviation").get_to(report.fitness_deviation);
  j.at("match_ratio").get_to(report.match_ratio);
  j.at("within_capacity_tolerance").get_to(report.within_capacity_tolerance);
  j.at("within_shape_tolerance").get_to(report.within_shape_tolerance);
}

void to_json(nlohmann::json& j, const Combination& combo) { j = combo.ids(); }

void to_json(nlohmann::json& j, const Request& request) {
  j = nlohmann::json{
      {"n_request", request.n_request()},
      {"child_ratios", request.child_ratios()},
      {"tolerance_pct", request.tolerance_pct()},
  };
}

void to_json(nlohmann::json& j, const ExactResult& result) {
  j = nlohmann::json{
      {"best", result.best},
      {"best_report", result.best_report},
      {"n_combinations", result.n_combinations},
      {"mean_match_ratio_all", result.mean_match_ratio_all},
      {"mean_match_ratio_feasible", nullptr},
  };
  if (result.mean_match_ratio_feasible) {
    j["mean_match_ratio_feasible"] = *result.mean_match_ratio_feasible;
  }
}

std::string FitnessReportCsvHeader() {
  return "total_capacity_pct,capacity_deviation,shape_deviation,"
         "fitness_deviation,match_ratio,within_capacity_tolerance,"
         "within_shape_tolerance";
}

std::string FitnessReportCsvRow(const FitnessReport& report) {
  auto flag = [](bool b) { return b ? "true" : "false"; };
  return std::to_string(report.total_capacity_pct) + ',' +
         FormatNumber(report.capacity_deviation) + ',' +
         FormatNumber(report.shape_deviation) + ',' +
         FormatNumber(report.fitness_deviation) + ',' +
         FormatNumber(report.match_ratio) + ',' +
         flag(report.within_capacity_tolerance) + ',' +
         flag(report.within_shape_tolerance);
}

}  // namespace nodealloc
