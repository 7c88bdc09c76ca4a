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

// JSON and CSV encodings shared by the CLI and the experiment harness.

#ifndef NODEALLOC_SERIALIZE_H_
#define NODEALLOC_SERIALIZE_H_

#include <string>

#include "json.hpp"
#include "nodealloc/exact.h"
#include "nodealloc/fitness.h"

namespace nodealloc {

// Shortest decimal text that reads back to the same double.
std::string FormatNumber(double value);

// Flat record with the FitnessReport field names as keys.
void to_json(nlohmann::json& j, const FitnessReport& report);
void from_json(const nlohmann::json& j, FitnessReport& report);

// Array of ids.
void to_json(nlohmann::json& j, const Combination& combo);

// {"n_request", "child_ratios", "tolerance_pct"}
void to_json(nlohmann::json& j, const Request& request);

// {"best", "best_report", "n_combinations", "mean_match_ratio_all",
//  "mean_match_ratio_feasible"}; the last is null when absent.
void to_json(nlohmann::json& j, const ExactResult& result);

std::string FitnessReportCsvHeader();
std::string FitnessReportCsvRow(const FitnessReport& report);

}  // namespace nodealloc

#endif  // NODEALLOC_SERIALIZE_H_
