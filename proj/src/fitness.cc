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

#include "nodealloc/fitness.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <utility>

namespace nodealloc {

std::string_view ShapeModeName(ShapeMode mode) {
  return mode == ShapeMode::kTelescoping ? "telescoping" : "absolute";
}

ShapeMode ParseShapeMode(std::string_view name) {
  if (name == "absolute") return ShapeMode::kAbsolute;
  if (name == "telescoping") return ShapeMode::kTelescoping;
  throw Error(ErrorKind::kValidation,
              "unknown shape mode '" + std::string(name) +
                  "' (expected absolute or telescoping)");
}

Request Request::Create(std::vector<int> child_ratios, double tolerance_pct) {
  if (child_ratios.size() < 2) {
    throw Error(ErrorKind::kValidation,
                "a request needs at least 2 child ratios, got " +
                    std::to_string(child_ratios.size()));
  }
  for (int ratio : child_ratios) {
    if (ratio < 1) {
      throw Error(ErrorKind::kValidation,
                  "child ratios must be >= 1, got " + std::to_string(ratio));
    }
  }
  const long sum = std::accumulate(child_ratios.begin(), child_ratios.end(), 0L);
  if (sum != kIdealTotalPct) {
    throw Error(ErrorKind::kValidation,
                "child ratios must sum to 100, got " + std::to_string(sum));
  }
  if (!(tolerance_pct > 0.0 && tolerance_pct <= 100.0)) {
    throw Error(ErrorKind::kValidation,
                "tolerance must be in (0, 100], got " +
                    std::to_string(tolerance_pct));
  }
  Request request;
  request.sorted_ = child_ratios;
  std::sort(request.sorted_.begin(), request.sorted_.end(), std::greater<>());
  request.child_ratios_ = std::move(child_ratios);
  request.tolerance_pct_ = tolerance_pct;
  return request;
}

Combination::Combination(std::vector<int> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  const auto dup = std::adjacent_find(ids_.begin(), ids_.end());
  if (dup != ids_.end()) {
    throw Error(ErrorKind::kValidation,
                "combination repeats node " + std::to_string(*dup));
  }
}

Combination Combination::FromSorted(std::vector<int> ids) {
  Combination combo;
  combo.ids_ = std::move(ids);
  return combo;
}

std::string Combination::ToString() const {
  std::string out;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (i > 0) out += '+';
    out += std::to_string(ids_[i]);
  }
  return out;
}

int TotalCapacity(const Combination& combo, const Fleet& fleet) {
  int total = 0;
  for (int id : combo.ids()) total += fleet.CapacityOf(id);
  return total;
}

ToleranceCheck CapacityDeviation(int total_capacity_pct,
                                 double tolerance_pct) {
  const double deviation = std::abs(total_capacity_pct - kIdealTotalPct);
  return {deviation, deviation <= tolerance_pct};
}

ToleranceCheck CapacityDeviation(const Combination& combo, const Fleet& fleet,
                                 double tolerance_pct) {
  return CapacityDeviation(TotalCapacity(combo, fleet), tolerance_pct);
}

std::vector<int> SortedCapacityProfile(const Combination& combo,
                                       const Fleet& fleet) {
  std::vector<int> profile;
  profile.reserve(combo.size());
  for (int id : combo.ids()) profile.push_back(fleet.CapacityOf(id));
  std::sort(profile.begin(), profile.end(), std::greater<>());
  return profile;
}

ToleranceCheck ShapeDeviation(std::span<const int> node_profile,
                              std::span<const int> child_profile,
                              double tolerance_pct, ShapeMode mode) {
  if (node_profile.size() != child_profile.size()) {
    throw Error(ErrorKind::kValidation,
                "profile sizes differ: " + std::to_string(node_profile.size()) +
                    " nodes vs " + std::to_string(child_profile.size()) +
                    " child ratios");
  }
  if (node_profile.size() < 2) return {0.0, true};

  const int child_spread = child_profile.front() - child_profile.back();
  int deviation = 0;
  if (mode == ShapeMode::kTelescoping) {
    const int node_spread = node_profile.front() - node_profile.back();
    deviation = std::abs(node_spread - child_spread);
  } else {
    for (std::size_t k = 0; k + 1 < node_profile.size(); ++k) {
      const int node_gap = node_profile[k] - node_profile[k + 1];
      const int child_gap = child_profile[k] - child_profile[k + 1];
      deviation += std::abs(node_gap - child_gap);
    }
  }
  // Summed child gaps equal the spread for a descending profile.
  const double band = tolerance_pct / 100.0 * child_spread;
  return {static_cast<double>(deviation), deviation <= band};
}

ToleranceCheck ShapeDeviation(const Combination& combo, const Fleet& fleet,
                              const Request& request, ShapeMode mode) {
  const std::vector<int> profile = SortedCapacityProfile(combo, fleet);
  return ShapeDeviation(profile, request.sorted_child_ratios(),
                        request.tolerance_pct(), mode);
}

FitnessReport EvaluateProfile(std::span<const int> node_profile,
                              const Request& request, ShapeMode mode) {
  FitnessReport report;
  report.total_capacity_pct =
      std::accumulate(node_profile.begin(), node_profile.end(), 0);
  const ToleranceCheck capacity =
      CapacityDeviation(report.total_capacity_pct, request.tolerance_pct());
  const ToleranceCheck shape =
      ShapeDeviation(node_profile, request.sorted_child_ratios(),
                     request.tolerance_pct(), mode);
  report.capacity_deviation = capacity.deviation;
  report.shape_deviation = shape.deviation;
  report.fitness_deviation = capacity.deviation + shape.deviation;
  report.match_ratio = report.total_capacity_pct / 100.0;
  report.within_capacity_tolerance = capacity.within_tolerance;
  report.within_shape_tolerance = shape.within_tolerance;
  return report;
}

FitnessReport Evaluate(const Combination& combo, const Fleet& fleet,
                       const Request& request, ShapeMode mode) {
  if (static_cast<int>(combo.size()) != request.n_request()) {
    throw Error(ErrorKind::kValidation,
                "combination has " + std::to_string(combo.size()) +
                    " nodes but the request asks for " +
                    std::to_string(request.n_request()));
  }
  const std::vector<int> profile = SortedCapacityProfile(combo, fleet);
  return EvaluateProfile(profile, request, mode);
}

bool RanksBefore(const Combination& a, const FitnessReport& report_a,
                 const Combination& b, const FitnessReport& report_b) {
  if (report_a.fitness_deviation != report_b.fitness_deviation) {
    return report_a.fitness_deviation < report_b.fitness_deviation;
  }
  if (report_a.capacity_deviation != report_b.capacity_deviation) {
    return report_a.capacity_deviation < report_b.capacity_deviation;
  }
  return a.ids() < b.ids();
}

}  // namespace nodealloc
