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

#include "nodealloc/exact.h"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>

namespace nodealloc {

std::uint64_t BinomialCoefficient(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // Exact at every step: result * (n - k + i) is divisible by i.
    result = result * static_cast<std::uint64_t>(n - k + i) / i;
  }
  return result;
}

CombinationEnumerator::CombinationEnumerator(const Fleet& fleet, int n) {
  if (n < 1) {
    throw Error(ErrorKind::kValidation,
                "combination size must be >= 1, got " + std::to_string(n));
  }
  if (static_cast<std::size_t>(n) > fleet.size()) {
    throw Error(ErrorKind::kInfeasible,
                "cannot choose " + std::to_string(n) + " nodes from a fleet of " +
                    std::to_string(fleet.size()));
  }
  sorted_ids_ = fleet.SortedIds();
  sorted_capacities_.reserve(sorted_ids_.size());
  for (int id : sorted_ids_) sorted_capacities_.push_back(fleet.CapacityOf(id));
  positions_.resize(n);
  ids_.resize(n);
  capacities_.resize(n);
  total_ = BinomialCoefficient(static_cast<int>(fleet.size()), n);
}

bool CombinationEnumerator::Next() {
  if (done_) return false;
  const std::size_t k = positions_.size();
  const std::size_t a = sorted_ids_.size();
  if (!started_) {
    started_ = true;
    std::iota(positions_.begin(), positions_.end(), std::size_t{0});
    Materialize();
    return true;
  }
  // Rightmost position that can still move right.
  std::size_t i = k;
  while (i > 0 && positions_[i - 1] == a - k + (i - 1)) --i;
  if (i == 0) {
    done_ = true;
    return false;
  }
  ++positions_[i - 1];
  for (std::size_t j = i; j < k; ++j) positions_[j] = positions_[j - 1] + 1;
  Materialize();
  return true;
}

void CombinationEnumerator::Materialize() {
  for (std::size_t j = 0; j < positions_.size(); ++j) {
    ids_[j] = sorted_ids_[positions_[j]];
    capacities_[j] = sorted_capacities_[positions_[j]];
  }
}

std::vector<Combination> EnumerateCombinations(const Fleet& fleet, int n) {
  CombinationEnumerator it(fleet, n);
  std::vector<Combination> all;
  all.reserve(it.total());
  while (it.Next()) all.push_back(it.Current());
  return all;
}

ExactResult SolveExact(const Fleet& fleet, const Request& request,
                       ShapeMode mode) {
  CombinationEnumerator it(fleet, request.n_request());

  ExactResult result;
  std::vector<int> best_ids;
  bool have_best = false;
  std::uint64_t count = 0;
  std::uint64_t total_sum = 0;
  std::uint64_t feasible_count = 0;
  std::uint64_t feasible_sum = 0;
  std::vector<int> profile(request.n_request());

  while (it.Next()) {
    std::copy(it.capacities().begin(), it.capacities().end(), profile.begin());
    std::sort(profile.begin(), profile.end(), std::greater<>());
    const FitnessReport report = EvaluateProfile(profile, request, mode);

    ++count;
    total_sum += report.total_capacity_pct;
    if (report.within_capacity_tolerance && report.within_shape_tolerance) {
      ++feasible_count;
      feasible_sum += report.total_capacity_pct;
    }
    // Lexicographic enumeration order makes the first of equal-ranked
    // combinations the smallest id list, so strict improvement suffices.
    const bool better =
        !have_best ||
        report.fitness_deviation < result.best_report.fitness_deviation ||
        (report.fitness_deviation == result.best_report.fitness_deviation &&
         report.capacity_deviation < result.best_report.capacity_deviation);
    if (better) {
      have_best = true;
      result.best_report = report;
      best_ids = it.ids();
    }
  }

  result.best = Combination::FromSorted(std::move(best_ids));
  result.n_combinations = count;
  result.mean_match_ratio_all =
      static_cast<double>(total_sum) / (100.0 * static_cast<double>(count));
  if (feasible_count > 0) {
    result.mean_match_ratio_feasible =
        static_cast<double>(feasible_sum) /
        (100.0 * static_cast<double>(feasible_count));
  }
  return result;
}

}  // namespace nodealloc
