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

// Exhaustive solver. Enumerates every n-subset of the fleet and is used as
// the ground truth for the genetic search.

#ifndef NODEALLOC_EXACT_H_
#define NODEALLOC_EXACT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nodealloc/fitness.h"
#include "nodealloc/inventory.h"

namespace nodealloc {

// C(n, k) by the multiplicative formula. Returns 0 when k > n.
std::uint64_t BinomialCoefficient(int n, int k);

// Streams the n-subsets of a fleet in lexicographic order of their ascending
// id lists, holding only the current subset.
//
//   CombinationEnumerator it(fleet, 3);
//   while (it.Next()) Use(it.ids());
class CombinationEnumerator {
 public:
  // Throws Error(kValidation) for n < 1 and Error(kInfeasible) for
  // n > fleet.size().
  CombinationEnumerator(const Fleet& fleet, int n);

  // Advances to the next subset; false once every subset has been produced.
  bool Next();

  // Ascending ids of the current subset.
  const std::vector<int>& ids() const { return ids_; }
  // Capacities of the current subset, in the same order as ids().
  const std::vector<int>& capacities() const { return capacities_; }
  Combination Current() const { return Combination::FromSorted(ids_); }

  std::uint64_t total() const { return total_; }

 private:
  void Materialize();

  std::vector<int> sorted_ids_;
  std::vector<int> sorted_capacities_;
  std::vector<std::size_t> positions_;
  std::vector<int> ids_;
  std::vector<int> capacities_;
  std::uint64_t total_ = 0;
  bool started_ = false;
  bool done_ = false;
};

// Materializes the whole enumeration. Meant for small fleets and tests.
std::vector<Combination> EnumerateCombinations(const Fleet& fleet, int n);

struct ExactResult {
  Combination best;
  FitnessReport best_report;
  std::uint64_t n_combinations = 0;
  // Mean match ratio over every enumerated combination.
  double mean_match_ratio_all = 0.0;
  // Mean over combinations inside both tolerances; empty when none are.
  std::optional<double> mean_match_ratio_feasible;
};

// Evaluates every combination of request.n_request() nodes. Ties on
// fitness_deviation go to the lower capacity_deviation, then to the
// lexicographically smallest id list.
ExactResult SolveExact(const Fleet& fleet, const Request& request,
                       ShapeMode mode = ShapeMode::kAbsolute);

}  // namespace nodealloc

#endif  // NODEALLOC_EXACT_H_
