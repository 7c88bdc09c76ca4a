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

// Fitness of a node combination against a user request.
//
// Two quantities are scored. The capacity deviation is how far the summed
// node capacities land from the ideal 100%. The shape deviation compares the
// gaps between neighboring capacities with the gaps between neighboring child
// ratios, both sorted descending so that "neighboring" does not depend on the
// order in which node ids were listed. The scalar fitness is their unweighted
// sum; lower is better.

#ifndef NODEALLOC_FITNESS_H_
#define NODEALLOC_FITNESS_H_

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nodealloc/inventory.h"

namespace nodealloc {

inline constexpr double kDefaultTolerancePct = 5.0;
inline constexpr int kIdealTotalPct = 100;

enum class ShapeMode {
  // Sum over neighbor pairs of |node gap - child gap|.
  kAbsolute,
  // The neighbor gaps summed first, which collapses to max - min.
  kTelescoping,
};

std::string_view ShapeModeName(ShapeMode mode);
// Accepts "absolute" or "telescoping"; throws Error(kValidation) otherwise.
ShapeMode ParseShapeMode(std::string_view name);

// What a user asks for: one capacity ratio per child process. The number of
// requested nodes is the number of ratios.
class Request {
 public:
  // Throws Error(kValidation) unless there are at least two ratios, each is
  // >= 1, they sum to 100, and 0 < tolerance_pct <= 100.
  static Request Create(std::vector<int> child_ratios,
                        double tolerance_pct = kDefaultTolerancePct);

  int n_request() const { return static_cast<int>(child_ratios_.size()); }
  const std::vector<int>& child_ratios() const { return child_ratios_; }
  // Child ratios sorted descending.
  const std::vector<int>& sorted_child_ratios() const { return sorted_; }
  double tolerance_pct() const { return tolerance_pct_; }

  friend bool operator==(const Request& a, const Request& b) {
    return a.child_ratios_ == b.child_ratios_ &&
           a.tolerance_pct_ == b.tolerance_pct_;
  }

 private:
  Request() = default;

  std::vector<int> child_ratios_;
  std::vector<int> sorted_;
  double tolerance_pct_ = kDefaultTolerancePct;
};

// A duplicate-free set of node ids, kept in ascending order.
class Combination {
 public:
  Combination() = default;
  // Sorts `ids`. Throws Error(kValidation) if an id repeats.
  explicit Combination(std::vector<int> ids);

  // Builds from ids already known to be strictly ascending.
  static Combination FromSorted(std::vector<int> ids);

  const std::vector<int>& ids() const { return ids_; }
  std::size_t size() const { return ids_.size(); }

  // "1+2+3"
  std::string ToString() const;

  friend bool operator==(const Combination&, const Combination&) = default;
  friend auto operator<=>(const Combination&, const Combination&) = default;

 private:
  std::vector<int> ids_;
};

// A deviation together with whether it is inside the request's tolerance.
struct ToleranceCheck {
  double deviation = 0.0;
  bool within_tolerance = false;
};

struct FitnessReport {
  int total_capacity_pct = 0;
  double capacity_deviation = 0.0;
  double shape_deviation = 0.0;
  // capacity_deviation + shape_deviation
  double fitness_deviation = 0.0;
  // total_capacity_pct / 100
  double match_ratio = 0.0;
  bool within_capacity_tolerance = false;
  bool within_shape_tolerance = false;

  friend bool operator==(const FitnessReport&, const FitnessReport&) = default;
};

// Throws Error(kUnknownId) when a combination names a node not in the fleet.
int TotalCapacity(const Combination& combo, const Fleet& fleet);

// |total - 100|, within tolerance when <= tolerance_pct.
ToleranceCheck CapacityDeviation(int total_capacity_pct, double tolerance_pct);
ToleranceCheck CapacityDeviation(const Combination& combo, const Fleet& fleet,
                                 double tolerance_pct);

// Capacities of the combination's nodes, highest first.
std::vector<int> SortedCapacityProfile(const Combination& combo,
                                       const Fleet& fleet);

// Both profiles must be sorted descending and have equal length. The
// tolerance band is tolerance_pct percent of the child profile's spread.
// A single-element profile has no neighbors and deviation 0.
ToleranceCheck ShapeDeviation(std::span<const int> node_profile,
                              std::span<const int> child_profile,
                              double tolerance_pct, ShapeMode mode);
ToleranceCheck ShapeDeviation(const Combination& combo, const Fleet& fleet,
                              const Request& request, ShapeMode mode);

// `node_profile` is the descending capacity profile of a combination of
// request.n_request() nodes.
FitnessReport EvaluateProfile(std::span<const int> node_profile,
                              const Request& request, ShapeMode mode);
// Throws Error(kValidation) if the combination size differs from n_request.
FitnessReport Evaluate(const Combination& combo, const Fleet& fleet,
                       const Request& request,
                       ShapeMode mode = ShapeMode::kAbsolute);

// Strict ranking of evaluated combinations: lower fitness_deviation first,
// then lower capacity_deviation, then the lexicographically smaller id list.
bool RanksBefore(const Combination& a, const FitnessReport& report_a,
                 const Combination& b, const FitnessReport& report_b);

}  // namespace nodealloc

#endif  // NODEALLOC_FITNESS_H_
