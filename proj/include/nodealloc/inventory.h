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

// Node fleet model: capacity ratios, class derivation, and the fleet text
// format (`id,capacity_pct[,class_label]`, `#` comments, blank lines ignored).

#ifndef NODEALLOC_INVENTORY_H_
#define NODEALLOC_INVENTORY_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nodealloc/error.h"

namespace nodealloc {

inline constexpr int kMinCapacityPct = 1;
inline constexpr int kMaxCapacityPct = 100;

// One cluster machine. `capacity_pct` is its computational capacity relative
// to the strongest node in the cluster.
struct Node {
  int id = 0;
  int capacity_pct = 0;
  int class_label = 1;

  friend bool operator==(const Node&, const Node&) = default;
};

// The pool of currently available nodes. Keeps file order; ids are unique.
// Immutable after construction.
class Fleet {
 public:
  Fleet() = default;
  // Throws Error(kValidation) on duplicate ids, non-positive ids or class
  // labels, and capacities outside [1, 100].
  explicit Fleet(std::vector<Node> nodes);

  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  bool Contains(int id) const { return index_.contains(id); }
  // Throws Error(kUnknownId).
  const Node& NodeById(int id) const;
  int CapacityOf(int id) const { return NodeById(id).capacity_pct; }

  // Ids in ascending order.
  std::vector<int> SortedIds() const;

  // Set semantics: equal when the same nodes are present, in any order.
  friend bool operator==(const Fleet& a, const Fleet& b);

 private:
  std::vector<Node> nodes_;
  std::unordered_map<int, std::size_t> index_;
};

// Groups nodes by exactly equal capacity. Labels are 1, 2, 3, ... with 1 for
// the highest capacity. Existing labels are overwritten.
Fleet DeriveClasses(const Fleet& fleet);

// The fleet without `excluded_ids`, e.g. nodes already assigned to other
// blocks. Throws Error(kUnknownId) if an excluded id is not in the fleet.
Fleet AvailabilitySubset(const Fleet& fleet, const std::set<int>& excluded_ids);

// A problem found while reading a fleet file. `line` is 1-based; 0 means the
// problem concerns the whole file (e.g. it holds no records).
struct FleetDiagnostic {
  int line = 0;
  ErrorKind kind = ErrorKind::kParse;
  std::string message;
};

// Parses a class label given either as a positive integer ("2") or as an
// upper-case roman numeral ("II"). Returns 0 when the text is neither.
int ParseClassLabel(std::string_view text);

// Reports every problem in a fleet file without stopping at the first one.
std::vector<FleetDiagnostic> ValidateFleet(std::istream& in);

// Records without a class column get the label DeriveClasses would assign
// them. Throws Error(kParse) for malformed lines, Error(kValidation) for
// duplicate ids, out-of-range values, or a file without records.
Fleet LoadFleet(std::istream& in);
Fleet LoadFleetFile(const std::filesystem::path& path);

// Writes every record with its class column, sorted by id.
void SaveFleet(const Fleet& fleet, std::ostream& out);
void SaveFleetFile(const Fleet& fleet, const std::filesystem::path& path);

}  // namespace nodealloc

#endif  // NODEALLOC_INVENTORY_H_
