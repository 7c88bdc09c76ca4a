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

#include "nodealloc/inventory.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

namespace nodealloc {
namespace {

std::string_view Trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

std::optional<int> ParseInt(std::string_view text) {
  int value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
  return value;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

struct Record {
  int line = 0;
  Node node;
  bool has_class = false;
};

struct ParsedFleet {
  std::vector<Record> records;
  std::vector<FleetDiagnostic> diagnostics;
};

ParsedFleet ParseFleet(std::istream& in) {
  ParsedFleet parsed;
  auto problem = [&](int line, ErrorKind kind, std::string message) {
    parsed.diagnostics.push_back({line, kind, std::move(message)});
  };
  std::map<int, int> first_line_of_id;
  std::string raw;
  int line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    const std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;

    const auto fields = SplitFields(line);
    if (fields.size() < 2 || fields.size() > 3) {
      problem(line_number, ErrorKind::kParse,
              "expected `id,capacity_pct[,class_label]`, got " +
                  std::to_string(fields.size()) + " field(s)");
      continue;
    }
    const auto id = ParseInt(fields[0]);
    const auto capacity = ParseInt(fields[1]);
    if (!id) {
      problem(line_number, ErrorKind::kParse,
              "id is not an integer: '" + std::string(fields[0]) + "'");
    }
    if (!capacity) {
      problem(line_number, ErrorKind::kParse,
              "capacity_pct is not an integer: '" + std::string(fields[1]) +
                  "'");
    }
    int class_label = 0;
    if (fields.size() == 3) {
      class_label = ParseClassLabel(fields[2]);
      if (class_label == 0) {
        problem(line_number, ErrorKind::kParse,
                "class_label must be a positive integer or roman numeral: '" +
                    std::string(fields[2]) + "'");
      }
    }
    if (!id || !capacity || (fields.size() == 3 && class_label == 0)) continue;

    bool valid = true;
    if (*id <= 0) {
      problem(line_number, ErrorKind::kValidation,
              "id must be positive, got " + std::to_string(*id));
      valid = false;
    }
    if (*capacity < kMinCapacityPct || *capacity > kMaxCapacityPct) {
      problem(line_number, ErrorKind::kValidation,
              "capacity_pct " + std::to_string(*capacity) +
                  " outside [1, 100] for node " + std::to_string(*id));
      valid = false;
    }
    if (*id > 0) {
      auto [it, inserted] = first_line_of_id.emplace(*id, line_number);
      if (!inserted) {
        problem(line_number, ErrorKind::kValidation,
                "duplicate id " + std::to_string(*id) +
                    " (first defined on line " + std::to_string(it->second) +
                    ")");
        valid = false;
      }
    }
    if (!valid) continue;
    parsed.records.push_back(
        {line_number, Node{*id, *capacity, class_label}, fields.size() == 3});
  }
  if (parsed.records.empty() && parsed.diagnostics.empty()) {
    problem(0, ErrorKind::kValidation, "fleet file contains no nodes");
  }
  return parsed;
}

// Descending capacity -> class label.
std::map<int, int, std::greater<>> ClassesByCapacity(
    const std::vector<Node>& nodes) {
  std::map<int, int, std::greater<>> classes;
  for (const Node& node : nodes) classes.emplace(node.capacity_pct, 0);
  int label = 0;
  for (auto& [capacity, cls] : classes) cls = ++label;
  return classes;
}

}  // namespace

Fleet::Fleet(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
  index_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& node = nodes_[i];
    if (node.id <= 0) {
      throw Error(ErrorKind::kValidation,
                  "node id must be positive, got " + std::to_string(node.id));
    }
    if (node.capacity_pct < kMinCapacityPct ||
        node.capacity_pct > kMaxCapacityPct) {
      throw Error(ErrorKind::kValidation,
                  "capacity_pct " + std::to_string(node.capacity_pct) +
                      " outside [1, 100] for node " + std::to_string(node.id));
    }
    if (node.class_label <= 0) {
      throw Error(ErrorKind::kValidation,
                  "class_label must be positive for node " +
                      std::to_string(node.id));
    }
    if (!index_.emplace(node.id, i).second) {
      throw Error(ErrorKind::kValidation,
                  "duplicate node id " + std::to_string(node.id));
    }
  }
}

const Node& Fleet::NodeById(int id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) {
    throw Error(ErrorKind::kUnknownId,
                "node " + std::to_string(id) + " is not in the fleet");
  }
  return nodes_[it->second];
}

std::vector<int> Fleet::SortedIds() const {
  std::vector<int> ids;
  ids.reserve(nodes_.size());
  for (const Node& node : nodes_) ids.push_back(node.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

bool operator==(const Fleet& a, const Fleet& b) {
  if (a.size() != b.size()) return false;
  for (const Node& node : a.nodes()) {
    if (!b.Contains(node.id) || b.NodeById(node.id) != node) return false;
  }
  return true;
}

Fleet DeriveClasses(const Fleet& fleet) {
  const auto classes = ClassesByCapacity(fleet.nodes());
  std::vector<Node> nodes = fleet.nodes();
  for (Node& node : nodes) node.class_label = classes.at(node.capacity_pct);
  return Fleet(std::move(nodes));
}

Fleet AvailabilitySubset(const Fleet& fleet,
                         const std::set<int>& excluded_ids) {
  for (int id : excluded_ids) {
    if (!fleet.Contains(id)) {
      throw Error(ErrorKind::kUnknownId,
                  "cannot exclude node " + std::to_string(id) +
                      ": not in the fleet");
    }
  }
  std::vector<Node> kept;
  kept.reserve(fleet.size());
  for (const Node& node : fleet.nodes()) {
    if (!excluded_ids.contains(node.id)) kept.push_back(node);
  }
  return Fleet(std::move(kept));
}

int ParseClassLabel(std::string_view text) {
  text = Trim(text);
  if (text.empty()) return 0;
  if (const auto number = ParseInt(text)) return *number > 0 ? *number : 0;

  auto digit = [](char c) {
    switch (c) {
      case 'I': return 1;
      case 'V': return 5;
      case 'X': return 10;
      case 'L': return 50;
      case 'C': return 100;
      default: return 0;
    }
  };
  int total = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const int value = digit(text[i]);
    if (value == 0) return 0;
    const int next = i + 1 < text.size() ? digit(text[i + 1]) : 0;
    total += value < next ? -value : value;
  }
  return total > 0 ? total : 0;
}

std::vector<FleetDiagnostic> ValidateFleet(std::istream& in) {
  return ParseFleet(in).diagnostics;
}

Fleet LoadFleet(std::istream& in) {
  ParsedFleet parsed = ParseFleet(in);
  if (!parsed.diagnostics.empty()) {
    const FleetDiagnostic& first = parsed.diagnostics.front();
    std::string message = first.line > 0
                              ? "line " + std::to_string(first.line) + ": "
                              : std::string();
    throw Error(first.kind, message + first.message);
  }
  std::vector<Node> nodes;
  nodes.reserve(parsed.records.size());
  for (const Record& record : parsed.records) nodes.push_back(record.node);

  const auto derived = ClassesByCapacity(nodes);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!parsed.records[i].has_class) {
      nodes[i].class_label = derived.at(nodes[i].capacity_pct);
    }
  }
  return Fleet(std::move(nodes));
}

Fleet LoadFleetFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot open fleet file " + path.string());
  }
  return LoadFleet(in);
}

void SaveFleet(const Fleet& fleet, std::ostream& out) {
  std::vector<Node> nodes = fleet.nodes();
  std::sort(nodes.begin(), nodes.end(),
            [](const Node& a, const Node& b) { return a.id < b.id; });
  out << "# id,capacity_pct,class_label\n";
  for (const Node& node : nodes) {
    out << node.id << ',' << node.capacity_pct << ',' << node.class_label
        << '\n';
  }
}

void SaveFleetFile(const Fleet& fleet, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::kIo, "cannot write fleet file " + path.string());
  }
  SaveFleet(fleet, out);
  if (!out) {
    throw Error(ErrorKind::kIo, "failed writing fleet file " + path.string());
  }
}

}  // namespace nodealloc
