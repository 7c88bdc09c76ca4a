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

#ifndef NODEALLOC_ERROR_H_
#define NODEALLOC_ERROR_H_

#include <stdexcept>
#include <string>

namespace nodealloc {

// Broad failure categories. The CLI maps each one to its own exit code.
enum class ErrorKind {
  kParse,
  kValidation,
  kInfeasible,
  kUnknownId,
  kIo,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nodealloc

#endif  // NODEALLOC_ERROR_H_
