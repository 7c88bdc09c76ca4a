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

// Command-line front end: `allocate`, `exact`, `simulate` and `validate`.
// JSON results go to `out`, diagnostics to `err`.

#ifndef NODEALLOC_CLI_H_
#define NODEALLOC_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "nodealloc/error.h"

namespace nodealloc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitValidation = 4;
inline constexpr int kExitInfeasible = 5;
inline constexpr int kExitIo = 6;

int ExitCodeFor(ErrorKind kind);

// `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace nodealloc

#endif  // NODEALLOC_CLI_H_
