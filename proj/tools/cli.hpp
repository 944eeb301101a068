// Copyright 2026 The neural_drawer Authors.
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

// Command implementations behind the neural_drawer executable. Kept in a
// library so tests can drive them in-process.

#ifndef NEURAL_DRAWER_TOOLS_CLI_HPP
#define NEURAL_DRAWER_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace nd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDiverged = 3;

/// args excludes the program name. Returns a process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Splices the key=value pairs of every "--config FILE" into args as
/// "--key=value", skipping keys already given as flags.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

}  // namespace nd::cli

#endif  // NEURAL_DRAWER_TOOLS_CLI_HPP
