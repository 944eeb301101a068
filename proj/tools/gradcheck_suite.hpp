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

#ifndef NEURAL_DRAWER_TOOLS_GRADCHECK_SUITE_HPP
#define NEURAL_DRAWER_TOOLS_GRADCHECK_SUITE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace nd {

struct GradCheckCase {
  std::string name;
  double relative_error = 0.0;
  bool passed = false;
};

/// Finite-difference checks of every tape op, every layer type, and every
/// layout and task loss at tolerance 1e-4.
std::vector<GradCheckCase> run_gradcheck_suite(std::uint64_t seed = 1);

}  // namespace nd

#endif  // NEURAL_DRAWER_TOOLS_GRADCHECK_SUITE_HPP
