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


// Acceptance criteria checked end to end against the library.

#ifndef NEURAL_DRAWER_TESTS_CRITERIA_HPP
#define NEURAL_DRAWER_TESTS_CRITERIA_HPP

#include <functional>
#include <string>
#include <vector>

namespace nd::acceptance {

struct Verdict {
  std::string id;
  std::string title;
  bool passed = false;
  std::string detail;
};

using Report = std::function<void(const Verdict&)>;

/// Criteria runnable without any training: gradients, invariances, oracles,
/// and stress descent on small cycles.
void run_property_group(const Report& report);

/// Criteria that train models: aesthete accuracy, crossing elimination, and
/// the drawer comparisons on a 1000-graph dataset.
void run_training_group(const Report& report);

}  // namespace nd::acceptance

#endif  // NEURAL_DRAWER_TESTS_CRITERIA_HPP
