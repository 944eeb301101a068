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


#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "criteria.hpp"

int main(int argc, char** argv) {
  CLI::App app{"neural_drawer acceptance checks"};
  std::string group = "all";
  app.add_option("--group", group, "properties | training | all")
      ->check(CLI::IsMember({"properties", "training", "all"}));
  CLI11_PARSE(app, argc, argv);

  int passed = 0, failed = 0;
  const nd::acceptance::Report report = [&](const nd::acceptance::Verdict& v) {
    (v.passed ? passed : failed)++;
    std::printf("%s %s %s: %s\n", v.passed ? "PASS" : "FAIL", v.id.c_str(), v.title.c_str(), v.detail.c_str());
    std::fflush(stdout);
  };
  try {
    if (group == "properties" || group == "all") nd::acceptance::run_property_group(report);
    if (group == "training" || group == "all") nd::acceptance::run_training_group(report);
  } catch (const std::exception& e) {
    std::printf("FAIL (aborted): %s\n", e.what());
    return 1;
  }
  std::printf("%d passed, %d failed\n", passed, failed);
  return failed == 0 ? 0 : 1;
}
