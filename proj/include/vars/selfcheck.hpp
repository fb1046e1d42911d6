// Copyright 2026 the vars project
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

#pragma once

#include <string>
#include <vector>

namespace vars {

// Built-in consistency checks, runnable from the CLI. Each check computes a
// certificate (a residual, a closed form, or an independent re-computation)
// on seeded data rather than comparing against stored constants.

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // measured quantity and its bound
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

// Suites: tensor, dictionary, solver, dynamics, attention, toy.
std::vector<std::string> selfcheck_suites();

// Unknown suite name throws ArgumentError.
SuiteReport run_selfcheck(const std::string& suite);

std::vector<SuiteReport> run_all_selfchecks();

}  // namespace vars
