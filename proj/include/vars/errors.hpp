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

#include <stdexcept>
#include <string>

namespace vars {

// Every library failure derives from Error. category() is a stable lowercase
// token; the CLI uses it to pick exit codes and stderr prefixes.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& message)
      : std::runtime_error(message), category_(std::move(category)) {}
  const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

struct DimensionError : Error {
  explicit DimensionError(const std::string& m) : Error("dimension", m) {}
};

struct ArgumentError : Error {
  explicit ArgumentError(const std::string& m) : Error("argument", m) {}
};

// Non-finite value produced inside a computation. iteration is the loop
// index at detection time, -1 when not applicable.
struct NumericError : Error {
  explicit NumericError(const std::string& m, long iter = -1)
      : Error("numeric", m), iteration(iter) {}
  long iteration;
};

// Pre-transform magnitude would overflow a double (e.g. exp argument).
struct NumericRangeError : Error {
  explicit NumericRangeError(const std::string& m)
      : Error("numeric-range", m) {}
};

// Iteration budget exhausted; carries the last estimate for diagnosis.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& m, double last)
      : Error("convergence", m), last_estimate(last) {}
  double last_estimate;
};

// Trajectory norm blew past the divergence guard; carries the spectral
// radius estimate of the recurrent weights.
struct InstabilityError : Error {
  InstabilityError(const std::string& m, double rho)
      : Error("instability", m), rho_estimate(rho) {}
  double rho_estimate;
};

struct DegenerateAtomError : Error {
  explicit DegenerateAtomError(const std::string& m)
      : Error("degenerate-atom", m) {}
};

struct IoError : Error {
  explicit IoError(const std::string& m) : Error("io", m) {}
};

}  // namespace vars
