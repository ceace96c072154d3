// Copyright 2026 The fraclab Authors
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

#ifndef FRACLAB_ERRORS_H_
#define FRACLAB_ERRORS_H_

#include <stdexcept>
#include <string>

namespace fraclab {

// Invalid grid, geometry or parameter choice. Maps to CLI exit code 2.
class ConfigurationError : public std::invalid_argument {
 public:
  explicit ConfigurationError(const std::string& what)
      : std::invalid_argument(what) {}
};

// The problem itself is degenerate, e.g. zero is a Dirichlet eigenvalue of
// ((-Delta)^s + q) on Omega. Maps to CLI exit code 3.
class DegeneracyError : public std::runtime_error {
 public:
  explicit DegeneracyError(const std::string& what)
      : std::runtime_error(what) {}
};

// A factorization or iteration broke down for numerical reasons (e.g. a
// Gram matrix that is not numerically positive definite). Exit code 4.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace fraclab

#endif  // FRACLAB_ERRORS_H_
