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

#ifndef FRACLAB_TESTS_TEST_SUPPORT_H_
#define FRACLAB_TESTS_TEST_SUPPORT_H_

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Core>

#include "fraclab/grid.h"

namespace fraclab::testing {

// Default desk-scale geometry: n = 1, N = 256, L = 8, R = 1, gap = 1, w = 1.
inline Grid DefaultGrid() { return MakeGrid(1, 256, 8.0); }
inline Domains DefaultDomains(const Grid& grid) {
  return MakeDomains(grid, 1.0, 1.0, 1.0);
}

// cos^2(pi x / 2R) on `set` (R = 1), zero elsewhere.
inline GridFunction CosSquaredOn(const IndexSet& set, double radius = 1.0) {
  GridFunction f = GridFunction::Zeros(set.grid());
  for (int a : set.indices()) {
    const double c = std::cos(std::numbers::pi * set.grid().Point(a)[0] /
                              (2.0 * radius));
    f.values[a] = c * c;
  }
  return f;
}

inline Eigen::VectorXd RandomVector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

inline GridFunction RandomOn(const IndexSet& set, std::mt19937_64& rng) {
  return set.ExtendByZero(RandomVector(set.size(), rng));
}

inline GridFunction RandomFull(const Grid& grid, std::mt19937_64& rng) {
  return GridFunction(grid, RandomVector(grid.size(), rng));
}

inline double RelativeError(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / b.norm();
}

}  // namespace fraclab::testing

#endif  // FRACLAB_TESTS_TEST_SUPPORT_H_
