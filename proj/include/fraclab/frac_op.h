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

#ifndef FRACLAB_FRAC_OP_H_
#define FRACLAB_FRAC_OP_H_

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "fraclab/grid.h"

namespace fraclab {

// Pointwise bounded potential q. `support` is informational (nullopt means
// the whole grid); the values are authoritative.
struct Potential {
  GridFunction values;
  std::optional<IndexSet> support;

  bool IsNonnegative() const { return values.values.minCoeff() >= 0.0; }
  double SupNorm() const { return values.values.cwiseAbs().maxCoeff(); }

  static Potential Zero(const Grid& grid);
  // c on `set` (or everywhere when set is nullopt), zero elsewhere.
  static Potential Constant(const Grid& grid, double c,
                            const std::optional<IndexSet>& set = std::nullopt);
  // C^inf bump amplitude * exp(1 - 1/(1 - r^2)), r = |x - center| / radius.
  static Potential Bump(const Grid& grid, double amplitude, double center,
                        double radius);
  static Potential FromValues(GridFunction values,
                              std::optional<IndexSet> set = std::nullopt);
};

// a + b and a - b on the same grid.
Potential operator+(const Potential& a, const Potential& b);
Potential operator-(const Potential& a, const Potential& b);

// (-Delta)^s u = F^{-1}[|xi|^{2s} u_hat], 0 < s < 1.
GridFunction FracLaplacianApply(const GridFunction& u, double s);

// Homogeneous multiplier |xi|^{2 order} for any real order, with the zero
// mode mapped to 0 (used for the Ḣ norms of the extension identities).
GridFunction HomogeneousMultiplierApply(const GridFunction& u, double order);

// Matrix of the bilinear form B_q(u, v) = <(-Delta)^s u, v> + <q u, v> in the
// cell-indicator basis: M_ab = h^n ((-Delta)^s delta_b)(x_a) + h^n q_a.
// The (-Delta)^s part is circulant, so only its first column is stored and
// blocks are materialized on demand.
class OperatorMatrix {
 public:
  OperatorMatrix(Grid grid, double s, Potential q);

  const Grid& grid() const { return grid_; }
  double s() const { return s_; }
  const Potential& potential() const { return q_; }

  double Entry(int a, int b) const;
  // Dense sub-block with the given row and column index maps.
  Eigen::MatrixXd Block(const std::vector<int>& rows,
                        const std::vector<int>& cols) const;
  Eigen::MatrixXd Dense() const;
  // M u via FFT.
  Eigen::VectorXd Apply(const Eigen::VectorXd& u) const;

 private:
  Grid grid_;
  double s_;
  Potential q_;
  Eigen::VectorXd column_;  // h^n * IDFT(|xi|^{2s}) by wrapped offset
  Eigen::VectorXd symbol_;  // |xi|^{2s}
};

OperatorMatrix AssembleOperator(const Grid& grid, double s, const Potential& q);

// Throws ConfigurationError unless 0 < s < 1.
void CheckFractionalOrder(double s);

}  // namespace fraclab

#endif  // FRACLAB_FRAC_OP_H_
