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

#include "fraclab/frac_op.h"

#include <cmath>

#include "fraclab/errors.h"
#include "fraclab/fft.h"

namespace fraclab {

void CheckFractionalOrder(double s) {
  if (!(s > 0.0 && s < 1.0)) {
    throw ConfigurationError("fractional order s must lie in (0, 1)");
  }
}

Potential Potential::Zero(const Grid& grid) {
  return {GridFunction::Zeros(grid), std::nullopt};
}

Potential Potential::Constant(const Grid& grid, double c,
                              const std::optional<IndexSet>& set) {
  Eigen::VectorXd v = Eigen::VectorXd::Constant(grid.size(), c);
  if (set) {
    v.setZero();
    for (int idx : set->indices()) v[idx] = c;
  }
  return {GridFunction(grid, std::move(v)), set};
}

Potential Potential::Bump(const Grid& grid, double amplitude, double center,
                          double radius) {
  if (!(radius > 0.0)) throw ConfigurationError("bump radius must be > 0");
  return {GridFunction::Sample(grid,
                               [&](double x0, double x1) {
                                 const double r =
                                     std::hypot(x0 - center, x1) / radius;
                                 if (r >= 1.0) return 0.0;
                                 return amplitude *
                                        std::exp(1.0 - 1.0 / (1.0 - r * r));
                               }),
          std::nullopt};
}

Potential Potential::FromValues(GridFunction values,
                                std::optional<IndexSet> set) {
  return {std::move(values), std::move(set)};
}

Potential operator+(const Potential& a, const Potential& b) {
  if (a.values.grid != b.values.grid) {
    throw ConfigurationError("potentials live on different grids");
  }
  return {GridFunction(a.values.grid, a.values.values + b.values.values),
          std::nullopt};
}

Potential operator-(const Potential& a, const Potential& b) {
  if (a.values.grid != b.values.grid) {
    throw ConfigurationError("potentials live on different grids");
  }
  return {GridFunction(a.values.grid, a.values.values - b.values.values),
          std::nullopt};
}

GridFunction FracLaplacianApply(const GridFunction& u, double s) {
  CheckFractionalOrder(s);
  return GridFunction(u.grid,
                      ApplySymbol(u.grid, u.values, FractionalSymbol(u.grid, s)));
}

GridFunction HomogeneousMultiplierApply(const GridFunction& u, double order) {
  const Eigen::VectorXd xi = u.grid.FrequencyNorms();
  Eigen::VectorXd symbol(xi.size());
  for (Eigen::Index k = 0; k < xi.size(); ++k) {
    symbol[k] = xi[k] == 0.0 ? 0.0 : std::pow(xi[k], 2.0 * order);
  }
  return GridFunction(u.grid, ApplySymbol(u.grid, u.values, symbol));
}

OperatorMatrix::OperatorMatrix(Grid grid, double s, Potential q)
    : grid_(std::move(grid)), s_(s), q_(std::move(q)) {
  CheckFractionalOrder(s);
  if (q_.values.grid != grid_) {
    throw ConfigurationError("potential grid does not match operator grid");
  }
  symbol_ = FractionalSymbol(grid_, s_);
  column_ = grid_.cell_volume() * CirculantColumn(grid_, symbol_);
}

double OperatorMatrix::Entry(int a, int b) const {
  double value = column_[grid_.WrappedOffset(a, b)];
  if (a == b) value += grid_.cell_volume() * q_.values.values[a];
  return value;
}

Eigen::MatrixXd OperatorMatrix::Block(const std::vector<int>& rows,
                                      const std::vector<int>& cols) const {
  Eigen::MatrixXd block(rows.size(), cols.size());
  for (size_t j = 0; j < cols.size(); ++j) {
    for (size_t i = 0; i < rows.size(); ++i) {
      block(i, j) = Entry(rows[i], cols[j]);
    }
  }
  return block;
}

Eigen::MatrixXd OperatorMatrix::Dense() const {
  std::vector<int> all(grid_.size());
  for (int i = 0; i < grid_.size(); ++i) all[i] = i;
  return Block(all, all);
}

Eigen::VectorXd OperatorMatrix::Apply(const Eigen::VectorXd& u) const {
  Eigen::VectorXd out = grid_.cell_volume() * ApplySymbol(grid_, u, symbol_);
  out.array() += grid_.cell_volume() * q_.values.values.array() * u.array();
  return out;
}

OperatorMatrix AssembleOperator(const Grid& grid, double s, const Potential& q) {
  return OperatorMatrix(grid, s, q);
}

}  // namespace fraclab
