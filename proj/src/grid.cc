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

#include "fraclab/grid.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fraclab/errors.h"
#include "fraclab/fft.h"

namespace fraclab {

double Grid::cell_volume() const {
  return dim_ == 1 ? spacing() : spacing() * spacing();
}

std::array<int, 2> Grid::Unflatten(int flat) const {
  if (dim_ == 1) return {flat, 0};
  return {flat / n_, flat % n_};
}

std::array<double, 2> Grid::Point(int flat) const {
  const auto [i0, i1] = Unflatten(flat);
  return {AxisCoordinate(i0), dim_ == 1 ? 0.0 : AxisCoordinate(i1)};
}

std::vector<double> Grid::AxisFrequencies() const {
  std::vector<double> xi(n_);
  for (int k = 0; k < n_; ++k) {
    const int signed_k = k < n_ / 2 ? k : k - n_;
    xi[k] = M_PI * signed_k / half_period_;
  }
  return xi;
}

Eigen::VectorXd Grid::FrequencyNorms() const {
  const std::vector<double> xi = AxisFrequencies();
  Eigen::VectorXd norms(size());
  for (int flat = 0; flat < size(); ++flat) {
    const auto [k0, k1] = Unflatten(flat);
    norms[flat] = dim_ == 1 ? std::abs(xi[k0]) : std::hypot(xi[k0], xi[k1]);
  }
  return norms;
}

int Grid::WrappedOffset(int a, int b) const {
  const auto [a0, a1] = Unflatten(a);
  const auto [b0, b1] = Unflatten(b);
  const int d0 = ((a0 - b0) % n_ + n_) % n_;
  if (dim_ == 1) return d0;
  const int d1 = ((a1 - b1) % n_ + n_) % n_;
  return d0 * n_ + d1;
}

Grid MakeGrid(int dim, int points_per_axis, double half_period) {
  if (dim != 1 && dim != 2) {
    throw ConfigurationError("grid dimension must be 1 or 2");
  }
  if (points_per_axis < 8 ||
      (points_per_axis & (points_per_axis - 1)) != 0) {
    throw ConfigurationError(
        "points per axis must be a power of two and at least 8");
  }
  if (!(half_period > 0.0) || !std::isfinite(half_period)) {
    throw ConfigurationError("half period L must be positive");
  }
  return Grid(dim, points_per_axis, half_period);
}

GridFunction::GridFunction(Grid g, Eigen::VectorXd v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw ConfigurationError("grid function length does not match grid");
  }
  if (!values.allFinite()) {
    throw NumericalError("grid function has non-finite values");
  }
}

GridFunction GridFunction::Zeros(const Grid& grid) {
  return GridFunction(grid, Eigen::VectorXd::Zero(grid.size()));
}

GridFunction GridFunction::Sample(
    const Grid& grid, const std::function<double(double, double)>& fn) {
  Eigen::VectorXd values(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const auto [x0, x1] = grid.Point(i);
    values[i] = fn(x0, x1);
  }
  return GridFunction(grid, std::move(values));
}

std::string ToString(DomainLabel label) {
  switch (label) {
    case DomainLabel::kOmega:
      return "Omega";
    case DomainLabel::kW:
      return "W";
    case DomainLabel::kW1:
      return "W1";
    case DomainLabel::kW2:
      return "W2";
    case DomainLabel::kExterior:
      return "exterior";
    case DomainLabel::kOther:
      break;
  }
  return "other";
}

IndexSet::IndexSet(Grid grid, std::vector<int> indices, DomainLabel label)
    : grid_(std::move(grid)),
      indices_(std::move(indices)),
      mask_(grid_.size(), false),
      label_(label) {
  std::sort(indices_.begin(), indices_.end());
  for (size_t i = 0; i < indices_.size(); ++i) {
    const int idx = indices_[i];
    if (idx < 0 || idx >= grid_.size()) {
      throw ConfigurationError("index set entry out of range");
    }
    if (i > 0 && indices_[i - 1] == idx) {
      throw ConfigurationError("index set has duplicate entries");
    }
    mask_[idx] = true;
  }
}

Eigen::VectorXd IndexSet::Restrict(const GridFunction& f) const {
  if (f.grid != grid_) throw ConfigurationError("grid mismatch in Restrict");
  return Restrict(f.values);
}

Eigen::VectorXd IndexSet::Restrict(const Eigen::VectorXd& values) const {
  Eigen::VectorXd out(size());
  for (int i = 0; i < size(); ++i) out[i] = values[indices_[i]];
  return out;
}

GridFunction IndexSet::ExtendByZero(const Eigen::VectorXd& coefficients) const {
  if (coefficients.size() != size()) {
    throw ConfigurationError("coefficient count does not match index set");
  }
  Eigen::VectorXd values = Eigen::VectorXd::Zero(grid_.size());
  for (int i = 0; i < size(); ++i) values[indices_[i]] = coefficients[i];
  return GridFunction(grid_, std::move(values));
}

bool IndexSet::Supports(const GridFunction& f) const {
  if (f.grid != grid_) return false;
  for (int i = 0; i < grid_.size(); ++i) {
    if (!mask_[i] && f.values[i] != 0.0) return false;
  }
  return true;
}

IndexSet IndexSet::Complement(DomainLabel label) const {
  std::vector<int> rest;
  rest.reserve(grid_.size() - size());
  for (int i = 0; i < grid_.size(); ++i) {
    if (!mask_[i]) rest.push_back(i);
  }
  return IndexSet(grid_, std::move(rest), label);
}

bool IndexSet::DisjointFrom(const IndexSet& other) const {
  for (int idx : other.indices_) {
    if (mask_[idx]) return false;
  }
  return true;
}

int IndexSet::CellGap(const IndexSet& other) const {
  const int n = grid_.points_per_axis();
  int best = n;
  for (int a : indices_) {
    const auto pa = grid_.Unflatten(a);
    for (int b : other.indices_) {
      const auto pb = grid_.Unflatten(b);
      int dist = 0;
      for (int axis = 0; axis < grid_.dim(); ++axis) {
        int d = std::abs(pa[axis] - pb[axis]);
        d = std::min(d, n - d);
        dist = std::max(dist, d);
      }
      best = std::min(best, dist - 1);
    }
  }
  return best;
}

namespace {

// Flat indices whose coordinates lie in the open box
// (lo0, hi0) x (lo1, hi1); the second interval is ignored in 1D.
std::vector<int> OpenBox(const Grid& grid, double lo0, double hi0, double lo1,
                         double hi1) {
  std::vector<int> out;
  const double tol = 1e-9 * grid.spacing();
  for (int i = 0; i < grid.size(); ++i) {
    const auto [x0, x1] = grid.Point(i);
    if (x0 <= lo0 + tol || x0 >= hi0 - tol) continue;
    if (grid.dim() == 2 && (x1 <= lo1 + tol || x1 >= hi1 - tol)) continue;
    out.push_back(i);
  }
  return out;
}

void CheckGeometry(const Grid& grid, double omega_radius, double gap,
                   double w_radius) {
  if (!(omega_radius > 0.0) || !(w_radius > 0.0)) {
    throw ConfigurationError("domain radii must be positive");
  }
  if (!(gap >= grid.spacing())) {
    std::ostringstream msg;
    msg << "gap between Omega and W must be at least one grid cell ("
        << grid.spacing() << "), got " << gap;
    throw ConfigurationError(msg.str());
  }
  if (!(omega_radius + gap + 2.0 * w_radius < grid.half_period())) {
    throw ConfigurationError(
        "geometry does not fit: omega_radius + gap + 2 w_radius must be < L");
  }
}

IndexSet CheckedSet(const Grid& grid, std::vector<int> indices,
                    DomainLabel label) {
  if (indices.size() < 2) {
    throw ConfigurationError("domain " + ToString(label) +
                             " contains fewer than 2 grid points");
  }
  return IndexSet(grid, std::move(indices), label);
}

}  // namespace

Domains MakeDomains(const Grid& grid, double omega_radius, double gap,
                    double w_radius) {
  const TwoWindowDomains two =
      MakeTwoWindowDomains(grid, omega_radius, gap, w_radius);
  return {two.omega,
          IndexSet(grid, two.w2.indices(), DomainLabel::kW)};
}

IndexSet MakeOmega(const Grid& grid, double omega_radius) {
  if (!(omega_radius > 0.0) || !(omega_radius < grid.half_period())) {
    throw ConfigurationError("omega_radius must lie in (0, L)");
  }
  const double r = omega_radius;
  return CheckedSet(grid, OpenBox(grid, -r, r, -r, r), DomainLabel::kOmega);
}

TwoWindowDomains MakeTwoWindowDomains(const Grid& grid, double omega_radius,
                                      double gap, double w_radius) {
  CheckGeometry(grid, omega_radius, gap, w_radius);
  const double r = omega_radius;
  const double near = r + gap, far = r + gap + 2.0 * w_radius;
  TwoWindowDomains d;
  d.omega = CheckedSet(grid, OpenBox(grid, -r, r, -r, r), DomainLabel::kOmega);
  d.w1 = CheckedSet(grid, OpenBox(grid, -far, -near, -w_radius, w_radius),
                    DomainLabel::kW1);
  d.w2 = CheckedSet(grid, OpenBox(grid, near, far, -w_radius, w_radius),
                    DomainLabel::kW2);
  if (d.omega.CellGap(d.w1) < 1 || d.omega.CellGap(d.w2) < 1) {
    throw ConfigurationError("Omega and W are not separated by a grid cell");
  }
  return d;
}

double HsInner(const GridFunction& u, const GridFunction& v, double s) {
  if (u.grid != v.grid) throw ConfigurationError("grid mismatch in HsInner");
  const Grid& grid = u.grid;
  const Eigen::VectorXcd uh = Dft(grid, u.values);
  const Eigen::VectorXcd vh = Dft(grid, v.values);
  const Eigen::VectorXd weight = BesselSymbol(grid, s);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < uh.size(); ++k) {
    sum += weight[k] * (uh[k] * std::conj(vh[k])).real();
  }
  // h^{2n} from the two transforms, (2L)^{-n} from the frequency measure.
  const double h_n = grid.cell_volume();
  const double period_n = std::pow(2.0 * grid.half_period(), grid.dim());
  return sum * h_n * h_n / period_n;
}

double HsNorm(const GridFunction& u, double s) {
  return std::sqrt(std::max(HsInner(u, u, s), 0.0));
}

double SobolevGram::Norm(const Eigen::VectorXd& coefficients) const {
  return std::sqrt(std::max(coefficients.dot(matrix * coefficients), 0.0));
}

SobolevGram AssembleGram(const IndexSet& set, double order) {
  if (set.size() < 1) throw ConfigurationError("Gram of an empty set");
  const Grid& grid = set.grid();
  // HsInner(delta_a, delta_b) = h^n * IDFT(<xi>^{2 order})[a - b].
  const Eigen::VectorXd column =
      grid.cell_volume() * CirculantColumn(grid, BesselSymbol(grid, order));
  const auto& idx = set.indices();
  const int m = set.size();
  SobolevGram gram;
  gram.order = order;
  gram.support = set;
  gram.matrix.resize(m, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      gram.matrix(i, j) = column[grid.WrappedOffset(idx[i], idx[j])];
    }
  }
  // Symmetrize the roundoff of the two wrapped offsets.
  gram.matrix = 0.5 * (gram.matrix + gram.matrix.transpose()).eval();
  gram.cholesky.compute(gram.matrix);
  if (gram.cholesky.info() != Eigen::Success) {
    throw NumericalError(
        "Sobolev Gram is not numerically positive definite; refine the grid");
  }
  return gram;
}

double DualNorm(const Eigen::VectorXd& coefficients, const SobolevGram& gram) {
  const double h_n = gram.support.grid().cell_volume();
  const Eigen::VectorXd pairing = h_n * coefficients;
  return std::sqrt(std::max(pairing.dot(gram.Solve(pairing)), 0.0));
}

double DualNorm(const GridFunction& v, const IndexSet& set, double s) {
  if (!set.Supports(v)) {
    throw ConfigurationError("dual norm argument is not supported on the set");
  }
  return DualNorm(set.Restrict(v), AssembleGram(set, s));
}

}  // namespace fraclab
