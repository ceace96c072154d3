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

#ifndef FRACLAB_GRID_H_
#define FRACLAB_GRID_H_

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace fraclab {

// Uniform periodic grid on [-L, L)^dim standing in for R^dim. Points are
// x_i = -L + i h with h = 2L / N; flat indices are row-major with axis 0
// slowest, i.e. flat = i0 * N + i1 in 2D.
class Grid {
 public:
  Grid() = default;

  int dim() const { return dim_; }
  int points_per_axis() const { return n_; }
  double half_period() const { return half_period_; }
  double spacing() const { return 2.0 * half_period_ / n_; }
  // h^dim, the quadrature weight of one cell.
  double cell_volume() const;
  // N^dim.
  int size() const { return dim_ == 1 ? n_ : n_ * n_; }

  double AxisCoordinate(int i) const { return -half_period_ + i * spacing(); }
  std::array<int, 2> Unflatten(int flat) const;
  int Flatten(int i0, int i1) const { return dim_ == 1 ? i0 : i0 * n_ + i1; }
  // Coordinates of a flat index; the second entry is 0 in 1D.
  std::array<double, 2> Point(int flat) const;

  // xi_k = pi k / L for k in DFT order 0, 1, ..., N/2 - 1, -N/2, ..., -1.
  std::vector<double> AxisFrequencies() const;
  // |xi| for every flat DFT index.
  Eigen::VectorXd FrequencyNorms() const;

  // Flat index of the displacement (a - b) taken modulo N on every axis.
  int WrappedOffset(int a, int b) const;

  bool operator==(const Grid& other) const {
    return dim_ == other.dim_ && n_ == other.n_ &&
           half_period_ == other.half_period_;
  }
  bool operator!=(const Grid& other) const { return !(*this == other); }

 private:
  friend Grid MakeGrid(int dim, int points_per_axis, double half_period);
  Grid(int dim, int n, double half_period)
      : dim_(dim), n_(n), half_period_(half_period) {}

  int dim_ = 1;
  int n_ = 8;
  double half_period_ = 1.0;
};

// Validates dim in {1, 2}, N a power of two with N >= 8 and L > 0.
Grid MakeGrid(int dim, int points_per_axis, double half_period);

// Real samples on a grid.
struct GridFunction {
  GridFunction() = default;
  GridFunction(Grid g, Eigen::VectorXd v);

  static GridFunction Zeros(const Grid& grid);
  static GridFunction Sample(
      const Grid& grid, const std::function<double(double, double)>& fn);

  Grid grid;
  Eigen::VectorXd values;
};

enum class DomainLabel { kOmega, kW, kW1, kW2, kExterior, kOther };
std::string ToString(DomainLabel label);

class IndexSet {
 public:
  IndexSet() = default;
  // Sorts and validates the indices.
  IndexSet(Grid grid, std::vector<int> indices, DomainLabel label);

  const Grid& grid() const { return grid_; }
  const std::vector<int>& indices() const { return indices_; }
  DomainLabel label() const { return label_; }
  int size() const { return static_cast<int>(indices_.size()); }
  bool Contains(int flat) const { return mask_[flat]; }

  // Values of f at the set's indices, in set order.
  Eigen::VectorXd Restrict(const GridFunction& f) const;
  Eigen::VectorXd Restrict(const Eigen::VectorXd& values) const;
  // Grid function equal to `coefficients` on the set and zero elsewhere.
  GridFunction ExtendByZero(const Eigen::VectorXd& coefficients) const;
  // True if f is exactly zero off the set.
  bool Supports(const GridFunction& f) const;

  // Every grid index not in this set.
  IndexSet Complement(DomainLabel label = DomainLabel::kExterior) const;
  bool DisjointFrom(const IndexSet& other) const;
  // Grid distance (in cells, max-norm) between the two sets.
  int CellGap(const IndexSet& other) const;

 private:
  Grid grid_;
  std::vector<int> indices_;
  std::vector<bool> mask_;
  DomainLabel label_ = DomainLabel::kOther;
};

struct Domains {
  IndexSet omega;
  IndexSet w;
};

struct TwoWindowDomains {
  IndexSet omega;
  IndexSet w1;
  IndexSet w2;
};

// Omega is the open box |x|_inf < omega_radius. W is the open box of
// half-width w_radius whose near face sits at distance `gap` from Omega
// along +x_1 (and |x_2| < w_radius in 2D).
Domains MakeDomains(const Grid& grid, double omega_radius, double gap,
                    double w_radius);
// Omega alone.
IndexSet MakeOmega(const Grid& grid, double omega_radius);
// Same Omega with W1 mirrored to -x_1 and W2 on +x_1.
TwoWindowDomains MakeTwoWindowDomains(const Grid& grid, double omega_radius,
                                      double gap, double w_radius);

// H^s(R^n) inner product with the Bessel weight <xi>^{2s}:
//   (u, v)_s = (2L)^{-n} sum_k <xi_k>^{2s} Re(u_hat_k conj(v_hat_k)),
// where u_hat_k = h^n sum_j u_j exp(-i xi_k x_j). With this scaling
// Parseval reads h^n sum |u_j|^2 = (2L)^{-n} sum |u_hat_k|^2, so s = 0 is
// the h-weighted L2 product.
double HsInner(const GridFunction& u, const GridFunction& v, double s);
double HsNorm(const GridFunction& u, double s);

// Gram matrix of the cell-indicator basis of H^s functions supported in a
// set. Entries are HsInner(delta_a, delta_b, order).
struct SobolevGram {
  double order = 0.0;
  IndexSet support;
  Eigen::MatrixXd matrix;
  Eigen::LLT<Eigen::MatrixXd> cholesky;

  // sqrt(c^T G c) for coefficients on the support.
  double Norm(const Eigen::VectorXd& coefficients) const;
  Eigen::VectorXd Solve(const Eigen::VectorXd& rhs) const {
    return cholesky.solve(rhs);
  }
};

// Throws NumericalError if the Cholesky factorization fails.
SobolevGram AssembleGram(const IndexSet& set, double order);

// ||v||_{H^{-s}(set)} as the sup of <v, phi>_{L2} / ||phi||_{H^s} over phi
// supported on the set, computed as sqrt(m^T G^{-1} m) with m_a = h^n v_a.
double DualNorm(const GridFunction& v, const IndexSet& set, double s);
// Same quantity from the set coefficients and a prepared Gram.
double DualNorm(const Eigen::VectorXd& coefficients, const SobolevGram& gram);

}  // namespace fraclab

#endif  // FRACLAB_GRID_H_
