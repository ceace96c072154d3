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

#include "fraclab/exterior_pde.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fraclab/errors.h"

namespace fraclab {

DirichletProblem::DirichletProblem(OperatorMatrix op, IndexSet omega)
    : op_(std::move(op)), omega_(std::move(omega)) {
  if (omega_.grid() != op_.grid()) {
    throw ConfigurationError("Omega and operator use different grids");
  }
  if (omega_.size() == 0) throw ConfigurationError("Omega is empty");
  exterior_ = omega_.Complement();

  const Eigen::MatrixXd block = op_.Block(omega_.indices(), omega_.indices());
  double q_min = 0.0;
  for (int idx : omega_.indices()) {
    q_min = std::min(q_min, op_.potential().values.values[idx]);
  }
  use_cholesky_ = q_min >= 0.0;
  if (use_cholesky_) {
    llt_.compute(block);
    if (llt_.info() != Eigen::Success) {
      use_cholesky_ = false;
    } else {
      rcond_ = llt_.rcond();
    }
  }
  if (!use_cholesky_) {
    eig_.compute(block);
    const Eigen::VectorXd abs_values = eig_.eigenvalues().cwiseAbs();
    rcond_ = abs_values.minCoeff() / abs_values.maxCoeff();
  }
  if (!(rcond_ >= kDegeneracyRcond)) {
    std::ostringstream msg;
    msg << "zero is a Dirichlet eigenvalue of ((-Delta)^s + q) on Omega "
        << "(reciprocal condition " << rcond_ << " < " << kDegeneracyRcond
        << ")";
    throw DegeneracyError(msg.str());
  }
}

Eigen::MatrixXd DirichletProblem::SolveBlock(const Eigen::MatrixXd& rhs) const {
  if (use_cholesky_) return llt_.solve(rhs);
  const Eigen::MatrixXd& vecs = eig_.eigenvectors();
  Eigen::MatrixXd coeffs = vecs.transpose() * rhs;
  coeffs = eig_.eigenvalues().cwiseInverse().asDiagonal() * coeffs;
  return vecs * coeffs;
}

ExteriorSolution DirichletProblem::SolveExterior(const GridFunction& f) const {
  if (f.grid != op_.grid()) {
    throw ConfigurationError("exterior datum lives on a different grid");
  }
  // Values of f on Omega are ignored.
  Eigen::VectorXd data = f.values;
  for (int idx : omega_.indices()) data[idx] = 0.0;
  const Eigen::VectorXd rhs = -omega_.Restrict(op_.Apply(data));
  const Eigen::VectorXd interior = SolveBlock(rhs);
  Eigen::VectorXd u = data;
  for (int i = 0; i < omega_.size(); ++i) u[omega_.indices()[i]] = interior[i];

  ExteriorSolution sol{GridFunction(op_.grid(), u),
                       GridFunction(op_.grid(), data), omega_, 0.0};
  sol.residual = omega_.Restrict(op_.Apply(u)).cwiseAbs().maxCoeff();
  return sol;
}

SourceSolution DirichletProblem::SolveSource(const GridFunction& v) const {
  if (v.grid != op_.grid()) {
    throw ConfigurationError("source lives on a different grid");
  }
  const double h_n = op_.grid().cell_volume();
  const Eigen::VectorXd v_omega = omega_.Restrict(v);
  const Eigen::VectorXd interior = SolveBlock(h_n * v_omega);
  GridFunction w = omega_.ExtendByZero(interior);
  SourceSolution sol{w, omega_.ExtendByZero(v_omega), omega_, 0.0};
  sol.residual =
      (omega_.Restrict(op_.Apply(w.values)) - h_n * v_omega).cwiseAbs().maxCoeff();
  return sol;
}

Eigen::MatrixXd DirichletProblem::InteriorResponse(
    const IndexSet& data_set) const {
  if (!omega_.DisjointFrom(data_set)) {
    throw ConfigurationError("exterior data set intersects Omega");
  }
  return -SolveBlock(op_.Block(omega_.indices(), data_set.indices()));
}

ExteriorSolution SolveExteriorDirichlet(const OperatorMatrix& op,
                                        const IndexSet& omega,
                                        const GridFunction& f) {
  return DirichletProblem(op, omega).SolveExterior(f);
}

SourceSolution SolveSource(const OperatorMatrix& op, const IndexSet& omega,
                           const GridFunction& v) {
  return DirichletProblem(op, omega).SolveSource(v);
}

std::vector<double> DirichletSpectrum(const OperatorMatrix& op,
                                      const IndexSet& omega, int k) {
  if (k < 0 || k > omega.size()) {
    throw ConfigurationError("requested more eigenvalues than |Omega|");
  }
  const Eigen::MatrixXd block = op.Block(omega.indices(), omega.indices());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(block,
                                                     Eigen::EigenvaluesOnly);
  const double h_n = op.grid().cell_volume();
  std::vector<double> out(k);
  for (int i = 0; i < k; ++i) out[i] = eig.eigenvalues()[i] / h_n;
  return out;
}

std::vector<RefinementLevel> ExteriorRefinementStudy(
    int dim, int coarse_points, double half_period, double s,
    double omega_radius,
    const std::function<double(double, double)>& exterior_datum, int levels) {
  if (levels < 2) throw ConfigurationError("refinement needs >= 2 levels");
  std::vector<ExteriorSolution> sols;
  std::vector<RefinementLevel> report;
  for (int level = 0; level < levels; ++level) {
    const Grid grid = MakeGrid(dim, coarse_points << level, half_period);
    const IndexSet omega = MakeOmega(grid, omega_radius);
    const GridFunction f = GridFunction::Sample(grid, exterior_datum);
    sols.push_back(SolveExteriorDirichlet(
        AssembleOperator(grid, s, Potential::Zero(grid)), omega, f));
    report.push_back({grid.points_per_axis(), 0.0, sols.back().residual});
  }
  // Compare level l with level l + 1 on the coarse Omega points.
  for (int level = 0; level + 1 < levels; ++level) {
    const ExteriorSolution& coarse = sols[level];
    const ExteriorSolution& fine = sols[level + 1];
    const Grid& cg = coarse.u.grid;
    double diff = 0.0, norm = 0.0;
    for (int idx : coarse.omega.indices()) {
      const auto [i0, i1] = cg.Unflatten(idx);
      const int fine_idx = fine.u.grid.Flatten(2 * i0, 2 * i1);
      const double a = coarse.u.values[idx], b = fine.u.values[fine_idx];
      diff += (a - b) * (a - b);
      norm += b * b;
    }
    report[level].difference_to_next = std::sqrt(diff / std::max(norm, 1e-300));
  }
  return report;
}

}  // namespace fraclab
