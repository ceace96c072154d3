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

#ifndef FRACLAB_EXTERIOR_PDE_H_
#define FRACLAB_EXTERIOR_PDE_H_

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "fraclab/frac_op.h"
#include "fraclab/grid.h"

namespace fraclab {

// Below this reciprocal condition number of M_{Omega Omega} the problem is
// treated as having zero in its Dirichlet spectrum.
inline constexpr double kDegeneracyRcond = 1e-12;

// u = P_q f: equals f off Omega and solves ((-Delta)^s + q) u = 0 on Omega.
struct ExteriorSolution {
  GridFunction u;
  GridFunction f;
  IndexSet omega;
  double residual = 0.0;  // max over Omega rows of |(M u)_a|
};

// w supported in Omega with ((-Delta)^s + q) w = v on Omega.
struct SourceSolution {
  GridFunction w;
  GridFunction v;
  IndexSet omega;
  double residual = 0.0;  // max over Omega rows of |(M w)_a - h^n v_a|
};

// Factorization of the Dirichlet block M_{Omega Omega}. Cholesky is used
// when q >= 0 on Omega; otherwise a symmetric eigendecomposition. Throws
// DegeneracyError when the reciprocal condition number falls below
// kDegeneracyRcond. Immutable after construction.
class DirichletProblem {
 public:
  DirichletProblem(OperatorMatrix op, IndexSet omega);

  const OperatorMatrix& op() const { return op_; }
  const IndexSet& omega() const { return omega_; }
  const IndexSet& exterior() const { return exterior_; }
  double reciprocal_condition() const { return rcond_; }
  bool uses_cholesky() const { return use_cholesky_; }

  // M_{Omega Omega}^{-1} rhs.
  Eigen::MatrixXd SolveBlock(const Eigen::MatrixXd& rhs) const;

  ExteriorSolution SolveExterior(const GridFunction& f) const;
  SourceSolution SolveSource(const GridFunction& v) const;

  // Omega values of P_q delta_j for every j in `data_set` (which must avoid
  // Omega): -M_{Omega Omega}^{-1} M_{Omega, data_set}.
  Eigen::MatrixXd InteriorResponse(const IndexSet& data_set) const;

 private:
  OperatorMatrix op_;
  IndexSet omega_;
  IndexSet exterior_;
  bool use_cholesky_ = true;
  double rcond_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_;
};

ExteriorSolution SolveExteriorDirichlet(const OperatorMatrix& op,
                                        const IndexSet& omega,
                                        const GridFunction& f);
SourceSolution SolveSource(const OperatorMatrix& op, const IndexSet& omega,
                           const GridFunction& v);

// k smallest eigenvalues of M_{Omega Omega} x = lambda h^n x, ascending.
std::vector<double> DirichletSpectrum(const OperatorMatrix& op,
                                      const IndexSet& omega, int k);

// Grid-refinement harness for the exterior problem: solves on N, 2N, ...
// for the same continuous geometry and datum and compares consecutive
// levels at the shared coarse points of Omega (L2(Omega), coarse weights).
struct RefinementLevel {
  int points_per_axis = 0;
  double difference_to_next = 0.0;  // relative; 0 for the finest level
  double residual = 0.0;
};
std::vector<RefinementLevel> ExteriorRefinementStudy(
    int dim, int coarse_points, double half_period, double s,
    double omega_radius,
    const std::function<double(double, double)>& exterior_datum, int levels);

}  // namespace fraclab

#endif  // FRACLAB_EXTERIOR_PDE_H_
