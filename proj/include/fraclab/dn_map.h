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

#ifndef FRACLAB_DN_MAP_H_
#define FRACLAB_DN_MAP_H_

#include <ostream>

#include <Eigen/Core>

#include "fraclab/exterior_pde.h"
#include "fraclab/frac_op.h"
#include "fraclab/grid.h"

namespace fraclab {

// Matrix of (Lambda_q f, g) over indicator data f = delta_col, g = delta_row,
// with both index sets exterior to Omega. For a DN-map difference, `q`
// holds q1 - q2.
struct DnMatrix {
  Eigen::MatrixXd matrix;
  IndexSet rows;
  IndexSet cols;
  IndexSet omega;
  Potential q;
};

// (Lambda_q f, g) = B_q(u_f, g) for f, g supported off Omega.
double DnPairing(const DirichletProblem& problem, const GridFunction& f,
                 const GridFunction& g);
double DnPairing(const OperatorMatrix& op, const IndexSet& omega,
                 const GridFunction& f, const GridFunction& g);

// Schur complement M_RC - M_{R Omega} M_{Omega Omega}^{-1} M_{Omega C}.
DnMatrix AssembleDn(const DirichletProblem& problem, const IndexSet& rows,
                    const IndexSet& cols);
// Over the whole exterior.
DnMatrix AssembleDn(const OperatorMatrix& op, const IndexSet& omega);

// (Lambda_{q1} - Lambda_{q2}) restricted to data in `cols` and tests in
// `rows`, computed through the integral identity
//   ((Lambda_1 - Lambda_2) f1, f2) = ((q1 - q2) u1, u2)
// so no cancellation between the two DN maps occurs.
DnMatrix DnDifference(const DirichletProblem& p1, const DirichletProblem& p2,
                      const IndexSet& rows, const IndexSet& cols);

// sup (D f1, f2) over ||f1||_{H^s} = ||f2||_{H^s} = 1 with f1 on `w1` (the
// columns of D) and f2 on `w2` (the rows): the largest singular value of
// L_{W2}^{-1} D L_{W1}^{-T} with L the Cholesky factors of the H^s Grams.
double DnPartialNorm(const Eigen::MatrixXd& d, const IndexSet& w1,
                     const IndexSet& w2, double s);
double DnPartialNorm(const DnMatrix& d, double s);

struct IntegralIdentity {
  double lhs = 0.0;  // ((Lambda_1 - Lambda_2) f1, f2) from two DN pairings
  double rhs = 0.0;  // sum h^n (q1 - q2) u1 u2
  double residual = 0.0;
};
IntegralIdentity EvaluateIntegralIdentity(const DirichletProblem& p1,
                                          const DirichletProblem& p2,
                                          const GridFunction& f1,
                                          const GridFunction& f2);
double IntegralIdentityResidual(const DirichletProblem& p1,
                                const DirichletProblem& p2,
                                const GridFunction& f1, const GridFunction& f2);

// CSV with an index-map header: the first row lists the column grid
// indices, every following row starts with its row grid index.
void WriteDnCsv(std::ostream& out, const DnMatrix& d);

}  // namespace fraclab

#endif  // FRACLAB_DN_MAP_H_
