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

#include "fraclab/dn_map.h"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "fraclab/errors.h"
#include "fraclab/io.h"

namespace fraclab {
namespace {

void CheckExterior(const IndexSet& omega, const GridFunction& f,
                   const char* name) {
  for (int idx : omega.indices()) {
    if (f.values[idx] != 0.0) {
      throw ConfigurationError(std::string(name) +
                               " must be supported off Omega");
    }
  }
}

void CheckCompatible(const DirichletProblem& p1, const DirichletProblem& p2) {
  if (p1.op().grid() != p2.op().grid() || p1.op().s() != p2.op().s() ||
      p1.omega().indices() != p2.omega().indices()) {
    throw ConfigurationError(
        "DN maps must share grid, order s and Omega to be compared");
  }
}

}  // namespace

double DnPairing(const DirichletProblem& problem, const GridFunction& f,
                 const GridFunction& g) {
  CheckExterior(problem.omega(), f, "DN datum f");
  CheckExterior(problem.omega(), g, "DN test function g");
  const ExteriorSolution sol = problem.SolveExterior(f);
  return g.values.dot(problem.op().Apply(sol.u.values));
}

double DnPairing(const OperatorMatrix& op, const IndexSet& omega,
                 const GridFunction& f, const GridFunction& g) {
  return DnPairing(DirichletProblem(op, omega), f, g);
}

DnMatrix AssembleDn(const DirichletProblem& problem, const IndexSet& rows,
                    const IndexSet& cols) {
  const IndexSet& omega = problem.omega();
  if (!omega.DisjointFrom(rows) || !omega.DisjointFrom(cols)) {
    throw ConfigurationError("DN index sets must avoid Omega");
  }
  if (rows.size() == 0 || cols.size() == 0) {
    throw ConfigurationError("DN index sets must be nonempty");
  }
  const OperatorMatrix& op = problem.op();
  Eigen::MatrixXd d = op.Block(rows.indices(), cols.indices());
  d.noalias() -= op.Block(rows.indices(), omega.indices()) *
                 problem.SolveBlock(op.Block(omega.indices(), cols.indices()));
  return {std::move(d), rows, cols, omega, op.potential()};
}

DnMatrix AssembleDn(const OperatorMatrix& op, const IndexSet& omega) {
  const DirichletProblem problem(op, omega);
  return AssembleDn(problem, problem.exterior(), problem.exterior());
}

DnMatrix DnDifference(const DirichletProblem& p1, const DirichletProblem& p2,
                      const IndexSet& rows, const IndexSet& cols) {
  CheckCompatible(p1, p2);
  const Grid& grid = p1.op().grid();
  const double h_n = grid.cell_volume();
  const Potential dq = p1.op().potential() - p2.op().potential();
  const IndexSet& omega = p1.omega();

  const Eigen::MatrixXd u1 = p1.InteriorResponse(cols);
  const Eigen::MatrixXd u2 = p2.InteriorResponse(rows);
  const Eigen::VectorXd weight = h_n * omega.Restrict(dq.values);
  Eigen::MatrixXd d = u2.transpose() * weight.asDiagonal() * u1;
  // Off Omega the solutions equal their indicator data.
  for (int i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < cols.size(); ++j) {
      if (rows.indices()[i] == cols.indices()[j]) {
        d(i, j) += h_n * dq.values.values[rows.indices()[i]];
      }
    }
  }
  return {std::move(d), rows, cols, omega, dq};
}

double DnPartialNorm(const Eigen::MatrixXd& d, const IndexSet& w1,
                     const IndexSet& w2, double s) {
  if (d.rows() != w2.size() || d.cols() != w1.size()) {
    throw ConfigurationError("DN block shape does not match (W2, W1)");
  }
  const SobolevGram g1 = AssembleGram(w1, s);
  const SobolevGram g2 = AssembleGram(w2, s);
  // L2^{-1} D L1^{-T}
  Eigen::MatrixXd whitened = g2.cholesky.matrixL().solve(d);
  whitened = g1.cholesky.matrixL()
                 .solve(whitened.transpose())
                 .transpose();
  if (whitened.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(whitened);
  return svd.singularValues()[0];
}

double DnPartialNorm(const DnMatrix& d, double s) {
  return DnPartialNorm(d.matrix, d.cols, d.rows, s);
}

IntegralIdentity EvaluateIntegralIdentity(const DirichletProblem& p1,
                                          const DirichletProblem& p2,
                                          const GridFunction& f1,
                                          const GridFunction& f2) {
  CheckCompatible(p1, p2);
  IntegralIdentity out;
  out.lhs = DnPairing(p1, f1, f2) - DnPairing(p2, f1, f2);
  const Eigen::VectorXd u1 = p1.SolveExterior(f1).u.values;
  const Eigen::VectorXd u2 = p2.SolveExterior(f2).u.values;
  const Eigen::VectorXd dq =
      p1.op().potential().values.values - p2.op().potential().values.values;
  out.rhs = p1.op().grid().cell_volume() *
            (dq.array() * u1.array() * u2.array()).sum();
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

double IntegralIdentityResidual(const DirichletProblem& p1,
                                const DirichletProblem& p2,
                                const GridFunction& f1,
                                const GridFunction& f2) {
  return EvaluateIntegralIdentity(p1, p2, f1, f2).residual;
}

void WriteDnCsv(std::ostream& out, const DnMatrix& d) {
  std::vector<std::string> header{"row_index\\col_index"};
  for (int c : d.cols.indices()) header.push_back(std::to_string(c));
  WriteCsvRow(out, header);
  for (int i = 0; i < d.rows.size(); ++i) {
    std::vector<std::string> row{std::to_string(d.rows.indices()[i])};
    for (int j = 0; j < d.cols.size(); ++j) {
      row.push_back(FormatDouble(d.matrix(i, j)));
    }
    WriteCsvRow(out, row);
  }
}

}  // namespace fraclab
