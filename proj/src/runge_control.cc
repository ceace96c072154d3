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

#include "fraclab/runge_control.h"

#include <cmath>
#include <fstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "fraclab/errors.h"
#include "fraclab/io.h"

namespace fraclab {
namespace {

Eigen::VectorXd OmegaTarget(const ForwardOperator& forward,
                            const GridFunction& v) {
  if (v.grid != forward.omega.grid()) {
    throw ConfigurationError("target lives on a different grid");
  }
  if (!forward.omega.Supports(v)) {
    throw ConfigurationError("target must be supported in Omega");
  }
  return forward.omega.Restrict(v);
}

// Whitened operator B = sqrt(h^n) A L^{-T}.
Eigen::MatrixXd Whitened(const ForwardOperator& forward) {
  const Eigen::MatrixXd lt_inv_at =
      forward.gram_w.cholesky.matrixL().solve(forward.a_matrix.transpose());
  return std::sqrt(forward.mass_omega) * lt_inv_at.transpose();
}

ControlResult Finish(const ForwardOperator& forward, const Eigen::VectorXd& v,
                     Eigen::VectorXd coefficients, ControlMethod method,
                     double parameter, int terms) {
  ControlResult result;
  result.f = forward.w.ExtendByZero(coefficients);
  result.coefficients = std::move(coefficients);
  const Eigen::VectorXd image = ApplyForward(forward, result.f);
  result.approx_error = std::sqrt(forward.mass_omega) * (image - v).norm();
  result.cost = forward.gram_w.Norm(result.coefficients);
  result.method = method;
  result.parameter = parameter;
  result.terms = terms;
  return result;
}

ControlResult SpectralSum(const ForwardOperator& forward,
                          const GsvdResult& gsvd, const GridFunction& v,
                          int terms, ControlMethod method, double parameter) {
  const Eigen::VectorXd target = OmegaTarget(forward, v);
  const Eigen::VectorXd coeffs = LeftCoefficients(forward, gsvd, v);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(forward.w.size());
  for (int j = 0; j < terms; ++j) {
    f += (coeffs[j] / gsvd.sigma[j]) * gsvd.phi.col(j);
  }
  return Finish(forward, target, std::move(f), method, parameter, terms);
}

}  // namespace

ForwardOperator AssembleForward(const OperatorMatrix& op, const IndexSet& omega,
                                const IndexSet& w,
                                std::optional<double> domain_order) {
  if (!omega.DisjointFrom(w)) {
    throw ConfigurationError("Omega and W overlap");
  }
  ForwardOperator forward;
  forward.problem = std::make_shared<const DirichletProblem>(op, omega);
  forward.a_matrix = forward.problem->InteriorResponse(w);
  if (!forward.a_matrix.allFinite()) {
    throw NumericalError("forward operator has non-finite entries");
  }
  forward.gram_w = AssembleGram(w, domain_order.value_or(op.s()));
  forward.mass_omega = op.grid().cell_volume();
  forward.q = op.potential();
  forward.omega = omega;
  forward.w = w;
  forward.s = op.s();
  return forward;
}

Eigen::VectorXd ApplyForward(const ForwardOperator& forward,
                             const GridFunction& f) {
  if (!forward.w.Supports(f)) {
    throw ConfigurationError("control must be supported in W");
  }
  return forward.omega.Restrict(forward.problem->SolveExterior(f).u);
}

GsvdResult Gsvd(const ForwardOperator& forward, double rank_cutoff) {
  if (!(rank_cutoff >= 0.0 && rank_cutoff < 1.0)) {
    throw ConfigurationError("rank cutoff must lie in [0, 1)");
  }
  const Eigen::MatrixXd b = Whitened(forward);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  GsvdResult result;
  result.sigma = svd.singularValues();
  result.rank_cutoff = rank_cutoff;
  result.phi = forward.gram_w.cholesky.matrixU().solve(svd.matrixV());
  result.w = svd.matrixU() / std::sqrt(forward.mass_omega);
  const double top = result.sigma.size() > 0 ? result.sigma[0] : 0.0;
  for (Eigen::Index j = 0; j < result.sigma.size(); ++j) {
    if (result.sigma[j] > 0.0 && result.sigma[j] >= rank_cutoff * top) {
      ++result.rank;
    }
  }
  return result;
}

AdjointResult AdjointApply(const ForwardOperator& forward,
                           const GridFunction& v) {
  OmegaTarget(forward, v);
  const SourceSolution source = forward.problem->SolveSource(v);
  const GridFunction lap = FracLaplacianApply(source.w, forward.s);
  AdjointResult result;
  result.banach = -forward.w.Restrict(lap);
  result.hilbert =
      forward.gram_w.Solve(forward.mass_omega * result.banach);
  return result;
}

std::string ToString(ControlMethod method) {
  switch (method) {
    case ControlMethod::kTruncated:
      return "truncated";
    case ControlMethod::kThreshold:
      return "threshold";
    case ControlMethod::kTikhonov:
      return "tikhonov";
  }
  return "unknown";
}

Eigen::VectorXd LeftCoefficients(const ForwardOperator& forward,
                                 const GsvdResult& gsvd,
                                 const GridFunction& v) {
  const Eigen::VectorXd target = OmegaTarget(forward, v);
  return forward.mass_omega * (gsvd.w.transpose() * target);
}

ControlResult TruncatedControl(const ForwardOperator& forward,
                               const GsvdResult& gsvd, const GridFunction& v,
                               int l) {
  if (l < 0 || l > gsvd.rank) {
    throw ConfigurationError("truncation level must lie in [0, rank]");
  }
  return SpectralSum(forward, gsvd, v, l, ControlMethod::kTruncated, l);
}

ControlResult ThresholdControl(const ForwardOperator& forward,
                               const GsvdResult& gsvd, const GridFunction& v,
                               double alpha) {
  if (!(alpha > 0.0)) throw ConfigurationError("threshold must be positive");
  int terms = 0;
  while (terms < gsvd.rank && gsvd.sigma[terms] > alpha) ++terms;
  return SpectralSum(forward, gsvd, v, terms, ControlMethod::kThreshold,
                     alpha);
}

ControlResult TikhonovControl(const ForwardOperator& forward,
                              const GridFunction& v, double alpha) {
  if (!(alpha > 0.0)) {
    throw ConfigurationError("Tikhonov parameter must be positive");
  }
  const Eigen::VectorXd target = OmegaTarget(forward, v);
  const Eigen::MatrixXd b = Whitened(forward);
  // Least squares on [B; sqrt(alpha) I] z = [sqrt(h^n) v; 0] has the
  // Euler-Lagrange system as its normal equations without squaring cond(B).
  const Eigen::Index m = b.rows(), n = b.cols();
  Eigen::MatrixXd stacked(m + n, n);
  stacked.topRows(m) = b;
  stacked.bottomRows(n) =
      std::sqrt(alpha) * Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + n);
  rhs.head(m) = std::sqrt(forward.mass_omega) * target;
  const Eigen::VectorXd z = stacked.householderQr().solve(rhs);
  Eigen::VectorXd f = forward.gram_w.cholesky.matrixU().solve(z);
  return Finish(forward, target, std::move(f), ControlMethod::kTikhonov,
                alpha, 0);
}

double TikhonovResidual(const ForwardOperator& forward, const GridFunction& v,
                        const ControlResult& control) {
  // In whitened coordinates z = L^T f the Euler-Lagrange equation reads
  // (B^T B + alpha) z = B^T sqrt(h^n) v.
  const Eigen::VectorXd target = OmegaTarget(forward, v);
  const Eigen::MatrixXd b = Whitened(forward);
  const Eigen::VectorXd z =
      forward.gram_w.cholesky.matrixU() * control.coefficients;
  const Eigen::VectorXd rhs =
      b.transpose() * (std::sqrt(forward.mass_omega) * target);
  const Eigen::VectorXd lhs =
      b.transpose() * (b * z) + control.parameter * z;
  const double scale = rhs.norm();
  return scale > 0.0 ? (lhs - rhs).norm() / scale : (lhs - rhs).norm();
}

void ExportGsvd(const std::filesystem::path& dir, const GsvdResult& gsvd,
                const ForwardOperator& forward) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "sigma.csv");
    WriteCsvRow(out, std::vector<std::string>{"j", "sigma", "in_rank"});
    for (Eigen::Index j = 0; j < gsvd.sigma.size(); ++j) {
      WriteCsvRow(out, std::vector<std::string>{
                           std::to_string(j + 1), FormatDouble(gsvd.sigma[j]),
                           j < gsvd.rank ? "1" : "0"});
    }
  }
  WriteBinaryMatrix(dir / "phi.bin", gsvd.phi);
  WriteBinaryMatrix(dir / "w.bin", gsvd.w);
  nlohmann::json header;
  header["layout"] = "column-major float64, one singular vector per column";
  header["rank"] = gsvd.rank;
  header["rank_cutoff"] = gsvd.rank_cutoff;
  header["s"] = forward.s;
  header["phi"] = {{"file", "phi.bin"},
                   {"rows", gsvd.phi.rows()},
                   {"cols", gsvd.phi.cols()},
                   {"row_indices", forward.w.indices()}};
  header["w"] = {{"file", "w.bin"},
                 {"rows", gsvd.w.rows()},
                 {"cols", gsvd.w.cols()},
                 {"row_indices", forward.omega.indices()}};
  std::ofstream(dir / "gsvd.json") << header.dump(2) << "\n";
}

}  // namespace fraclab
