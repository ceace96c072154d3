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

#ifndef FRACLAB_RUNGE_CONTROL_H_
#define FRACLAB_RUNGE_CONTROL_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "fraclab/exterior_pde.h"
#include "fraclab/frac_op.h"
#include "fraclab/grid.h"

namespace fraclab {

// Singular values below kRankCutoff * sigma_1 are reported but left out of
// control sums.
inline constexpr double kRankCutoff = 1e-14;

// A = restriction to Omega of the exterior Poisson operator, acting on data
// supported in W.
struct ForwardOperator {
  Eigen::MatrixXd a_matrix;  // |Omega| x |W|
  SobolevGram gram_w;        // domain geometry on W
  double mass_omega = 0.0;   // L2(Omega) weight h^n of every node
  Potential q;
  IndexSet omega;
  IndexSet w;
  double s = 0.5;
  std::shared_ptr<const DirichletProblem> problem;
};

// Dense A by |W| exterior solves. The domain Gram has order s unless
// `domain_order` selects another Sobolev order (e.g. s - delta).
ForwardOperator AssembleForward(const OperatorMatrix& op, const IndexSet& omega,
                                const IndexSet& w,
                                std::optional<double> domain_order = {});

// A f through a fresh exterior solve; f must be supported in W.
Eigen::VectorXd ApplyForward(const ForwardOperator& forward,
                             const GridFunction& f);

struct GsvdResult {
  Eigen::VectorXd sigma;  // descending, all min(|Omega|, |W|) values
  Eigen::MatrixXd phi;    // W coordinates; phi^T G_W phi = I
  Eigen::MatrixXd w;      // Omega coordinates; h^n w^T w = I
  int rank = 0;           // count of sigma_j >= rank_cutoff * sigma_1
  double rank_cutoff = kRankCutoff;
};

// Cholesky-whitened SVD of sqrt(h^n) A L_W^{-T}, back-transformed.
GsvdResult Gsvd(const ForwardOperator& forward,
                double rank_cutoff = kRankCutoff);

struct AdjointResult {
  // A'v = -((-Delta)^s w)|_W with w the source solution for v; paired with
  // data through the h^n-weighted sum.
  Eigen::VectorXd banach;
  // A*v = G_W^{-1} (h^n A'v), the Riesz lift in the H^s(W) geometry.
  Eigen::VectorXd hilbert;
};

// v must be supported in Omega.
AdjointResult AdjointApply(const ForwardOperator& forward,
                           const GridFunction& v);

enum class ControlMethod { kTruncated, kThreshold, kTikhonov };
std::string ToString(ControlMethod method);

struct ControlResult {
  GridFunction f;                // supported in W
  Eigen::VectorXd coefficients;  // f restricted to W
  double approx_error = 0.0;     // ||A f - v||_{L2(Omega)} from a fresh solve
  double cost = 0.0;             // ||f||_{H^s}
  ControlMethod method = ControlMethod::kTruncated;
  double parameter = 0.0;        // l or alpha
  int terms = 0;                 // singular triples used (spectral methods)
};

// Sum over the first l triples; 0 <= l <= rank.
ControlResult TruncatedControl(const ForwardOperator& forward,
                               const GsvdResult& gsvd, const GridFunction& v,
                               int l);
// Sum over sigma_j > alpha within the numerical rank.
ControlResult ThresholdControl(const ForwardOperator& forward,
                               const GsvdResult& gsvd, const GridFunction& v,
                               double alpha);
// Minimizer of ||A f - v||^2 + alpha ||f||^2_{H^s} from the whitened normal
// equations.
ControlResult TikhonovControl(const ForwardOperator& forward,
                              const GridFunction& v, double alpha);

// ||(A*A + alpha) f - A*v|| / ||A*v|| in the H^s(W) geometry.
double TikhonovResidual(const ForwardOperator& forward, const GridFunction& v,
                        const ControlResult& control);

// <v, w_j>_{L2(Omega)} for every left vector.
Eigen::VectorXd LeftCoefficients(const ForwardOperator& forward,
                                 const GsvdResult& gsvd,
                                 const GridFunction& v);

// sigma.csv, phi.bin, w.bin (column-major float64) and gsvd.json in `dir`.
void ExportGsvd(const std::filesystem::path& dir, const GsvdResult& gsvd,
                const ForwardOperator& forward);

}  // namespace fraclab

#endif  // FRACLAB_RUNGE_CONTROL_H_
