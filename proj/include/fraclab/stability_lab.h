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

#ifndef FRACLAB_STABILITY_LAB_H_
#define FRACLAB_STABILITY_LAB_H_

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fraclab/frac_op.h"
#include "fraclab/grid.h"
#include "fraclab/runge_control.h"

namespace fraclab {

struct FitSummary {
  std::string name;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the fit residuals
};

// One experiment's table plus the fitted and asserted facts about it. Rows
// are pure functions of the config snapshot; wall time appears only in the
// JSON summary so that CSV output is byte-reproducible.
struct ExperimentRecord {
  std::string name;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> columns;  // "name[unit]"
  std::vector<std::vector<double>> rows;
  std::vector<FitSummary> fits;
  std::vector<std::pair<std::string, double>> measurements;
  std::vector<std::pair<std::string, bool>> assertions;
  std::vector<std::string> notes;
  bool inconclusive = false;
  double wall_time_seconds = 0.0;

  void WriteCsv(std::ostream& out) const;
  nlohmann::json Summary() const;
  // Value of a named assertion; throws std::out_of_range when absent.
  bool Assertion(const std::string& key) const;
  double Measurement(const std::string& key) const;
};

// Least-squares line through (x, y).
FitSummary FitLine(const std::string& name, const std::vector<double>& x,
                   const std::vector<double>& y);

// Last 1-based index j at which sigma_{j+1} (j+1)^p >= sigma_j j^p within the
// first `count` values, or 0 if the weighted sequence decreases throughout.
int LastWeightedIncrease(const Eigen::VectorXd& sigma, int count, double p);

// (j, sigma_j) up to the full spectrum, decay fits over the numerical rank,
// the j^p monotonicity facts for p = 1, 2, 3 and, with a perturbation of q,
// the Weyl bound |sigma_j(q + dq) - sigma_j(q)| <= ||B(q + dq) - B(q)||.
ExperimentRecord SvDecayExperiment(
    const ForwardOperator& forward,
    const std::optional<Potential>& perturbation = std::nullopt,
    double rank_cutoff = kRankCutoff);

// For every epsilon the smallest truncation level whose freshly solved
// error is <= epsilon, with its H^s cost. v_target is rescaled to unit
// H^s norm first.
ExperimentRecord CostCurveExperiment(const ForwardOperator& forward,
                                     const GsvdResult& gsvd,
                                     const GridFunction& v_target,
                                     const std::vector<double>& epsilons);

struct QucPoint {
  double eta = 0.0;       // dual norm of (-Delta)^s w on W, order s
  double distance = 0.0;  // dual norm of v on Omega, order s
};
// v is used as given (no normalization).
QucPoint QucMeasure(const ForwardOperator& forward, const GridFunction& v);
// Every sample is normalized to unit L2(Omega) norm before measuring.
ExperimentRecord QucExperiment(const ForwardOperator& forward,
                               const std::vector<GridFunction>& samples);
// Left singular vectors w_1..w_m followed by `random_count` seeded random
// combinations of them.
std::vector<GridFunction> QucSamples(const ForwardOperator& forward,
                                     const GsvdResult& gsvd, int random_count,
                                     std::uint64_t seed);

struct PotentialPair {
  double parameter = 0.0;
  Potential q1;
  Potential q2;
};

// q2 = q1 + A cos^4(pi x / 2R) sin(k x) on Omega with k = pi m / R, where A
// is set per mode so that ||q1 - q2||_{L2(Omega)} equals `l2_distance`.
// Mode numbers m follow `modes`.
std::vector<PotentialPair> OscillatoryFamily(const IndexSet& omega,
                                             double omega_radius,
                                             const Potential& q1,
                                             double l2_distance,
                                             const std::vector<double>& modes);

// DN partial-norm distance (both orders), the order-s dual distance on
// Omega and the L2(Omega) distance for each pair. Degenerate pairs are
// skipped with a note.
ExperimentRecord DnModulusExperiment(const Grid& grid, double s,
                                     const TwoWindowDomains& domains,
                                     const std::vector<PotentialPair>& family);

// Smallest-l truncated control with fresh-solve error <= eps, or nullopt.
// `floor` receives the smallest error over all admissible l.
std::optional<ControlResult> MinimalTruncatedControl(
    const ForwardOperator& forward, const GsvdResult& gsvd,
    const GridFunction& v, double eps, double* floor = nullptr);

struct RecoveryResult {
  double value = 0.0;  // ((Lambda_{q2} - Lambda_{q1}) f1, f2)
  ControlResult control1;
  ControlResult control2;
};

// Controls f1 (target phi, window W1, potential q1) and f2 (target
// plateau, window W2, potential q2) with errors <= eps, then the DN pairing
// whose value approximates sum h^n (q2 - q1) phi plateau. Throws
// NumericalError naming the achievable floor if eps is out of reach.
RecoveryResult RecoverFunctional(const Grid& grid, double s,
                                 const TwoWindowDomains& domains,
                                 const Potential& q1, const Potential& q2,
                                 const GridFunction& phi,
                                 const GridFunction& plateau, double eps);

// RecoverFunctional along a decreasing eps list. Each row is compared with
// the direct quadrature sum h^n (q2 - q1) phi plateau; the final row is also
// compared with sum h^n (q2 - q1) phi, which it approaches when the plateau
// is ~1 on the support of q2 - q1.
ExperimentRecord RecoverExperiment(const Grid& grid, double s,
                                   const TwoWindowDomains& domains,
                                   const Potential& q1, const Potential& q2,
                                   const GridFunction& phi,
                                   const GridFunction& plateau,
                                   const std::vector<double>& epsilons);

}  // namespace fraclab

#endif  // FRACLAB_STABILITY_LAB_H_
