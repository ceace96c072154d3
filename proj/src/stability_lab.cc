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

#include "fraclab/stability_lab.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "fraclab/dn_map.h"
#include "fraclab/errors.h"
#include "fraclab/exterior_pde.h"
#include "fraclab/io.h"

namespace fraclab {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double L2Omega(const IndexSet& omega, const GridFunction& v) {
  return std::sqrt(omega.grid().cell_volume()) * omega.Restrict(v).norm();
}

Eigen::MatrixXd WhitenedOperator(const ForwardOperator& forward) {
  const Eigen::MatrixXd x =
      forward.gram_w.cholesky.matrixL().solve(forward.a_matrix.transpose());
  return std::sqrt(forward.mass_omega) * x.transpose();
}

double SpectralNorm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()[0];
}

QucPoint Measure(const ForwardOperator& forward, const SobolevGram& gram_w,
                 const SobolevGram& gram_omega, const GridFunction& v) {
  const SourceSolution source = forward.problem->SolveSource(v);
  const GridFunction lap = FracLaplacianApply(source.w, forward.s);
  QucPoint point;
  point.eta = DualNorm(forward.w.Restrict(lap), gram_w);
  point.distance = DualNorm(forward.omega.Restrict(v), gram_omega);
  return point;
}

}  // namespace

void ExperimentRecord::WriteCsv(std::ostream& out) const {
  WriteCsvRow(out, columns);
  for (const auto& row : rows) WriteCsvRow(out, row);
}

nlohmann::json ExperimentRecord::Summary() const {
  nlohmann::json j;
  j["name"] = name;
  j["config"] = nlohmann::json::object();
  for (const auto& [key, value] : config) j["config"][key] = value;
  j["columns"] = columns;
  j["fits"] = nlohmann::json::array();
  for (const FitSummary& fit : fits) {
    j["fits"].push_back({{"name", fit.name},
                         {"slope", fit.slope},
                         {"intercept", fit.intercept},
                         {"residual", fit.residual}});
  }
  j["measurements"] = nlohmann::json::object();
  for (const auto& [key, value] : measurements) {
    j["measurements"][key] = value;
  }
  j["assertions"] = nlohmann::json::object();
  bool all = true;
  for (const auto& [key, value] : assertions) {
    j["assertions"][key] = value;
    all = all && value;
  }
  j["all_assertions_pass"] = all;
  j["inconclusive"] = inconclusive;
  j["notes"] = notes;
  j["wall_time_seconds"] = wall_time_seconds;
  return j;
}

bool ExperimentRecord::Assertion(const std::string& key) const {
  for (const auto& [k, v] : assertions) {
    if (k == key) return v;
  }
  throw std::out_of_range("no assertion named " + key);
}

double ExperimentRecord::Measurement(const std::string& key) const {
  for (const auto& [k, v] : measurements) {
    if (k == key) return v;
  }
  throw std::out_of_range("no measurement named " + key);
}

FitSummary FitLine(const std::string& name, const std::vector<double>& x,
                   const std::vector<double>& y) {
  FitSummary fit;
  fit.name = name;
  const size_t n = x.size();
  if (n < 2 || y.size() != n) {
    fit.residual = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

int LastWeightedIncrease(const Eigen::VectorXd& sigma, int count, double p) {
  int last = 0;
  for (int j = 1; j < count; ++j) {
    // Compare 1-based indices j and j + 1.
    const double a = sigma[j - 1] * std::pow(j, p);
    const double b = sigma[j] * std::pow(j + 1, p);
    if (b >= a) last = j;
  }
  return last;
}

ExperimentRecord SvDecayExperiment(const ForwardOperator& forward,
                                   const std::optional<Potential>& perturbation,
                                   double rank_cutoff) {
  const auto start = Clock::now();
  ExperimentRecord rec;
  rec.name = "sv-decay";
  const GsvdResult gsvd = Gsvd(forward, rank_cutoff);
  const int rank = gsvd.rank;
  const int total = static_cast<int>(gsvd.sigma.size());
  const double top = total > 0 ? gsvd.sigma[0] : 0.0;
  rec.columns = {"j[index]", "sigma[L2(Omega)/H^s(W)]", "sigma_ratio[1]",
                 "in_rank[bool]"};
  for (int j = 0; j < total; ++j) {
    rec.rows.push_back({double(j + 1), gsvd.sigma[j],
                        top > 0.0 ? gsvd.sigma[j] / top : 0.0,
                        j < rank ? 1.0 : 0.0});
  }
  rec.measurements.push_back({"sigma_1", top});
  rec.measurements.push_back({"rank", double(rank)});
  if (total >= 20) {
    rec.measurements.push_back({"sigma_20_over_sigma_1", gsvd.sigma[19] / top});
  }
  rec.inconclusive = rank < 5;
  if (rec.inconclusive) rec.notes.push_back("numerical rank below 5");

  std::vector<double> j_lin, j_sqrt, log_sigma;
  for (int j = 0; j < rank; ++j) {
    j_lin.push_back(j + 1);
    j_sqrt.push_back(std::sqrt(j + 1.0));
    log_sigma.push_back(std::log(gsvd.sigma[j]));
  }
  rec.fits.push_back(FitLine("log_sigma_vs_j", j_lin, log_sigma));
  rec.fits.push_back(FitLine("log_sigma_vs_sqrt_j", j_sqrt, log_sigma));

  bool strictly = true;
  for (int j = 1; j < rank; ++j) strictly = strictly && gsvd.sigma[j] < gsvd.sigma[j - 1];
  rec.assertions.push_back({"sigma_strictly_decreasing", strictly});
  rec.assertions.push_back({"sigma_positive_within_rank",
                            rank == 0 || gsvd.sigma[rank - 1] > 0.0});
  // "Eventually decreasing" is read as: decreasing on at least the second
  // half of the recorded range.
  for (int p = 1; p <= 3; ++p) {
    const int last = LastWeightedIncrease(gsvd.sigma, rank, p);
    rec.measurements.push_back(
        {"last_increase_sigma_j_times_j^" + std::to_string(p), double(last)});
    rec.assertions.push_back(
        {"sigma_j_times_j^" + std::to_string(p) + "_eventually_decreasing",
         rank >= 2 && 2 * last <= rank});
  }

  if (perturbation) {
    const Grid& grid = forward.omega.grid();
    const OperatorMatrix op2 =
        AssembleOperator(grid, forward.s, forward.q + *perturbation);
    const ForwardOperator f2 = AssembleForward(
        op2, forward.omega, forward.w, forward.gram_w.order);
    const GsvdResult g2 = Gsvd(f2, rank_cutoff);
    const double bound =
        SpectralNorm(WhitenedOperator(f2) - WhitenedOperator(forward));
    double worst = 0.0;
    for (int j = 0; j < total; ++j) {
      worst = std::max(worst, std::abs(g2.sigma[j] - gsvd.sigma[j]));
    }
    rec.measurements.push_back({"weyl_operator_difference", bound});
    rec.measurements.push_back({"weyl_max_sigma_shift", worst});
    // Roundoff allowance relative to the operator scale.
    rec.assertions.push_back({"weyl_bound", worst <= bound + 1e-13 * top});
  }
  rec.wall_time_seconds = Seconds(start);
  return rec;
}

ExperimentRecord CostCurveExperiment(const ForwardOperator& forward,
                                     const GsvdResult& gsvd,
                                     const GridFunction& v_target,
                                     const std::vector<double>& epsilons) {
  const auto start = Clock::now();
  ExperimentRecord rec;
  rec.name = "cost-curve";
  const double hs = HsNorm(v_target, forward.s);
  if (!(hs > 0.0)) throw ConfigurationError("cost-curve target is zero");
  GridFunction v = v_target;
  v.values /= hs;
  const double v_l2 = L2Omega(forward.omega, v);
  rec.measurements.push_back({"target_l2_norm", v_l2});

  std::vector<ControlResult> ladder;
  for (int l = 0; l <= gsvd.rank; ++l) {
    ladder.push_back(TruncatedControl(forward, gsvd, v, l));
  }
  double floor = std::numeric_limits<double>::infinity();
  for (const auto& c : ladder) floor = std::min(floor, c.approx_error);
  rec.measurements.push_back({"error_floor", floor});

  rec.columns = {"epsilon[L2(Omega)]", "l[index]", "error[L2(Omega)]",
                 "cost[H^s(W)]", "saturated[bool]"};
  std::vector<double> eps_sorted = epsilons;
  std::sort(eps_sorted.begin(), eps_sorted.end(), std::greater<>());
  std::vector<double> curve_x, curve_y, curve_eps;
  bool nonincreasing = true, zero_above = true;
  double previous_cost = -1.0;
  for (double eps : eps_sorted) {
    if (!(eps > 0.0)) throw ConfigurationError("epsilons must be positive");
    const ControlResult* pick = nullptr;
    for (const auto& c : ladder) {
      if (c.approx_error <= eps) {
        pick = &c;
        break;
      }
    }
    const bool saturated = pick == nullptr;
    if (saturated) pick = &ladder.back();
    rec.rows.push_back({eps, pick->parameter, pick->approx_error, pick->cost,
                        saturated ? 1.0 : 0.0});
    if (saturated) continue;
    // Rows are in decreasing eps, so cost must not drop.
    if (pick->cost < previous_cost) nonincreasing = false;
    previous_cost = pick->cost;
    if (eps >= v_l2 && pick->cost != 0.0) zero_above = false;
    if (pick->cost > 0.0) {
      curve_x.push_back(std::log(1.0 / eps));
      curve_y.push_back(std::log(pick->cost));
      curve_eps.push_back(eps);
    }
  }
  rec.assertions.push_back({"cost_nonincreasing_in_epsilon", nonincreasing});
  rec.assertions.push_back({"zero_cost_when_epsilon_exceeds_target", zero_above});

  const int points = static_cast<int>(curve_x.size());
  rec.measurements.push_back({"curve_points", double(points)});
  if (points >= 3) {
    bool convex = true;
    double prev_slope = -std::numeric_limits<double>::infinity();
    for (int i = 1; i < points; ++i) {
      const double slope =
          (curve_y[i] - curve_y[i - 1]) / (curve_x[i] - curve_x[i - 1]);
      if (slope < prev_slope) convex = false;
      prev_slope = slope;
    }
    rec.assertions.push_back({"log_cost_convex_in_log_inverse_epsilon", convex});

    FitSummary best;
    best.residual = std::numeric_limits<double>::infinity();
    double best_mu = 0.0;
    for (int k = 1; k <= 40; ++k) {
      const double mu = 0.05 * k;
      std::vector<double> x;
      for (double e : curve_eps) x.push_back(std::pow(e, -mu));
      FitSummary fit = FitLine("log_cost_vs_epsilon^-mu", x, curve_y);
      if (fit.residual < best.residual) {
        best = fit;
        best_mu = mu;
      }
    }
    rec.fits.push_back(best);
    rec.measurements.push_back({"best_fit_mu", best_mu});
    rec.fits.push_back(FitLine("log_cost_vs_log_inverse_epsilon", curve_x,
                               curve_y));
  } else {
    rec.inconclusive = true;
    rec.notes.push_back("fewer than three unsaturated points with cost > 0");
  }
  rec.wall_time_seconds = Seconds(start);
  return rec;
}

QucPoint QucMeasure(const ForwardOperator& forward, const GridFunction& v) {
  return Measure(forward, AssembleGram(forward.w, forward.s),
                 AssembleGram(forward.omega, forward.s), v);
}

ExperimentRecord QucExperiment(const ForwardOperator& forward,
                               const std::vector<GridFunction>& samples) {
  const auto start = Clock::now();
  ExperimentRecord rec;
  rec.name = "quc";
  const SobolevGram gram_w = AssembleGram(forward.w, forward.s);
  const SobolevGram gram_omega = AssembleGram(forward.omega, forward.s);
  rec.columns = {"sample[index]", "eta[H^-s(W)]", "distance[H^-s(Omega)]",
                 "log10_eta[1]"};
  bool positive = true, bounded = true;
  double eta_min = std::numeric_limits<double>::infinity(), eta_max = 0.0;
  double d_min = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < samples.size(); ++i) {
    GridFunction v = samples[i];
    const double norm = L2Omega(forward.omega, v);
    QucPoint point;
    if (norm > 0.0) {
      v.values /= norm;
      point = Measure(forward, gram_w, gram_omega, v);
      positive = positive && point.eta > 0.0;
      bounded = bounded && point.distance <= 1.0 + 1e-12;
      eta_min = std::min(eta_min, point.eta);
      eta_max = std::max(eta_max, point.eta);
      d_min = std::min(d_min, point.distance);
    }
    rec.rows.push_back({double(i), point.eta, point.distance,
                        point.eta > 0.0 ? std::log10(point.eta)
                                        : -std::numeric_limits<double>::infinity()});
  }
  const double decades =
      eta_max > 0.0 && eta_min > 0.0 ? std::log10(eta_max / eta_min) : 0.0;
  rec.measurements.push_back({"eta_min", eta_min});
  rec.measurements.push_back({"eta_max", eta_max});
  rec.measurements.push_back({"eta_decades", decades});
  rec.measurements.push_back({"distance_min", d_min});
  rec.assertions.push_back({"eta_positive_for_nonzero_v", positive});
  rec.assertions.push_back({"distance_at_most_l2_norm", bounded});
  rec.assertions.push_back({"eta_spans_three_decades", decades >= 3.0});
  rec.wall_time_seconds = Seconds(start);
  return rec;
}

std::vector<GridFunction> QucSamples(const ForwardOperator& forward,
                                     const GsvdResult& gsvd, int random_count,
                                     std::uint64_t seed) {
  std::vector<GridFunction> samples;
  for (Eigen::Index j = 0; j < gsvd.w.cols(); ++j) {
    samples.push_back(forward.omega.ExtendByZero(gsvd.w.col(j)));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int r = 0; r < random_count; ++r) {
    Eigen::VectorXd c(gsvd.w.cols());
    for (Eigen::Index j = 0; j < c.size(); ++j) c[j] = normal(rng);
    samples.push_back(forward.omega.ExtendByZero(gsvd.w * c));
  }
  return samples;
}

std::vector<PotentialPair> OscillatoryFamily(const IndexSet& omega,
                                             double omega_radius,
                                             const Potential& q1,
                                             double l2_distance,
                                             const std::vector<double>& modes) {
  const Grid& grid = omega.grid();
  const double pi = std::numbers::pi;
  std::vector<PotentialPair> family;
  for (double m : modes) {
    const double k = pi * m / omega_radius;
    Eigen::VectorXd g(omega.size());
    for (int i = 0; i < omega.size(); ++i) {
      const auto x = grid.Point(omega.indices()[i]);
      double window = std::pow(std::cos(pi * x[0] / (2.0 * omega_radius)), 4);
      if (grid.dim() == 2) {
        window *= std::pow(std::cos(pi * x[1] / (2.0 * omega_radius)), 4);
      }
      g[i] = window * std::sin(k * x[0]);
    }
    const double norm = std::sqrt(grid.cell_volume()) * g.norm();
    if (!(norm > 0.0)) {
      throw ConfigurationError("oscillatory mode vanishes on the grid");
    }
    g *= l2_distance / norm;
    PotentialPair pair;
    pair.parameter = k;
    pair.q1 = q1;
    pair.q2 = q1 + Potential::FromValues(omega.ExtendByZero(g), omega);
    family.push_back(std::move(pair));
  }
  return family;
}

ExperimentRecord DnModulusExperiment(const Grid& grid, double s,
                                     const TwoWindowDomains& domains,
                                     const std::vector<PotentialPair>& family) {
  const auto start = Clock::now();
  ExperimentRecord rec;
  rec.name = "dn-modulus";
  rec.columns = {"parameter[1/length]", "dn_norm[H^s(W1)->H^-s(W2)]",
                 "dn_norm_swapped[H^s(W1)->H^-s(W2)]", "dual_distance[H^-s(Omega)]",
                 "l2_distance[L2(Omega)]", "sup_distance[1]"};
  const SobolevGram gram_omega = AssembleGram(domains.omega, s);
  bool symmetric = true, monotone = true;
  double l2_lo = std::numeric_limits<double>::infinity(), l2_hi = 0.0;
  double first = -1.0, last = -1.0, previous = -1.0;
  for (const PotentialPair& pair : family) {
    std::optional<DirichletProblem> p1, p2;
    try {
      p1.emplace(AssembleOperator(grid, s, pair.q1), domains.omega);
      p2.emplace(AssembleOperator(grid, s, pair.q2), domains.omega);
    } catch (const DegeneracyError& e) {
      rec.notes.push_back("skipped parameter " + FormatDouble(pair.parameter) +
                          ": " + e.what());
      continue;
    }
    const double dn = DnPartialNorm(
        DnDifference(*p1, *p2, domains.w2, domains.w1), s);
    const double dn_swapped = DnPartialNorm(
        DnDifference(*p2, *p1, domains.w2, domains.w1), s);
    const GridFunction dq = (pair.q1 - pair.q2).values;
    const Eigen::VectorXd dq_omega = domains.omega.Restrict(dq);
    const double dual = DualNorm(dq_omega, gram_omega);
    const double l2 = std::sqrt(grid.cell_volume()) * dq_omega.norm();
    const double sup = dq.values.cwiseAbs().maxCoeff();
    rec.rows.push_back({pair.parameter, dn, dn_swapped, dual, l2, sup});
    symmetric = symmetric &&
                std::abs(dn - dn_swapped) <= 1e-9 * std::max(dn, 1e-300);
    if (previous >= 0.0 && !(dn < previous)) monotone = false;
    previous = dn;
    if (first < 0.0) first = dn;
    last = dn;
    l2_lo = std::min(l2_lo, l2);
    l2_hi = std::max(l2_hi, l2);
  }
  rec.assertions.push_back({"dn_norm_symmetric", symmetric});
  rec.assertions.push_back({"dn_norm_monotone_decreasing", monotone});
  rec.assertions.push_back(
      {"l2_distance_constant",
       rec.rows.empty() || l2_hi - l2_lo <= 1e-12 * std::max(l2_hi, 1e-300)});
  if (first > 0.0 && last > 0.0) {
    rec.measurements.push_back({"dn_decades", std::log10(first / last)});
  }
  rec.wall_time_seconds = Seconds(start);
  return rec;
}

std::optional<ControlResult> MinimalTruncatedControl(
    const ForwardOperator& forward, const GsvdResult& gsvd,
    const GridFunction& v, double eps, double* floor) {
  double best = std::numeric_limits<double>::infinity();
  for (int l = 0; l <= gsvd.rank; ++l) {
    ControlResult c = TruncatedControl(forward, gsvd, v, l);
    best = std::min(best, c.approx_error);
    if (c.approx_error <= eps) {
      if (floor) *floor = best;
      return c;
    }
  }
  if (floor) *floor = best;
  return std::nullopt;
}

RecoveryResult RecoverFunctional(const Grid& grid, double s,
                                 const TwoWindowDomains& domains,
                                 const Potential& q1, const Potential& q2,
                                 const GridFunction& phi,
                                 const GridFunction& plateau, double eps) {
  if (!(eps > 0.0)) throw ConfigurationError("eps must be positive");
  if (!domains.omega.Supports(phi)) {
    throw ConfigurationError("phi must be supported in Omega");
  }
  const GridFunction target2 =
      domains.omega.ExtendByZero(domains.omega.Restrict(plateau));

  const ForwardOperator f1 =
      AssembleForward(AssembleOperator(grid, s, q1), domains.omega, domains.w1);
  const ForwardOperator f2 =
      AssembleForward(AssembleOperator(grid, s, q2), domains.omega, domains.w2);
  RecoveryResult out;
  for (int which = 0; which < 2; ++which) {
    const ForwardOperator& forward = which == 0 ? f1 : f2;
    const GridFunction& target = which == 0 ? phi : target2;
    double floor = 0.0;
    auto control =
        MinimalTruncatedControl(forward, Gsvd(forward), target, eps, &floor);
    if (!control) {
      throw NumericalError("control tolerance " + FormatDouble(eps) +
                           " is below the achievable floor " +
                           FormatDouble(floor));
    }
    (which == 0 ? out.control1 : out.control2) = std::move(*control);
  }
  // The two DN pairings are each of size cost1 * cost2 and cancel almost
  // completely, so the difference is taken through the integral identity.
  const DnMatrix d =
      DnDifference(*f1.problem, *f2.problem, domains.w2, domains.w1);
  out.value = -out.control2.coefficients.dot(d.matrix * out.control1.coefficients);
  return out;
}

ExperimentRecord RecoverExperiment(const Grid& grid, double s,
                                   const TwoWindowDomains& domains,
                                   const Potential& q1, const Potential& q2,
                                   const GridFunction& phi,
                                   const GridFunction& plateau,
                                   const std::vector<double>& epsilons) {
  const auto start = Clock::now();
  ExperimentRecord rec;
  rec.name = "recover";
  const Eigen::VectorXd dq = (q2 - q1).values.values;
  const Eigen::VectorXd weight =
      domains.omega.ExtendByZero(domains.omega.Restrict(plateau)).values;
  const double reference =
      grid.cell_volume() * (dq.array() * phi.values.array() * weight.array()).sum();
  const double functional =
      grid.cell_volume() * (dq.array() * phi.values.array()).sum();
  rec.measurements.push_back({"reference", reference});
  rec.measurements.push_back({"dq_phi_functional", functional});
  rec.columns = {"epsilon[L2(Omega)]", "value[1]", "reference[1]",
                 "relative_error[1]", "l1[index]", "l2[index]",
                 "error1[L2(Omega)]", "error2[L2(Omega)]", "cost1[H^s(W1)]",
                 "cost2[H^s(W2)]"};
  std::vector<double> eps_sorted = epsilons;
  std::sort(eps_sorted.begin(), eps_sorted.end(), std::greater<>());
  double final_error = std::numeric_limits<double>::quiet_NaN();
  for (double eps : eps_sorted) {
    RecoveryResult r;
    try {
      r = RecoverFunctional(grid, s, domains, q1, q2, phi, plateau, eps);
    } catch (const NumericalError& e) {
      rec.notes.push_back(e.what());
      continue;
    }
    const double rel =
        std::abs(r.value - reference) / std::max(std::abs(reference), 1e-300);
    rec.rows.push_back({eps, r.value, reference, rel, r.control1.parameter,
                        r.control2.parameter, r.control1.approx_error,
                        r.control2.approx_error, r.control1.cost,
                        r.control2.cost});
    final_error = std::abs(r.value - functional) /
                  std::max(std::abs(functional), 1e-300);
  }
  rec.measurements.push_back({"final_relative_error", final_error});
  rec.assertions.push_back({"final_within_5_percent", final_error <= 0.05});
  rec.inconclusive = rec.rows.size() < epsilons.size();
  rec.wall_time_seconds = Seconds(start);
  return rec;
}

}  // namespace fraclab
