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

// Acceptance run: one PASS/FAIL line per criterion with the measured values.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fraclab/cli.h"
#include "fraclab/cs_extension.h"
#include "fraclab/dn_map.h"
#include "fraclab/frac_op.h"
#include "fraclab/runge_control.h"
#include "fraclab/stability_lab.h"

namespace fraclab {
namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void Require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " violated:" << what;
    }
  }
};

int failures = 0;

void Report(int id, const std::string& title, double budget_seconds,
            const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << " exception:" << e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (budget_seconds > 0) {
    out.Require(seconds < budget_seconds,
                "runtime>" + std::to_string(budget_seconds) + "s");
  }
  if (!out.pass) ++failures;
  std::printf("[%s] %2d %s (%.2fs)%s\n", out.pass ? "PASS" : "FAIL", id,
              title.c_str(), seconds, out.detail.str().c_str());
  std::fflush(stdout);
}

double RelErr(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double scale = b.norm();
  return scale > 0 ? (a - b).norm() / scale : (a - b).norm();
}

void MultiplierExactness(Outcome& out) {
  double worst = 0.0;
  for (const Grid& grid : {MakeGrid(1, 256, 8.0), MakeGrid(2, 32, 4.0)}) {
    const int n = grid.points_per_axis();
    for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      for (int k1 = 0; k1 < n; ++k1) {
        for (int k2 = 0; k2 < (grid.dim() == 2 ? n : 1); ++k2) {
          // Signed DFT-order wavenumbers; the Nyquist mode is a pure cosine.
          const int m1 = k1 <= n / 2 ? k1 : k1 - n;
          const int m2 = k2 <= n / 2 ? k2 : k2 - n;
          const double xi1 = kPi * m1 / grid.half_period();
          const double xi2 = kPi * m2 / grid.half_period();
          const double symbol = std::pow(xi1 * xi1 + xi2 * xi2, s);
          for (int phase = 0; phase < 2; ++phase) {
            const GridFunction mode =
                GridFunction::Sample(grid, [&](double x, double y) {
                  const double arg = xi1 * x + xi2 * y;
                  return phase == 0 ? std::cos(arg) : std::sin(arg);
                });
            if (mode.values.norm() < 1e-8) continue;  // sin of a self-conjugate mode
            const GridFunction image = FracLaplacianApply(mode, s);
            const double scale =
                (symbol > 0.0 ? symbol : 1.0) * mode.values.norm();
            const double err =
                (image.values - symbol * mode.values).norm() / scale;
            worst = std::max(worst, err);
          }
        }
      }
    }
  }
  out.detail << " max_rel_err=" << worst;
  out.Require(worst <= 1e-12, "max_rel_err<=1e-12");
}

void CsDuality(Outcome& out) {
  const Grid grid = MakeGrid(1, 512, 16.0);
  const GridFunction f = GridFunction::Sample(
      grid, [](double x, double) { return std::exp(-0.5 * x * x); });
  for (double s : {0.25, 0.5, 0.75}) {
    const NeumannTraceResult trace =
        NeumannTrace(f, s, {0.1, 0.05, 0.025, 0.0125});
    const Eigen::VectorXd reference =
        -ExtensionTraceConstant(s) * FracLaplacianApply(f, s).values;
    const double err = RelErr(trace.limit.values, reference);
    out.detail << " trace_err(s=" << s << ")=" << err;
    out.Require(err <= 0.02, "trace_err<=0.02");
  }
  const CsProfile profile(0.5);
  double worst = 0.0;
  for (int i = 0; i <= 5000; ++i) {
    const double t = 1e-3 * i;
    worst = std::max(worst, std::abs(profile(t) - std::exp(-t)));
  }
  out.detail << " profile_err=" << worst;
  out.Require(worst <= 1e-6, "profile_err<=1e-6");
}

void WeightedEnergyIdentity(Outcome& out) {
  // Odd datum: the Ḣ^{-1/2} seminorm of a function with nonzero mean diverges
  // in one dimension.
  const Grid grid = MakeGrid(1, 512, 16.0);
  const GridFunction f = GridFunction::Sample(
      grid, [](double x, double) { return x * std::exp(-0.5 * x * x); });
  const EnergyIdentity id = WeightedEnergy(f, 0.5, 0.0, 0, 200.0);
  out.detail << " ratio=" << id.ratio << " c=" << id.constant;
  out.Require(id.ratio >= 0.95 && id.ratio <= 1.05, "ratio in [0.95,1.05]");
}

void DnSymmetryAndIdentity(Outcome& out) {
  const Grid grid = MakeGrid(1, 256, 8.0);
  const TwoWindowDomains d = MakeTwoWindowDomains(grid, 1.0, 1.0, 1.0);
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto random_potential = [&](double scale) {
    Eigen::VectorXd v(d.omega.size());
    for (auto& x : v) x = scale * u(rng);
    return Potential::FromValues(d.omega.ExtendByZero(v), d.omega);
  };
  const auto random_on = [&](const IndexSet& set) {
    Eigen::VectorXd v(set.size());
    for (auto& x : v) x = u(rng);
    return set.ExtendByZero(v);
  };
  const DirichletProblem p(AssembleOperator(grid, 0.5, random_potential(2.0)),
                           d.omega);
  const DnMatrix full = AssembleDn(p.op(), d.omega);
  const double symmetry =
      (full.matrix - full.matrix.transpose()).norm() / full.matrix.norm();
  out.detail << " symmetry=" << symmetry;
  out.Require(symmetry <= 1e-9, "symmetry<=1e-9");
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const DirichletProblem p1(AssembleOperator(grid, 0.5, random_potential(5.0)),
                              d.omega);
    const DirichletProblem p2(AssembleOperator(grid, 0.5, random_potential(5.0)),
                              d.omega);
    const IntegralIdentity id = EvaluateIntegralIdentity(
        p1, p2, random_on(d.w1), random_on(d.w2));
    worst = std::max(worst, id.residual / std::max(std::abs(id.lhs), std::abs(id.rhs)));
  }
  out.detail << " identity=" << worst;
  out.Require(worst <= 1e-8, "identity<=1e-8");
}

struct DefaultForward {
  DefaultForward()
      : grid(MakeGrid(1, 256, 8.0)),
        domains(MakeDomains(grid, 1.0, 1.0, 1.0)),
        forward(AssembleForward(AssembleOperator(grid, 0.5, Potential::Zero(grid)),
                                domains.omega, domains.w)),
        gsvd(Gsvd(forward)) {}
  double L2Omega(const Eigen::VectorXd& x) const {
    return std::sqrt(forward.mass_omega) * x.norm();
  }
  GridFunction Target() const {
    return GridFunction::Sample(grid, [&](double x, double) {
      return std::abs(x) < 1.0 ? std::pow(std::cos(0.5 * kPi * x), 2) : 0.0;
    });
  }
  Grid grid;
  Domains domains;
  ForwardOperator forward;
  GsvdResult gsvd;
};

void AdjointConsistency(Outcome& out, const DefaultForward& df) {
  const ForwardOperator& f = df.forward;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd fw(f.w.size()), v(f.omega.size());
    for (auto& x : fw) x = n(rng);
    for (auto& x : v) x = n(rng);
    const Eigen::VectorXd af = ApplyForward(f, f.w.ExtendByZero(fw));
    const AdjointResult adj = AdjointApply(f, f.omega.ExtendByZero(v));
    const double lhs = f.mass_omega * af.dot(v);
    const double rhs = fw.dot(f.gram_w.matrix * adj.hilbert);
    worst = std::max(worst, std::abs(lhs - rhs) /
                                (f.gram_w.Norm(fw) * df.L2Omega(v)));
  }
  out.detail << " max_scaled_gap=" << worst;
  out.Require(worst <= 1e-8, "gap<=1e-8");
}

void SingularTriples(Outcome& out, const DefaultForward& df) {
  const GsvdResult& g = df.gsvd;
  const ForwardOperator& f = df.forward;
  double triple = 0.0, bound = 0.0;
  bool positive = true;
  for (int j = 0; j < g.rank; ++j) {
    const Eigen::VectorXd a_phi = ApplyForward(f, f.w.ExtendByZero(g.phi.col(j)));
    triple = std::max(triple, df.L2Omega(a_phi - g.sigma[j] * g.w.col(j)));
    positive = positive && g.sigma[j] > 0.0;
    const ControlResult c =
        TruncatedControl(f, g, f.omega.ExtendByZero(g.w.col(j)), j + 1);
    const double expected = df.L2Omega(g.w.col(j)) / g.sigma[j];
    bound = std::max(bound, std::abs(c.cost - expected) / expected);
  }
  out.detail << " rank=" << g.rank << " triple_residual=" << triple
             << " cost_bound_gap=" << bound;
  out.Require(triple <= 1e-8, "triple<=1e-8");
  out.Require(positive, "sigma>0 within rank");
  out.Require(bound <= 1e-10, "cost bound equality 1e-10");
}

void Tikhonov(Outcome& out, const DefaultForward& df) {
  const ForwardOperator& f = df.forward;
  const GsvdResult& g = df.gsvd;
  const GridFunction v = df.Target();
  const Eigen::VectorXd left = LeftCoefficients(f, g, v);
  double el = 0.0, filter = 0.0;
  for (double alpha : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const ControlResult c = TikhonovControl(f, v, alpha);
    el = std::max(el, TikhonovResidual(f, v, c));
    Eigen::VectorXd filtered = Eigen::VectorXd::Zero(f.w.size());
    for (Eigen::Index j = 0; j < g.sigma.size(); ++j) {
      const double s = g.sigma[j];
      filtered += s / (s * s + alpha) * left[j] * g.phi.col(j);
    }
    filter = std::max(filter, f.gram_w.Norm(c.coefficients - filtered) /
                                  f.gram_w.Norm(filtered));
  }
  // Minimality against random perturbations.
  const double alpha = 1e-5;
  const ControlResult c = TikhonovControl(f, v, alpha);
  const Eigen::VectorXd vo = f.omega.Restrict(v);
  const auto energy = [&](const Eigen::VectorXd& fw) {
    const Eigen::VectorXd r = ApplyForward(f, f.w.ExtendByZero(fw)) - vo;
    const double cost = f.gram_w.Norm(fw);
    return f.mass_omega * r.squaredNorm() + alpha * cost * cost;
  };
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  const double best = energy(c.coefficients);
  int beaten = 0;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd delta(f.w.size());
    for (auto& x : delta) x = n(rng);
    delta *= 1e-3 * c.cost / f.gram_w.Norm(delta);
    if (energy(c.coefficients + delta) >= best) ++beaten;
  }
  // Error along a decreasing alpha grid.
  std::vector<double> errors;
  for (double a = 1e-2; a >= 1e-30; a *= 1e-2) {
    errors.push_back(TikhonovControl(f, v, a).approx_error / df.L2Omega(vo));
  }
  bool decreasing = true;
  for (size_t i = 1; i < errors.size(); ++i) {
    decreasing = decreasing && errors[i] < errors[i - 1];
  }
  out.detail << " el_residual=" << el << " filter_gap=" << filter
             << " perturbations_beaten=" << beaten << "/50"
             << " rel_error(1e-2)=" << errors.front()
             << " rel_error(1e-30)=" << errors.back();
  out.Require(el <= 1e-9, "EL<=1e-9");
  out.Require(filter <= 1e-8, "filter<=1e-8");
  out.Require(beaten == 50, "minimizer");
  out.Require(decreasing, "error decreasing along alpha grid");
}

void IllPosedness(Outcome& out, const DefaultForward& df) {
  const ExperimentRecord sv = SvDecayExperiment(df.forward);
  const bool cubic = sv.Assertion("sigma_j_times_j^3_eventually_decreasing");
  out.detail << " sigma_j*j^3_eventually_decreasing=" << cubic;
  out.Require(cubic, "sigma_j j^3 eventually decreasing");

  std::vector<double> eps;
  for (double e = 1.0; e >= 1e-8; e *= 0.1) eps.push_back(e);
  const GridFunction v = df.Target();
  const ExperimentRecord cost = CostCurveExperiment(df.forward, df.gsvd, v, eps);
  const bool convex = cost.Assertion("log_cost_convex_in_log_inverse_epsilon");
  out.detail << " cost_convex=" << convex << " cost_floor="
             << cost.Measurement("error_floor");
  out.Require(convex, "log cost convex in log(1/eps)");

  const Grid& grid = df.grid;
  const TwoWindowDomains d = MakeTwoWindowDomains(grid, 1.0, 1.0, 1.0);
  const ExperimentRecord dn = DnModulusExperiment(
      grid, 0.5, d,
      OscillatoryFamily(d.omega, 1.0, Potential::Zero(grid), 1e-6,
                        {1, 2, 4, 6, 8, 10}));
  out.detail << " dn_decades=" << dn.Measurement("dn_decades")
             << " l2_constant=" << dn.Assertion("l2_distance_constant");
  out.Require(dn.Measurement("dn_decades") >= 4.0, "dn decades>=4");
  out.Require(dn.Assertion("l2_distance_constant"), "constant L2 distance");
}

void FunctionalRecovery(Outcome& out, const DefaultForward& df) {
  const Grid& grid = df.grid;
  const TwoWindowDomains d = MakeTwoWindowDomains(grid, 1.0, 1.0, 1.0);
  const GridFunction phi = df.Target();
  const IndexSet ball = MakeOmega(grid, 0.125);
  const double c = 0.01;
  double expected = 0.0;
  for (int a : ball.indices()) expected += c * grid.cell_volume() * phi.values[a];
  const ExperimentRecord rec = RecoverExperiment(
      grid, 0.5, d, Potential::Zero(grid), Potential::Constant(grid, c, ball),
      phi, phi, {1.0, 1e-1, 1e-2, 1e-3});
  out.Require(!rec.inconclusive && rec.rows.size() == 4, "all tolerances run");
  if (!rec.rows.empty()) {
    const double value = rec.rows.back()[1];
    const double err = std::abs(value - expected) / expected;
    out.detail << " c*int_B(phi)=" << expected << " recovered=" << value
               << " rel_err=" << err;
    out.Require(err <= 0.05, "rel_err<=0.05");
  }
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "fraclab");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream sink;
  std::streambuf* saved = std::cout.rdbuf(sink.rdbuf());
  const int code = RunCli(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(saved);
  return code;
}

void ReplayDeterminism(Outcome& out) {
  const fs::path root = fs::temp_directory_path() / "fraclab_acceptance_replay";
  fs::remove_all(root);
  for (const std::string name :
       {"sv-decay", "cost-curve", "quc", "dn-modulus", "recover"}) {
    const fs::path first = root / name, second = root / (name + "-replay");
    const int a = Cli({"experiment", name, "--out-dir", first.string()});
    const int b = Cli({"replay", first.string(), "--out-dir", second.string()});
    const bool same = a == 0 && b == 0 &&
                      Slurp(first / (name + ".csv")) ==
                          Slurp(second / (name + ".csv"));
    out.detail << ' ' << name << '=' << (same ? "identical" : "DIFFERENT");
    out.Require(same, name + " replay");
  }
  fs::remove_all(root);
}

}  // namespace
}  // namespace fraclab

int main() {
  using namespace fraclab;
  Report(1, "multiplier exactness on every Fourier mode", 1.0,
         MultiplierExactness);
  Report(2, "extension trace duality and half-order profile", 10.0, CsDuality);
  Report(3, "weighted energy identity", 0.0, WeightedEnergyIdentity);
  Report(4, "DN symmetry and integral identity", 30.0, DnSymmetryAndIdentity);
  const DefaultForward df;
  Report(5, "adjoint consistency through the PDE route", 0.0,
         [&](Outcome& o) { AdjointConsistency(o, df); });
  Report(6, "singular triples and cost bound", 0.0,
         [&](Outcome& o) { SingularTriples(o, df); });
  Report(7, "Tikhonov minimizer", 0.0, [&](Outcome& o) { Tikhonov(o, df); });
  Report(8, "ill-posedness signature", 60.0,
         [&](Outcome& o) { IllPosedness(o, df); });
  Report(9, "functional recovery of a known difference", 0.0,
         [&](Outcome& o) { FunctionalRecovery(o, df); });
  Report(10, "replay determinism of every experiment", 0.0, ReplayDeterminism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures;
}
