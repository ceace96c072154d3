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

#include "fraclab/cs_extension.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fraclab/errors.h"
#include "fraclab/fft.h"
#include "fraclab/frac_op.h"

namespace fraclab {
namespace {

constexpr double kPi = std::numbers::pi;

// Periodization of the unit-height 1D kernel with half-period `half`.
// Images beyond |m| = M are summed by the midpoint Euler-Maclaurin rule on
// the far-field expansion X^{-p} (1 - (p/2) X^{-2} + p(p+2)/8 X^{-4}).
double PeriodizedUnitKernel1d(double s, double x, double half) {
  const double p = 1.0 + 2.0 * s;
  const double c = PoissonNormalization(1, s);
  const double period = 2.0 * half;
  const int images = std::max(8, static_cast<int>(std::ceil(128.0 / half)));
  double sum = 0.0;
  for (int m = -images; m <= images; ++m) {
    const double z = x + m * period;
    sum += std::pow(z * z + 1.0, -0.5 * p);
  }
  // Tail: sum over m > M of G(m) with G(m) = g(period m + x) + g(period m - x).
  const double a = images + 0.5;
  const double c1 = -0.5 * p;
  const double c2 = p * (p + 2.0) / 8.0;
  double tail = 0.0;
  for (double sign : {1.0, -1.0}) {
    const double x0 = period * a + sign * x;
    // int_a^inf (period m + sign x)^{-q} dm = x0^{1-q} / (period (q - 1)).
    auto integral = [&](double q) {
      return std::pow(x0, 1.0 - q) / (period * (q - 1.0));
    };
    tail += integral(p) + c1 * integral(p + 2.0) + c2 * integral(p + 4.0);
    // Midpoint corrections + G'(a) / 24 - 7 G'''(a) / 5760 from the leading
    // term.
    tail += -p * period * std::pow(x0, -p - 1.0) / 24.0;
    tail += 7.0 / 5760.0 * p * (p + 1.0) * (p + 2.0) * std::pow(period, 3) *
            std::pow(x0, -p - 3.0);
  }
  return c * (sum + tail);
}

double PeriodizedKernel1d(double s, double x, double y, double half) {
  return PeriodizedUnitKernel1d(s, x / y, half / y) / y;
}

// phi_s(t) as the Fourier coefficient of the periodized unit kernel on a box
// where t is an exact DFT frequency.
double KernelFourierCoefficient(double s, double t) {
  const int k = std::max(1, static_cast<int>(std::ceil(4.0 * t / kPi)));
  const double half = kPi * k / t;
  // h <= 1/8 resolves the kernel; 2 pi / h >= 2t + 40 pushes the first
  // alias to phi(t + 40).
  const double h_max = std::min(0.125, 2.0 * kPi / (2.0 * t + 40.0));
  const int n = static_cast<int>(std::ceil(2.0 * half / h_max));
  const double h = 2.0 * half / n;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double x = -half + j * h;
    sum += PeriodizedUnitKernel1d(s, x, half) * std::cos(t * x);
  }
  return h * sum;
}

double KernelMass(double s) {
  // Any box works at frequency zero; use a moderate one.
  const double half = 8.0;
  const int n = 256;
  const double h = 2.0 * half / n;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    sum += PeriodizedUnitKernel1d(s, -half + j * h, half);
  }
  return h * sum;
}

void CheckLevels(const std::vector<double>& levels) {
  if (levels.empty()) throw ConfigurationError("no extension levels given");
  for (size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] > 0.0) || !std::isfinite(levels[i])) {
      throw ConfigurationError("extension levels must be positive");
    }
    if (i > 0 && !(levels[i] > levels[i - 1])) {
      throw ConfigurationError("extension levels must be strictly ascending");
    }
  }
}

Eigen::VectorXd ProfileSymbol(const Grid& grid, const CsProfile& profile,
                              double y) {
  const Eigen::VectorXd xi = grid.FrequencyNorms();
  Eigen::VectorXd symbol(xi.size());
  for (Eigen::Index k = 0; k < xi.size(); ++k) symbol[k] = profile(xi[k] * y);
  return symbol;
}

// sum_k |xi_k|^{2 order} |f_hat_k|^2 / (2L)^n; the zero mode counts only
// for order 0.
double HomogeneousSquaredNorm(const Grid& grid, const Eigen::VectorXcd& fhat,
                              double order) {
  const Eigen::VectorXd xi = grid.FrequencyNorms();
  const double scale = std::pow(grid.cell_volume(), 2) /
                       std::pow(2.0 * grid.half_period(), grid.dim());
  double sum = 0.0;
  for (Eigen::Index k = 0; k < xi.size(); ++k) {
    double weight;
    if (xi[k] == 0.0) {
      weight = order == 0.0 ? 1.0 : 0.0;
    } else {
      weight = std::pow(xi[k], 2.0 * order);
    }
    sum += weight * std::norm(fhat[k]);
  }
  return scale * sum;
}

// Rejects a nonzero mean when the homogeneous order is negative.
void CheckMean(const Grid& grid, const Eigen::VectorXcd& fhat, double order) {
  if (order >= 0.0) return;
  double total = 0.0;
  for (Eigen::Index k = 0; k < fhat.size(); ++k) total += std::abs(fhat[k]);
  if (std::abs(fhat[0]) > 1e-10 * std::max(total, 1e-300)) {
    throw ConfigurationError(
        "f has a nonzero mean, so its homogeneous Sobolev norm of negative "
        "order is infinite");
  }
  (void)grid;
}

// Geometric Gauss-Legendre levels on [y_max 1e-8, y_max]; the first panel
// [0, y_lo] is integrated in closed form by the caller.
struct LevelRule {
  double y_lo;
  std::vector<double> nodes;
  std::vector<double> weights;
};

LevelRule MakeLevelRule(double y_max, int panels_per_decade) {
  constexpr int kDecades = 8;
  LevelRule rule;
  rule.y_lo = y_max * std::pow(10.0, -kDecades);
  const int panels = kDecades * panels_per_decade;
  const auto& abscissa = boost::math::quadrature::gauss<double, 8>::abscissa();
  const auto& weight = boost::math::quadrature::gauss<double, 8>::weights();
  for (int p = 0; p < panels; ++p) {
    const double a = rule.y_lo * std::pow(10.0, double(p) / panels_per_decade);
    const double b =
        rule.y_lo * std::pow(10.0, double(p + 1) / panels_per_decade);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    // Boost stores the non-negative half of the symmetric rule.
    for (size_t i = 0; i < abscissa.size(); ++i) {
      const double w = weight[i] * half;
      if (abscissa[i] == 0.0) {
        rule.nodes.push_back(mid);
        rule.weights.push_back(w);
      } else {
        rule.nodes.push_back(mid - half * abscissa[i]);
        rule.weights.push_back(w);
        rule.nodes.push_back(mid + half * abscissa[i]);
        rule.weights.push_back(w);
      }
    }
  }
  return rule;
}

void CheckEnergyInputs(double s, double y_max, int n_deriv,
                       int panels_per_decade) {
  CheckFractionalOrder(s);
  if (!(y_max > 0.0)) throw ConfigurationError("y_max must be positive");
  if (n_deriv < 0) throw ConfigurationError("N_deriv must be non-negative");
  if (panels_per_decade < 1) {
    throw ConfigurationError("panels_per_decade must be at least 1");
  }
}

// int_0^inf z^a g(z) dz split at 1; tanh-sinh absorbs the endpoint power.
template <class F>
double HalfLineIntegral(F integrand) {
  boost::math::quadrature::tanh_sinh<double> near;
  boost::math::quadrature::exp_sinh<double> far;
  return near.integrate(integrand, 0.0, 1.0) +
         far.integrate(integrand, 1.0, std::numeric_limits<double>::infinity());
}

}  // namespace

double ExtensionTraceConstant(double s) {
  CheckFractionalOrder(s);
  return std::pow(2.0, 1.0 - 2.0 * s) * std::tgamma(1.0 - s) / std::tgamma(s);
}

double PoissonNormalization(int n, double s) {
  CheckFractionalOrder(s);
  return std::tgamma(0.5 * (n + 2.0 * s)) /
         (std::pow(kPi, 0.5 * n) * std::tgamma(s));
}

GridFunction PoissonKernel(const Grid& grid, double s, double y,
                           KernelMode mode) {
  CheckFractionalOrder(s);
  if (!(y > 0.0) || !std::isfinite(y)) {
    throw ConfigurationError("Poisson kernel height y must be positive");
  }
  const int n = grid.dim();
  if (mode == KernelMode::kFreeSpace) {
    const double c = PoissonNormalization(n, s) * std::pow(y, 2.0 * s);
    const double p = 0.5 * (n + 2.0 * s);
    return GridFunction::Sample(grid, [&](double x0, double x1) {
      return c * std::pow(x0 * x0 + x1 * x1 + y * y, -p);
    });
  }
  const double half = grid.half_period();
  if (n == 1) {
    return GridFunction::Sample(grid, [&](double x0, double) {
      return PeriodizedKernel1d(s, x0, y, half);
    });
  }
  // 2D: synthesize the periodic kernel from its Fourier coefficients
  // phi(|xi| y); the DFT offsets are re-centred on x = 0.
  const auto profile = GetCsProfile(s);
  const Eigen::VectorXd symbol = ProfileSymbol(grid, *profile, y);
  const Eigen::VectorXd wrapped =
      InverseDftReal(grid, symbol.cast<std::complex<double>>()) /
      grid.cell_volume();
  const int npa = grid.points_per_axis();
  GridFunction kernel = GridFunction::Zeros(grid);
  for (int flat = 0; flat < grid.size(); ++flat) {
    const auto idx = grid.Unflatten(flat);
    const int d0 = (idx[0] + npa / 2) % npa;
    const int d1 = (idx[1] + npa / 2) % npa;
    kernel.values[flat] = wrapped[grid.Flatten(d0, d1)];
  }
  return kernel;
}

CsProfile::CsProfile(double s) : s_(s) {
  CheckFractionalOrder(s);
  a_s_ = ExtensionTraceConstant(s);
  phi_at_zero_ = KernelMass(s);
  log_lo_ = std::log(kSeriesLimit);
  log_step_ = (std::log(kTableLimit) - log_lo_) / (kTableSize - 1);
  t_.resize(kTableSize);
  phi_.resize(kTableSize);
  for (int i = 0; i < kTableSize; ++i) {
    t_[i] = std::exp(log_lo_ + i * log_step_);
    phi_[i] = KernelFourierCoefficient(s, t_[i]);
  }
}

double CsProfile::Series(double t, bool derivative) const {
  const double z = 0.5 * t;
  const double z2 = z * z;
  double even = 0.0, odd = 0.0, even_d = 0.0, odd_d = 0.0;
  double zk = 1.0;  // z^{2k}
  double fact = 1.0;
  for (int k = 0; k < 12; ++k) {
    if (k > 0) {
      zk *= z2;
      fact *= k;
    }
    const double ea = zk / (fact * std::tgamma(k + 1.0 - s_));
    const double eb = zk / (fact * std::tgamma(k + 1.0 + s_));
    even += ea;
    odd += eb;
    // d/dt of z^{2k} is k z^{2k-1}; of z^{2k+2s} is (k + s) z^{2k+2s-1}.
    if (k > 0) even_d += k * ea / z;
    odd_d += (k + s_) * eb / z;
  }
  const double g = std::tgamma(1.0 - s_);
  const double z2s = std::pow(z, 2.0 * s_);
  if (!derivative) return g * (even - z2s * odd);
  return g * (even_d - z2s * odd_d);
}

double CsProfile::Asymptotic(double t, bool derivative) const {
  // phi = c t^s K_s(t) with c = 2^{1-s} / Gamma(s) (so phi(0) = 1) and the
  // large-argument expansion of K_s with three correction terms.
  const double mu = 4.0 * s_ * s_;
  auto shape = [&](double u) {
    const double z = 8.0 * u;
    const double series = 1.0 + (mu - 1.0) / z +
                          (mu - 1.0) * (mu - 9.0) / (2.0 * z * z) +
                          (mu - 1.0) * (mu - 9.0) * (mu - 25.0) /
                              (6.0 * z * z * z);
    return std::pow(2.0, 1.0 - s_) / std::tgamma(s_) * std::pow(u, s_) *
           std::sqrt(kPi / (2.0 * u)) * std::exp(-u) * series;
  };
  if (!derivative) return shape(t);
  const double eps = 1e-5 * t;
  return (shape(t + eps) - shape(t - eps)) / (2.0 * eps);
}

double CsProfile::Interpolate(double t, bool derivative) const {
  constexpr int kPoints = 6;
  const double u = (std::log(t) - log_lo_) / log_step_;
  int first = static_cast<int>(std::floor(u)) - kPoints / 2 + 1;
  first = std::clamp(first, 0, kTableSize - kPoints);
  double value = 0.0, slope = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double ui = first + i;
    double basis = 1.0;
    double dbasis = 0.0;
    for (int j = 0; j < kPoints; ++j) {
      if (j == i) continue;
      const double uj = first + j;
      // Product rule for d/du of prod (u - uj) / (ui - uj).
      dbasis = dbasis * (u - uj) / (ui - uj) + basis / (ui - uj);
      basis *= (u - uj) / (ui - uj);
    }
    value += basis * phi_[first + i];
    slope += dbasis * phi_[first + i];
  }
  if (!derivative) return value;
  // du/dt = 1 / (t log_step).
  return slope / (t * log_step_);
}

double CsProfile::operator()(double t) const {
  if (t < 0.0) throw ConfigurationError("profile argument must be >= 0");
  if (t == 0.0) return 1.0;
  if (t < kSeriesLimit) return Series(t, false);
  if (t <= kTableLimit) return Interpolate(t, false);
  return Asymptotic(t, false);
}

double CsProfile::Derivative(double t) const {
  if (!(t > 0.0)) {
    throw ConfigurationError("profile derivative needs t > 0");
  }
  if (t < kSeriesLimit) return Series(t, true);
  if (t <= kTableLimit) return Interpolate(t, true);
  return Asymptotic(t, true);
}

std::shared_ptr<const CsProfile> GetCsProfile(double s) {
  static std::mutex mutex;
  static std::map<double, std::shared_ptr<const CsProfile>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(s);
  if (it != cache.end()) return it->second;
  auto profile = std::make_shared<const CsProfile>(s);
  cache.emplace(s, profile);
  return profile;
}

Extension Extend(const GridFunction& f, double s,
                 const std::vector<double>& levels) {
  CheckFractionalOrder(s);
  CheckLevels(levels);
  const Grid& grid = f.grid;
  const auto profile = GetCsProfile(s);
  const Eigen::VectorXcd fhat = Dft(grid, f.values);
  Extension ext;
  ext.f = f;
  ext.s = s;
  ext.levels = levels;
  ext.wraparound_warning = levels.back() > 0.25 * grid.half_period();
  ext.slices.reserve(levels.size());
  for (double y : levels) {
    const Eigen::VectorXd symbol = ProfileSymbol(grid, *profile, y);
    Eigen::VectorXcd spectrum = fhat;
    spectrum.array() *= symbol.array().cast<std::complex<double>>();
    ext.slices.emplace_back(grid, InverseDftReal(grid, spectrum));
  }
  return ext;
}

GridFunction ExtendByKernel(const GridFunction& f, double s, double y) {
  const Grid& grid = f.grid;
  const GridFunction kernel = PoissonKernel(grid, s, y, KernelMode::kPeriodic);
  // Reorder kernel samples by wrapped displacement from the origin index.
  const int npa = grid.points_per_axis();
  Eigen::VectorXd wrapped(grid.size());
  for (int flat = 0; flat < grid.size(); ++flat) {
    const auto d = grid.Unflatten(flat);
    const int i0 = (d[0] + npa / 2) % npa;
    const int i1 = grid.dim() == 1 ? 0 : (d[1] + npa / 2) % npa;
    wrapped[flat] = kernel.values[grid.Flatten(i0, i1)];
  }
  Eigen::VectorXcd spectrum = Dft(grid, f.values);
  spectrum.array() *= Dft(grid, wrapped).array();
  return GridFunction(grid,
                      grid.cell_volume() * InverseDftReal(grid, spectrum));
}

NeumannTraceResult NeumannTrace(const GridFunction& f, double s,
                                const std::vector<double>& heights) {
  CheckFractionalOrder(s);
  if (heights.size() < 3) {
    throw ConfigurationError("Neumann trace needs at least three heights");
  }
  for (size_t i = 0; i < heights.size(); ++i) {
    if (!(heights[i] > 0.0)) {
      throw ConfigurationError("Neumann trace heights must be positive");
    }
    if (i > 0 && !(heights[i] < heights[i - 1])) {
      throw ConfigurationError(
          "Neumann trace heights must be strictly decreasing");
    }
  }
  constexpr double kStepRatio = 1e-3;
  const Grid& grid = f.grid;
  const auto profile = GetCsProfile(s);
  const Eigen::VectorXcd fhat = Dft(grid, f.values);
  const Eigen::VectorXd xi = grid.FrequencyNorms();

  NeumannTraceResult result;
  result.heights = heights;
  for (double y : heights) {
    const double d = kStepRatio * y;
    Eigen::VectorXcd spectrum = fhat;
    for (Eigen::Index k = 0; k < xi.size(); ++k) {
      const double diff = (*profile)(xi[k] * (y + d)) -
                          (*profile)(xi[k] * (y - d));
      spectrum[k] *= std::pow(y, 1.0 - 2.0 * s) * diff / (2.0 * d);
    }
    result.estimates.emplace_back(grid, InverseDftReal(grid, spectrum));
  }

  // Weights w with sum w = 1 and sum w_i y_i^{e} = 0 for the leading
  // correction exponents.
  const int m = static_cast<int>(heights.size());
  std::vector<double> exponents;
  for (int j = 1; static_cast<int>(exponents.size()) < m - 1; ++j) {
    exponents.push_back(2.0 * j - 2.0 * s);
    exponents.push_back(2.0 * j);
  }
  exponents.resize(m - 1);
  std::sort(exponents.begin(), exponents.end());
  Eigen::MatrixXd system(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  rhs[0] = 1.0;
  for (int i = 0; i < m; ++i) {
    // Heights are rescaled by the largest to keep the system well scaled.
    const double y = heights[i] / heights[0];
    system(0, i) = 1.0;
    for (int r = 1; r < m; ++r) system(r, i) = std::pow(y, exponents[r - 1]);
  }
  const Eigen::VectorXd weights = system.colPivHouseholderQr().solve(rhs);
  Eigen::VectorXd limit = Eigen::VectorXd::Zero(grid.size());
  for (int i = 0; i < m; ++i) limit += weights[i] * result.estimates[i].values;
  result.limit = GridFunction(grid, limit);

  for (int i = 1; i < m; ++i) {
    result.successive_changes.push_back(
        std::sqrt(grid.cell_volume()) *
        (result.estimates[i].values - result.estimates[i - 1].values).norm());
  }
  for (size_t i = 1; i < result.successive_changes.size(); ++i) {
    if (result.successive_changes[i] > result.successive_changes[i - 1]) {
      result.monotone = false;
    }
  }
  return result;
}

double WeightedEnergyConstant(double s, double delta) {
  CheckFractionalOrder(s);
  if (!(delta < 1.0 - s)) {
    throw ConfigurationError(
        "weighted energy identity requires delta < 1 - s");
  }
  const auto profile = GetCsProfile(s);
  const double a = 1.0 - 2.0 * s - 2.0 * delta;
  return HalfLineIntegral([&](double z) {
    if (z <= 0.0) return 0.0;
    const double phi = (*profile)(z);
    return std::pow(z, a) * phi * phi;
  });
}

double WeightedGradientConstant(double s, double delta) {
  CheckFractionalOrder(s);
  if (!(delta < s)) {
    throw ConfigurationError(
        "weighted gradient identity requires delta < s");
  }
  const auto profile = GetCsProfile(s);
  const auto dual = GetCsProfile(1.0 - s);
  const double a = 1.0 - 2.0 * s - 2.0 * delta;
  const double a_s = profile->a_s();
  // phi_s' = -a_s z^{2s-1} phi_{1-s}.
  return HalfLineIntegral([&](double z) {
    if (z <= 0.0) return 0.0;
    const double phi = (*profile)(z);
    const double psi = (*dual)(z);
    return std::pow(z, a) * phi * phi +
           a_s * a_s * std::pow(z, a + 4.0 * s - 2.0) * psi * psi;
  });
}

EnergyIdentity WeightedEnergy(const GridFunction& f, double s, double delta,
                              int n_deriv, double y_max,
                              int panels_per_decade) {
  CheckEnergyInputs(s, y_max, n_deriv, panels_per_decade);
  EnergyIdentity out;
  out.constant = WeightedEnergyConstant(s, delta);
  const Grid& grid = f.grid;
  const double order = s + delta + n_deriv - 1.0;
  const Eigen::VectorXcd fhat = Dft(grid, f.values);
  CheckMean(grid, fhat, order);
  out.seminorm_squared = HomogeneousSquaredNorm(grid, fhat, order);

  const auto profile = GetCsProfile(s);
  const Eigen::VectorXd xi = grid.FrequencyNorms();
  const double a = 1.0 - 2.0 * s - 2.0 * delta;
  const LevelRule rule = MakeLevelRule(y_max, panels_per_decade);
  double energy = std::pow(rule.y_lo, a + 1.0) / (a + 1.0) *
                  HomogeneousSquaredNorm(grid, fhat, n_deriv);
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    const double y = rule.nodes[i];
    Eigen::VectorXcd uhat = fhat;
    for (Eigen::Index k = 0; k < xi.size(); ++k) uhat[k] *= (*profile)(xi[k] * y);
    energy += rule.weights[i] * std::pow(y, a) *
              HomogeneousSquaredNorm(grid, uhat, n_deriv);
  }
  out.energy = energy;
  const double denom = out.constant * out.seminorm_squared;
  out.ratio = denom > 0.0 ? energy / denom : 0.0;
  return out;
}

EnergyIdentity WeightedGradientEnergy(const GridFunction& f, double s,
                                      double delta, int n_deriv, double y_max,
                                      int panels_per_decade) {
  CheckEnergyInputs(s, y_max, n_deriv, panels_per_decade);
  EnergyIdentity out;
  out.constant = WeightedGradientConstant(s, delta);
  const Grid& grid = f.grid;
  const double order = s + delta + n_deriv;
  const Eigen::VectorXcd fhat = Dft(grid, f.values);
  CheckMean(grid, fhat, order);
  out.seminorm_squared = HomogeneousSquaredNorm(grid, fhat, order);

  const auto profile = GetCsProfile(s);
  const auto dual = GetCsProfile(1.0 - s);
  const double a_s = profile->a_s();
  const Eigen::VectorXd xi = grid.FrequencyNorms();
  const double a = 1.0 - 2.0 * s - 2.0 * delta;
  // y-derivative spectrum: d_y u_hat = -a_s y^{2s-1} |xi|^{2s}
  // phi_{1-s}(|xi| y) f_hat.
  Eigen::VectorXcd ghat = fhat;
  for (Eigen::Index k = 0; k < xi.size(); ++k) {
    ghat[k] *= xi[k] == 0.0 ? 0.0 : std::pow(xi[k], 2.0 * s);
  }
  const LevelRule rule = MakeLevelRule(y_max, panels_per_decade);
  const double y0 = rule.y_lo;
  double energy =
      std::pow(y0, a + 1.0) / (a + 1.0) *
          HomogeneousSquaredNorm(grid, fhat, n_deriv + 1) +
      a_s * a_s * std::pow(y0, a + 4.0 * s - 1.0) / (a + 4.0 * s - 1.0) *
          HomogeneousSquaredNorm(grid, ghat, n_deriv);
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    const double y = rule.nodes[i];
    Eigen::VectorXcd uhat = fhat, vhat = ghat;
    for (Eigen::Index k = 0; k < xi.size(); ++k) {
      uhat[k] *= (*profile)(xi[k] * y);
      vhat[k] *= (*dual)(xi[k] * y);
    }
    energy += rule.weights[i] * std::pow(y, a) *
              (HomogeneousSquaredNorm(grid, uhat, n_deriv + 1) +
               a_s * a_s * std::pow(y, 4.0 * s - 2.0) *
                   HomogeneousSquaredNorm(grid, vhat, n_deriv));
  }
  out.energy = energy;
  const double denom = out.constant * out.seminorm_squared;
  out.ratio = denom > 0.0 ? energy / denom : 0.0;
  return out;
}

}  // namespace fraclab
