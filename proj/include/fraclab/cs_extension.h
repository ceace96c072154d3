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

#ifndef FRACLAB_CS_EXTENSION_H_
#define FRACLAB_CS_EXTENSION_H_

#include <memory>
#include <vector>

#include "fraclab/grid.h"

namespace fraclab {

// a_s = 2^{1-2s} Gamma(1-s) / Gamma(s), the constant relating the weighted
// Neumann trace of the extension to -(-Delta)^s.
double ExtensionTraceConstant(double s);

// p_{n,s} = Gamma((n + 2s)/2) / (pi^{n/2} Gamma(s)), so that the kernel
// p_{n,s} y^{2s} (|x|^2 + y^2)^{-(n+2s)/2} has unit mass on R^n.
double PoissonNormalization(int n, double s);

enum class KernelMode {
  // Sum of the free-space kernel over all periodic images of the box. This
  // is the kernel whose convolution reproduces the extension on the
  // periodic grid; its grid mass is 1 at every height.
  kPeriodic,
  // Plain samples of the free-space formula.
  kFreeSpace,
};

// Samples of the Poisson kernel P_y at the grid points (centered at x = 0).
// Throws ConfigurationError for y <= 0.
GridFunction PoissonKernel(const Grid& grid, double s, double y,
                           KernelMode mode = KernelMode::kPeriodic);

// Radial profile phi_s with u_hat(xi, y) = phi_s(|xi| y) f_hat(xi).
//
// Table values are Fourier coefficients of the unit-height periodized
// kernel: for a target t the box half-period is chosen as L = pi k / t so
// that t is an exact DFT frequency, and the trapezoid sum of the kernel
// against cos(t x) is spectrally accurate. Between table nodes the profile
// is interpolated by 6-point Lagrange in log t. Below the table the
// convergent expansion at the origin
//   phi(t) = Gamma(1-s) [ sum_k (t/2)^{2k} / (k! Gamma(k+1-s))
//                         - (t/2)^{2s} sum_k (t/2)^{2k} / (k! Gamma(k+1+s)) ]
// is used, and past the table the large-t asymptotics (phi ~ e^{-t}).
class CsProfile {
 public:
  explicit CsProfile(double s);

  double s() const { return s_; }
  double a_s() const { return a_s_; }
  // Kernel mass at unit height, i.e. the DFT of the kernel at xi = 0.
  double phi_at_zero() const { return phi_at_zero_; }
  const std::vector<double>& t_samples() const { return t_; }
  const std::vector<double>& phi_samples() const { return phi_; }

  double operator()(double t) const;
  double Derivative(double t) const;

  static constexpr double kSeriesLimit = 0.05;
  static constexpr double kTableLimit = 30.0;
  static constexpr int kTableSize = 800;

 private:
  double Series(double t, bool derivative) const;
  double Asymptotic(double t, bool derivative) const;
  double Interpolate(double t, bool derivative) const;

  double s_;
  double a_s_;
  double phi_at_zero_;
  double log_lo_, log_step_;
  std::vector<double> t_;
  std::vector<double> phi_;
};

// Shared, lazily computed profile for s (thread-safe).
std::shared_ptr<const CsProfile> GetCsProfile(double s);

struct Extension {
  GridFunction f;
  double s = 0.5;
  std::vector<double> levels;
  std::vector<GridFunction> slices;
  // Set when a level exceeds L/4, where periodic images of the slowly
  // decaying kernel contaminate the free-space picture.
  bool wraparound_warning = false;
};

// u(., y) = F^{-1}[phi_s(|xi| y) f_hat] at every level (positive,
// ascending).
Extension Extend(const GridFunction& f, double s,
                 const std::vector<double>& levels);
// The same slice as an FFT convolution with PoissonKernel(kPeriodic).
GridFunction ExtendByKernel(const GridFunction& f, double s, double y);

struct NeumannTraceResult {
  GridFunction limit;
  std::vector<double> heights;
  std::vector<GridFunction> estimates;   // y^{1-2s} d_y u at each height
  std::vector<double> successive_changes;  // L2 norms of differences
  bool monotone = true;  // successive changes decrease
};

// lim_{y -> 0} y^{1-2s} d_y u(., y) from centered differences at the given
// (strictly decreasing, at least three) heights, followed by Richardson
// extrapolation with the exponents 2-2s, 2, 4-2s, 4, ... of the small-y
// expansion of the profile.
NeumannTraceResult NeumannTrace(const GridFunction& f, double s,
                                const std::vector<double>& heights);

struct EnergyIdentity {
  double energy = 0.0;            // level quadrature of the weighted norm^2
  double constant = 0.0;          // c_{s,delta} or d_{s,delta}
  double seminorm_squared = 0.0;  // ||f||^2 in the homogeneous space
  double ratio = 0.0;             // energy / (constant * seminorm_squared)
};

// int_0^inf z^{1-2s-2 delta} phi_s(z)^2 dz; requires delta < 1 - s.
double WeightedEnergyConstant(double s, double delta);
// int_0^inf z^{1-2s-2 delta} (phi_s(z)^2 + phi_s'(z)^2) dz; requires
// delta < s.
double WeightedGradientConstant(double s, double delta);

// || y^{(1-2s)/2 - delta} |D'|^N u ||^2 over grid x (0, y_max] against
// c_{s,delta} ||f||^2_{Ḣ^{s+delta+N-1}}.
EnergyIdentity WeightedEnergy(const GridFunction& f, double s, double delta,
                              int n_deriv, double y_max,
                              int panels_per_decade = 4);
// || y^{(1-2s)/2 - delta} |D'|^N grad u ||^2 against
// d_{s,delta} ||f||^2_{Ḣ^{s+delta+N}}.
EnergyIdentity WeightedGradientEnergy(const GridFunction& f, double s,
                                      double delta, int n_deriv, double y_max,
                                      int panels_per_decade = 4);

}  // namespace fraclab

#endif  // FRACLAB_CS_EXTENSION_H_
