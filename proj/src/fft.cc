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

#include "fraclab/fft.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <tuple>
#include <vector>

#include <fftw3.h>

#include "fraclab/errors.h"

namespace fraclab {
namespace {

using Complex = std::complex<double>;

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const { fftw_destroy_plan(plan); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// Plans are made once per (dim, n, direction) with FFTW_UNALIGNED so they may
// run on any buffer through the new-array interface. Planning is not
// thread-safe in FFTW, hence one cache per thread.
fftw_plan PlanFor(int dim, int n, int sign) {
  thread_local std::map<std::tuple<int, int, int>, Plan> cache;
  Plan& plan = cache[{dim, n, sign}];
  if (!plan) {
    const size_t size = dim == 1 ? n : static_cast<size_t>(n) * n;
    std::vector<Complex> scratch(size);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plan.reset(dim == 1 ? fftw_plan_dft_1d(n, buf, buf, sign, flags)
                        : fftw_plan_dft_2d(n, n, buf, buf, sign, flags));
    if (!plan) throw NumericalError("FFTW could not create a plan");
  }
  return plan.get();
}

// In-place unscaled transform of a row-major grid array.
void Transform(const Grid& grid, std::vector<Complex>& data, int sign) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(PlanFor(grid.dim(), grid.points_per_axis(), sign), buf, buf);
}

}  // namespace

Eigen::VectorXcd Dft(const Grid& grid, const Eigen::VectorXd& values) {
  std::vector<Complex> data(values.data(), values.data() + values.size());
  Transform(grid, data, FFTW_FORWARD);
  return Eigen::Map<Eigen::VectorXcd>(data.data(), data.size());
}

Eigen::VectorXd InverseDftReal(const Grid& grid,
                               const Eigen::VectorXcd& spectrum,
                               double imag_tolerance) {
  std::vector<Complex> data(spectrum.data(), spectrum.data() + spectrum.size());
  Transform(grid, data, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (Complex& z : data) z *= scale;
  Eigen::VectorXd result(data.size());
  double max_real = 0.0, max_imag = 0.0;
  for (size_t i = 0; i < data.size(); ++i) {
    result[i] = data[i].real();
    max_real = std::max(max_real, std::abs(data[i].real()));
    max_imag = std::max(max_imag, std::abs(data[i].imag()));
  }
  if (max_imag > imag_tolerance * std::max(max_real, 1e-300) &&
      max_imag > 1e-300) {
    throw NumericalError("inverse DFT has a non-negligible imaginary part");
  }
  return result;
}

Eigen::VectorXd ApplySymbol(const Grid& grid, const Eigen::VectorXd& values,
                            const Eigen::VectorXd& symbol) {
  Eigen::VectorXcd spectrum = Dft(grid, values);
  spectrum.array() *= symbol.array().cast<Complex>();
  return InverseDftReal(grid, spectrum);
}

Eigen::VectorXd CirculantColumn(const Grid& grid,
                                const Eigen::VectorXd& symbol) {
  const Eigen::VectorXd raw = InverseDftReal(grid, symbol.cast<Complex>());
  // Even symbols give even columns; average c[d] and c[-d] so the matrices
  // built from the column are exactly symmetric.
  Eigen::VectorXd column(raw.size());
  for (int d = 0; d < grid.size(); ++d) {
    column[d] = 0.5 * (raw[d] + raw[grid.WrappedOffset(0, d)]);
  }
  return column;
}

Eigen::VectorXd BesselSymbol(const Grid& grid, double order) {
  const Eigen::VectorXd xi = grid.FrequencyNorms();
  return (1.0 + xi.array().square()).pow(order).matrix();
}

Eigen::VectorXd FractionalSymbol(const Grid& grid, double s) {
  const Eigen::VectorXd xi = grid.FrequencyNorms();
  Eigen::VectorXd symbol(xi.size());
  for (Eigen::Index k = 0; k < xi.size(); ++k) {
    symbol[k] = xi[k] == 0.0 ? 0.0 : std::pow(xi[k], 2.0 * s);
  }
  return symbol;
}

}  // namespace fraclab
