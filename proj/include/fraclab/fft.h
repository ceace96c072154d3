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

#ifndef FRACLAB_FFT_H_
#define FRACLAB_FFT_H_

#include <Eigen/Core>

#include "fraclab/grid.h"

namespace fraclab {

// Unscaled forward DFT of grid samples in flat DFT order,
// U_k = sum_j u_j exp(-2 pi i j.k / N). The phase of the grid origin is
// omitted; every consumer forms products U conj(V) or applies real even
// symbols, for which it cancels.
Eigen::VectorXcd Dft(const Grid& grid, const Eigen::VectorXd& values);

// Inverse of Dft (scaled by N^-dim). Throws NumericalError if the imaginary
// residue exceeds `imag_tolerance` times the largest real magnitude.
Eigen::VectorXd InverseDftReal(const Grid& grid,
                               const Eigen::VectorXcd& spectrum,
                               double imag_tolerance = 1e-10);

// F^{-1}[symbol * F u] for a real symbol given on the flat DFT order.
Eigen::VectorXd ApplySymbol(const Grid& grid, const Eigen::VectorXd& values,
                            const Eigen::VectorXd& symbol);

// First column of the circulant matrix of a symbol: the inverse DFT of the
// symbol, indexed by wrapped offsets (see Grid::WrappedOffset).
Eigen::VectorXd CirculantColumn(const Grid& grid,
                                const Eigen::VectorXd& symbol);

// <xi>^{2 order} and |xi|^{2 s} on the flat DFT order. |0|^{2s} is 0.
Eigen::VectorXd BesselSymbol(const Grid& grid, double order);
Eigen::VectorXd FractionalSymbol(const Grid& grid, double s);

}  // namespace fraclab

#endif  // FRACLAB_FFT_H_
