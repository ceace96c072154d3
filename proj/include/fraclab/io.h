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

#ifndef FRACLAB_IO_H_
#define FRACLAB_IO_H_

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fraclab/grid.h"

namespace fraclab {

// 17 significant digits, enough to round-trip a double.
std::string FormatDouble(double value);

void WriteCsvRow(std::ostream& out, const std::vector<std::string>& cells);
void WriteCsvRow(std::ostream& out, const std::vector<double>& cells);

// Columns x[, y], value for a grid function.
void WriteGridFunctionCsv(std::ostream& out, const GridFunction& f,
                          const std::string& value_name);

// Column-major little-endian float64 dump of a matrix.
void WriteBinaryMatrix(const std::filesystem::path& path,
                       const Eigen::MatrixXd& m);
Eigen::MatrixXd ReadBinaryMatrix(const std::filesystem::path& path,
                                 Eigen::Index rows, Eigen::Index cols);

}  // namespace fraclab

#endif  // FRACLAB_IO_H_
