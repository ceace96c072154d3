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

#include "fraclab/io.h"

#include <cstdio>
#include <fstream>

#include "fraclab/errors.h"

namespace fraclab {

std::string FormatDouble(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void WriteCsvRow(std::ostream& out, const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

void WriteCsvRow(std::ostream& out, const std::vector<double>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << FormatDouble(cells[i]);
  }
  out << '\n';
}

void WriteGridFunctionCsv(std::ostream& out, const GridFunction& f,
                          const std::string& value_name) {
  const Grid& grid = f.grid;
  if (grid.dim() == 1) {
    WriteCsvRow(out, std::vector<std::string>{"x", value_name});
  } else {
    WriteCsvRow(out, std::vector<std::string>{"x", "y", value_name});
  }
  for (int i = 0; i < grid.size(); ++i) {
    const auto [x0, x1] = grid.Point(i);
    if (grid.dim() == 1) {
      WriteCsvRow(out, std::vector<double>{x0, f.values[i]});
    } else {
      WriteCsvRow(out, std::vector<double>{x0, x1, f.values[i]});
    }
  }
}

void WriteBinaryMatrix(const std::filesystem::path& path,
                       const Eigen::MatrixXd& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigurationError("cannot write " + path.string());
  // Eigen's default storage is column-major; x86-64 is little-endian.
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(m.size() * sizeof(double)));
}

Eigen::MatrixXd ReadBinaryMatrix(const std::filesystem::path& path,
                                 Eigen::Index rows, Eigen::Index cols) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigurationError("cannot read " + path.string());
  Eigen::MatrixXd m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(m.size() * sizeof(double)));
  if (!in) throw ConfigurationError("truncated matrix file " + path.string());
  return m;
}

}  // namespace fraclab
