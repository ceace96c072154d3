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

#ifndef FRACLAB_CLI_H_
#define FRACLAB_CLI_H_

#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "fraclab/frac_op.h"
#include "fraclab/grid.h"

namespace fraclab {

// Resolved key/value settings of one run, grouped as section.key. Every key
// has a default; unknown keys are rejected so that typos fail loudly.
class RunConfig {
 public:
  RunConfig();

  // Defaults overlaid with the INI file at `path`.
  static RunConfig FromFile(const std::filesystem::path& path);
  // (key, default, help) for every recognised key, in snapshot order.
  static const std::vector<std::vector<std::string>>& Schema();

  void Set(const std::string& key, const std::string& value);
  std::string Get(const std::string& key) const;
  double GetDouble(const std::string& key) const;
  int GetInt(const std::string& key) const;
  bool GetBool(const std::string& key) const;
  // Comma-separated list of reals.
  std::vector<double> GetList(const std::string& key) const;

  // INI snapshot; FromFile of the snapshot reproduces this config.
  void Write(std::ostream& out) const;

 private:
  boost::property_tree::ptree tree_;
};

Grid BuildGrid(const RunConfig& config);

// Potential from the [potential] section. Kinds: zero, constant, bump,
// oscillatory, file, eigen-shift. Everything except `file` is supported in
// Omega.
Potential BuildPotential(const RunConfig& config, const Grid& grid,
                         const IndexSet& omega);

// Command-line entry point. Exit codes: 0 success, 2 configuration error,
// 3 mathematical degeneracy, 4 numerical failure.
int RunCli(int argc, const char* const* argv);

}  // namespace fraclab

#endif  // FRACLAB_CLI_H_
