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

#include "fraclab/cli.h"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <json.hpp>

#include "fraclab/cs_extension.h"
#include "fraclab/dn_map.h"
#include "fraclab/errors.h"
#include "fraclab/exterior_pde.h"
#include "fraclab/io.h"
#include "fraclab/runge_control.h"
#include "fraclab/stability_lab.h"

namespace fraclab {
namespace {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

const std::vector<std::string> kExperiments = {"sv-decay", "cost-curve", "quc",
                                               "dn-modulus", "recover"};

std::string JoinNames(const std::vector<std::string>& names) {
  std::string out;
  for (const std::string& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

void WriteJson(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigurationError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::ofstream OpenCsv(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigurationError("cannot write " + path.string());
  return out;
}

}  // namespace

const std::vector<std::vector<std::string>>& RunConfig::Schema() {
  static const std::vector<std::vector<std::string>> schema = {
      {"grid.dim", "1", "spatial dimension (1 or 2)"},
      {"grid.points", "256", "grid points per axis"},
      {"grid.half_period", "8", "periodic box is [-L, L)^n"},
      {"geometry.omega_radius", "1", "Omega = {|x|_inf < R}"},
      {"geometry.gap", "1", "distance between Omega and the windows"},
      {"geometry.w_radius", "1", "half-width of each window"},
      {"geometry.two_window", "false", "dn: pair the two disjoint windows"},
      {"model.s", "0.5", "fractional order in (0, 1)"},
      {"potential.kind", "zero",
       "zero|constant|bump|oscillatory|file|eigen-shift"},
      {"potential.amplitude", "1", "constant value or peak height"},
      {"potential.center", "0", "bump centre (first axis)"},
      {"potential.radius", "0.5", "bump radius"},
      {"potential.mode", "4", "oscillatory mode number m"},
      {"potential.file", "", "CSV whose last column holds q per grid point"},
      {"potential.shift_fraction", "1",
       "eigen-shift: q = -fraction * lambda_1 on Omega"},
      {"run.command", "", "subcommand recorded for replay"},
      {"run.experiment", "", "experiment name recorded for replay"},
      {"run.source", "false", "solve: interior source problem"},
      {"run.seed", "42", "seed of every random draw"},
      {"run.datum", "bump", "exterior datum on W: bump|ones"},
      {"run.target", "cos2", "interior target on Omega: cos2|ones"},
      {"run.function", "gaussian", "extend: gaussian|odd-gaussian"},
      {"run.levels", "0.25,0.5,1,2", "extend: heights of the slices"},
      {"run.heights", "0.1,0.05,0.025,0.0125",
       "extend: decreasing heights of the Neumann trace extrapolation"},
      {"run.method", "tikhonov", "control: truncated|threshold|tikhonov"},
      {"run.parameter", "1e-6", "control: l, threshold or alpha"},
      {"run.samples", "10", "quc: random combinations of singular vectors"},
      {"run.modes", "1,2,4,6,8,10", "dn-modulus: oscillation modes"},
      {"run.distance", "1e-6", "dn-modulus: L2(Omega) distance of q1, q2"},
      {"run.contrast", "0.01", "recover: q2 - q1 = contrast on B"},
      {"run.ball_radius", "0.125", "recover: radius of B"},
      {"run.weyl_amplitude", "0.1",
       "sv-decay: constant perturbation of q on Omega (0 disables)"},
      {"tolerances.rank_cutoff", "1e-14", "relative numerical-rank cutoff"},
      {"tolerances.recover_epsilons", "1,0.1,0.01,0.001",
       "recover: control tolerances"},
      {"tolerances.cost_epsilons",
       "1,0.1,0.01,0.001,0.0001,1e-05,1e-06,1e-07,1e-08",
       "cost-curve: control tolerances"},
  };
  return schema;
}

RunConfig::RunConfig() {
  for (const auto& row : Schema()) tree_.put(row[0], row[1]);
}

RunConfig RunConfig::FromFile(const fs::path& path) {
  if (!fs::exists(path)) {
    throw ConfigurationError("config file not found: " + path.string());
  }
  pt::ptree file;
  try {
    pt::read_ini(path.string(), file);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigurationError(std::string("cannot parse config: ") + e.what());
  }
  RunConfig config;
  for (const auto& [section, keys] : file) {
    if (keys.empty()) {
      throw ConfigurationError("config key outside a section: " + section);
    }
    for (const auto& [key, value] : keys) {
      config.Set(section + "." + key, value.data());
    }
  }
  return config;
}

void RunConfig::Set(const std::string& key, const std::string& value) {
  if (!tree_.get_optional<std::string>(key)) {
    throw ConfigurationError("unknown config key: " + key);
  }
  tree_.put(key, value);
}

std::string RunConfig::Get(const std::string& key) const {
  const auto value = tree_.get_optional<std::string>(key);
  if (!value) throw ConfigurationError("unknown config key: " + key);
  return *value;
}

double RunConfig::GetDouble(const std::string& key) const {
  const std::string text = Get(key);
  size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(value)) {
    throw ConfigurationError(key + ": expected a finite number, got '" + text +
                             "'");
  }
  return value;
}

int RunConfig::GetInt(const std::string& key) const {
  const double value = GetDouble(key);
  if (value != std::floor(value) || std::abs(value) > 1e9) {
    throw ConfigurationError(key + ": expected an integer, got '" + Get(key) +
                             "'");
  }
  return static_cast<int>(value);
}

bool RunConfig::GetBool(const std::string& key) const {
  const std::string text = Get(key);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigurationError(key + ": expected true or false, got '" + text +
                           "'");
}

std::vector<double> RunConfig::GetList(const std::string& key) const {
  std::vector<double> out;
  std::stringstream in(Get(key));
  std::string item;
  RunConfig scratch;
  while (std::getline(in, item, ',')) {
    scratch.Set("run.parameter", item);
    out.push_back(scratch.GetDouble("run.parameter"));
  }
  if (out.empty()) throw ConfigurationError(key + ": empty list");
  return out;
}

void RunConfig::Write(std::ostream& out) const {
  pt::write_ini(out, tree_);
}

Grid BuildGrid(const RunConfig& config) {
  return MakeGrid(config.GetInt("grid.dim"), config.GetInt("grid.points"),
                  config.GetDouble("grid.half_period"));
}

namespace {

// prod_i cos^power(pi (x_i - c_i) / (2 half)) on `set`, zero elsewhere; the
// second axis is centred at 0. Vanishes on the box boundary.
GridFunction BoxWindow(const IndexSet& set, double center, double half,
                       int power) {
  const Grid& grid = set.grid();
  GridFunction out = GridFunction::Zeros(grid);
  for (int a : set.indices()) {
    const auto p = grid.Point(a);
    double value = 1.0;
    for (int axis = 0; axis < grid.dim(); ++axis) {
      const double c = axis == 0 ? center : 0.0;
      const double t = std::cos(std::numbers::pi * (p[axis] - c) / (2 * half));
      value *= std::pow(std::max(t, 0.0), power);
    }
    out.values[a] = value;
  }
  return out;
}

GridFunction Indicator(const IndexSet& set) {
  return set.ExtendByZero(Eigen::VectorXd::Ones(set.size()));
}

Potential FileValues(const std::string& file, const Grid& grid) {
  std::ifstream in(file);
  if (!in) throw ConfigurationError("cannot read potential file " + file);
  std::string line;
  std::getline(in, line);  // header
  GridFunction values = GridFunction::Zeros(grid);
  int count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (count == grid.size()) {
      throw ConfigurationError("potential file has more rows than the grid");
    }
    const std::string cell = line.substr(line.rfind(',') + 1);
    try {
      values.values[count++] = std::stod(cell);
    } catch (const std::exception&) {
      throw ConfigurationError("potential file: bad value '" + cell + "'");
    }
  }
  if (count != grid.size()) {
    throw ConfigurationError("potential file has " + std::to_string(count) +
                             " rows, grid has " + std::to_string(grid.size()));
  }
  return Potential::FromValues(values);
}

}  // namespace

Potential BuildPotential(const RunConfig& config, const Grid& grid,
                         const IndexSet& omega) {
  const std::string kind = config.Get("potential.kind");
  const double amplitude = config.GetDouble("potential.amplitude");
  const double radius = config.GetDouble("geometry.omega_radius");
  if (kind == "zero") return Potential::Zero(grid);
  if (kind == "constant") return Potential::Constant(grid, amplitude, omega);
  if (kind == "bump") {
    return Potential::Bump(grid, amplitude, config.GetDouble("potential.center"),
                           config.GetDouble("potential.radius"));
  }
  if (kind == "oscillatory") {
    const double k =
        std::numbers::pi * config.GetDouble("potential.mode") / radius;
    GridFunction values = BoxWindow(omega, 0.0, radius, 4);
    for (int a : omega.indices()) {
      values.values[a] *= amplitude * std::sin(k * grid.Point(a)[0]);
    }
    return Potential::FromValues(values, omega);
  }
  if (kind == "file") return FileValues(config.Get("potential.file"), grid);
  if (kind == "eigen-shift") {
    const double s = config.GetDouble("model.s");
    const double lambda1 = DirichletSpectrum(
        AssembleOperator(grid, s, Potential::Zero(grid)), omega, 1)[0];
    return Potential::Constant(
        grid, -config.GetDouble("potential.shift_fraction") * lambda1, omega);
  }
  throw ConfigurationError(
      "unknown potential kind '" + kind +
      "'; valid kinds: zero, constant, bump, oscillatory, file, eigen-shift");
}

namespace {

struct Setup {
  explicit Setup(const RunConfig& c)
      : config(c),
        grid(BuildGrid(c)),
        s(c.GetDouble("model.s")),
        omega_radius(c.GetDouble("geometry.omega_radius")),
        gap(c.GetDouble("geometry.gap")),
        w_radius(c.GetDouble("geometry.w_radius")) {
    CheckFractionalOrder(s);
  }

  Domains SingleWindow() const {
    return MakeDomains(grid, omega_radius, gap, w_radius);
  }
  TwoWindowDomains TwoWindows() const {
    return MakeTwoWindowDomains(grid, omega_radius, gap, w_radius);
  }
  double WindowCenter() const { return omega_radius + gap + w_radius; }

  GridFunction Datum(const IndexSet& w) const {
    const std::string kind = config.Get("run.datum");
    if (kind == "bump") return BoxWindow(w, WindowCenter(), w_radius, 2);
    if (kind == "ones") return Indicator(w);
    throw ConfigurationError("unknown datum '" + kind +
                             "'; valid datums: bump, ones");
  }
  GridFunction Target(const IndexSet& omega) const {
    const std::string kind = config.Get("run.target");
    if (kind == "cos2") return BoxWindow(omega, 0.0, omega_radius, 2);
    if (kind == "ones") return Indicator(omega);
    throw ConfigurationError("unknown target '" + kind +
                             "'; valid targets: cos2, ones");
  }

  RunConfig config;
  Grid grid;
  double s;
  double omega_radius;
  double gap;
  double w_radius;
};

nlohmann::json Basics(const Setup& setup) {
  nlohmann::json j;
  j["s"] = setup.s;
  j["grid_points"] = setup.grid.points_per_axis();
  j["dim"] = setup.grid.dim();
  return j;
}

void CmdSolve(const Setup& setup, const fs::path& out) {
  const Domains d = setup.SingleWindow();
  const Potential q = BuildPotential(setup.config, setup.grid, d.omega);
  const DirichletProblem problem(AssembleOperator(setup.grid, setup.s, q),
                                 d.omega);
  nlohmann::json j = Basics(setup);
  j["omega_size"] = d.omega.size();
  j["w_size"] = d.w.size();
  j["reciprocal_condition"] = problem.reciprocal_condition();
  if (setup.config.GetBool("run.source")) {
    const SourceSolution sol = problem.SolveSource(setup.Target(d.omega));
    std::ofstream csv = OpenCsv(out / "w.csv");
    WriteGridFunctionCsv(csv, sol.w, "w");
    j["residual"] = sol.residual;
  } else {
    const ExteriorSolution sol = problem.SolveExterior(setup.Datum(d.w));
    std::ofstream csv = OpenCsv(out / "u.csv");
    WriteGridFunctionCsv(csv, sol.u, "u");
    j["residual"] = sol.residual;
  }
  WriteJson(out / "solve.json", j);
}

GridFunction ExtendFunction(const Setup& setup) {
  const std::string kind = setup.config.Get("run.function");
  if (kind != "gaussian" && kind != "odd-gaussian") {
    throw ConfigurationError("unknown function '" + kind +
                             "'; valid functions: gaussian, odd-gaussian");
  }
  const bool odd = kind == "odd-gaussian";
  return GridFunction::Sample(setup.grid, [odd](double x0, double x1) {
    return (odd ? x0 : 1.0) * std::exp(-0.5 * (x0 * x0 + x1 * x1));
  });
}

void CmdExtend(const Setup& setup, const fs::path& out) {
  const GridFunction f = ExtendFunction(setup);
  const Extension ext = Extend(f, setup.s, setup.config.GetList("run.levels"));
  const bool two_d = setup.grid.dim() == 2;
  {
    std::ofstream csv = OpenCsv(out / "extension.csv");
    WriteCsvRow(csv, two_d ? std::vector<std::string>{"x", "y", "height", "u"}
                           : std::vector<std::string>{"x", "height", "u"});
    for (size_t k = 0; k < ext.levels.size(); ++k) {
      for (int a = 0; a < setup.grid.size(); ++a) {
        const auto p = setup.grid.Point(a);
        const double u = ext.slices[k].values[a];
        WriteCsvRow(csv, two_d
                             ? std::vector<double>{p[0], p[1], ext.levels[k], u}
                             : std::vector<double>{p[0], ext.levels[k], u});
      }
    }
  }
  const NeumannTraceResult trace =
      NeumannTrace(f, setup.s, setup.config.GetList("run.heights"));
  const double a_s = ExtensionTraceConstant(setup.s);
  const Eigen::VectorXd reference =
      -a_s * FracLaplacianApply(f, setup.s).values;
  {
    std::ofstream csv = OpenCsv(out / "trace.csv");
    WriteCsvRow(csv, two_d ? std::vector<std::string>{"x", "y", "trace",
                                                      "reference"}
                           : std::vector<std::string>{"x", "trace",
                                                      "reference"});
    for (int a = 0; a < setup.grid.size(); ++a) {
      const auto p = setup.grid.Point(a);
      const double t = trace.limit.values[a];
      WriteCsvRow(csv, two_d ? std::vector<double>{p[0], p[1], t, reference[a]}
                             : std::vector<double>{p[0], t, reference[a]});
    }
  }
  nlohmann::json j = Basics(setup);
  j["a_s"] = a_s;
  j["wraparound_warning"] = ext.wraparound_warning;
  j["trace_relative_error"] =
      (trace.limit.values - reference).norm() / reference.norm();
  j["trace_monotone"] = trace.monotone;
  j["successive_changes"] = trace.successive_changes;
  WriteJson(out / "extend.json", j);
}

void CmdDn(const Setup& setup, const fs::path& out) {
  nlohmann::json j = Basics(setup);
  const bool two = setup.config.GetBool("geometry.two_window");
  IndexSet omega, rows, cols;
  if (two) {
    const TwoWindowDomains d = setup.TwoWindows();
    omega = d.omega;
    rows = d.w1;
    cols = d.w2;
  } else {
    const Domains d = setup.SingleWindow();
    omega = d.omega;
    rows = cols = d.w;
  }
  const Potential q = BuildPotential(setup.config, setup.grid, omega);
  const DirichletProblem problem(AssembleOperator(setup.grid, setup.s, q),
                                 omega);
  const DnMatrix dn = AssembleDn(problem, rows, cols);
  const DnMatrix swapped = AssembleDn(problem, cols, rows);
  {
    std::ofstream csv = OpenCsv(out / "dn.csv");
    WriteDnCsv(csv, dn);
  }
  const DirichletProblem free(
      AssembleOperator(setup.grid, setup.s, Potential::Zero(setup.grid)),
      omega);
  const DnMatrix diff = DnDifference(problem, free, rows, cols);
  j["rows"] = ToString(rows.label());
  j["cols"] = ToString(cols.label());
  j["reciprocal_condition"] = problem.reciprocal_condition();
  j["symmetry_residual"] = (dn.matrix - swapped.matrix.transpose()).norm() /
                           dn.matrix.norm();
  j["frobenius_norm"] = dn.matrix.norm();
  j["partial_norm"] = DnPartialNorm(dn, setup.s);
  j["partial_norm_minus_free"] = DnPartialNorm(diff, setup.s);
  WriteJson(out / "dn.json", j);
}

ForwardOperator BuildForward(const Setup& setup, const IndexSet& omega,
                             const IndexSet& w) {
  const Potential q = BuildPotential(setup.config, setup.grid, omega);
  return AssembleForward(AssembleOperator(setup.grid, setup.s, q), omega, w);
}

void CmdSvd(const Setup& setup, const fs::path& out) {
  const Domains d = setup.SingleWindow();
  const ForwardOperator forward = BuildForward(setup, d.omega, d.w);
  const GsvdResult gsvd =
      Gsvd(forward, setup.config.GetDouble("tolerances.rank_cutoff"));
  ExportGsvd(out, gsvd, forward);
}

void CmdControl(const Setup& setup, const fs::path& out) {
  const Domains d = setup.SingleWindow();
  const ForwardOperator forward = BuildForward(setup, d.omega, d.w);
  const GridFunction v = setup.Target(d.omega);
  const std::string method = setup.config.Get("run.method");
  const double parameter = setup.config.GetDouble("run.parameter");
  const double cutoff = setup.config.GetDouble("tolerances.rank_cutoff");
  nlohmann::json j = Basics(setup);
  ControlResult control;
  if (method == "truncated") {
    control = TruncatedControl(forward, Gsvd(forward, cutoff), v,
                               setup.config.GetInt("run.parameter"));
  } else if (method == "threshold") {
    control = ThresholdControl(forward, Gsvd(forward, cutoff), v, parameter);
  } else if (method == "tikhonov") {
    control = TikhonovControl(forward, v, parameter);
    j["euler_lagrange_residual"] = TikhonovResidual(forward, v, control);
  } else {
    throw ConfigurationError("unknown control method '" + method +
                             "'; valid methods: truncated, threshold, "
                             "tikhonov");
  }
  {
    std::ofstream csv = OpenCsv(out / "control.csv");
    WriteGridFunctionCsv(csv, control.f, "f");
  }
  j["method"] = ToString(control.method);
  j["parameter"] = control.parameter;
  j["terms"] = control.terms;
  j["approx_error"] = control.approx_error;
  j["relative_error"] =
      control.approx_error /
      (std::sqrt(forward.mass_omega) * d.omega.Restrict(v).norm());
  j["cost"] = control.cost;
  WriteJson(out / "control.json", j);
}

ExperimentRecord RunExperiment(const Setup& setup, const std::string& name) {
  const RunConfig& c = setup.config;
  const double cutoff = c.GetDouble("tolerances.rank_cutoff");
  if (name == "sv-decay" || name == "cost-curve" || name == "quc") {
    const Domains d = setup.SingleWindow();
    const ForwardOperator forward = BuildForward(setup, d.omega, d.w);
    if (name == "sv-decay") {
      std::optional<Potential> perturbation;
      const double amplitude = c.GetDouble("run.weyl_amplitude");
      if (amplitude != 0.0) {
        perturbation = Potential::Constant(setup.grid, amplitude, d.omega);
      }
      return SvDecayExperiment(forward, perturbation, cutoff);
    }
    const GsvdResult gsvd = Gsvd(forward, cutoff);
    if (name == "cost-curve") {
      return CostCurveExperiment(forward, gsvd, setup.Target(d.omega),
                                 c.GetList("tolerances.cost_epsilons"));
    }
    const int samples = c.GetInt("run.samples");
    if (samples < 0) throw ConfigurationError("run.samples must be >= 0");
    return QucExperiment(
        forward, QucSamples(forward, gsvd, samples,
                            static_cast<std::uint64_t>(c.GetInt("run.seed"))));
  }
  if (name == "dn-modulus" || name == "recover") {
    const TwoWindowDomains d = setup.TwoWindows();
    const Potential q1 = BuildPotential(c, setup.grid, d.omega);
    if (name == "dn-modulus") {
      return DnModulusExperiment(
          setup.grid, setup.s, d,
          OscillatoryFamily(d.omega, setup.omega_radius, q1,
                            c.GetDouble("run.distance"),
                            c.GetList("run.modes")));
    }
    const IndexSet ball = MakeOmega(setup.grid, c.GetDouble("run.ball_radius"));
    const Potential q2 =
        q1 + Potential::Constant(setup.grid, c.GetDouble("run.contrast"), ball);
    const GridFunction phi = setup.Target(d.omega);
    return RecoverExperiment(setup.grid, setup.s, d, q1, q2, phi, phi,
                             c.GetList("tolerances.recover_epsilons"));
  }
  throw ConfigurationError("unknown experiment '" + name +
                           "'; valid names: " + JoinNames(kExperiments));
}

void CmdExperiment(const Setup& setup, const fs::path& out) {
  const std::string name = setup.config.Get("run.experiment");
  ExperimentRecord record = RunExperiment(setup, name);
  // The snapshot replaces the experiment's own partial config listing.
  record.config.clear();
  for (const auto& row : RunConfig::Schema()) {
    record.config.emplace_back(row[0], setup.config.Get(row[0]));
  }
  {
    std::ofstream csv = OpenCsv(out / (name + ".csv"));
    record.WriteCsv(csv);
  }
  WriteJson(out / (name + ".json"), record.Summary());
}

fs::path DefaultOutDir(const std::string& command) {
  const char* root = std::getenv("FRACLAB_OUTPUT_ROOT");
  const fs::path base = root && *root ? fs::path(root) : fs::path("runs");
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream stamp;
  stamp << std::put_time(&utc, "%Y%m%dT%H%M%SZ") << '-' << command;
  fs::path dir = base / stamp.str();
  for (int k = 1; fs::exists(dir); ++k) {
    dir = base / (stamp.str() + "-" + std::to_string(k));
  }
  return dir;
}

void Dispatch(const RunConfig& config, const fs::path& out) {
  const std::string command = config.Get("run.command");
  const Setup setup(config);
  // Fail on bad experiment names before any output is written.
  if (command == "experiment") {
    const std::string name = config.Get("run.experiment");
    if (std::find(kExperiments.begin(), kExperiments.end(), name) ==
        kExperiments.end()) {
      throw ConfigurationError("unknown experiment '" + name +
                               "'; valid names: " + JoinNames(kExperiments));
    }
  }
  fs::create_directories(out);
  {
    std::ofstream snapshot(out / "config.ini");
    if (!snapshot) {
      throw ConfigurationError("cannot write " + (out / "config.ini").string());
    }
    config.Write(snapshot);
  }
  if (command == "solve") {
    CmdSolve(setup, out);
  } else if (command == "extend") {
    CmdExtend(setup, out);
  } else if (command == "dn") {
    CmdDn(setup, out);
  } else if (command == "svd") {
    CmdSvd(setup, out);
  } else if (command == "control") {
    CmdControl(setup, out);
  } else if (command == "experiment") {
    CmdExperiment(setup, out);
  } else {
    throw ConfigurationError("snapshot has no runnable run.command: '" +
                             command + "'");
  }
}

}  // namespace

int RunCli(int argc, const char* const* argv) {
  CLI::App app{"fraclab: fractional Schroedinger exterior problems, "
               "Runge approximation and stability experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::string out_dir;
  app.add_option("--config", config_path, "INI config file");
  app.add_option("--out-dir", out_dir,
                 "output directory (default $FRACLAB_OUTPUT_ROOT/<stamp>-<cmd>)");
  std::map<std::string, std::string> overrides;
  for (const auto& row : RunConfig::Schema()) {
    if (row[0].rfind("run.command", 0) == 0 || row[0] == "run.experiment" ||
        row[0] == "run.source") {
      continue;  // set by the subcommand itself
    }
    app.add_option("--" + row[0], overrides[row[0]],
                   row[2] + " [" + row[1] + "]");
  }

  bool source = false;
  CLI::App* solve = app.add_subcommand("solve", "exterior Dirichlet solve");
  solve->add_flag("--source", source, "solve the interior source problem");
  app.add_subcommand("extend", "Caffarelli-Silvestre extension and trace");
  app.add_subcommand("dn", "Dirichlet-to-Neumann matrix");
  app.add_subcommand("svd", "singular system of the Runge operator");
  app.add_subcommand("control", "approximate control of a target on Omega");
  std::string experiment;
  CLI::App* exp = app.add_subcommand("experiment", "run a named experiment");
  exp->add_option("name", experiment, JoinNames(kExperiments))->required();
  std::string replay_dir;
  CLI::App* replay =
      app.add_subcommand("replay", "rerun the snapshot stored in a run dir");
  replay->add_option("dir", replay_dir, "earlier output directory")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    RunConfig config;
    if (sub == replay) {
      config = RunConfig::FromFile(fs::path(replay_dir) / "config.ini");
    } else if (!config_path.empty()) {
      config = RunConfig::FromFile(config_path);
    }
    for (const auto& [key, value] : overrides) {
      if (app.count("--" + key) > 0) config.Set(key, value);
    }
    if (sub != replay) {
      config.Set("run.command", sub->get_name());
      config.Set("run.experiment", sub == exp ? experiment : "");
      config.Set("run.source", sub == solve && source ? "true" : "false");
    }
    const fs::path out = out_dir.empty()
                             ? DefaultOutDir(config.Get("run.command"))
                             : fs::path(out_dir);
    Dispatch(config, out);
    std::cout << out.string() << '\n';
    return 0;
  } catch (const ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const DegeneracyError& e) {
    std::cerr << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 4;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace fraclab
