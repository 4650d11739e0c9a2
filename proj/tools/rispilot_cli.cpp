// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// rispilot command line front end.
//
//   rispilot run <preset>                 Monte Carlo preset -> CSV / JSON lines
//   rispilot grid                         optimized RIS azimuth grid
//   rispilot optimize-phases --channel F  phase design for one BS-RIS channel
//   rispilot validate-placement <file>    check RIS azimuths against the grid rules
//
// Exit codes: 0 ok, 1 other failure, 2 invalid configuration, 3 infeasible
// scenario or placement violations, 4 I/O error.

#include "rispilot/rispilot.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace rispilot;
using namespace rispilot::harness;

namespace {

std::vector<std::vector<double>> read_numeric_csv(const std::string &path) {
  std::ifstream is(path);
  if (!is)
    throw IoError("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception &) {
        throw IoError("'" + path + "': not a number: '" + cell + "'");
      }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Rows of re,im pairs.
CMat read_complex_matrix(const std::string &path) {
  const auto rows = read_numeric_csv(path);
  if (rows.empty() || rows[0].empty() || rows[0].size() % 2 != 0)
    throw IoError("'" + path + "': expected rows of interleaved re,im values");
  CMat out(static_cast<Index>(rows.size()), static_cast<Index>(rows[0].size() / 2));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size())
      throw IoError("'" + path + "': ragged rows");
    for (std::size_t j = 0; j < rows[i].size() / 2; ++j)
      out(static_cast<Index>(i), static_cast<Index>(j)) = {rows[i][2 * j], rows[i][2 * j + 1]};
  }
  return out;
}

RMat read_real_matrix(const std::string &path) {
  const auto rows = read_numeric_csv(path);
  if (rows.empty())
    throw IoError("'" + path + "' is empty");
  RMat out(static_cast<Index>(rows.size()), static_cast<Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size())
      throw IoError("'" + path + "': ragged rows");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      out(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  return out;
}

std::vector<double> read_angles(const std::string &path) {
  std::vector<double> out;
  for (const auto &row : read_numeric_csv(path))
    out.insert(out.end(), row.begin(), row.end());
  return out;
}

std::ofstream open_out(const std::string &path) {
  std::ofstream os(path);
  if (!os)
    throw IoError("cannot open '" + path + "' for writing");
  return os;
}

const char *kind_name(ViolationKind k) {
  switch (k) {
  case ViolationKind::coincident:
    return "coincident";
  case ViolationKind::mirror:
    return "mirror";
  case ViolationKind::opposite_endfire:
    return "opposite_endfire";
  case ViolationKind::lattice_multiple:
    return "lattice_multiple";
  }
  return "?";
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"RIS-aided pilot reuse simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_path, format = "csv";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--set", overrides, "override a configuration key (key=value)");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--trials", trials, "Monte Carlo trials per point");
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));

  auto *run = app.add_subcommand("run", "run a Monte Carlo preset");
  std::string preset;
  run->add_option("preset", preset, "preset name")->required()->check(CLI::IsMember(preset_names()));

  auto *grid = app.add_subcommand("grid", "print the optimized RIS azimuth grid");

  auto *opt = app.add_subcommand("optimize-phases", "maximize phi^H D phi for one RIS");
  std::string channel_path, kernel_path, trace_path;
  int restarts = 0;
  opt->add_option("--channel", channel_path, "M x N channel CSV (re,im interleaved)")->required();
  opt->add_option("--kernel", kernel_path, "N x N real RIS correlation CSV (default sinc)");
  opt->add_option("--trace", trace_path, "write objective per iteration");
  opt->add_option("--restarts", restarts, "random restarts");

  auto *val = app.add_subcommand("validate-placement", "check RIS azimuths (radians)");
  std::string angles_path;
  val->add_option("file", angles_path, "angles, comma or newline separated")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    SystemConfig cfg;
    if (!config_path.empty())
      cfg = load_config_file(config_path, cfg);
    for (const auto &o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos)
        throw ConfigError("--set expects key=value, got '" + o + "'");
      set_field(cfg, detail::trim(o.substr(0, eq)), detail::trim(o.substr(eq + 1)));
    }
    if (seed)
      cfg.seed = *seed;
    if (trials)
      cfg.trials = *trials;
    cfg.validate();

    if (*run) {
      const ExperimentResult res = run_experiment(cfg, preset);
      emit_results(res, format, out_path);
      std::cerr << "preset " << preset << ": " << res.rows.size() << " rows in "
                << std::fixed << std::setprecision(1) << res.runtime_s << " s\n";
      return 0;
    }

    if (*grid) {
      const ArrayGeometry g = cfg.geometry();
      const AngularGrid ag = build_angle_grid(g.bs_antennas, g.bs_spacing, g.wavelength);
      std::ofstream file;
      if (!out_path.empty() && out_path != "-")
        file = open_out(out_path);
      std::ostream &os = file.is_open() ? file : std::cout;
      os << "angle_rad,sin_value\n" << std::setprecision(17);
      for (double a : ag.angles)
        os << a << ',' << std::sin(a) << '\n';
      return 0;
    }

    if (*opt) {
      const CMat H = read_complex_matrix(channel_path);
      const ArrayGeometry g = cfg.geometry();
      const RMat kernel = kernel_path.empty() ? ris_correlation_kernel(g) : read_real_matrix(kernel_path);
      if (kernel.rows() != H.cols() || kernel.cols() != H.cols())
        throw ConfigError("kernel must be N x N with N = channel columns (" +
                          std::to_string(H.cols()) + ")");
      Rng rng = make_stream(cfg.seed, 0, 0, 0);
      const AscentReport rep = optimize_phases(build_quadratic(H, kernel), cfg.ascent(), restarts, &rng);
      std::ofstream file;
      if (!out_path.empty() && out_path != "-")
        file = open_out(out_path);
      std::ostream &os = file.is_open() ? file : std::cout;
      os << "index,phase_rad\n" << std::setprecision(17);
      for (Index i = 0; i < rep.phases.size(); ++i)
        os << i << ',' << std::arg(rep.phases[i]) << '\n';
      if (!trace_path.empty()) {
        std::ofstream tr = open_out(trace_path);
        tr << "iteration,objective\n" << std::setprecision(17);
        for (std::size_t i = 0; i < rep.objective_trace.size(); ++i)
          tr << i << ',' << rep.objective_trace[i] << '\n';
      }
      std::cerr << "iterations " << rep.iterations << ", objective "
                << rep.objective_trace.back() << (rep.converged ? "" : " (not converged)") << '\n';
      return 0;
    }

    if (*val) {
      const std::vector<double> angles = read_angles(angles_path);
      const ArrayGeometry g = cfg.geometry();
      const PlacementReport rep = validate_placement(angles, g.bs_antennas, g.bs_spacing, g.wavelength);
      if (rep.wide_spacing)
        std::cerr << "warning: BS spacing above lambda/2, grating lobes are not checked\n";
      for (const auto &v : rep.violations)
        std::cout << "violation " << kind_name(v.kind) << ": angles " << v.first << " and "
                  << v.second << " (sine offset " << v.multiple << " lambda/d_B)\n";
      if (!rep.ok())
        return 3;
      std::cout << "ok: " << angles.size() << " angles, no violations\n";
      return 0;
    }
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidArgument &e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const InfeasibleSchedule &e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 3;
  } catch (const PlacementExhausted &e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 3;
  } catch (const IoError &e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
