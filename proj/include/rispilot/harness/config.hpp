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

#ifndef RISPILOT_HARNESS_CONFIG_HPP
#define RISPILOT_HARNESS_CONFIG_HPP

#include "rispilot/channels.hpp"
#include "rispilot/phase_optimizer.hpp"
#include "rispilot/types.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace rispilot::harness {

/// Flat simulation configuration. Field names double as config-file keys.
struct SystemConfig {
  // system
  int bs_antennas = 128;
  int ris_rows = 16;
  int ris_cols = 16;
  int ues = 4;
  int ris_count = 3;
  int pilots = 1;
  int reuse_factor = 0; // 0: derived as ceil(ues / pilots)
  double bs_spacing_wl = 0.5;
  double ris_spacing_wl = 0.5;
  double carrier_hz = 3e9;
  double cell_radius = 150.0;
  double tx_power_dbm = 20.0;
  double bandwidth_hz = 10e6;
  double noise_psd_dbm_hz = -174.0;
  double noise_figure_db = 10.0;
  double ris_aod_azimuth = kPi / 6;
  double ris_aod_elevation = 0.0;
  // channel
  double ref_loss_db = -35.3;
  double correlation = 0.5;
  double rician_db = 5.0;
  double kappa_br = 2.3;
  double kappa_ru = 2.3;
  double kappa_bu = 4.2;
  // monte carlo
  int trials = 1000;
  std::uint64_t seed = 1;
  int workers = 0; // 0: hardware concurrency
  int coherence_samples = 0; // tau_c; 0 means prelog 1
  bool freeze_bs_ris = false;
  bool freeze_positions = false;
  bool snap_ris = true;
  bool weighted_kernel = false;
  std::string sinr_channels = "estimate"; // estimate | true
  // phase optimizer
  int ascent_max_iter = 500;
  double ascent_grad_tol = 1e-8;
  int ascent_restarts = 0;
  // sweeps
  std::vector<int> m_values{8, 16, 32, 64, 128, 256};
  std::vector<int> reuse_values{2, 3, 4, 5, 6, 7};
  std::vector<double> rician_values_db{0, 3, 5, 10};

  double wavelength() const { return 299792458.0 / carrier_hz; }

  int resolved_reuse() const {
    return reuse_factor > 0 ? reuse_factor : (ues + pilots - 1) / pilots;
  }

  /// Transmit power over the receiver noise floor (PSD + bandwidth + figure).
  double rho() const {
    const double noise_dbm =
        noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
    return db_to_linear(tx_power_dbm - noise_dbm);
  }

  double prelog() const {
    if (coherence_samples <= 0)
      return 1.0;
    return 1.0 - static_cast<double>(pilots) / coherence_samples;
  }

  ArrayGeometry geometry() const {
    ArrayGeometry g;
    g.bs_antennas = bs_antennas;
    g.ris_rows = ris_rows;
    g.ris_cols = ris_cols;
    g.wavelength = wavelength();
    g.bs_spacing = bs_spacing_wl * g.wavelength;
    g.ris_spacing = ris_spacing_wl * g.wavelength;
    return g;
  }

  FadingParams fading() const {
    FadingParams f;
    f.ref_loss = db_to_linear(ref_loss_db);
    f.kappa_br = kappa_br;
    f.kappa_ru = kappa_ru;
    f.kappa_bu = kappa_bu;
    f.rician_factor = db_to_linear(rician_db);
    f.correlation = correlation;
    return f;
  }

  AscentOptions ascent() const {
    AscentOptions o;
    o.max_iter = ascent_max_iter;
    o.grad_tol = ascent_grad_tol;
    return o;
  }

  void validate() const {
    auto check = [](bool c, const std::string &what) {
      if (!c)
        throw ConfigError(what);
    };
    check(bs_antennas >= 1, "bs_antennas must be >= 1");
    check(ris_rows >= 1 && ris_cols >= 1, "ris_rows and ris_cols must be >= 1");
    check(ues >= 1, "ues must be >= 1");
    check(ris_count >= 0, "ris_count must be >= 0");
    check(pilots >= 1, "pilots must be >= 1");
    check(reuse_factor >= 0, "reuse_factor must be >= 0");
    check(resolved_reuse() <= ris_count + 1, "reuse_factor must not exceed ris_count + 1");
    check(reuse_factor == 0 || ues % pilots != 0 || reuse_factor == ues / pilots,
          "reuse_factor must equal ues / pilots when divisible");
    check(bs_spacing_wl > 0 && ris_spacing_wl > 0, "spacings must be positive");
    check(carrier_hz > 0 && cell_radius > 0 && bandwidth_hz > 0,
          "carrier, cell radius and bandwidth must be positive");
    check(correlation >= 0 && correlation <= 1, "correlation must lie in [0, 1]");
    check(kappa_br >= 2 && kappa_ru >= 2 && kappa_bu >= 2,
          "path-loss exponents must be >= 2");
    check(trials >= 1, "trials must be >= 1");
    check(workers >= 0, "workers must be >= 0");
    check(coherence_samples == 0 || coherence_samples > pilots,
          "coherence_samples must exceed pilots");
    check(sinr_channels == "estimate" || sinr_channels == "true",
          "sinr_channels must be 'estimate' or 'true'");
    check(ascent_max_iter >= 0 && ascent_grad_tol >= 0 && ascent_restarts >= 0,
          "invalid ascent options");
  }
};

/// Calls fn(name, member) for every configurable field, in a fixed order.
template <typename Config, typename Fn> void visit_fields(Config &c, Fn &&fn) {
  fn("bs_antennas", c.bs_antennas);
  fn("ris_rows", c.ris_rows);
  fn("ris_cols", c.ris_cols);
  fn("ues", c.ues);
  fn("ris_count", c.ris_count);
  fn("pilots", c.pilots);
  fn("reuse_factor", c.reuse_factor);
  fn("bs_spacing_wl", c.bs_spacing_wl);
  fn("ris_spacing_wl", c.ris_spacing_wl);
  fn("carrier_hz", c.carrier_hz);
  fn("cell_radius", c.cell_radius);
  fn("tx_power_dbm", c.tx_power_dbm);
  fn("bandwidth_hz", c.bandwidth_hz);
  fn("noise_psd_dbm_hz", c.noise_psd_dbm_hz);
  fn("noise_figure_db", c.noise_figure_db);
  fn("ris_aod_azimuth", c.ris_aod_azimuth);
  fn("ris_aod_elevation", c.ris_aod_elevation);
  fn("ref_loss_db", c.ref_loss_db);
  fn("correlation", c.correlation);
  fn("rician_db", c.rician_db);
  fn("kappa_br", c.kappa_br);
  fn("kappa_ru", c.kappa_ru);
  fn("kappa_bu", c.kappa_bu);
  fn("trials", c.trials);
  fn("seed", c.seed);
  fn("workers", c.workers);
  fn("coherence_samples", c.coherence_samples);
  fn("freeze_bs_ris", c.freeze_bs_ris);
  fn("freeze_positions", c.freeze_positions);
  fn("snap_ris", c.snap_ris);
  fn("weighted_kernel", c.weighted_kernel);
  fn("sinr_channels", c.sinr_channels);
  fn("ascent_max_iter", c.ascent_max_iter);
  fn("ascent_grad_tol", c.ascent_grad_tol);
  fn("ascent_restarts", c.ascent_restarts);
  fn("m_values", c.m_values);
  fn("reuse_values", c.reuse_values);
  fn("rician_values_db", c.rician_values_db);
}

namespace detail {

inline std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T> T parse_scalar(const std::string &key, const std::string &text) {
  std::istringstream is(text);
  T v{};
  if constexpr (std::is_same_v<T, bool>) {
    if (text == "true" || text == "1")
      return true;
    if (text == "false" || text == "0")
      return false;
    throw ConfigError("key '" + key + "': expected true/false, got '" + text + "'");
  } else {
    is >> v;
    if (!is || !(is >> std::ws).eof())
      throw ConfigError("key '" + key + "': cannot parse '" + text + "'");
  }
  return v;
}

template <typename T> std::string format_scalar(const T &v) {
  if constexpr (std::is_same_v<T, bool>) {
    return v ? "true" : "false";
  } else if constexpr (std::is_floating_point_v<T>) {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
    return os.str();
  } else {
    return std::to_string(v);
  }
}

} // namespace detail

/// Sets one field from its textual value. Unknown keys are errors.
inline void set_field(SystemConfig &cfg, const std::string &key, const std::string &value) {
  bool found = false;
  visit_fields(cfg, [&](const char *name, auto &member) {
    if (key != name)
      return;
    found = true;
    using T = std::decay_t<decltype(member)>;
    if constexpr (std::is_same_v<T, std::string>) {
      member = value;
    } else if constexpr (std::is_same_v<T, std::vector<int>> ||
                         std::is_same_v<T, std::vector<double>>) {
      T out;
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!detail::trim(item).empty())
          out.push_back(detail::parse_scalar<typename T::value_type>(key, detail::trim(item)));
      member = std::move(out);
    } else {
      member = detail::parse_scalar<T>(key, value);
    }
  });
  if (!found)
    throw ConfigError("unknown configuration key '" + key + "'");
}

/// Ordered (key, value) pairs of the full resolved configuration.
inline std::vector<std::pair<std::string, std::string>> config_pairs(const SystemConfig &cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  SystemConfig copy = cfg;
  visit_fields(copy, [&](const char *name, auto &member) {
    using T = std::decay_t<decltype(member)>;
    std::string text;
    if constexpr (std::is_same_v<T, std::string>) {
      text = member;
    } else if constexpr (std::is_same_v<T, std::vector<int>> ||
                         std::is_same_v<T, std::vector<double>>) {
      for (std::size_t i = 0; i < member.size(); ++i)
        text += (i ? "," : "") + detail::format_scalar(member[i]);
    } else {
      text = detail::format_scalar(member);
    }
    out.emplace_back(name, std::move(text));
  });
  return out;
}

/// Parses "key = value" lines; '#' starts a comment.
inline void apply_config_text(SystemConfig &cfg, const std::string &text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = detail::trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    set_field(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
}

inline SystemConfig load_config_file(const std::string &path, SystemConfig base = {}) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(base, ss.str());
  return base;
}

inline std::string config_text(const SystemConfig &cfg) {
  std::string out;
  for (const auto &[k, v] : config_pairs(cfg))
    out += k + " = " + v + "\n";
  return out;
}

/// FNV-1a over the serialized configuration.
inline std::uint64_t config_hash(const SystemConfig &cfg) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : config_text(cfg)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

} // namespace rispilot::harness

#endif // RISPILOT_HARNESS_CONFIG_HPP
