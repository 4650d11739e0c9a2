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

#ifndef RISPILOT_HARNESS_RESULTS_IO_HPP
#define RISPILOT_HARNESS_RESULTS_IO_HPP

// Tabular results. CSV carries the run metadata as leading '#' lines; JSON
// lines put it in a first {"meta": ...} object followed by one object per row.

#include "rispilot/harness/experiment.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace rispilot::harness {

inline const char *kCsvHeader = "metric,scheme,mode,group,variant,sweep,point,value,samples";

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline void write_csv(std::ostream &os, const ExperimentResult &res) {
  os << "# preset=" << res.preset << '\n';
  os << "# seed=" << res.seed << '\n';
  os << "# trials=" << res.trials << '\n';
  os << "# config_hash=" << std::hex << res.config_hash << std::dec << '\n';
  os << "# runtime_s=" << format_double(res.runtime_s) << '\n';
  for (const auto &[k, v] : res.config)
    os << "# config." << k << '=' << v << '\n';
  os << kCsvHeader << '\n';
  for (const auto &r : res.rows)
    os << r.metric << ',' << r.scheme << ',' << r.mode << ',' << r.group << ',' << r.variant
       << ',' << r.sweep << ',' << format_double(r.point) << ',' << format_double(r.value)
       << ',' << r.samples << '\n';
}

inline nlohmann::json meta_json(const ExperimentResult &res) {
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto &[k, v] : res.config)
    cfg[k] = v;
  std::ostringstream hash;
  hash << std::hex << res.config_hash;
  return {{"preset", res.preset}, {"seed", res.seed},       {"trials", res.trials},
          {"config_hash", hash.str()}, {"runtime_s", res.runtime_s}, {"config", cfg}};
}

inline void write_jsonl(std::ostream &os, const ExperimentResult &res) {
  os << nlohmann::json{{"meta", meta_json(res)}}.dump() << '\n';
  for (const auto &r : res.rows) {
    const nlohmann::json j{{"metric", r.metric}, {"scheme", r.scheme}, {"mode", r.mode},
                           {"group", r.group},   {"variant", r.variant}, {"sweep", r.sweep},
                           {"point", r.point},   {"value", r.value},   {"samples", r.samples}};
    os << j.dump() << '\n';
  }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

} // namespace detail

/// Reads back what write_csv produced (rows and the scalar metadata).
inline ExperimentResult read_csv(std::istream &is) {
  ExperimentResult res;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty())
      continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string val = line.substr(eq + 1);
      if (key == "preset")
        res.preset = val;
      else if (key == "seed")
        res.seed = std::stoull(val);
      else if (key == "trials")
        res.trials = std::stoi(val);
      else if (key == "config_hash")
        res.config_hash = std::stoull(val, nullptr, 16);
      else if (key == "runtime_s")
        res.runtime_s = std::stod(val);
      else if (key.rfind("config.", 0) == 0)
        res.config.emplace_back(key.substr(7), val);
      continue;
    }
    if (!header) {
      if (line != kCsvHeader)
        throw IoError("unexpected CSV header: " + line);
      header = true;
      continue;
    }
    const auto f = detail::split_csv_line(line);
    if (f.size() != 9)
      throw IoError("malformed CSV row: " + line);
    res.rows.push_back({f[0], f[1], f[2], f[3], f[4], f[5], std::stod(f[6]), std::stod(f[7]),
                        std::stol(f[8])});
  }
  if (!header)
    throw IoError("CSV has no header line");
  return res;
}

/// Writes to `path`, or stdout when path is empty or "-". format: csv | jsonl.
inline void emit_results(const ExperimentResult &res, const std::string &format,
                         const std::string &path) {
  if (format != "csv" && format != "jsonl")
    throw ConfigError("unknown output format '" + format + "'");
  auto write = [&](std::ostream &os) {
    if (format == "csv")
      write_csv(os, res);
    else
      write_jsonl(os, res);
  };
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os)
    throw IoError("cannot open '" + path + "' for writing");
  write(os);
  if (!os)
    throw IoError("write to '" + path + "' failed");
}

} // namespace rispilot::harness

#endif // RISPILOT_HARNESS_RESULTS_IO_HPP
