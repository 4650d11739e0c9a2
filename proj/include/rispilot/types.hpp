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

#ifndef RISPILOT_TYPES_HPP
#define RISPILOT_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace rispilot {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr double kPi = std::numbers::pi;

// Error taxonomy. Everything derives from std::runtime_error so callers that
// don't care can catch one type; the CLI maps each family to an exit code.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidArgument : Error {
  using Error::Error;
};
struct InfeasibleSchedule : Error {
  using Error::Error;
};
struct SingularMatrix : Error {
  using Error::Error;
};
struct UndefinedSinr : Error {
  using Error::Error;
};
struct PlacementExhausted : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

inline void require(bool cond, const std::string &what) {
  if (!cond)
    throw InvalidArgument(what);
}

/// Random engine used everywhere. Each Monte Carlo trial owns one (or a few)
/// derived via make_stream, so draws never depend on scheduling.
using Rng = std::mt19937_64;

/// Deterministic substream keyed on (seed, a, b, c). Distinct keys give
/// statistically independent engines through seed_seq mixing.
inline Rng make_stream(std::uint64_t seed, std::uint64_t a = 0,
                       std::uint64_t b = 0, std::uint64_t c = 0) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(a), hi(a), lo(b),
                    hi(b),    lo(c),    hi(c), 0x52495350u};
  return Rng(seq);
}

/// Circularly symmetric CN(0, 1): variance 1/2 per real component.
inline CVec complex_gaussian(Index n, Rng &rng) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  CVec out(n);
  for (Index i = 0; i < n; ++i) {
    const double re = nd(rng);
    const double im = nd(rng);
    out[i] = cplx(re, im);
  }
  return out;
}

inline CMat complex_gaussian(Index rows, Index cols, Rng &rng) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  CMat out(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = nd(rng);
      const double im = nd(rng);
      out(i, j) = cplx(re, im);
    }
  return out;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi)
    w += 2.0 * kPi;
  return w;
}

/// RIS-UE association: sets[0] holds UEs served directly (K_0), sets[r] the
/// UEs aided by RIS r (1-based, matching the usual K_1..K_R numbering).
struct Association {
  std::vector<std::vector<int>> sets;

  int num_ris() const { return static_cast<int>(sets.size()) - 1; }

  int num_ues() const {
    int n = 0;
    for (const auto &s : sets)
      n += static_cast<int>(s.size());
    return n;
  }

  /// RIS serving UE k, 0 for the directly served set.
  int ris_of(int k) const {
    for (std::size_t r = 0; r < sets.size(); ++r)
      for (int u : sets[r])
        if (u == k)
          return static_cast<int>(r);
    throw InvalidArgument("UE " + std::to_string(k) +
                          " is in no association set");
  }

  bool is_direct(int k) const { return ris_of(k) == 0; }

  void validate() const {
    require(!sets.empty(), "association needs at least the K_0 set");
    const int k_total = num_ues();
    std::vector<int> seen(static_cast<std::size_t>(k_total), 0);
    for (const auto &s : sets)
      for (int u : s) {
        require(u >= 0 && u < k_total,
                "association UE index out of range: " + std::to_string(u));
        require(seen[static_cast<std::size_t>(u)]++ == 0,
                "association sets overlap at UE " + std::to_string(u));
      }
  }
};

} // namespace rispilot

#endif // RISPILOT_TYPES_HPP
