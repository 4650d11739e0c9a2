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

#ifndef RISPILOT_PLACEMENT_HPP
#define RISPILOT_PLACEMENT_HPP

// Angular placement of RISs around a ULA base station.
//
// Two RISs at BS azimuths t and t' see BS steering vectors whose inner
// product has magnitude |sin(pi M x)| / |sin(pi x)|, x = d_B/lambda (sin t -
// sin t'). It vanishes when sin t - sin t' = l lambda / (M d_B) with l not a
// multiple of M, and peaks at M when l is a multiple of M (including 0). The
// optimized grid is the set of angles whose sines lie on that lattice.
//
// Nulling the LoS-LoS cross term only removes one of the four terms of
// tr(R_k R_k'); the direct-link and mixed terms remain, so placement on the
// grid reduces the inter-RIS interference without cancelling it.

#include "rispilot/types.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace rispilot {

struct AngularGrid {
  std::vector<double> angles; // sorted, in (-pi, pi]
  std::vector<long> lattice;  // sin(angles[i]) = lattice[i] / lattice_extent
  int bs_antennas = 0;
  double bs_spacing = 0;
  double wavelength = 0;

  /// M d_B / lambda.
  double lattice_extent() const {
    return static_cast<double>(bs_antennas) * bs_spacing / wavelength;
  }
  std::size_t size() const { return angles.size(); }

  double worst_gap() const {
    double gap = 0;
    for (std::size_t i = 0; i < angles.size(); ++i) {
      const double next =
          i + 1 < angles.size() ? angles[i + 1] : angles.front() + 2.0 * kPi;
      gap = std::max(gap, next - angles[i]);
    }
    return gap;
  }
};

/// |a_B(t)^H a_B(t')| in closed form; direct summation near the removable
/// singularities where the denominator vanishes.
inline double steering_inner_product_magnitude(double theta, double theta_p, int M,
                                               double bs_spacing, double wavelength) {
  const double x = bs_spacing / wavelength * (std::sin(theta) - std::sin(theta_p));
  const double den = std::sin(kPi * x);
  if (std::abs(den) < 1e-6) {
    cplx acc = 0;
    for (int m = 0; m < M; ++m)
      acc += std::polar(1.0, 2.0 * kPi * x * m);
    return std::abs(acc);
  }
  return std::abs(std::sin(kPi * M * x) / den);
}

/// First quadrant arcsin(l lambda / (M d_B)), l = 0..floor(M d_B / lambda),
/// mirrored across the x axis and then across the y axis.
inline AngularGrid build_angle_grid(int M, double bs_spacing, double wavelength) {
  require(M >= 1 && bs_spacing > 0 && wavelength > 0, "invalid array parameters");
  const double extent = M * bs_spacing / wavelength;
  require(extent >= 1.0 - 1e-12, "M d_B / lambda must be >= 1");
  const long lmax = static_cast<long>(std::floor(extent + 1e-9));

  std::vector<std::pair<double, long>> pts;
  auto add = [&](double a, long l) {
    a = wrap_angle(a);
    for (const auto &p : pts)
      if (std::abs(wrap_angle(p.first - a)) < 1e-12)
        return;
    pts.emplace_back(a, l);
  };
  for (long l = 0; l <= lmax; ++l) {
    const double s = std::min(1.0, static_cast<double>(l) / extent);
    const double q1 = std::asin(s);
    add(q1, l);        // first quadrant
    add(-q1, -l);      // x-axis mirror
    add(kPi - q1, l);  // y-axis mirrors
    add(kPi + q1, -l); // == -(pi - q1)
  }
  std::sort(pts.begin(), pts.end());
  AngularGrid g;
  g.bs_antennas = M;
  g.bs_spacing = bs_spacing;
  g.wavelength = wavelength;
  for (const auto &p : pts) {
    g.angles.push_back(p.first);
    g.lattice.push_back(p.second);
  }
  return g;
}

enum class ViolationKind {
  coincident,       // same angle
  mirror,           // t' = pi - t: same sine, opposite side of the array
  opposite_endfire, // +pi/2 together with -pi/2
  lattice_multiple  // other sine offsets equal to n lambda / d_B
};

struct Violation {
  std::size_t first = 0;
  std::size_t second = 0;
  long multiple = 0; // n with sin t - sin t' = n lambda / d_B (l = n M)
  ViolationKind kind = ViolationKind::lattice_multiple;
};

struct PlacementReport {
  std::vector<Violation> violations;
  bool wide_spacing = false; // d_B > lambda/2: grating lobes beyond the printed rules

  bool ok() const { return violations.empty(); }
};

/// Pair check in the sine domain: |sin t - sin t' - n lambda/d_B| < 1e-9.
inline std::optional<Violation> check_pair(double a, double b, double bs_spacing,
                                           double wavelength) {
  const double period = wavelength / bs_spacing;
  const double delta = std::sin(a) - std::sin(b);
  const double n = std::round(delta / period);
  if (std::abs(delta - n * period) >= 1e-9)
    return std::nullopt;
  Violation v;
  v.multiple = static_cast<long>(n);
  if (std::abs(wrap_angle(a - b)) < 1e-9)
    v.kind = ViolationKind::coincident;
  else if (std::abs(wrap_angle(a + b - kPi)) < 1e-9)
    v.kind = ViolationKind::mirror;
  else if (std::abs(std::abs(a) - kPi / 2) < 1e-9 &&
           std::abs(std::abs(b) - kPi / 2) < 1e-9)
    v.kind = ViolationKind::opposite_endfire;
  else
    v.kind = ViolationKind::lattice_multiple;
  return v;
}

inline PlacementReport validate_placement(const std::vector<double> &angles, int M,
                                          double bs_spacing, double wavelength) {
  require(M >= 1 && bs_spacing > 0 && wavelength > 0, "invalid array parameters");
  PlacementReport rep;
  rep.wide_spacing = bs_spacing > 0.5 * wavelength * (1 + 1e-12);
  for (std::size_t i = 0; i < angles.size(); ++i)
    for (std::size_t j = i + 1; j < angles.size(); ++j)
      if (auto v = check_pair(angles[i], angles[j], bs_spacing, wavelength)) {
        v->first = i;
        v->second = j;
        rep.violations.push_back(*v);
      }
  return rep;
}

/// Nearest grid angle (wrap-around distance, ties to the smaller angle) that
/// conflicts with none of the occupied angles.
inline double snap_to_grid(double theta, const AngularGrid &grid,
                           const std::vector<double> &occupied) {
  require(!grid.angles.empty(), "empty angular grid");
  std::vector<std::size_t> order(grid.size());
  std::vector<double> dist(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    order[i] = i;
    dist[i] = std::abs(wrap_angle(grid.angles[i] - theta));
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (std::abs(dist[a] - dist[b]) > 1e-12)
      return dist[a] < dist[b];
    return grid.angles[a] < grid.angles[b];
  });
  for (std::size_t idx : order) {
    const double cand = grid.angles[idx];
    const bool clash = std::any_of(occupied.begin(), occupied.end(), [&](double o) {
      return check_pair(cand, o, grid.bs_spacing, grid.wavelength).has_value();
    });
    if (!clash)
      return cand;
  }
  throw PlacementExhausted("no conflict-free grid angle left for theta = " +
                           std::to_string(theta));
}

/// tr(R_k R_k') / (tr R_k tr R_k'), the normalized E|h_k^H h_k'|^2.
inline double normalized_interference(const CMat &Rk, const CMat &Rkp) {
  require(Rk.rows() == Rkp.rows() && Rk.cols() == Rkp.cols() && Rk.rows() == Rk.cols(),
          "normalized_interference: dimension mismatch");
  const double ta = Rk.trace().real();
  const double tb = Rkp.trace().real();
  require(ta > 0 && tb > 0, "normalized_interference: zero-trace correlation");
  const double cross = Rk.cwiseProduct(Rkp.transpose()).sum().real();
  return std::max(0.0, cross) / (ta * tb);
}

} // namespace rispilot

#endif // RISPILOT_PLACEMENT_HPP
