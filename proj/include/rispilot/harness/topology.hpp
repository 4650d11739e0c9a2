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

#ifndef RISPILOT_HARNESS_TOPOLOGY_HPP
#define RISPILOT_HARNESS_TOPOLOGY_HPP

#include "rispilot/channels.hpp"
#include "rispilot/estimation.hpp"
#include "rispilot/harness/config.hpp"
#include "rispilot/placement.hpp"

namespace rispilot::harness {

using Point = Eigen::Vector2d;

struct Scenario {
  std::vector<Point> ue_positions;
  std::vector<RisLink> ris_links; // ris_links[r-1] for RIS r
  std::vector<UeLink> ue_links;
  Association association;
  PilotAssignment pilots;

  int num_ues() const { return static_cast<int>(ue_positions.size()); }
  int num_ris() const { return static_cast<int>(ris_links.size()); }

  std::vector<double> ris_angles() const {
    std::vector<double> out;
    for (const auto &l : ris_links)
      out.push_back(l.bs_aoa);
    return out;
  }
};

enum class Layout {
  sectors,   // K_0 and the RISs on regularly spaced sectors
  random_ris // one UE per RIS, RIS azimuths ~ U[0, 2 pi), no direct-only UEs
};

namespace detail {

inline Point uniform_in_disk(const Point &center, double radius, Rng &rng) {
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  const double r = radius * std::sqrt(ud(rng));
  const double a = 2.0 * kPi * ud(rng);
  return center + Point(r * std::cos(a), r * std::sin(a));
}

inline Point polar_point(double distance, double angle) {
  return {distance * std::cos(angle), distance * std::sin(angle)};
}

/// Sizes of K_0..K_R: K spread as evenly as possible, earlier sets first.
inline std::vector<int> set_sizes(int K, int sets) {
  std::vector<int> sizes(static_cast<std::size_t>(sets), K / sets);
  for (int i = 0; i < K % sets; ++i)
    ++sizes[static_cast<std::size_t>(i)];
  return sizes;
}

} // namespace detail

/// Places UEs and RISs, builds the association and the pilot assignment.
///
/// sectors: sector n (n = 0..R) is centered at azimuth (n + 1/2) 2 pi / (R + 1);
/// sector 0 holds K_0, whose UEs are uniform in a disk of radius 0.1 d_c
/// centered 0.6 d_c from the BS. RIS r sits 0.8 d_c out on sector r (snapped to
/// the optimized grid when cfg.snap_ris) and its UEs are uniform in a disk of
/// radius 0.1 d_c centered 0.2 d_c beyond the RIS on the BS-RIS ray.
///
/// random_ris: R RISs at U[0, 2 pi) azimuths (optionally snapped), one UE each.
/// All random draws happen before snapping, so a snapped and an unsnapped
/// build from equal RNG states share every draw.
inline Scenario build_topology(const SystemConfig &cfg, Rng &rng,
                               Layout layout = Layout::sectors) {
  cfg.validate();
  const double dc = cfg.cell_radius;
  const int R = cfg.ris_count;
  const ArrayGeometry geom = cfg.geometry();
  std::uniform_real_distribution<double> ud(0.0, 1.0);

  Scenario sc;
  std::vector<double> raw_angles;
  std::vector<int> sizes;
  double direct_center_angle = 0;
  if (layout == Layout::sectors) {
    const double width = 2.0 * kPi / (R + 1);
    direct_center_angle = 0.5 * width;
    for (int r = 1; r <= R; ++r)
      raw_angles.push_back(wrap_angle((r + 0.5) * width));
    sizes = detail::set_sizes(cfg.ues, R + 1);
  } else {
    if (R < 1)
      throw InvalidArgument("random_ris layout needs at least one RIS");
    for (int r = 1; r <= R; ++r)
      raw_angles.push_back(wrap_angle(2.0 * kPi * ud(rng)));
    sizes.assign(static_cast<std::size_t>(R + 1), 1);
    sizes[0] = 0;
  }
  for (int s : sizes)
    if (s > cfg.pilots)
      throw InfeasibleSchedule("topology puts " + std::to_string(s) +
                               " UEs on one RIS but only " +
                               std::to_string(cfg.pilots) + " pilots exist");

  // Disk offsets, drawn in a fixed order independent of snapping.
  std::vector<std::vector<Point>> offsets(sizes.size());
  for (std::size_t r = 0; r < sizes.size(); ++r)
    for (int i = 0; i < sizes[r]; ++i)
      offsets[r].push_back(detail::uniform_in_disk(Point::Zero(), 0.1 * dc, rng));

  std::vector<double> angles = raw_angles;
  if (cfg.snap_ris && R > 0) {
    const AngularGrid grid =
        build_angle_grid(geom.bs_antennas, geom.bs_spacing, geom.wavelength);
    std::vector<double> occupied;
    for (double &a : angles) {
      a = snap_to_grid(a, grid, occupied);
      occupied.push_back(a);
    }
  }

  int next_ue = 0;
  sc.association.sets.assign(sizes.size(), {});
  auto place = [&](std::size_t set, const Point &center, int ris) {
    for (const Point &off : offsets[set]) {
      const Point p = center + off;
      UeLink link;
      link.bs_distance = p.norm();
      link.bs_aoa = std::atan2(p.y(), p.x());
      if (ris > 0) {
        const Point rp = detail::polar_point(0.8 * dc, angles[static_cast<std::size_t>(ris - 1)]);
        link.ris_distance = (p - rp).norm();
      } else {
        link.ris_distance = 0;
      }
      sc.ue_positions.push_back(p);
      sc.ue_links.push_back(link);
      sc.association.sets[set].push_back(next_ue++);
    }
  };
  place(0, detail::polar_point(0.6 * dc, direct_center_angle), 0);
  for (int r = 1; r <= R; ++r) {
    const double a = angles[static_cast<std::size_t>(r - 1)];
    RisLink link;
    link.distance = 0.8 * dc;
    link.bs_aoa = a;
    link.aod_azimuth = cfg.ris_aod_azimuth;
    link.aod_elevation = cfg.ris_aod_elevation;
    sc.ris_links.push_back(link);
    place(static_cast<std::size_t>(r), detail::polar_point(1.0 * dc, a), r);
  }
  sc.pilots = assign_pilots(sc.association, cfg.pilots);
  return sc;
}

} // namespace rispilot::harness

#endif // RISPILOT_HARNESS_TOPOLOGY_HPP
