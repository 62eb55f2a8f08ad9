/*
 * Copyright 2026 The planreg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PLANREG_SIM_RAYCAST_H_
#define PLANREG_SIM_RAYCAST_H_

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "planreg/error.h"
#include "planreg/sim/world.h"

namespace planreg::sim {

struct Beam {
  double angle = 0.0;  // absolute, radians
  double range = 0.0;  // cells
  bool hit = false;    // false when the beam ran out at max range
  friend bool operator==(const Beam&, const Beam&) = default;
};

using Scan = std::vector<Beam>;

// Grid traversal along a ray (Amanatides-Woo). visit(cell, t_entry, corner)
// is called for the start cell (t = 0) and for every cell the ray enters, in
// order of entry time, until it returns false or t exceeds max_t. When the ray
// passes exactly through a lattice corner, the two side cells it only touches
// are reported with corner = true before the diagonal cell.
//
// Boundary crossing times are recomputed as (boundary - origin) / direction
// rather than accumulated, so they are reproducible by a direct slab test.
template <typename Visit>
void WalkRay(Point origin, double angle, double max_t, Visit&& visit) {
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  Cell c = CellOf(origin);
  if (!visit(c, 0.0, false)) return;
  const int sx = dx > 0 ? 1 : -1;
  const int sy = dy > 0 ? 1 : -1;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  while (true) {
    const double tx = dx != 0.0 ? ((c.x + (sx > 0 ? 1 : 0)) - origin.x) / dx : kInf;
    const double ty = dy != 0.0 ? ((c.y + (sy > 0 ? 1 : 0)) - origin.y) / dy : kInf;
    const double t = std::min(tx, ty);
    if (t > max_t) return;
    if (tx < ty) {
      c.x += sx;
    } else if (ty < tx) {
      c.y += sy;
    } else {
      if (!visit(Cell{c.x + sx, c.y}, t, true)) return;
      if (!visit(Cell{c.x, c.y + sy}, t, true)) return;
      c.x += sx;
      c.y += sy;
    }
    if (!visit(c, t, false)) return;
  }
}

inline double BeamAngle(const Pose& pose, int index, int n_beams) {
  return pose.heading + 2.0 * std::numbers::pi * index / n_beams;
}

// Distance from the pose to the first opaque cell along each of n_beams evenly
// spaced beams, or max_range when nothing is hit.
inline Scan RaycastScan(const WorldGrid& grid, const Pose& pose, int n_beams, double max_range) {
  if (n_beams <= 0) throw Error("n_beams must be > 0");
  const Cell start = CellOf(pose.position());
  if (!std::isfinite(pose.x) || !std::isfinite(pose.y) || grid.OpaqueAt(start.x, start.y)) {
    throw InvalidPoseError("pose (" + std::to_string(pose.x) + ", " + std::to_string(pose.y) +
                           ") is not in free space");
  }
  Scan scan(static_cast<std::size_t>(n_beams));
  for (int k = 0; k < n_beams; ++k) {
    Beam& b = scan[static_cast<std::size_t>(k)];
    b.angle = BeamAngle(pose, k, n_beams);
    b.range = max_range;
    WalkRay(pose.position(), b.angle, max_range, [&](Cell c, double t, bool) {
      if (!grid.OpaqueAt(c.x, c.y)) return true;
      b.range = t;
      b.hit = true;
      return false;
    });
  }
  return scan;
}

inline Point BeamEnd(const Pose& pose, const Beam& b) {
  return Point{pose.x + b.range * std::cos(b.angle), pose.y + b.range * std::sin(b.angle)};
}

// True when the straight segment a-b crosses no opaque cell.
inline bool LineOfSight(const WorldGrid& grid, Point a, Point b) {
  const double len = Distance(a, b);
  if (len == 0.0) return !grid.OpaqueAt(CellOf(a).x, CellOf(a).y);
  const double angle = std::atan2(b.y - a.y, b.x - a.x);
  bool clear = true;
  WalkRay(a, angle, len, [&](Cell c, double, bool) {
    if (grid.OpaqueAt(c.x, c.y)) clear = false;
    return clear;
  });
  return clear;
}

}  // namespace planreg::sim

#endif  // PLANREG_SIM_RAYCAST_H_
