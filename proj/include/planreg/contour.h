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

#ifndef PLANREG_CONTOUR_H_
#define PLANREG_CONTOUR_H_

#include <numbers>
#include <vector>

#include "planreg/geometry.h"
#include "planreg/mask.h"
#include "planreg/raster.h"

namespace planreg {

// Outer boundary of one 8-connected component, as the closed sequence of cell
// corner lattice points visited by a crack-following walk. Every lattice step
// is emitted, so straight runs contain collinear points; feed the result to
// SimplifyContour() to get a polygon. The ring encloses exactly the
// component's cells plus its holes.
inline std::vector<Point> TraceComponentBoundary(const ComponentLabels& labels,
                                                 int width, int height, int label,
                                                 int start_x, int start_y) {
  auto inside = [&](int cx, int cy) {
    if (cx < 0 || cy < 0 || cx >= width || cy >= height) return false;
    return labels.label[static_cast<std::size_t>(cy) * width + cx] == label;
  };
  // Cell in the quadrant (qx, qy) around lattice vertex (vx, vy).
  auto quadrant = [&](int vx, int vy, int qx, int qy) {
    return inside(qx > 0 ? vx : vx - 1, qy > 0 ? vy : vy - 1);
  };

  std::vector<Point> ring;
  const int x0 = start_x;
  const int y0 = start_y;
  int vx = x0;
  int vy = y0;
  int dx = 1;  // heading east along the top edge; region on the right
  int dy = 0;
  const std::size_t guard = 4 * labels.label.size() + 8;
  do {
    ring.push_back(Point{static_cast<double>(vx), static_cast<double>(vy)});
    vx += dx;
    vy += dy;
    // Left of (dx, dy) is (dy, -dx); right is (-dy, dx).
    const bool ahead_left = quadrant(vx, vy, dx + dy, dy - dx);
    const bool ahead_right = quadrant(vx, vy, dx - dy, dy + dx);
    int ndx = 0;
    int ndy = 0;
    if (ahead_left) {
      ndx = dy;  // turn left; keeps diagonal neighbours connected
      ndy = -dx;
    } else if (ahead_right) {
      ndx = dx;
      ndy = dy;
    } else {
      ndx = -dy;
      ndy = dx;
    }
    dx = ndx;
    dy = ndy;
    if (ring.size() > guard) break;
  } while (!(vx == x0 && vy == y0 && dx == 1 && dy == 0));
  return ring;
}

// One boundary trace per 8-connected component, in row-major order of the
// components' first cells.
inline std::vector<std::vector<Point>> TraceOuterBoundaries(const BinaryMask& mask) {
  const ComponentLabels labels = LabelComponents(mask, Connectivity::kEight);
  std::vector<std::vector<Point>> rings;
  std::vector<bool> seen(labels.area.size(), false);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      const int l = labels.label[mask.Index(x, y)];
      if (l < 0 || seen[l]) continue;
      seen[l] = true;
      rings.push_back(TraceComponentBoundary(labels, mask.width(), mask.height(), l, x, y));
    }
  }
  return rings;
}

// Polygon outlines of every component, simplified to `tolerance` cells.
inline std::vector<Polygon> ExtractOutlines(const BinaryMask& mask, double tolerance) {
  std::vector<Polygon> out;
  for (const auto& ring : TraceOuterBoundaries(mask)) {
    out.push_back(SimplifyContour(ring, tolerance));
  }
  return out;
}

inline constexpr double kCornerTurnRadians = std::numbers::pi / 6.0;  // 30 degrees
inline constexpr double kCornerSimplifyTolerance = 1.0;

// Contour vertices of all occupied regions: dominant points (turn > 30
// degrees) of each simplified outer boundary, in lattice coordinates.
inline std::vector<Point> CornerPoints(const BinaryMask& mask) {
  std::vector<Point> corners;
  for (const Polygon& outline : ExtractOutlines(mask, kCornerSimplifyTolerance)) {
    for (const Point& p : DominantPoints(outline, kCornerTurnRadians)) {
      corners.push_back(p);
    }
  }
  return corners;
}

// Width and height of the occupied cells, counted in whole cells.
inline Box MaskBoundingBox(const BinaryMask& mask) {
  const CellRect r = OccupiedRect(mask);
  if (r.empty()) throw EmptyGeometryError("bounding box of an empty mask");
  return Box{static_cast<double>(r.min_x), static_cast<double>(r.min_y),
             static_cast<double>(r.max_x + 1), static_cast<double>(r.max_y + 1)};
}

}  // namespace planreg

#endif  // PLANREG_CONTOUR_H_
