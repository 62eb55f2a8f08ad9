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

#ifndef PLANREG_SIM_OCCUPANCY_H_
#define PLANREG_SIM_OCCUPANCY_H_

#include <cstdint>
#include <vector>

#include "planreg/mask.h"
#include "planreg/pgm.h"
#include "planreg/sim/raycast.h"
#include "planreg/sim/world.h"

namespace planreg::sim {

enum class Occupancy : std::uint8_t { kUnknown, kFree, kOccupied };

class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height)
      : width_(width), height_(height),
        cells_(static_cast<std::size_t>(width) * height, Occupancy::kUnknown) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool InBounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  Occupancy Get(int x, int y) const { return cells_[Index(x, y)]; }
  Occupancy GetOrUnknown(int x, int y) const {
    return InBounds(x, y) ? Get(x, y) : Occupancy::kUnknown;
  }
  void Set(int x, int y, Occupancy v) { cells_[Index(x, y)] = v; }
  const std::vector<Occupancy>& cells() const { return cells_; }

  std::size_t Count(Occupancy v) const {
    std::size_t n = 0;
    for (Occupancy c : cells_) n += (c == v);
    return n;
  }
  std::size_t KnownCount() const { return cells_.size() - Count(Occupancy::kUnknown); }

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

 private:
  std::size_t Index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<Occupancy> cells_;
};

// A beam's range ends on the face of the cell it hit. Its end point is
// pushed half a cell further so that small pose errors do not flip the hit
// into the neighbouring cell.
constexpr double kHitDepth = 0.5;

inline Cell HitCell(const Pose& pose, const Beam& b) {
  return CellOf(Point{pose.x + (b.range + kHitDepth) * std::cos(b.angle),
                      pose.y + (b.range + kHitDepth) * std::sin(b.angle)});
}

// Updates the map with one scan taken at `pose`. Cells a beam passes through
// become free; the cell holding the end point of a beam that hit something
// becomes occupied. Observations overwrite older ones (latest wins); within
// one scan, hits are applied after the free-space pass so a beam grazing a
// freshly seen wall does not erase it. Returns the newly observed obstacles:
// cells that were unknown before the scan and are occupied after it.
inline std::vector<Cell> IntegrateScan(OccupancyGrid& map, const Pose& pose, const Scan& scan) {
  constexpr double kEps = 1e-9;
  const OccupancyGrid before = map;
  for (const Beam& b : scan) {
    WalkRay(pose.position(), b.angle, b.range, [&](Cell c, double t, bool corner) {
      if (corner) return true;
      if (t >= b.range - kEps) return false;
      if (!map.InBounds(c.x, c.y)) return false;
      map.Set(c.x, c.y, Occupancy::kFree);
      return true;
    });
  }
  std::vector<Cell> newly_occupied;
  for (const Beam& b : scan) {
    if (!b.hit) continue;
    const Cell c = HitCell(pose, b);
    if (!map.InBounds(c.x, c.y)) continue;
    if (map.Get(c.x, c.y) == Occupancy::kOccupied) continue;
    map.Set(c.x, c.y, Occupancy::kOccupied);
    if (before.Get(c.x, c.y) == Occupancy::kUnknown) newly_occupied.push_back(c);
  }
  return newly_occupied;
}

// Standard map_server grey levels: occupied 0, free 254, unknown 205.
inline GrayImage OccupancyToGray(const OccupancyGrid& map) {
  GrayImage img(map.width(), map.height(), kPgmUnknown);
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      switch (map.Get(x, y)) {
        case Occupancy::kUnknown: break;
        case Occupancy::kFree: img.at(x, y) = kPgmFree; break;
        case Occupancy::kOccupied: img.at(x, y) = kPgmOccupied; break;
      }
    }
  }
  return img;
}

inline BinaryMask OccupiedMask(const OccupancyGrid& map) {
  BinaryMask m(map.width(), map.height());
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (map.Get(x, y) == Occupancy::kOccupied) m.Set(x, y, true);
    }
  }
  return m;
}

}  // namespace planreg::sim

#endif  // PLANREG_SIM_OCCUPANCY_H_
