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

#ifndef PLANREG_SIM_WORLD_H_
#define PLANREG_SIM_WORLD_H_

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "planreg/error.h"
#include "planreg/floorplan.h"
#include "planreg/geometry.h"
#include "planreg/mask.h"
#include "planreg/raster.h"

namespace planreg::sim {

// Robot pose in world cells (y down); heading in radians, measured from +x
// towards +y.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  Point position() const { return Point{x, y}; }
  friend bool operator==(const Pose&, const Pose&) = default;
};

struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline Cell CellOf(Point p) {
  return Cell{static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y))};
}
inline Point CenterOf(Cell c) { return Point{c.x + 0.5, c.y + 0.5}; }

enum class CellState : std::uint8_t { kOutside, kFree, kWall, kOpenDoor, kClosedDoor };

// Blocks LiDAR beams.
inline bool IsOpaque(CellState s) {
  return s == CellState::kWall || s == CellState::kClosedDoor || s == CellState::kOutside;
}
inline bool IsTraversable(CellState s) {
  return s == CellState::kFree || s == CellState::kOpenDoor;
}

class WorldGrid {
 public:
  WorldGrid() = default;
  WorldGrid(int width, int height, CellState fill = CellState::kOutside)
      : width_(width), height_(height), cells_(static_cast<std::size_t>(width) * height, fill) {
    if (width < 0 || height < 0) throw ShapeError("negative grid dimensions");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  bool InBounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  bool InBounds(Cell c) const { return InBounds(c.x, c.y); }
  CellState Get(int x, int y) const { return cells_[Index(x, y)]; }
  CellState Get(Cell c) const { return Get(c.x, c.y); }
  void Set(int x, int y, CellState s) { cells_[Index(x, y)] = s; }
  // Outside the grid counts as opaque.
  bool OpaqueAt(int x, int y) const { return !InBounds(x, y) || IsOpaque(Get(x, y)); }
  bool TraversableAt(int x, int y) const { return InBounds(x, y) && IsTraversable(Get(x, y)); }

  friend bool operator==(const WorldGrid&, const WorldGrid&) = default;

 private:
  std::size_t Index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<CellState> cells_;
};

struct Door {
  std::string id;
  std::string from;
  std::string to;
  Point a;  // plan units
  Point b;
  bool closed = false;
};

struct Target {
  Point position;  // plan units
  std::string room;
};

// Contents of a world file. All coordinates are plan units.
struct WorldSpec {
  FloorPlan plan;
  double resolution_cells_per_unit = 0.1;
  std::vector<Door> doors;
  std::vector<Target> targets;
  Point start;
  double start_heading = 0.0;
};

inline constexpr int kWorldPad = 2;

// Plan units -> world cells: cell = (p - origin) * resolution + pad.
struct WorldFrame {
  Point origin;
  double resolution = 1.0;
  int pad = kWorldPad;

  Point ToCell(Point p) const {
    return Point{(p.x - origin.x) * resolution + pad, (p.y - origin.y) * resolution + pad};
  }
  Point ToPlan(Point c) const {
    return Point{(c.x - pad) / resolution + origin.x, (c.y - pad) / resolution + origin.y};
  }
};

struct World {
  WorldSpec spec;
  WorldFrame frame;
  WorldGrid grid;
  std::vector<int> room_of;  // per cell; -1 for walls, doors and outside

  int RoomAt(Cell c) const {
    if (!grid.InBounds(c)) return -1;
    return room_of[static_cast<std::size_t>(c.y) * grid.width() + c.x];
  }
  Pose StartPose() const {
    const Point p = frame.ToCell(spec.start);
    return Pose{p.x, p.y, spec.start_heading};
  }
  Point TargetCell(std::size_t i) const { return frame.ToCell(spec.targets.at(i).position); }
  std::size_t DoorIndex(std::string_view id) const {
    for (std::size_t i = 0; i < spec.doors.size(); ++i) {
      if (spec.doors[i].id == id) return i;
    }
    throw LookupError("no door with id '" + std::string(id) + "'");
  }
};

namespace internal {

inline bool OnOutline(const Polygon& outline, Point p) {
  return PointRingDistance(p, outline.vertices) <= 1e-6;
}

inline void PaintSegment(WorldGrid& grid, std::vector<int>& room_of, Point a, Point b,
                         CellState state) {
  BinaryMask m(grid.width(), grid.height());
  DrawSegment(m, a, b);
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (!m.Get(x, y)) continue;
      grid.Set(x, y, state);
      room_of[static_cast<std::size_t>(y) * grid.width() + x] = -1;
    }
  }
}

}  // namespace internal

// Rasterizes the world: room interiors free, every room outline a one-cell
// wall, door segments cut into the walls afterwards.
inline World BuildWorld(const WorldSpec& spec) {
  ValidatePlan(spec.plan);
  if (!(spec.resolution_cells_per_unit > 0.0)) {
    throw SchemaError("resolution_cells_per_unit must be > 0");
  }
  World w;
  w.spec = spec;
  const Box ext = spec.plan.Extent();
  w.frame = WorldFrame{Point{ext.min_x, ext.min_y}, spec.resolution_cells_per_unit, kWorldPad};
  const int width = static_cast<int>(std::ceil(ext.width() * w.frame.resolution)) + 2 * kWorldPad + 1;
  const int height = static_cast<int>(std::ceil(ext.height() * w.frame.resolution)) + 2 * kWorldPad + 1;
  w.grid = WorldGrid(width, height, CellState::kOutside);
  w.room_of.assign(static_cast<std::size_t>(width) * height, -1);

  std::vector<std::vector<Point>> rings;
  for (std::size_t r = 0; r < spec.plan.rooms.size(); ++r) {
    std::vector<Point> ring;
    for (const Point& p : spec.plan.rooms[r].outline.vertices) ring.push_back(w.frame.ToCell(p));
    BinaryMask m(width, height);
    FillPolygon(m, ring);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        if (!m.Get(x, y)) continue;
        w.grid.Set(x, y, CellState::kFree);
        w.room_of[static_cast<std::size_t>(y) * width + x] = static_cast<int>(r);
      }
    }
    rings.push_back(std::move(ring));
  }
  for (const auto& ring : rings) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      internal::PaintSegment(w.grid, w.room_of, ring[i], ring[(i + 1) % ring.size()],
                             CellState::kWall);
    }
  }

  std::set<std::string> ids;
  for (const Door& d : spec.doors) {
    if (!ids.insert(d.id).second) throw SchemaError("duplicate door id '" + d.id + "'");
    const Room& from = spec.plan.rooms[spec.plan.IndexOf(d.from)];
    const Room& to = spec.plan.rooms[spec.plan.IndexOf(d.to)];
    for (const Room* r : {&from, &to}) {
      if (!internal::OnOutline(r->outline, d.a) || !internal::OnOutline(r->outline, d.b)) {
        throw SchemaError("door '" + d.id + "' does not lie on the wall of room '" + r->name +
                          "'");
      }
    }
    internal::PaintSegment(w.grid, w.room_of, w.frame.ToCell(d.a), w.frame.ToCell(d.b),
                           d.closed ? CellState::kClosedDoor : CellState::kOpenDoor);
  }

  for (const Target& t : spec.targets) {
    const Cell c = CellOf(w.frame.ToCell(t.position));
    const int room = w.RoomAt(c);
    if (room < 0 || spec.plan.rooms[static_cast<std::size_t>(room)].name != t.room) {
      throw SchemaError("target at (" + std::to_string(t.position.x) + ", " +
                        std::to_string(t.position.y) + ") is not inside room '" + t.room + "'");
    }
  }
  const Cell s = CellOf(w.frame.ToCell(spec.start));
  if (!w.grid.TraversableAt(s.x, s.y)) throw InvalidPoseError("start pose is not in free space");
  return w;
}

// Rooms that cannot be reached from the start cell through free space and
// open doors.
inline std::vector<std::string> UnreachableRooms(const World& w) {
  const int width = w.grid.width();
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(width) * w.grid.height(), 0);
  std::vector<Cell> stack = {CellOf(w.StartPose().position())};
  seen[static_cast<std::size_t>(stack[0].y) * width + stack[0].x] = 1;
  std::vector<bool> reached(w.spec.plan.rooms.size(), false);
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    if (const int r = w.RoomAt(c); r >= 0) reached[static_cast<std::size_t>(r)] = true;
    const Cell next[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
    for (const Cell& n : next) {
      if (!w.grid.TraversableAt(n.x, n.y)) continue;
      std::uint8_t& s = seen[static_cast<std::size_t>(n.y) * width + n.x];
      if (s) continue;
      s = 1;
      stack.push_back(n);
    }
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < reached.size(); ++i) {
    if (!reached[i]) out.push_back(w.spec.plan.rooms[i].name);
  }
  return out;
}

// ---------------------------------------------------------------------------
// World file I/O.

inline WorldSpec WorldSpecFromJson(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("world must be a JSON object");
  try {
    WorldSpec w;
    w.plan = PlanFromJson(doc.at("plan"));
    w.resolution_cells_per_unit = doc.at("resolution_cells_per_unit").get<double>();
    for (const auto& jd : doc.value("doors", nlohmann::json::array())) {
      Door d;
      d.id = jd.at("id").get<std::string>();
      d.from = jd.at("from").get<std::string>();
      d.to = jd.at("to").get<std::string>();
      const auto& seg = jd.at("segment");
      if (!seg.is_array() || seg.size() != 2) {
        throw SchemaError("door '" + d.id + "': segment must hold two points");
      }
      d.a = Point{seg[0].at(0).get<double>(), seg[0].at(1).get<double>()};
      d.b = Point{seg[1].at(0).get<double>(), seg[1].at(1).get<double>()};
      d.closed = jd.value("closed", false);
      w.doors.push_back(std::move(d));
    }
    for (const auto& jt : doc.value("targets", nlohmann::json::array())) {
      w.targets.push_back(
          Target{Point{jt.at("x").get<double>(), jt.at("y").get<double>()},
                 jt.at("room").get<std::string>()});
    }
    const auto& js = doc.at("start");
    w.start = Point{js.at("x").get<double>(), js.at("y").get<double>()};
    w.start_heading = js.value("heading", 0.0);
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("world: ") + e.what());
  }
}

inline WorldSpec ParseWorldSpec(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("line " + std::to_string(planreg::internal::LineOfByte(text, e.byte)) +
                      ": malformed JSON: " + e.what());
  }
  return WorldSpecFromJson(doc);
}

inline nlohmann::json WorldSpecToJson(const WorldSpec& w) {
  nlohmann::json doors = nlohmann::json::array();
  for (const Door& d : w.doors) {
    doors.push_back({{"id", d.id},
                     {"from", d.from},
                     {"to", d.to},
                     {"segment", {{d.a.x, d.a.y}, {d.b.x, d.b.y}}},
                     {"closed", d.closed}});
  }
  nlohmann::json targets = nlohmann::json::array();
  for (const Target& t : w.targets) {
    targets.push_back({{"x", t.position.x}, {"y", t.position.y}, {"room", t.room}});
  }
  return {{"plan", PlanToJson(w.plan)},
          {"resolution_cells_per_unit", w.resolution_cells_per_unit},
          {"doors", doors},
          {"targets", targets},
          {"start", {{"x", w.start.x}, {"y", w.start.y}, {"heading", w.start_heading}}}};
}

}  // namespace planreg::sim

#endif  // PLANREG_SIM_WORLD_H_
