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

#ifndef PLANREG_FLOORPLAN_H_
#define PLANREG_FLOORPLAN_H_

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "planreg/error.h"
#include "planreg/geometry.h"
#include "planreg/mask.h"
#include "planreg/raster.h"

namespace planreg {

enum class RoomKind { kLivingRoom, kBedroom, kOther };

inline std::string_view RoomKindName(RoomKind k) {
  switch (k) {
    case RoomKind::kLivingRoom: return "living_room";
    case RoomKind::kBedroom: return "bedroom";
    case RoomKind::kOther: return "other";
  }
  return "other";
}

struct Room {
  std::string name;
  RoomKind kind = RoomKind::kOther;
  Polygon outline;  // plan units, y down

  friend bool operator==(const Room&, const Room&) = default;
};

struct FloorPlan {
  double units_per_cell = 1.0;
  std::vector<Room> rooms;

  std::size_t LivingRoomIndex() const {
    for (std::size_t i = 0; i < rooms.size(); ++i) {
      if (rooms[i].kind == RoomKind::kLivingRoom) return i;
    }
    throw SchemaError("floor plan has no living_room");
  }

  std::size_t IndexOf(std::string_view name) const {
    for (std::size_t i = 0; i < rooms.size(); ++i) {
      if (rooms[i].name == name) return i;
    }
    throw LookupError("no room named '" + std::string(name) + "'");
  }

  Box Extent() const {
    std::vector<Point> all;
    for (const Room& r : rooms) {
      all.insert(all.end(), r.outline.vertices.begin(), r.outline.vertices.end());
    }
    return BoundingBox(all);
  }

  double TotalArea() const {
    double a = 0.0;
    for (const Room& r : rooms) a += ShoelaceArea(r.outline);
    return a;
  }

  friend bool operator==(const FloorPlan&, const FloorPlan&) = default;
};

namespace internal {

inline int LineOfByte(std::string_view text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

inline RoomKind ParseRoomKind(const std::string& s, const std::string& room) {
  if (s == "living_room") return RoomKind::kLivingRoom;
  if (s == "bedroom") return RoomKind::kBedroom;
  if (s == "other") return RoomKind::kOther;
  throw SchemaError("room '" + room + "': unknown kind '" + s + "'");
}

}  // namespace internal

// Checks the structural invariants of a plan: at least one room, unique
// names, exactly one living room, simple outlines, positive scale.
inline void ValidatePlan(const FloorPlan& plan) {
  if (!(plan.units_per_cell > 0.0)) throw SchemaError("units_per_cell must be > 0");
  if (plan.rooms.empty()) throw SchemaError("floor plan has no rooms");
  std::set<std::string> names;
  int living = 0;
  for (const Room& r : plan.rooms) {
    if (r.name.empty()) throw SchemaError("room with empty name");
    if (!names.insert(r.name).second) throw SchemaError("duplicate room name '" + r.name + "'");
    if (r.kind == RoomKind::kLivingRoom) ++living;
    try {
      ValidatePolygon(r.outline);
    } catch (const InvalidPolygonError& e) {
      throw SchemaError("room '" + r.name + "': " + e.what());
    }
    if (!IsSimplePolygon(r.outline)) {
      throw SchemaError("room '" + r.name + "': outline is not a simple polygon");
    }
  }
  if (living != 1) {
    throw SchemaError("floor plan needs exactly one living_room, found " +
                      std::to_string(living));
  }
}

inline FloorPlan PlanFromJson(const nlohmann::json& doc) {
  using nlohmann::json;
  if (!doc.is_object()) throw SchemaError("floor plan must be a JSON object");
  if (!doc.contains("rooms")) throw SchemaError("floor plan is missing \"rooms\"");
  if (!doc.contains("units_per_cell")) {
    throw SchemaError("floor plan is missing \"units_per_cell\"");
  }
  if (!doc["units_per_cell"].is_number()) throw SchemaError("\"units_per_cell\" must be a number");
  if (!doc["rooms"].is_array()) throw SchemaError("\"rooms\" must be an array");

  FloorPlan plan;
  plan.units_per_cell = doc["units_per_cell"].get<double>();
  for (const json& jr : doc["rooms"]) {
    if (!jr.is_object()) throw SchemaError("room entries must be objects");
    if (!jr.contains("name") || !jr["name"].is_string()) {
      throw SchemaError("room is missing a string \"name\"");
    }
    Room room;
    room.name = jr["name"].get<std::string>();
    if (!jr.contains("kind") || !jr["kind"].is_string()) {
      throw SchemaError("room '" + room.name + "': missing string \"kind\"");
    }
    room.kind = internal::ParseRoomKind(jr["kind"].get<std::string>(), room.name);
    if (!jr.contains("corners") || !jr["corners"].is_array()) {
      throw SchemaError("room '" + room.name + "': missing \"corners\" array");
    }
    for (const json& c : jr["corners"]) {
      if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
        throw SchemaError("room '" + room.name + "': corners must be [x, y] number pairs");
      }
      room.outline.vertices.push_back(Point{c[0].get<double>(), c[1].get<double>()});
    }
    plan.rooms.push_back(std::move(room));
  }
  ValidatePlan(plan);
  return plan;
}

// Parses the floor-plan JSON document. Errors carry the line number for
// syntax problems and the room name for schema problems.
inline FloorPlan ParsePlan(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("line " + std::to_string(internal::LineOfByte(json_text, e.byte)) +
                      ": malformed JSON: " + e.what());
  }
  return PlanFromJson(doc);
}

inline nlohmann::json PlanToJson(const FloorPlan& plan) {
  nlohmann::json rooms = nlohmann::json::array();
  for (const Room& r : plan.rooms) {
    nlohmann::json corners = nlohmann::json::array();
    for (const Point& p : r.outline.vertices) corners.push_back({p.x, p.y});
    rooms.push_back({{"name", r.name},
                     {"kind", std::string(RoomKindName(r.kind))},
                     {"corners", corners}});
  }
  return {{"units_per_cell", plan.units_per_cell}, {"rooms", rooms}};
}

inline std::string SerializePlan(const FloorPlan& plan) { return PlanToJson(plan).dump(2); }

// ---------------------------------------------------------------------------
// Room-subset variants.

inline constexpr std::size_t kMaxCombinableRooms = 12;

// Every set "living room + S" for S a subset of the other rooms. Subsets are
// ordered by size, then lexicographically by their sorted room names; the
// living room is listed first in each set.
inline std::vector<std::vector<std::string>> VariantRoomSets(const FloorPlan& plan) {
  const std::size_t living = plan.LivingRoomIndex();
  std::vector<std::string> others;
  for (std::size_t i = 0; i < plan.rooms.size(); ++i) {
    if (i != living) others.push_back(plan.rooms[i].name);
  }
  if (others.size() > kMaxCombinableRooms) {
    throw LimitError("variant enumeration refused: " + std::to_string(others.size()) +
                     " combinable rooms exceeds the limit of " +
                     std::to_string(kMaxCombinableRooms));
  }
  std::sort(others.begin(), others.end());
  const std::size_t n = others.size();
  std::vector<std::vector<std::string>> sets;
  sets.reserve(std::size_t{1} << n);
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k <= n; ++k) {
    // Lexicographic k-combinations of sorted names.
    idx.resize(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::vector<std::string> set = {plan.rooms[living].name};
      for (std::size_t i : idx) set.push_back(others[i]);
      sets.push_back(std::move(set));
      if (k == 0) break;
      std::size_t pos = k;
      while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return sets;
}

// Affine map from plan units to raster cells: cell = (p - origin) * scale + offset.
struct PlanFrame {
  Point origin;
  double scale_x = 1.0;
  double scale_y = 1.0;
  Point offset;

  Point ToCell(Point p) const {
    return Point{(p.x - origin.x) * scale_x + offset.x, (p.y - origin.y) * scale_y + offset.y};
  }
  std::vector<Point> ToCells(const Polygon& poly) const {
    std::vector<Point> out;
    out.reserve(poly.size());
    for (const Point& p : poly.vertices) out.push_back(ToCell(p));
    return out;
  }
};

// Uniform scale that fits the plan extent into out_w x out_h, anchored at the
// top-left corner.
inline PlanFrame FitFrame(const Box& extent, int out_w, int out_h) {
  if (out_w <= 0 || out_h <= 0) throw ShapeError("render size must be positive");
  const double sx = extent.width() > 0 ? out_w / extent.width() : 1.0;
  const double sy = extent.height() > 0 ? out_h / extent.height() : 1.0;
  const double s = std::min(sx, sy);
  return PlanFrame{Point{extent.min_x, extent.min_y}, s, s, Point{0.0, 0.0}};
}

inline BinaryMask RenderRooms(const FloorPlan& plan, const std::vector<std::size_t>& rooms,
                              const PlanFrame& frame, int out_w, int out_h) {
  BinaryMask mask(out_w, out_h);
  for (std::size_t i : rooms) FillPolygon(mask, frame.ToCells(plan.rooms.at(i).outline));
  return mask;
}

inline std::vector<std::size_t> RoomIndices(const FloorPlan& plan,
                                            const std::vector<std::string>& names) {
  std::vector<std::size_t> idx;
  idx.reserve(names.size());
  for (const std::string& n : names) idx.push_back(plan.IndexOf(n));
  return idx;
}

// Union of the filled outlines of `included`, framed by the whole plan so that
// all variants of one plan share a frame.
inline BinaryMask RenderVariant(const FloorPlan& plan, const std::vector<std::string>& included,
                                int out_w, int out_h) {
  const PlanFrame frame = FitFrame(plan.Extent(), out_w, out_h);
  return RenderRooms(plan, RoomIndices(plan, included), frame, out_w, out_h);
}

struct PlanVariant {
  std::vector<std::string> included;
  BinaryMask mask;
};

inline constexpr int kVariantRenderSize = 400;

inline std::vector<PlanVariant> EnumerateVariants(const FloorPlan& plan,
                                                  int render_size = kVariantRenderSize) {
  const PlanFrame frame = FitFrame(plan.Extent(), render_size, render_size);
  std::vector<BinaryMask> room_masks;
  room_masks.reserve(plan.rooms.size());
  for (std::size_t i = 0; i < plan.rooms.size(); ++i) {
    room_masks.push_back(RenderRooms(plan, {i}, frame, render_size, render_size));
  }
  std::vector<PlanVariant> variants;
  for (auto& set : VariantRoomSets(plan)) {
    BinaryMask mask(render_size, render_size);
    for (std::size_t i : RoomIndices(plan, set)) mask = Union(mask, room_masks[i]);
    variants.push_back(PlanVariant{std::move(set), std::move(mask)});
  }
  return variants;
}

}  // namespace planreg

#endif  // PLANREG_FLOORPLAN_H_
