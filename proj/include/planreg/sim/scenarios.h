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

#ifndef PLANREG_SIM_SCENARIOS_H_
#define PLANREG_SIM_SCENARIOS_H_

#include <algorithm>
#include <cstdint>
#include <queue>
#include <string>
#include <vector>

#include "planreg/random.h"
#include "planreg/sim/world.h"
#include "planreg/synthetic.h"

namespace planreg::sim {

// An L-shaped living room with a corridor along its right side. The short
// way to the target in the bedroom runs through the corridor and door
// "d_target", which is closed and cannot be seen from the start; the open
// detour leads up the corridor, along the hall and down into the bedroom.
inline WorldSpec ClosedDoorScenario() {
  WorldSpec w;
  w.plan.units_per_cell = 10.0;
  auto room = [](std::string name, RoomKind kind, std::vector<Point> pts) {
    return Room{std::move(name), kind, Polygon{std::move(pts)}};
  };
  w.plan.rooms = {
      room("living", RoomKind::kLivingRoom,
           {{0, 0}, {600, 0}, {600, 200}, {200, 200}, {200, 450}, {0, 450}}),
      room("study", RoomKind::kOther, {{200, 200}, {600, 200}, {600, 450}, {200, 450}}),
      room("corridor", RoomKind::kOther, {{600, 0}, {700, 0}, {700, 450}, {600, 450}}),
      room("bedroom", RoomKind::kBedroom, {{700, 0}, {1000, 0}, {1000, 450}, {700, 450}}),
      room("hall", RoomKind::kOther, {{0, 450}, {1000, 450}, {1000, 600}, {0, 600}}),
  };
  w.resolution_cells_per_unit = 0.1;
  w.doors = {
      Door{"d_corridor", "living", "corridor", {600, 60}, {600, 140}, false},
      Door{"d_target", "corridor", "bedroom", {700, 300}, {700, 360}, true},
      Door{"d_corridor_hall", "corridor", "hall", {620, 450}, {680, 450}, false},
      Door{"d_study", "study", "hall", {380, 450}, {440, 450}, false},
      Door{"d_bedroom", "bedroom", "hall", {820, 450}, {880, 450}, false},
  };
  w.targets = {Target{{850, 150}, "bedroom"}};
  w.start = Point{100, 100};
  w.start_heading = 0.0;
  return w;
}

struct WorldGenConfig {
  int rooms = 5;
  double resolution = 0.1;
  double door_width = 60.0;    // plan units
  double extra_door_p = 0.3;   // chance of a door on a non-tree adjacency
  int targets = 1;
  double target_margin = 60.0; // plan units from any wall
};

namespace internal {

struct SharedWall {
  std::size_t a = 0, b = 0;
  Point p, q;  // overlap segment
};

inline std::vector<SharedWall> SharedWalls(const FloorPlan& plan) {
  std::vector<SharedWall> out;
  for (std::size_t i = 0; i < plan.rooms.size(); ++i) {
    const Box bi = BoundingBox(plan.rooms[i].outline);
    for (std::size_t j = i + 1; j < plan.rooms.size(); ++j) {
      const Box bj = BoundingBox(plan.rooms[j].outline);
      const double oy0 = std::max(bi.min_y, bj.min_y), oy1 = std::min(bi.max_y, bj.max_y);
      const double ox0 = std::max(bi.min_x, bj.min_x), ox1 = std::min(bi.max_x, bj.max_x);
      if (oy1 > oy0 && (bi.max_x == bj.min_x || bj.max_x == bi.min_x)) {
        const double x = bi.max_x == bj.min_x ? bi.max_x : bi.min_x;
        out.push_back(SharedWall{i, j, {x, oy0}, {x, oy1}});
      } else if (ox1 > ox0 && (bi.max_y == bj.min_y || bj.max_y == bi.min_y)) {
        const double y = bi.max_y == bj.min_y ? bi.max_y : bi.min_y;
        out.push_back(SharedWall{i, j, {ox0, y}, {ox1, y}});
      }
    }
  }
  return out;
}

inline Point RandomInterior(const Box& b, double margin, Rng& rng) {
  return Point{std::round(rng.Uniform(b.min_x + margin, b.max_x - margin)),
               std::round(rng.Uniform(b.min_y + margin, b.max_y - margin))};
}

}  // namespace internal

// Random multi-room world built on a synthetic rectilinear plan: a door on a
// spanning tree of the room adjacency (grown from the living room) plus
// random extra doors, all open; the robot starts in the living room and the
// targets sit in other rooms.
inline WorldSpec GenerateWorld(Rng& rng, const WorldGenConfig& cfg = {}) {
  PlanGenConfig pc;
  pc.rooms = cfg.rooms;
  for (int attempt = 0; attempt < 100; ++attempt) {
    WorldSpec w;
    w.plan = GenerateRectilinearPlan(rng, pc);
    w.resolution_cells_per_unit = cfg.resolution;
    const std::size_t n = w.plan.rooms.size();
    std::vector<internal::SharedWall> walls;
    for (const auto& s : internal::SharedWalls(w.plan)) {
      if (Distance(s.p, s.q) >= cfg.door_width + 2 * 40.0) walls.push_back(s);
    }
    // Spanning tree by breadth-first search from the living room.
    const std::size_t living = w.plan.LivingRoomIndex();
    std::vector<bool> in_tree(n, false);
    std::vector<bool> used(walls.size(), false);
    std::queue<std::size_t> q;
    q.push(living);
    in_tree[living] = true;
    while (!q.empty()) {
      const std::size_t r = q.front();
      q.pop();
      for (std::size_t k = 0; k < walls.size(); ++k) {
        const auto& s = walls[k];
        if (s.a != r && s.b != r) continue;
        const std::size_t o = s.a == r ? s.b : s.a;
        if (in_tree[o]) continue;
        in_tree[o] = true;
        used[k] = true;
        q.push(o);
      }
    }
    if (!std::all_of(in_tree.begin(), in_tree.end(), [](bool b) { return b; })) continue;
    for (std::size_t k = 0; k < walls.size(); ++k) {
      if (!used[k] && rng.Uniform() < cfg.extra_door_p) used[k] = true;
    }
    for (std::size_t k = 0; k < walls.size(); ++k) {
      if (!used[k]) continue;
      const auto& s = walls[k];
      const double len = Distance(s.p, s.q);
      const double off = std::round(rng.Uniform(40.0, len - 40.0 - cfg.door_width));
      const Point dir = (s.q - s.p) * (1.0 / len);
      w.doors.push_back(Door{"d" + std::to_string(w.doors.size()), w.plan.rooms[s.a].name,
                             w.plan.rooms[s.b].name, s.p + dir * off,
                             s.p + dir * (off + cfg.door_width), false});
    }
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != living) others.push_back(i);
    }
    for (int t = 0; t < cfg.targets; ++t) {
      const std::size_t r = others[rng.UniformInt(0, static_cast<std::int64_t>(others.size()) - 1)];
      w.targets.push_back(Target{
          internal::RandomInterior(BoundingBox(w.plan.rooms[r].outline), cfg.target_margin, rng),
          w.plan.rooms[r].name});
    }
    w.start = internal::RandomInterior(BoundingBox(w.plan.rooms[living].outline), 80.0, rng);
    w.start_heading = 0.0;
    return w;
  }
  throw Error("could not generate a connected world");
}

// The fixed evaluation set: five seeded worlds with at least five rooms.
inline std::vector<WorldSpec> SeededWorlds(std::uint32_t seed = 1, int count = 5) {
  std::vector<WorldSpec> out;
  for (int i = 0; i < count; ++i) {
    Rng rng{seed, static_cast<std::uint32_t>(i), 0x57u};
    WorldGenConfig cfg;
    cfg.rooms = 5 + i % 2;
    out.push_back(GenerateWorld(rng, cfg));
  }
  return out;
}

}  // namespace planreg::sim

#endif  // PLANREG_SIM_SCENARIOS_H_
