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

#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <set>

#include "gtest/gtest.h"
#include "planreg/random.h"
#include "planreg/sim/localize.h"
#include "planreg/sim/motion.h"
#include "planreg/sim/occupancy.h"
#include "planreg/sim/planner.h"
#include "planreg/sim/raycast.h"
#include "planreg/sim/scenarios.h"
#include "planreg/sim/world.h"

namespace planreg::sim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

WorldGrid RandomGrid(Rng& rng, int w, int h, double p_wall) {
  WorldGrid g(w, h, CellState::kFree);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (rng.Uniform() < p_wall) g.Set(x, y, CellState::kWall);
    }
  }
  return g;
}

// Entry distance of the ray into the unit box of cell (cx, cy), by slabs.
double SlabEntry(Point o, double dx, double dy, int cx, int cy) {
  double t0 = -kInf, t1 = kInf;
  const double lo[2] = {static_cast<double>(cx), static_cast<double>(cy)};
  const double org[2] = {o.x, o.y};
  const double dir[2] = {dx, dy};
  for (int a = 0; a < 2; ++a) {
    if (dir[a] == 0.0) {
      if (org[a] < lo[a] || org[a] >= lo[a] + 1.0) return kInf;
      continue;
    }
    double ta = (lo[a] - org[a]) / dir[a];
    double tb = (lo[a] + 1.0 - org[a]) / dir[a];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  if (t0 > t1 || t1 < 0.0) return kInf;
  return std::max(t0, 0.0);
}

TEST(RaycastTest, MatchesSlabOracle) {
  Rng rng(17);
  const int w = 40, h = 30;
  for (int trial = 0; trial < 30; ++trial) {
    WorldGrid g = RandomGrid(rng, w, h, 0.08);
    Pose pose{rng.Uniform(1.0, w - 1.0), rng.Uniform(1.0, h - 1.0), rng.Uniform(-3.0, 3.0)};
    const Cell c = CellOf(pose.position());
    g.Set(c.x, c.y, CellState::kFree);
    const double max_range = 25.0;
    const Scan scan = RaycastScan(g, pose, 90, max_range);
    for (const Beam& b : scan) {
      const double dx = std::cos(b.angle), dy = std::sin(b.angle);
      double best = kInf;
      for (int y = -1; y <= h; ++y) {
        for (int x = -1; x <= w; ++x) {
          if (!g.OpaqueAt(x, y)) continue;
          best = std::min(best, SlabEntry(pose.position(), dx, dy, x, y));
        }
      }
      if (best <= max_range) {
        ASSERT_TRUE(b.hit);
        ASSERT_NEAR(b.range, best, 1e-9);
      } else {
        ASSERT_FALSE(b.hit);
        ASSERT_EQ(b.range, max_range);
      }
    }
  }
}

TEST(RaycastTest, StartInWallThrows) {
  WorldGrid g(5, 5, CellState::kWall);
  EXPECT_THROW(RaycastScan(g, Pose{2.5, 2.5, 0}, 8, 10), InvalidPoseError);
}

TEST(RaycastTest, ClosedDoorBlocksOpenDoorDoesNot) {
  WorldGrid g(10, 3, CellState::kFree);
  g.Set(5, 1, CellState::kClosedDoor);
  const Scan closed = RaycastScan(g, Pose{1.5, 1.5, 0}, 4, 20);
  EXPECT_NEAR(closed[0].range, 3.5, 1e-12);
  g.Set(5, 1, CellState::kOpenDoor);
  const Scan open = RaycastScan(g, Pose{1.5, 1.5, 0}, 4, 20);
  EXPECT_NEAR(open[0].range, 8.5, 1e-12);
  EXPECT_TRUE(LineOfSight(g, {1.5, 1.5}, {8.5, 1.5}));
}

// Textbook Dijkstra over the same move model.
std::vector<double> OracleDistances(const CostGrid& g, Cell from) {
  const int w = g.width(), h = g.height();
  std::vector<double> dist(static_cast<std::size_t>(w) * h, kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[from.y * w + from.x] = 0.0;
  pq.push({0.0, from.y * w + from.x});
  while (!pq.empty()) {
    auto [d, i] = pq.top();
    pq.pop();
    if (d > dist[i]) continue;
    const Cell a{i % w, i / w};
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const Cell b{a.x + dx, a.y + dy};
        if (!g.InBounds(b.x, b.y)) continue;
        const double c = MoveCost(g, a, b);
        if (c < 0.0) continue;
        const int j = b.y * w + b.x;
        if (d + c < dist[j]) {
          dist[j] = d + c;
          pq.push({dist[j], j});
        }
      }
    }
  }
  return dist;
}

TEST(PlannerTest, AStarCostEqualsDijkstraOracle) {
  Rng rng(23);
  int compared = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int w = 30, h = 25;
    CostGrid g(w, h, 1.0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double u = rng.Uniform();
        if (u < 0.2) g.Set(x, y, 0.0);
        else if (u < 0.4) g.Set(x, y, rng.Uniform(1.0, 5.0));
      }
    }
    const Cell from{static_cast<int>(rng.UniformInt(0, w - 1)),
                    static_cast<int>(rng.UniformInt(0, h - 1))};
    const Cell to{static_cast<int>(rng.UniformInt(0, w - 1)),
                  static_cast<int>(rng.UniformInt(0, h - 1))};
    g.Set(from.x, from.y, 1.0);
    g.Set(to.x, to.y, 1.0);
    const std::vector<double> oracle = OracleDistances(g, from);
    const std::vector<Cell> path = PlanPath(g, from, to);
    const double want = oracle[to.y * w + to.x];
    if (want == kInf) {
      EXPECT_TRUE(path.empty());
      continue;
    }
    ASSERT_FALSE(path.empty());
    EXPECT_EQ(path.front(), from);
    EXPECT_EQ(path.back(), to);
    EXPECT_NEAR(PathCost(g, path), want, 1e-9);
    ++compared;
  }
  EXPECT_GT(compared, 20);
}

TEST(PlannerTest, StraightCorridorLength) {
  CostGrid g(20, 3, 1.0);
  const auto path = PlanPath(g, {1, 1}, {15, 1});
  EXPECT_DOUBLE_EQ(PathLength(path), 14.0);
}

TEST(PlannerTest, ClosedDoorWithoutAlternativeIsUnreachable) {
  CostGrid g(9, 5, 1.0);
  for (int y = 0; y < 5; ++y) g.Set(4, y, 0.0);
  EXPECT_TRUE(PlanPath(g, {1, 2}, {7, 2}).empty());
}

TEST(PlannerTest, BlockedEndpointsThrow) {
  CostGrid g(5, 5, 1.0);
  g.Set(0, 0, 0.0);
  EXPECT_THROW(PlanPath(g, {0, 0}, {4, 4}), InvalidEndpointError);
  EXPECT_THROW(PlanPath(g, {4, 4}, {0, 0}), InvalidEndpointError);
}

BinaryMask StructuredMap(int w, int h) {
  BinaryMask m(w, h);
  Rng rng(31);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x == 5 || y == 7 || x == w - 6 || (y == h - 9 && x < w / 2)) m.Set(x, y, true);
      if (rng.Uniform() < 0.02) m.Set(x, y, true);
    }
  }
  return m;
}

BinaryMask PatchAt(const BinaryMask& map, Point centre, int r) {
  BinaryMask patch(2 * r + 1, 2 * r + 1);
  const Cell o = PatchOrigin(centre, r);
  for (int j = 0; j < patch.height(); ++j) {
    for (int i = 0; i < patch.width(); ++i) patch.Set(i, j, map.GetOr0(o.x + i, o.y + j));
  }
  return patch;
}

TEST(LocalizeTest, ZeroCorrectionAtTruePose) {
  const BinaryMask map = StructuredMap(60, 50);
  const Pose truth{30.5, 25.5, 0.3};
  const LocalizeResult r = Localize(PatchAt(map, truth.position(), 12), map, truth, 5.0);
  EXPECT_EQ(r.dx, 0);
  EXPECT_EQ(r.dy, 0);
  EXPECT_EQ(r.pose, truth);
}

TEST(LocalizeTest, RecoversPlantedOffset) {
  const BinaryMask map = StructuredMap(60, 50);
  const Pose truth{30.5, 25.5, 0.0};
  const BinaryMask patch = PatchAt(map, truth.position(), 12);
  const Pose prior{truth.x + 3, truth.y + 2, 0.0};
  const LocalizeResult r = Localize(patch, map, prior, 5.0);
  EXPECT_EQ(r.dx, -3);
  EXPECT_EQ(r.dy, -2);
  EXPECT_DOUBLE_EQ(r.pose.x, truth.x);
  EXPECT_DOUBLE_EQ(r.pose.y, truth.y);
}

TEST(LocalizeTest, EmptyPatchFails) {
  const BinaryMask map = StructuredMap(40, 40);
  EXPECT_THROW(Localize(BinaryMask(11, 11), map, Pose{20, 20, 0}, 3.0), LocalizationError);
}

TEST(LocalizeTest, FeaturelessPatchFails) {
  BinaryMask full(40, 40);
  for (auto& c : full.mutable_cells()) c = 1;
  BinaryMask patch(11, 11);
  for (auto& c : patch.mutable_cells()) c = 1;
  EXPECT_THROW(Localize(patch, full, Pose{20, 20, 0}, 3.0), LocalizationError);
}

TEST(LocalizeTest, EvenPatchIsShapeError) {
  EXPECT_THROW(Localize(BinaryMask(10, 10), BinaryMask(20, 20), Pose{}, 1.0), ShapeError);
}

TEST(MotionTest, NoiselessUnicycle) {
  MotionConfig cfg;
  cfg.noise_sigma_xy = 0.0;
  Rng rng(1);
  const Pose p = StepMotion(Pose{0, 0, 0}, Control{1, 0}, 1.0, cfg, rng);
  EXPECT_DOUBLE_EQ(p.x, 1.0);
  EXPECT_DOUBLE_EQ(p.y, 0.0);
  const Pose q = StepMotion(Pose{2, 3, 0}, Control{0, 0.5}, 1.0, cfg, rng);
  EXPECT_DOUBLE_EQ(q.x, 2.0);
  EXPECT_DOUBLE_EQ(q.y, 3.0);
  EXPECT_DOUBLE_EQ(q.heading, 0.5);
  EXPECT_THROW(StepMotion(Pose{}, Control{}, 0.0, cfg, rng), Error);
}

TEST(MotionTest, NoisyMeanWithinThreeStandardErrors) {
  MotionConfig cfg;
  cfg.noise_sigma_xy = 0.05;
  cfg.noise_sigma_heading = 0.01;
  Rng rng(99);
  const int n = 10000;
  const Pose start{1.0, 2.0, 0.7};
  const Control u{3.0, 0.2};
  double sx = 0.0, sy = 0.0, sh = 0.0;
  for (int i = 0; i < n; ++i) {
    const Pose p = StepMotion(start, u, 0.1, cfg, rng);
    sx += p.x;
    sy += p.y;
    sh += p.heading;
  }
  MotionConfig exact = cfg;
  exact.noise_sigma_xy = 0.0;
  exact.noise_sigma_heading = 0.0;
  Rng unused(0);
  const Pose want = StepMotion(start, u, 0.1, exact, unused);
  const double se_xy = 3.0 * cfg.noise_sigma_xy / std::sqrt(n);
  EXPECT_NEAR(sx / n, want.x, se_xy);
  EXPECT_NEAR(sy / n, want.y, se_xy);
  EXPECT_NEAR(sh / n, want.heading, 3.0 * cfg.noise_sigma_heading / std::sqrt(n));
}

TEST(MotionTest, ValidateRejectsNegativeSigma) {
  MotionConfig cfg;
  cfg.noise_sigma_xy = -1.0;
  EXPECT_THROW(cfg.Validate(), Error);
}

WorldGrid Box(int w, int h) {
  WorldGrid g(w, h, CellState::kFree);
  for (int x = 0; x < w; ++x) {
    g.Set(x, 0, CellState::kWall);
    g.Set(x, h - 1, CellState::kWall);
  }
  for (int y = 0; y < h; ++y) {
    g.Set(0, y, CellState::kWall);
    g.Set(w - 1, y, CellState::kWall);
  }
  return g;
}

TEST(OccupancyTest, HitCellsMatchOracleCount) {
  const WorldGrid g = Box(30, 20);
  const Pose pose{12.3, 8.7, 0.0};
  const Scan scan = RaycastScan(g, pose, 180, 100.0);
  std::set<std::pair<int, int>> hits;
  for (const Beam& b : scan) {
    ASSERT_TRUE(b.hit);
    const Cell c = HitCell(pose, b);
    EXPECT_TRUE(g.OpaqueAt(c.x, c.y)) << c.x << "," << c.y;
    hits.insert({c.x, c.y});
  }
  OccupancyGrid map(30, 20);
  const auto newly = IntegrateScan(map, pose, scan);
  EXPECT_EQ(map.Count(Occupancy::kOccupied), hits.size());
  EXPECT_EQ(newly.size(), hits.size());
  // Every interior cell is in view from anywhere in a convex room.
  EXPECT_GT(map.Count(Occupancy::kFree), 0u);
  for (int y = 0; y < 20; ++y) {
    for (int x = 0; x < 30; ++x) {
      if (map.Get(x, y) == Occupancy::kFree) EXPECT_FALSE(g.OpaqueAt(x, y));
    }
  }
}

TEST(OccupancyTest, IntegrationIsIdempotent) {
  const WorldGrid g = Box(25, 25);
  const Pose pose{10.5, 12.25, 0.0};
  const Scan scan = RaycastScan(g, pose, 120, 100.0);
  OccupancyGrid map(25, 25);
  IntegrateScan(map, pose, scan);
  const OccupancyGrid once = map;
  const auto newly = IntegrateScan(map, pose, scan);
  EXPECT_EQ(map, once);
  EXPECT_TRUE(newly.empty());
}

TEST(OccupancyTest, GreyLevels) {
  OccupancyGrid map(3, 1);
  map.Set(1, 0, Occupancy::kFree);
  map.Set(2, 0, Occupancy::kOccupied);
  const GrayImage img = OccupancyToGray(map);
  EXPECT_EQ(img.at(0, 0), kPgmUnknown);
  EXPECT_EQ(img.at(1, 0), kPgmFree);
  EXPECT_EQ(img.at(2, 0), kPgmOccupied);
  EXPECT_EQ(OccupiedMask(map).CountOccupied(), 1u);
}

TEST(WorldTest, ClosedDoorScenarioBuilds) {
  const World w = BuildWorld(ClosedDoorScenario());
  EXPECT_TRUE(w.grid.TraversableAt(CellOf(w.StartPose().position()).x,
                                   CellOf(w.StartPose().position()).y));
  int closed = 0;
  for (int y = 0; y < w.grid.height(); ++y) {
    for (int x = 0; x < w.grid.width(); ++x) closed += w.grid.Get(x, y) == CellState::kClosedDoor;
  }
  EXPECT_GT(closed, 0);
  EXPECT_TRUE(UnreachableRooms(w).empty());
  const Cell target = CellOf(w.TargetCell(0));
  EXPECT_EQ(w.spec.plan.rooms[static_cast<std::size_t>(w.RoomAt(target))].name,
            w.spec.targets[0].room);
}

TEST(WorldTest, JsonRoundTrip) {
  const WorldSpec spec = ClosedDoorScenario();
  const WorldSpec back = ParseWorldSpec(WorldSpecToJson(spec).dump());
  EXPECT_EQ(back.plan, spec.plan);
  ASSERT_EQ(back.doors.size(), spec.doors.size());
  EXPECT_EQ(back.doors[1].closed, spec.doors[1].closed);
  EXPECT_EQ(back.targets.size(), spec.targets.size());
  EXPECT_EQ(BuildWorld(back).grid, BuildWorld(spec).grid);
}

TEST(WorldTest, ParseErrors) {
  EXPECT_THROW(ParseWorldSpec("{\n\"plan\": }"), SchemaError);
  EXPECT_THROW(ParseWorldSpec("[]"), SchemaError);
  nlohmann::json j = WorldSpecToJson(ClosedDoorScenario());
  j.erase("start");
  EXPECT_THROW(WorldSpecFromJson(j), SchemaError);
}

TEST(WorldTest, SeededWorldsAreConnected) {
  for (const WorldSpec& spec : SeededWorlds()) {
    const World w = BuildWorld(spec);
    EXPECT_GE(spec.plan.rooms.size(), 5u);
    EXPECT_TRUE(UnreachableRooms(w).empty());
  }
}

}  // namespace
}  // namespace planreg::sim
