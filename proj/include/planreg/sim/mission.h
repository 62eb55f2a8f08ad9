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

#ifndef PLANREG_SIM_MISSION_H_
#define PLANREG_SIM_MISSION_H_

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "planreg/error.h"
#include "planreg/random.h"
#include "planreg/sim/localize.h"
#include "planreg/sim/motion.h"
#include "planreg/sim/motion_map.h"
#include "planreg/sim/occupancy.h"
#include "planreg/sim/planner.h"
#include "planreg/sim/raycast.h"
#include "planreg/sim/world.h"

namespace planreg::sim {

struct ScanConfig {
  int n_beams = 360;
  double max_range = 60.0;  // cells
};

struct MissionConfig {
  MotionConfig motion;
  ScanConfig scan;
  RegistrationSettings registration;
  double dt = 0.1;                    // seconds per control step
  double time_cap_s = 600.0;          // simulated seconds
  double registration_cost_s = 1.0;   // charged to the mission clock per registration
  double detect_radius = 3.0;         // cells, with line of sight
  double localize_search_radius = 4.0;
  // A registration replaces the motion map only if at least this fraction of
  // the observed walls lies on it, and the fraction beats the current motion
  // map's by more than the margin.
  double min_wall_agreement = 0.8;
  double wall_agreement_margin = 0.02;
  // With no motion map (after the initial registration), a registration is
  // taken only if the previous one passed the agreement test too and placed
  // every plan corner within this many cells of it.
  double confirm_tolerance = 1.5;
  // The map resolution is known: the best-IoU registration candidate whose
  // scales are within scale_tolerance of 1 / resolution is used, and the
  // refinement keeps the scale at 1 / resolution.
  bool known_map_scale = true;
  double scale_tolerance = 0.15;
  // Per-step scan-to-map matching of the mapping front end (both modes);
  // 0 turns it off.
  double scan_match_radius = 1.5;
  bool known_target_count = true;     // false: stop on full coverage instead
};

struct LogRecord {
  double t = 0.0;
  Pose truth;
  Pose estimate;
  double d = 0.0;          // travel since the last registration
  double remaining = 0.0;  // S, remaining planned travel
  std::vector<std::string> events;
};

struct RegistrationRecord {
  double t = 0.0;
  std::string reason;
  bool ok = false;        // registration produced a result
  bool accepted = false;  // and it replaced the motion map
  double wall_agreement = 0.0;
  PlanToLidar mapping;
  double iou = 0.0;
  std::vector<std::string> variant;
};

struct MissionLog {
  std::string mode;
  std::vector<LogRecord> trajectory;
  int replans = 0;
  int registrations = 0;
  int obstruction_registrations = 0;
  int relocation_registrations = 0;
  int targets_found = 0;
  int bumps = 0;
  double total_time_s = 0.0;
  double distance_travelled = 0.0;
  std::vector<double> localization_errors;  // true vs estimate after each localize
  int localization_failures = 0;
  std::vector<std::string> rooms_visited;   // order of first visit
  bool timed_out = false;
  bool stuck = false;                       // nothing left to plan towards
  std::vector<RegistrationRecord> registration_records;
  double registration_wall_s = 0.0;         // measured, not part of the clock
};

namespace internal {

// The robot: true and estimated poses, the LiDAR map it builds, and the
// seeded noise stream. The map frame coincides with the world grid; the
// estimated pose integrates commanded motion, the true pose adds noise.
// Heading is read from a compass, so both poses share it.
class Robot {
 public:
  Robot(const World& world, const MissionConfig& cfg)
      : world_(world), cfg_(cfg), rng_(cfg.motion.rng_seed),
        map_(world.grid.width(), world.grid.height()), truth_(world.StartPose()),
        estimate_(truth_), found_(world.spec.targets.size(), false),
        searched_(world.grid.width(), world.grid.height()),
        bumps_(world.grid.width(), world.grid.height()) {}

  const Pose& truth() const { return truth_; }
  const Pose& estimate() const { return estimate_; }
  void set_estimate(const Pose& p) { estimate_ = p; }
  const OccupancyGrid& map() const { return map_; }
  const Scan& last_scan() const { return scan_; }
  const std::vector<bool>& found() const { return found_; }
  // Cells believed to have been inside the detection radius, in view.
  const BinaryMask& searched() const { return searched_; }

  // Cells where the robot ran into something, in map coordinates. Kept apart
  // from the occupancy map so later scans cannot clear them.
  const BinaryMask& bumps() const { return bumps_; }

  void Observe() {
    scan_ = RaycastScan(world_.grid, truth_, cfg_.scan.n_beams, cfg_.scan.max_range);
  }

  // Occupied end points of the last scan, drawn from the estimated pose into
  // a (2r+1)^2 patch centred on it.
  BinaryMask ScanPatch(int r) const {
    BinaryMask patch(2 * r + 1, 2 * r + 1);
    const Cell origin = PatchOrigin(estimate_.position(), r);
    for (const Beam& b : scan_) {
      if (!b.hit) continue;
      const Cell c = HitCell(estimate_, b);
      if (patch.InBounds(c.x - origin.x, c.y - origin.y)) {
        patch.Set(c.x - origin.x, c.y - origin.y, true);
      }
    }
    return patch;
  }

  // Writes the last scan into the map; returns the newly observed obstacles.
  std::vector<Cell> Integrate() {
    for (const Beam& b : scan_) {
      const double reach = std::min(b.range, cfg_.detect_radius);
      WalkRay(estimate_.position(), b.angle, reach, [&](Cell c, double t, bool corner) {
        if (t >= reach) return false;
        if (!corner && searched_.InBounds(c.x, c.y)) searched_.Set(c.x, c.y, true);
        return true;
      });
    }
    return IntegrateScan(map_, estimate_, scan_);
  }

  // Observe, match the scan against the map built so far, integrate.
  std::vector<Cell> Sense() {
    Observe();
    if (cfg_.scan_match_radius > 0.0 && map_.Count(Occupancy::kOccupied) > 0) {
      const int r = static_cast<int>(std::ceil(cfg_.scan.max_range)) + 1;
      try {
        estimate_ = Localize(ScanPatch(r), OccupiedMask(map_), estimate_, cfg_.scan_match_radius).pose;
      } catch (const LocalizationError&) {
        // Keep odometry.
      }
    }
    return Integrate();
  }

  // Marks targets in range with line of sight; returns their indices.
  std::vector<std::size_t> Detect() {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < found_.size(); ++i) {
      if (found_[i]) continue;
      const Point p = world_.TargetCell(i);
      if (Distance(p, truth_.position()) <= cfg_.detect_radius &&
          LineOfSight(world_.grid, truth_.position(), p)) {
        found_[i] = true;
        out.push_back(i);
      }
    }
    return out;
  }

  struct StepResult {
    double travel = 0.0;
    bool bumped = false;
    bool reached = false;
  };

  // Advances along the polyline estimate -> path[next] -> ... by one control
  // step at full speed (a carrot on the path), then updates `next`.
  StepResult Follow(const std::vector<Cell>& path, std::size_t& next) {
    StepResult r;
    double budget = cfg_.motion.speed * cfg_.dt;
    Point at = estimate_.position();
    std::size_t k = next;
    while (k < path.size() && budget > 0.0) {
      const Point w = CenterOf(path[k]);
      const double dist = Distance(at, w);
      if (dist <= budget) {
        budget -= dist;
        at = w;
        ++k;
      } else {
        at = at + (w - at) * (budget / dist);
        budget = 0.0;
      }
    }
    const Point delta = at - estimate_.position();
    const double len = std::hypot(delta.x, delta.y);
    r.reached = k >= path.size();
    if (len < 1e-12) {
      next = k;
      return r;
    }
    const double heading = std::atan2(delta.y, delta.x);
    Pose turned = truth_;
    turned.heading = heading;
    const Pose moved = StepMotion(turned, Control{len / cfg_.dt, 0.0}, cfg_.dt, cfg_.motion, rng_);
    if (const auto blocked = FirstBlocked(truth_.position(), moved.position())) {
      // The bumper reports contact ahead; record it where the robot thinks it is.
      // Contact is only known to within a cell, so block the neighbourhood.
      const Cell c = CellOf(estimate_.position() + (*blocked - truth_.position()));
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (bumps_.InBounds(c.x + dx, c.y + dy)) bumps_.Set(c.x + dx, c.y + dy, true);
        }
      }
      truth_.heading = moved.heading;
      estimate_.heading = moved.heading;
      r.bumped = true;
      r.reached = false;
      return r;
    }
    truth_ = moved;
    estimate_ = Pose{at.x, at.y, moved.heading};
    next = k;
    r.travel = len;
    return r;
  }

 private:
  // First sample point of a-b (0.2-cell spacing) that is not traversable.
  std::optional<Point> FirstBlocked(Point a, Point b) const {
    const int steps = std::max(1, static_cast<int>(std::ceil(Distance(a, b) / 0.2)));
    for (int s = 0; s <= steps; ++s) {
      const Point p = a + (b - a) * (static_cast<double>(s) / steps);
      const Cell c = CellOf(p);
      if (!world_.grid.TraversableAt(c.x, c.y)) return p;
    }
    return std::nullopt;
  }

  const World& world_;
  const MissionConfig& cfg_;
  Rng rng_;
  OccupancyGrid map_;
  Pose truth_;
  Pose estimate_;
  Scan scan_;
  std::vector<bool> found_;
  BinaryMask searched_;
  BinaryMask bumps_;
};

// Planning grid over what has been observed: free cells passable, occupied
// and unknown cells blocked, as are cells the robot bumped into.
inline CostGrid KnownCostGrid(const OccupancyGrid& map, const BinaryMask& bumps) {
  CostGrid g(map.width(), map.height(), 0.0);
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (map.Get(x, y) == Occupancy::kFree && !bumps.Get(x, y)) g.Set(x, y, 1.0);
    }
  }
  InflateObstacles(g);
  return g;
}

// Planning grid over the motion map with observations overriding it.
inline CostGrid MotionCostGrid(const MotionMap& m, const OccupancyGrid& map,
                               const BinaryMask& bumps) {
  CostGrid g(map.width(), map.height(), 0.0);
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (bumps.Get(x, y)) continue;
      switch (map.Get(x, y)) {
        case Occupancy::kOccupied: break;
        case Occupancy::kFree: g.Set(x, y, 1.0); break;
        case Occupancy::kUnknown:
          if (IsTraversable(m.grid.Get(x, y))) g.Set(x, y, 1.0);
          break;
      }
    }
  }
  InflateObstacles(g);
  return g;
}

// Exhaustive search: a cell is a goal while it is known free but has not yet
// been within detection range. New free space keeps appearing as the LiDAR
// sees into rooms, so this also drives exploration.
inline bool IsSearchGoal(const OccupancyGrid& map, const BinaryMask& searched, Cell c) {
  return map.Get(c.x, c.y) == Occupancy::kFree && !searched.Get(c.x, c.y);
}

// Path to the cheapest search goal; empty when the reachable map is searched.
inline std::vector<Cell> PathToNearestUnsearched(const CostGrid& g, const OccupancyGrid& map,
                                                 const BinaryMask& searched, Cell from) {
  return PathToNearest(g, from, [&](Cell c) { return IsSearchGoal(map, searched, c); });
}

inline double RemainingLength(const Pose& at, const std::vector<Cell>& path, std::size_t next) {
  if (next >= path.size()) return 0.0;
  double s = Distance(at.position(), CenterOf(path[next]));
  for (std::size_t i = next + 1; i < path.size(); ++i) {
    s += Distance(CenterOf(path[i - 1]), CenterOf(path[i]));
  }
  return s;
}

inline bool HitsPath(const std::vector<Cell>& cells, const std::vector<Cell>& path,
                     std::size_t next) {
  const std::size_t from = next > 0 ? next - 1 : 0;
  for (const Cell& c : cells) {
    for (std::size_t i = from; i < path.size(); ++i) {
      if (path[i] == c) return true;
    }
  }
  return false;
}

class Recorder {
 public:
  Recorder(MissionLog& log, const World& world) : log_(log), world_(world) {}

  void Add(double t, const Robot& robot, double d, double remaining,
           std::vector<std::string> events) {
    log_.trajectory.push_back(
        LogRecord{t, robot.truth(), robot.estimate(), d, remaining, std::move(events)});
    const int room = world_.RoomAt(CellOf(robot.truth().position()));
    if (room >= 0) {
      const std::string& name = world_.spec.plan.rooms[static_cast<std::size_t>(room)].name;
      if (std::find(log_.rooms_visited.begin(), log_.rooms_visited.end(), name) ==
          log_.rooms_visited.end()) {
        log_.rooms_visited.push_back(name);
      }
    }
  }

 private:
  MissionLog& log_;
  const World& world_;
};

inline bool SamePlacement(const FloorPlan& plan, const PlanToLidar& a, const PlanToLidar& b,
                          double tolerance) {
  for (const Room& room : plan.rooms) {
    for (const Point& p : room.outline.vertices) {
      if (Distance(a.Map(p), b.Map(p)) > tolerance) return false;
    }
  }
  return true;
}

// Scan-to-map translation search around the estimate; the correction is
// applied to the estimate and the resulting error logged.
inline void LocalizeRobot(Robot& robot, const BinaryMask& reference, const MissionConfig& cfg,
                          MissionLog& log, std::vector<std::string>& events) {
  const int r = static_cast<int>(std::ceil(cfg.scan.max_range)) + 1;
  try {
    const LocalizeResult lr =
        Localize(robot.ScanPatch(r), reference, robot.estimate(), cfg.localize_search_radius);
    robot.set_estimate(lr.pose);
    events.push_back("localize:" + std::to_string(lr.dx) + "," + std::to_string(lr.dy));
    log.localization_errors.push_back(
        Distance(robot.truth().position(), robot.estimate().position()));
  } catch (const LocalizationError&) {
    ++log.localization_failures;
    events.push_back("localize_failed");
  }
}

inline void AddDetections(Robot& robot, MissionLog& log, std::vector<std::string>& events) {
  for (std::size_t i : robot.Detect()) {
    ++log.targets_found;
    events.push_back("target_found:" + std::to_string(i));
  }
}

}  // namespace internal

// Plans on the registered floor plan, re-registering and
// re-localizing when the path is obstructed or after travelling D cells.
inline MissionLog RunFrSlam(const World& world, const FloorPlan& plan, const MissionConfig& cfg) {
  using internal::Robot;
  cfg.motion.Validate();
  MissionLog log;
  log.mode = "fr_slam";
  internal::Recorder rec(log, world);
  Robot robot(world, cfg);
  const int W = world.grid.width();
  const int H = world.grid.height();
  const std::size_t n_targets = world.spec.targets.size();

  double t = 0.0;
  double d = 0.0;
  double S = 0.0;
  rec.Add(t, robot, d, S, {"start"});

  MotionMap motion;
  bool have_motion = false;
  std::vector<Cell> path;
  std::size_t next = 0;
  std::vector<bool> unreachable(n_targets, false);   // per target, on M
  std::vector<bool> missed(n_targets, false);        // reached its M cell without seeing it
  std::vector<bool> room_seen(plan.rooms.size(), false);
  std::optional<std::size_t> goal_target;
  std::optional<std::size_t> goal_room;
  std::optional<PlanToLidar> last_fit;  // previous registration, if it passed

  auto all_found = [&] {
    return std::all_of(robot.found().begin(), robot.found().end(), [](bool b) { return b; });
  };
  auto mark_rooms = [&] {
    if (!have_motion) return;
    // A room counts once the robot is a cell inside it, not in its doorway.
    const Point at = robot.estimate().position();
    for (std::size_t r = 0; r < plan.rooms.size(); ++r) {
      if (room_seen[r]) continue;
      const std::vector<Point> ring = motion.mapping.Map(plan.rooms[r].outline);
      if (PointInPolygon(at, ring) && PointRingDistance(at, ring) >= 1.0) room_seen[r] = true;
    }
  };
  auto done = [&] {
    if (cfg.known_target_count) return all_found();
    return std::all_of(room_seen.begin(), room_seen.end(), [](bool b) { return b; });
  };

  auto do_register = [&](const std::string& reason, std::vector<std::string>& events) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      RegistrationSettings settings = cfg.registration;
      if (cfg.known_map_scale) {
        settings.known_scale = 1.0 / world.spec.resolution_cells_per_unit;
        settings.scale_tolerance = cfg.scale_tolerance;
      }
      const MapRegistration reg = RegisterObserved(robot.map(), plan, settings);
      MotionMap candidate = RenderMotionMap(plan, world.spec.doors, reg.mapping, W, H);
      const BinaryMask observed = OccupiedMask(robot.map());
      if (have_motion && WallAgreement(motion, observed) < cfg.min_wall_agreement) {
        // What has been seen since no longer fits the motion map.
        have_motion = false;
        events.push_back("motion_map_dropped");
      }
      const double q = WallAgreement(candidate, observed);
      const bool fits = q >= cfg.min_wall_agreement;
      bool accept = false;
      if (have_motion) {
        accept = fits && q > WallAgreement(motion, observed) + cfg.wall_agreement_margin;
      } else {
        accept = fits && (reason == "initial" ||
                          (last_fit && internal::SamePlacement(plan, *last_fit, reg.mapping,
                                                               cfg.confirm_tolerance)));
      }
      if (fits) {
        last_fit = reg.mapping;
      } else {
        last_fit.reset();
      }
      if (accept) {
        motion = std::move(candidate);
        have_motion = true;
        // Reachability and misses were judged on the old map.
        std::fill(unreachable.begin(), unreachable.end(), false);
        std::fill(missed.begin(), missed.end(), false);
      }
      events.push_back("registration:" + reason + (accept ? "" : ":rejected"));
      const Candidate& used = reg.result.candidates[reg.candidate];
      log.registration_records.push_back(
          RegistrationRecord{t, reason, true, accept, q, reg.mapping, used.iou,
                             reg.result.variant_sets[used.variant]});
    } catch (const Error&) {
      last_fit.reset();
      events.push_back(std::string("registration_failed:") + reason);
      log.registration_records.push_back(RegistrationRecord{t, reason, false, false, 0.0, {}, 0.0, {}});
    }
    log.registration_wall_s +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ++log.registrations;
    if (reason == "obstruction") ++log.obstruction_registrations;
    if (reason == "relocation") ++log.relocation_registrations;
    t += cfg.registration_cost_s;
  };

  auto do_localize = [&](std::vector<std::string>& events) {
    if (!have_motion) return;
    internal::LocalizeRobot(robot, motion.walls, cfg, log, events);
  };

  auto do_plan = [&](std::vector<std::string>& events) {
    ++log.replans;
    events.push_back("replan");
    path.clear();
    next = 0;
    goal_target.reset();
    goal_room.reset();
    const CostGrid g = have_motion ? internal::MotionCostGrid(motion, robot.map(), robot.bumps())
                                   : internal::KnownCostGrid(robot.map(), robot.bumps());
    const auto start = NearestPassable(g, CellOf(robot.estimate().position()), 3);
    if (!start) return;
    // Cheapest reachable goal among the remaining ones.
    double best = std::numeric_limits<double>::infinity();
    auto consider = [&](Point goal_point, auto on_pick) {
      const auto goal = NearestPassable(g, CellOf(goal_point), 3);
      if (!goal) return false;
      std::vector<Cell> p = PlanPath(g, *start, *goal);
      if (p.empty()) return false;
      const double c = PathCost(g, p);
      if (c < best) {
        best = c;
        path = std::move(p);
        on_pick();
      }
      return true;
    };
    if (have_motion) {
      if (cfg.known_target_count) {
        for (std::size_t i = 0; i < n_targets; ++i) {
          if (robot.found()[i] || missed[i] || unreachable[i]) continue;
          const Point goal = motion.mapping.Map(world.spec.targets[i].position);
          if (!consider(goal, [&] { goal_target = i; })) unreachable[i] = true;
        }
      } else {
        for (std::size_t r = 0; r < plan.rooms.size(); ++r) {
          if (room_seen[r]) continue;
          const std::vector<Point> ring = motion.mapping.Map(plan.rooms[r].outline);
          const Box b = BoundingBox(ring);
          Point centre{(b.min_x + b.max_x) / 2, (b.min_y + b.max_y) / 2};
          if (!PointInPolygon(centre, ring)) centre = ring[0] + (centre - ring[0]) * 0.1;
          consider(centre, [&] { goal_room = r; });
        }
      }
    }
    if (path.empty()) {
      // Nothing to aim for on the plan: explore what the map leaves open.
      path = internal::PathToNearestUnsearched(g, robot.map(), robot.searched(), *start);
      if (!path.empty()) events.push_back("explore");
    }
    S = internal::RemainingLength(robot.estimate(), path, next);
  };

  robot.Sense();
  {
    std::vector<std::string> events;
    internal::AddDetections(robot, log, events);
    do_register("initial", events);
    // Initial pose within the registered map: localize with the full first scan.
    do_localize(events);
    mark_rooms();
    do_plan(events);
    d = 0.0;
    rec.Add(t, robot, d, S, std::move(events));
  }

  while (!done()) {
    if (t >= cfg.time_cap_s) {
      log.timed_out = true;
      break;
    }
    std::vector<std::string> events;
    if (path.empty()) {
      do_plan(events);
      if (path.empty()) {
        log.stuck = true;
        rec.Add(t + cfg.dt, robot, d, S, {"stuck"});
        break;
      }
    }
    const auto step = robot.Follow(path, next);
    t += cfg.dt;
    d += step.travel;
    S -= step.travel;
    log.distance_travelled += step.travel;
    if (step.bumped) {
      ++log.bumps;
      events.push_back("bump");
    }
    const std::vector<Cell> newly = robot.Sense();
    internal::AddDetections(robot, log, events);
    mark_rooms();
    if (done()) {
      rec.Add(t, robot, d, S, std::move(events));
      break;
    }

    const bool obstructed = step.bumped || internal::HitsPath(newly, path, next);
    const bool relocate = d >= cfg.motion.relocation_distance;
    if (obstructed || relocate) {
      do_register(obstructed ? "obstruction" : "relocation", events);
      do_localize(events);
      mark_rooms();
      d = 0.0;
      do_plan(events);
    } else {
      bool replan = step.reached;
      if (step.reached && goal_target && !robot.found()[*goal_target]) missed[*goal_target] = true;
      if (goal_target && robot.found()[*goal_target]) replan = true;
      if (goal_room && room_seen[*goal_room]) replan = true;
      if (replan) do_plan(events);
    }
    rec.Add(t, robot, d, S, std::move(events));
  }
  log.total_time_s = t;
  return log;
}

// Exhaustive search without the floor plan: always head for the cheapest
// known-free cell not yet seen within detection range. Localization is the
// per-step scan matching against its own map. Stops once the known number of
// targets has been found, or when nothing reachable is left to search.
inline MissionLog RunBaselineExplorer(const World& world, const MissionConfig& cfg) {
  using internal::Robot;
  cfg.motion.Validate();
  MissionLog log;
  log.mode = "baseline";
  internal::Recorder rec(log, world);
  Robot robot(world, cfg);
  double t = 0.0;
  double S = 0.0;
  rec.Add(t, robot, 0.0, S, {"start"});
  std::vector<Cell> path;
  std::size_t next = 0;
  auto all_found = [&] {
    return std::all_of(robot.found().begin(), robot.found().end(), [](bool b) { return b; });
  };
  robot.Sense();
  std::vector<std::string> pending;
  internal::AddDetections(robot, log, pending);
  bool need_plan = true;
  while (!(cfg.known_target_count && all_found())) {
    if (t >= cfg.time_cap_s) {
      log.timed_out = true;
      break;
    }
    std::vector<std::string> events = std::move(pending);
    pending.clear();
    if (need_plan || path.empty()) {
      ++log.replans;
      events.push_back("replan");
      const CostGrid g = internal::KnownCostGrid(robot.map(), robot.bumps());
      const auto start = NearestPassable(g, CellOf(robot.estimate().position()), 3);
      path = start ? internal::PathToNearestUnsearched(g, robot.map(), robot.searched(), *start)
                   : std::vector<Cell>{};
      next = 0;
      S = internal::RemainingLength(robot.estimate(), path, next);
      need_plan = false;
      if (path.empty()) {
        // Explored everything reachable.
        if (cfg.known_target_count) log.stuck = true;
        t += cfg.dt;
        events.push_back("explored");
        rec.Add(t, robot, 0.0, S, std::move(events));
        break;
      }
    }
    const auto step = robot.Follow(path, next);
    t += cfg.dt;
    S -= step.travel;
    log.distance_travelled += step.travel;
    if (step.bumped) {
      ++log.bumps;
      events.push_back("bump");
    }
    const std::vector<Cell> newly = robot.Sense();
    internal::AddDetections(robot, log, events);
    const Cell goal = path.back();
    need_plan = step.reached || step.bumped || internal::HitsPath(newly, path, next) ||
                !internal::IsSearchGoal(robot.map(), robot.searched(), goal);
    rec.Add(t, robot, 0.0, S, std::move(events));
  }
  log.total_time_s = t;
  return log;
}

// ---------------------------------------------------------------------------
// Log export: one JSON object per timestep, then a summary line.

inline nlohmann::json PoseToJson(const Pose& p) { return {p.x, p.y, p.heading}; }

inline nlohmann::json RegistrationRecordToJson(const RegistrationRecord& r) {
  nlohmann::json j = {{"t", r.t}, {"reason", r.reason}, {"ok", r.ok}};
  if (r.ok) {
    j["accepted"] = r.accepted;
    j["wall_agreement"] = r.wall_agreement;
    const D4 g = r.mapping.transform.element;
    j["rot"] = g.degrees();
    j["flip"] = std::string(FlipName(g.flip()));
    j["s_h"] = r.mapping.transform.s_h;
    j["s_v"] = r.mapping.transform.s_v;
    j["plan_anchor"] = {r.mapping.plan_anchor.x, r.mapping.plan_anchor.y};
    j["map_anchor"] = {r.mapping.lidar_anchor.x, r.mapping.lidar_anchor.y};
    j["iou"] = r.iou;
    j["variant"] = r.variant;
  }
  return j;
}

inline nlohmann::json SummaryToJson(const MissionLog& log) {
  nlohmann::json regs = nlohmann::json::array();
  for (const auto& r : log.registration_records) regs.push_back(RegistrationRecordToJson(r));
  return {{"registration_records", regs},
          {"mode", log.mode},
          {"total_time_s", log.total_time_s},
          {"distance_travelled", log.distance_travelled},
          {"replans", log.replans},
          {"registrations", log.registrations},
          {"obstruction_registrations", log.obstruction_registrations},
          {"relocation_registrations", log.relocation_registrations},
          {"targets_found", log.targets_found},
          {"bumps", log.bumps},
          {"localization_errors", log.localization_errors},
          {"localization_failures", log.localization_failures},
          {"rooms_visited", log.rooms_visited},
          {"timed_out", log.timed_out},
          {"stuck", log.stuck},
          {"registration_wall_s", log.registration_wall_s}};
}

// Wall-time fields are the only non-deterministic content; pass
// include_wall_time = false for a reproducible byte stream.
inline std::string MissionLogToJsonLines(const MissionLog& log, bool include_wall_time = true) {
  std::string out;
  for (const LogRecord& r : log.trajectory) {
    nlohmann::json j = {{"t", r.t},
                        {"true", PoseToJson(r.truth)},
                        {"est", PoseToJson(r.estimate)},
                        {"d", r.d},
                        {"S", r.remaining}};
    if (!r.events.empty()) j["events"] = r.events;
    out += j.dump();
    out += '\n';
  }
  nlohmann::json summary = SummaryToJson(log);
  if (!include_wall_time) summary.erase("registration_wall_s");
  out += nlohmann::json{{"summary", summary}}.dump();
  out += '\n';
  return out;
}

}  // namespace planreg::sim

#endif  // PLANREG_SIM_MISSION_H_
