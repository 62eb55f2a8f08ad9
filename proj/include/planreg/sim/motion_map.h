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

#ifndef PLANREG_SIM_MOTION_MAP_H_
#define PLANREG_SIM_MOTION_MAP_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "planreg/floorplan.h"
#include "planreg/raster.h"
#include "planreg/registration.h"
#include "planreg/sim/occupancy.h"
#include "planreg/sim/world.h"

namespace planreg::sim {

struct RegistrationSettings {
  ComponentFilterConfig filter;
  double simplify_tol = kDefaultSimplifyTolerance;
  RegisterOptions reg;
  bool refine = true;
  // Plan units per map cell when the map resolution is known; the refinement
  // then fits translation only. 0 fits scale too.
  double known_scale = 0.0;
  // Candidates refined per registration (see RegisterObserved); with a known
  // scale, "plausible" means implied scales within scale_tolerance of it.
  int refine_candidates = 4;
  double scale_tolerance = 0.15;
};

struct MapRegistration {
  RegistrationResult result;
  std::size_t candidate = 0;  // index into result.candidates that was used
  PlanToLidar coarse;   // straight from the transform search
  PlanToLidar mapping;  // plan units -> map cells, after refinement
  bool refined = false;
};

namespace internal {

// Axis-aligned wall of the D4-transformed plan: `at` is the constant
// coordinate, [lo, hi] the span along the other axis.
struct AxisWall {
  bool vertical = false;
  double at = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

inline std::vector<AxisWall> AxisWalls(const FloorPlan& plan, D4 g) {
  std::vector<AxisWall> walls;
  for (const Room& r : plan.rooms) {
    const auto& v = r.outline.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Point a = g.ApplyLinear(v[i]);
      const Point b = g.ApplyLinear(v[(i + 1) % v.size()]);
      if (std::abs(a.x - b.x) < 1e-9) {
        walls.push_back(AxisWall{true, a.x, std::min(a.y, b.y), std::max(a.y, b.y)});
      } else if (std::abs(a.y - b.y) < 1e-9) {
        walls.push_back(AxisWall{false, a.y, std::min(a.x, b.x), std::max(a.x, b.x)});
      }
    }
  }
  return walls;
}

struct AxisMap {
  double a = 1.0;
  double b = 0.0;
  double operator()(double u) const { return a * u + b; }
};

// Least squares for obs = a * u + b; translation only when all u coincide
// or the slope is fixed.
inline bool FitAxis(const std::vector<std::pair<double, double>>& uv, AxisMap& m,
                    bool fixed_slope = false) {
  if (uv.empty()) return false;
  double su = 0, so = 0, suu = 0, suo = 0;
  for (const auto& [u, o] : uv) {
    su += u;
    so += o;
    suu += u * u;
    suo += u * o;
  }
  const double n = static_cast<double>(uv.size());
  const double var = suu - su * su / n;
  const double mean_u = su / n;
  if (!fixed_slope && var > 1e-6 * std::max(1.0, mean_u * mean_u) * n) {
    m.a = (suo - su * so / n) / var;
    m.b = (so - m.a * su) / n;
  } else {
    m.b = (so - m.a * su) / n;
  }
  return true;
}

}  // namespace internal

// Refines the per-axis scale and translation of a plan->map mapping by
// iterated closest-wall matching against observed occupied cells. Each
// observed cell is paired with the nearest mapped axis-aligned plan wall
// within a shrinking gate; vertical walls constrain the x map, horizontal
// walls the y map. Non-axis-aligned walls are ignored. The D4 element is
// kept. With `known_scale` > 0 (plan units per cell) the scales are fixed to
// it and only the translation is fitted. Returns the input unchanged if the
// fit degenerates.
inline PlanToLidar RefineMapping(const FloorPlan& plan, const PlanToLidar& initial,
                                 const BinaryMask& observed, double known_scale = 0.0) {
  const D4 g = initial.transform.element;
  const std::vector<internal::AxisWall> walls = internal::AxisWalls(plan, g);
  std::vector<Point> obs;
  for (int y = 0; y < observed.height(); ++y) {
    for (int x = 0; x < observed.width(); ++x) {
      // Cell centres: a wall line at X is drawn into cell floor(X).
      if (observed.Get(x, y)) obs.push_back(Point{x + 0.5, y + 0.5});
    }
  }
  if (walls.empty() || obs.size() < 10) return initial;

  internal::AxisMap mx{1.0 / initial.transform.s_h,
                       initial.lidar_anchor.x - initial.plan_anchor.x / initial.transform.s_h};
  internal::AxisMap my{1.0 / initial.transform.s_v,
                       initial.lidar_anchor.y - initial.plan_anchor.y / initial.transform.s_v};
  const bool fixed = known_scale > 0.0;
  if (fixed) {
    // Keep what lands on the centre of the observed cells where it is.
    Box ob = BoundingBox(obs);
    const double ox = (ob.min_x + ob.max_x) / 2, oy = (ob.min_y + ob.max_y) / 2;
    const double ux = (ox - mx.b) / mx.a, uy = (oy - my.b) / my.a;
    mx = {1.0 / known_scale, ox - ux / known_scale};
    my = {1.0 / known_scale, oy - uy / known_scale};
  }
  const double a0x = mx.a;
  const double a0y = my.a;
  constexpr double kGates[] = {8, 6, 5, 4, 3, 3, 2, 2, 2, 2, 2, 2};
  std::vector<std::pair<double, double>> ex, ey;
  for (double gate : kGates) {
    ex.clear();
    ey.clear();
    for (const Point& p : obs) {
      double best = gate;
      const internal::AxisWall* match = nullptr;
      for (const auto& w : walls) {
        double d;
        if (w.vertical) {
          const double x = mx(w.at);
          const double lo = my(w.lo), hi = my(w.hi);
          const double dy = p.y < lo ? lo - p.y : (p.y > hi ? p.y - hi : 0.0);
          d = std::hypot(p.x - x, dy);
        } else {
          const double y = my(w.at);
          const double lo = mx(w.lo), hi = mx(w.hi);
          const double dx = p.x < lo ? lo - p.x : (p.x > hi ? p.x - hi : 0.0);
          d = std::hypot(p.y - y, dx);
        }
        if (d < best) {
          best = d;
          match = &w;
        }
      }
      if (match == nullptr) continue;
      if (match->vertical) {
        ex.emplace_back(match->at, p.x);
      } else {
        ey.emplace_back(match->at, p.y);
      }
    }
    internal::AxisMap nx = mx, ny = my;
    internal::FitAxis(ex, nx, fixed);
    internal::FitAxis(ey, ny, fixed);
    // A fit that moves the scale by more than a factor 1.5 has latched onto
    // the wrong walls.
    if (!(nx.a > a0x / 1.5 && nx.a < a0x * 1.5 && ny.a > a0y / 1.5 && ny.a < a0y * 1.5)) {
      return initial;
    }
    mx = nx;
    my = ny;
  }
  PlanToLidar out;
  out.transform = TransformParams{g, 1.0 / mx.a, 1.0 / my.a};
  out.plan_anchor = Point{0.0, 0.0};
  out.lidar_anchor = Point{mx.b, my.b};
  return out;
}

namespace internal {

// Fraction of observed cells (centres) within `tol` cells of a mapped
// axis-aligned plan wall.
inline double WallInlierFraction(const FloorPlan& plan, const PlanToLidar& m,
                                 const std::vector<Point>& obs, double tol = 1.0) {
  if (obs.empty()) return 0.0;
  const std::vector<AxisWall> walls = AxisWalls(plan, m.transform.element);
  // Mapped wall: constant coordinate and span in map cells.
  struct Mapped { bool vertical; double at, lo, hi; };
  std::vector<Mapped> mw;
  mw.reserve(walls.size());
  auto mx = [&](double u) { return (u - m.plan_anchor.x) / m.transform.s_h + m.lidar_anchor.x; };
  auto my = [&](double u) { return (u - m.plan_anchor.y) / m.transform.s_v + m.lidar_anchor.y; };
  for (const AxisWall& w : walls) {
    if (w.vertical) {
      mw.push_back({true, mx(w.at), std::min(my(w.lo), my(w.hi)), std::max(my(w.lo), my(w.hi))});
    } else {
      mw.push_back({false, my(w.at), std::min(mx(w.lo), mx(w.hi)), std::max(mx(w.lo), mx(w.hi))});
    }
  }
  std::size_t in = 0;
  for (const Point& p : obs) {
    for (const Mapped& w : mw) {
      const double along = w.vertical ? p.y : p.x;
      const double across = w.vertical ? p.x : p.y;
      const double out = along < w.lo ? w.lo - along : (along > w.hi ? along - w.hi : 0.0);
      if (std::hypot(across - w.at, out) <= tol) {
        ++in;
        break;
      }
    }
  }
  return static_cast<double>(in) / static_cast<double>(obs.size());
}

}  // namespace internal

// Registers the floor plan against the current occupancy map (known cells
// form the structure), returning a plan -> map-cell mapping. With
// `refine_candidates` > 1 the top candidates by IoU, plus (with a known
// scale) the top ones whose implied scales are plausible, are each refined
// and the one whose walls explain most observed cells wins.
inline MapRegistration RegisterObserved(const OccupancyGrid& map, const FloorPlan& plan,
                                        const RegistrationSettings& s) {
  const PreprocessedLidar pre =
      PreprocessLidar(LidarIntensity(OccupancyToGray(map)), s.filter, s.simplify_tol);
  MapRegistration out;
  out.result = Register(pre.mask, plan, s.reg);
  const Point origin{static_cast<double>(pre.origin_x), static_cast<double>(pre.origin_y)};
  const CellRect rect = OccupiedRect(pre.mask);
  auto coarse_of = [&](std::size_t i) {
    const Candidate& c = out.result.candidates[i];
    const Box e = TransformedExtent(plan, RoomIndices(plan, out.result.variant_sets[c.variant]),
                                    c.element);
    return PlanToLidar{TransformParams{c.element, e.width() / rect.width(),
                                       e.height() / rect.height()},
                       Point{e.min_x, e.min_y},
                       Point{rect.min_x + origin.x, rect.min_y + origin.y}};
  };
  out.candidate = out.result.variant_index * 8 + out.result.best.element.id();
  out.coarse = out.result.Mapping(origin);
  out.mapping = out.coarse;
  if (!s.refine) return out;

  const BinaryMask observed = OccupiedMask(map);
  std::vector<std::size_t> pool{out.candidate};
  if (s.refine_candidates > 1) {
    std::vector<std::size_t> order(out.result.candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return out.result.candidates[a].iou > out.result.candidates[b].iou;
    });
    auto plausible = [&](const PlanToLidar& m) {
      auto ok = [&](double v) { return std::abs(v / s.known_scale - 1.0) <= s.scale_tolerance; };
      return ok(m.transform.s_h) && ok(m.transform.s_v);
    };
    int top = 1, scaled = 0;
    for (std::size_t i : order) {
      if (out.result.candidates[i].iou <= 0.0) break;
      if (std::find(pool.begin(), pool.end(), i) != pool.end()) continue;
      if (top < s.refine_candidates) {
        pool.push_back(i);
        ++top;
      } else if (s.known_scale > 0.0 && scaled < s.refine_candidates &&
                 plausible(coarse_of(i))) {
        pool.push_back(i);
        ++scaled;
      }
    }
  }
  std::vector<Point> obs;
  for (int y = 0; y < observed.height(); ++y) {
    for (int x = 0; x < observed.width(); ++x) {
      if (observed.Get(x, y)) obs.push_back(Point{x + 0.5, y + 0.5});
    }
  }
  double best_fit = -1.0;
  for (std::size_t i : pool) {
    const PlanToLidar coarse = coarse_of(i);
    const PlanToLidar refined = RefineMapping(plan, coarse, observed, s.known_scale);
    const double fit = internal::WallInlierFraction(plan, refined, obs);
    if (fit > best_fit) {
      best_fit = fit;
      out.candidate = i;
      out.coarse = coarse;
      out.mapping = refined;
      out.refined = refined.plan_anchor != coarse.plan_anchor ||
                    refined.lidar_anchor != coarse.lidar_anchor;
    }
  }
  return out;
}

// The registered plan drawn in map cells: room interiors free, outlines as
// walls, annotated door openings cut through (their open/closed state is not
// known to the robot).
struct MotionMap {
  PlanToLidar mapping;
  WorldGrid grid;
  BinaryMask walls;
};

inline MotionMap RenderMotionMap(const FloorPlan& plan, const std::vector<Door>& doors,
                                 const PlanToLidar& mapping, int width, int height) {
  MotionMap m;
  m.mapping = mapping;
  m.grid = WorldGrid(width, height, CellState::kOutside);
  BinaryMask interior(width, height);
  BinaryMask walls(width, height);
  for (const Room& r : plan.rooms) {
    const std::vector<Point> ring = mapping.Map(r.outline);
    FillPolygon(interior, ring);
    DrawRing(walls, ring);
  }
  BinaryMask openings(width, height);
  for (const Door& d : doors) DrawSegment(openings, mapping.Map(d.a), mapping.Map(d.b));
  m.walls = BinaryMask(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (openings.Get(x, y)) {
        m.grid.Set(x, y, CellState::kOpenDoor);
      } else if (walls.Get(x, y)) {
        m.grid.Set(x, y, CellState::kWall);
        m.walls.Set(x, y, true);
      } else if (interior.Get(x, y)) {
        m.grid.Set(x, y, CellState::kFree);
      }
    }
  }
  return m;
}

// Fraction of observed occupied cells lying within one cell (8-neighbourhood)
// of a wall or door of the motion map; 0 when nothing is observed.
inline double WallAgreement(const MotionMap& m, const BinaryMask& observed) {
  std::size_t n = 0, hit = 0;
  for (int y = 0; y < observed.height(); ++y) {
    for (int x = 0; x < observed.width(); ++x) {
      if (!observed.Get(x, y)) continue;
      ++n;
      bool near = false;
      for (int dy = -1; dy <= 1 && !near; ++dy) {
        for (int dx = -1; dx <= 1 && !near; ++dx) {
          if (!m.grid.InBounds(x + dx, y + dy)) continue;
          const CellState c = m.grid.Get(x + dx, y + dy);
          near = c == CellState::kWall || c == CellState::kOpenDoor;
        }
      }
      hit += near;
    }
  }
  return n == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(n);
}

}  // namespace planreg::sim

#endif  // PLANREG_SIM_MOTION_MAP_H_
