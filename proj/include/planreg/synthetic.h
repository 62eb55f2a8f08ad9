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

#ifndef PLANREG_SYNTHETIC_H_
#define PLANREG_SYNTHETIC_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "planreg/d4.h"
#include "planreg/error.h"
#include "planreg/floorplan.h"
#include "planreg/pgm.h"
#include "planreg/random.h"
#include "planreg/raster.h"
#include "planreg/registration.h"

namespace planreg {

// Synthetic dataset generation: random rectilinear dwellings, LiDAR-style
// region masks with a known rotation/flip/scale, and partial coverage.

inline Polygon Rect(double x0, double y0, double x1, double y1) {
  return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

struct PlanGenConfig {
  int rooms = 5;
  double min_side = 300.0;  // plan units (cm)
  double max_side = 600.0;
  double units_per_cell = 5.0;
  double max_living_share = 0.45;
  double max_symmetry_iou = 0.9;
};

// True when no non-identity D4 element maps the squashed silhouette onto
// itself with IoU >= max_iou.
inline bool SilhouetteIsAsymmetric(const FloorPlan& plan, double max_iou) {
  const BinaryMask full =
      ResizeNearest(CropToContent(RenderRooms(plan, AllRooms(plan),
                                              FitFrame(plan.Extent(), 200, 200), 200, 200),
                                  0),
                    200, 200);
  for (const D4 g : D4::All()) {
    if (g.id() == 0) continue;
    if (MaskIou(ApplyD4(full, g), full).iou >= max_iou) return false;
  }
  return true;
}

namespace internal {

inline double Snap(double v) { return std::round(v / 10.0) * 10.0; }

}  // namespace internal

// Rooms are stacked in 2-3 columns of unequal depth, giving an irregular
// rectilinear outline. Rejection-samples until the silhouette has no D4
// symmetry and the living room is not dominant.
inline FloorPlan GenerateRectilinearPlan(Rng& rng, const PlanGenConfig& cfg = {}) {
  if (cfg.rooms < 2) throw Error("synthetic plans need at least 2 rooms");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const int columns = cfg.rooms >= 6 ? 3 : static_cast<int>(rng.UniformInt(2, 3));
    std::vector<int> per_col(columns, 1);
    for (int r = columns; r < cfg.rooms; ++r) ++per_col[rng.UniformInt(0, columns - 1)];

    FloorPlan plan;
    plan.units_per_cell = cfg.units_per_cell;
    double x = 0.0;
    std::vector<double> depths;
    for (int c = 0; c < columns; ++c) {
      const double w = internal::Snap(rng.Uniform(cfg.min_side, cfg.max_side));
      double y = 0.0;
      for (int k = 0; k < per_col[c]; ++k) {
        const double h = internal::Snap(rng.Uniform(cfg.min_side * 0.8, cfg.max_side));
        Room room;
        room.outline = Rect(x, y, x + w, y + h);
        plan.rooms.push_back(room);
        y += h;
      }
      depths.push_back(y);
      x += w;
    }
    bool distinct = true;
    for (std::size_t i = 0; i + 1 < depths.size(); ++i) {
      if (std::abs(depths[i] - depths[i + 1]) < 0.15 * std::max(depths[i], depths[i + 1])) {
        distinct = false;
      }
    }
    if (!distinct) continue;

    // Living room: a random room that is not dominant.
    const double total = plan.TotalArea();
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < plan.rooms.size(); ++i) {
      if (ShoelaceArea(plan.rooms[i].outline) <= cfg.max_living_share * total) {
        eligible.push_back(i);
      }
    }
    if (eligible.empty()) continue;
    const std::size_t living =
        eligible[rng.UniformInt(0, static_cast<std::int64_t>(eligible.size()) - 1)];
    int counter = 0;
    for (std::size_t i = 0; i < plan.rooms.size(); ++i) {
      Room& r = plan.rooms[i];
      if (i == living) {
        r.kind = RoomKind::kLivingRoom;
        r.name = "living";
      } else {
        r.kind = (counter % 3 == 2) ? RoomKind::kOther : RoomKind::kBedroom;
        r.name = std::string("room_") + static_cast<char>('a' + counter);
        ++counter;
      }
    }
    if (!SilhouetteIsAsymmetric(plan, cfg.max_symmetry_iou)) continue;
    ValidatePlan(plan);
    return plan;
  }
  throw Error("could not generate an asymmetric plan after 1000 attempts");
}

// ---------------------------------------------------------------------------
// Partial coverage.

struct Coverage {
  std::vector<std::string> full_rooms;  // living room first
  std::vector<Polygon> regions;         // plan units; full rooms + partial piece
  double area = 0.0;
};

namespace internal {

struct RectBounds {
  double x0, y0, x1, y1;
};

inline RectBounds BoundsOf(const Polygon& p) {
  const Box b = BoundingBox(p);
  return {b.min_x, b.min_y, b.max_x, b.max_y};
}

// Portion of room `r` adjacent to its shared wall with `q` having area `want`,
// or nothing when the rooms do not share a wall.
inline std::optional<Polygon> SliceAdjacent(const RectBounds& r, const RectBounds& q,
                                            double want) {
  const double overlap_y = std::min(r.y1, q.y1) - std::max(r.y0, q.y0);
  const double overlap_x = std::min(r.x1, q.x1) - std::max(r.x0, q.x0);
  const double h = r.y1 - r.y0;
  const double w = r.x1 - r.x0;
  if (overlap_y > 0 && r.x0 == q.x1) return Rect(r.x0, r.y0, r.x0 + want / h, r.y1);
  if (overlap_y > 0 && r.x1 == q.x0) return Rect(r.x1 - want / h, r.y0, r.x1, r.y1);
  if (overlap_x > 0 && r.y0 == q.y1) return Rect(r.x0, r.y0, r.x1, r.y0 + want / w);
  if (overlap_x > 0 && r.y1 == q.y0) return Rect(r.x0, r.y1 - want / w, r.x1, r.y1);
  return std::nullopt;
}

}  // namespace internal

namespace internal {

inline bool RoomsShareWall(const RectBounds& a, const RectBounds& b) {
  const double overlap_y = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  const double overlap_x = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  return (overlap_y > 0 && (a.x0 == b.x1 || a.x1 == b.x0)) ||
         (overlap_x > 0 && (a.y0 == b.y1 || a.y1 == b.y0));
}

inline bool RoomSetConnected(const std::vector<RectBounds>& rooms,
                             const std::vector<std::size_t>& set) {
  if (set.empty()) return true;
  std::vector<bool> reached(set.size(), false);
  std::vector<std::size_t> stack = {0};
  reached[0] = true;
  while (!stack.empty()) {
    const std::size_t k = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < set.size(); ++j) {
      if (!reached[j] && RoomsShareWall(rooms[set[k]], rooms[set[j]])) {
        reached[j] = true;
        stack.push_back(j);
      }
    }
  }
  return std::all_of(reached.begin(), reached.end(), [](bool b) { return b; });
}

}  // namespace internal

// Region seen by a robot that covered `completeness` of the dwelling: the
// living room plus a random connected set of rooms, topped up with a slice of
// one neighbouring room (the part visible through its doorway) so the covered
// area matches the target. Assumes axis-aligned rectangular rooms.
inline Coverage ChooseCoverage(const FloorPlan& plan, double completeness, Rng& rng) {
  const double total = plan.TotalArea();
  const double target = completeness * total;
  std::vector<internal::RectBounds> bounds;
  std::vector<double> areas;
  for (const Room& r : plan.rooms) {
    bounds.push_back(internal::BoundsOf(r.outline));
    areas.push_back(ShoelaceArea(r.outline));
  }

  struct Option {
    std::vector<std::string> rooms;
    double area = 0.0;
    std::optional<Polygon> slice;
    double slice_area = 0.0;
  };
  std::vector<Option> options;
  for (auto& set : VariantRoomSets(plan)) {
    const std::vector<std::size_t> idx = RoomIndices(plan, set);
    if (!internal::RoomSetConnected(bounds, idx)) continue;
    double a = 0.0;
    for (std::size_t i : idx) a += areas[i];
    if (a > target + 1e-9) continue;
    const double remainder = target - a;
    Option opt{set, a, std::nullopt, 0.0};
    if (remainder > 0.005 * total) {
      for (std::size_t r = 0; r < plan.rooms.size() && !opt.slice; ++r) {
        if (std::find(idx.begin(), idx.end(), r) != idx.end()) continue;
        if (remainder > 0.9 * areas[r]) continue;
        for (std::size_t q : idx) {
          opt.slice = internal::SliceAdjacent(bounds[r], bounds[q], remainder);
          if (opt.slice) {
            opt.slice_area = remainder;
            break;
          }
        }
      }
      if (!opt.slice) continue;
    }
    options.push_back(std::move(opt));
  }

  Coverage cov;
  if (options.empty()) {
    // No room set fits (e.g. the living room alone exceeds the target): take
    // a slice of the living room.
    const internal::RectBounds r = bounds[plan.LivingRoomIndex()];
    cov.regions.push_back(Rect(r.x0, r.y0, r.x1, r.y0 + target / (r.x1 - r.x0)));
    cov.area = target;
    return cov;
  }
  Option& pick = options[rng.UniformInt(0, static_cast<std::int64_t>(options.size()) - 1)];
  cov.full_rooms = pick.rooms;
  for (std::size_t i : RoomIndices(plan, pick.rooms)) cov.regions.push_back(plan.rooms[i].outline);
  cov.area = pick.area;
  if (pick.slice) {
    cov.regions.push_back(*pick.slice);
    cov.area += pick.slice_area;
  }
  return cov;
}

// ---------------------------------------------------------------------------
// Cases.

struct SyntheticCase {
  FloorPlan plan;
  BinaryMask lidar;
  GroundTruth truth;
  std::vector<std::string> covered_rooms;
  double covered_area = 0.0;  // plan units^2
};

inline constexpr int kLidarMargin = 12;

// Places the plan into a LiDAR frame with the given transform: the
// transformed full plan's min corner lands at (margin, margin).
inline GroundTruth MakeTruth(const FloorPlan& plan, const TransformParams& t, double completeness,
                             int margin = kLidarMargin) {
  const Box ext = TransformedExtent(plan, AllRooms(plan), t.element);
  GroundTruth g;
  g.transform = t;
  g.plan_anchor = Point{ext.min_x, ext.min_y};
  g.lidar_anchor = Point{static_cast<double>(margin), static_cast<double>(margin)};
  g.completeness = completeness;
  return g;
}

inline std::pair<int, int> LidarFrameSize(const FloorPlan& plan, const TransformParams& t,
                                          int margin = kLidarMargin) {
  const Box ext = TransformedExtent(plan, AllRooms(plan), t.element);
  return {static_cast<int>(std::ceil(ext.width() / t.s_h)) + 2 * margin,
          static_cast<int>(std::ceil(ext.height() / t.s_v)) + 2 * margin};
}

inline SyntheticCase MakeCase(const FloorPlan& plan, const TransformParams& t,
                              double completeness, Rng& rng) {
  SyntheticCase c;
  c.plan = plan;
  c.truth = MakeTruth(plan, t, completeness);
  const Coverage cov = ChooseCoverage(plan, completeness, rng);
  c.covered_rooms = cov.full_rooms;
  c.covered_area = cov.area;
  const auto [w, h] = LidarFrameSize(plan, t);
  const PlanToLidar map = c.truth.Mapping();
  c.lidar = BinaryMask(w, h);
  for (const Polygon& region : cov.regions) FillPolygon(c.lidar, map.Map(region));
  return c;
}

struct CaseGenConfig {
  PlanGenConfig plan;
  double min_extent_cells = 360.0;  // LiDAR frame size range per axis
  double max_extent_cells = 560.0;
};

inline SyntheticCase GenerateCase(Rng& rng, double completeness, const CaseGenConfig& cfg = {}) {
  const FloorPlan plan = GenerateRectilinearPlan(rng, cfg.plan);
  const D4 g = D4::FromId(static_cast<int>(rng.UniformInt(0, 7)));
  const Box ext = TransformedExtent(plan, AllRooms(plan), g);
  TransformParams t;
  t.element = g;
  t.s_h = ext.width() / rng.Uniform(cfg.min_extent_cells, cfg.max_extent_cells);
  t.s_v = ext.height() / rng.Uniform(cfg.min_extent_cells, cfg.max_extent_cells);
  // Coverage draws come from their own stream so the plan and transform do not
  // depend on the completeness level.
  Rng coverage_rng{static_cast<std::uint32_t>(rng.NextU64()),
                   static_cast<std::uint32_t>(std::lround(completeness * 1000.0))};
  return MakeCase(plan, t, completeness, coverage_rng);
}

// ---------------------------------------------------------------------------
// On-disk dataset: <dir>/manifest.json plus one directory per case holding
// plan.json, lidar.pgm and truth.json.

struct SweepConfig {
  int n_cases = 10;
  std::vector<double> completeness_levels = {1.0};
  std::uint32_t rng_seed = 1;
  std::vector<int> plan_sizes = {4, 5, 6};

  void Validate() const {
    if (n_cases <= 0) throw Error("n_cases must be > 0");
    if (completeness_levels.empty()) throw Error("need at least one completeness level");
    for (std::size_t i = 0; i < completeness_levels.size(); ++i) {
      const double c = completeness_levels[i];
      if (!(c > 0.0 && c <= 1.0)) throw Error("completeness levels must lie in (0, 1]");
      if (i > 0 && c < completeness_levels[i - 1]) {
        throw Error("completeness levels must be sorted ascending");
      }
    }
    if (plan_sizes.empty()) throw Error("need at least one plan size");
    for (int s : plan_sizes) {
      if (s < 2 || s > 7) throw Error("plan sizes must be in [2, 7] rooms");
    }
  }
};

inline nlohmann::json TruthToJson(const GroundTruth& t, const std::vector<std::string>& covered) {
  return {{"rot", t.transform.element.degrees()},
          {"flip", std::string(FlipName(t.transform.element.flip()))},
          {"s_h", t.transform.s_h},
          {"s_v", t.transform.s_v},
          {"plan_anchor", {t.plan_anchor.x, t.plan_anchor.y}},
          {"lidar_anchor", {t.lidar_anchor.x, t.lidar_anchor.y}},
          {"completeness", t.completeness},
          {"covered_rooms", covered}};
}

inline GroundTruth TruthFromJson(const nlohmann::json& j) {
  try {
    GroundTruth t;
    t.transform.element =
        D4::FromDegrees(j.at("rot").get<int>(), ParseFlip(j.at("flip").get<std::string>()));
    t.transform.s_h = j.at("s_h").get<double>();
    t.transform.s_v = j.at("s_v").get<double>();
    t.plan_anchor = Point{j.at("plan_anchor").at(0).get<double>(),
                          j.at("plan_anchor").at(1).get<double>()};
    t.lidar_anchor = Point{j.at("lidar_anchor").at(0).get<double>(),
                           j.at("lidar_anchor").at(1).get<double>()};
    t.completeness = j.at("completeness").get<double>();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("ground truth: ") + e.what());
  }
}

inline std::string CaseDirName(std::size_t level_index, int case_index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "L%02zu_%04d", level_index, case_index);
  return buf;
}

// Deterministic in (config); each case has its own generator so cases can be
// produced in any order.
//
// The plan and transform depend only on the case index, so case i at every
// completeness level shows the same dwelling; only the coverage differs.
inline SyntheticCase GenerateSweepCase(const SweepConfig& cfg, std::size_t level_index,
                                       int case_index) {
  Rng rng{cfg.rng_seed, static_cast<std::uint32_t>(case_index)};
  CaseGenConfig gen;
  gen.plan.rooms = cfg.plan_sizes[static_cast<std::size_t>(case_index) % cfg.plan_sizes.size()];
  return GenerateCase(rng, cfg.completeness_levels[level_index], gen);
}

inline void WriteCase(const std::filesystem::path& dir, const SyntheticCase& c) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  WriteFileBytes((dir / "plan.json").string(), SerializePlan(c.plan) + "\n");
  WritePgm((dir / "lidar.pgm").string(), MaskToGray(c.lidar));
  WriteFileBytes((dir / "truth.json").string(),
                 TruthToJson(c.truth, c.covered_rooms).dump(2) + "\n");
}

inline nlohmann::json SweepToJson(const SweepConfig& cfg) {
  return {{"n_cases", cfg.n_cases},
          {"completeness_levels", cfg.completeness_levels},
          {"rng_seed", cfg.rng_seed},
          {"plan_sizes", cfg.plan_sizes}};
}

inline std::vector<std::string> GenerateDataset(const SweepConfig& cfg,
                                                const std::filesystem::path& out_dir,
                                                unsigned threads = 1) {
  cfg.Validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());
  const std::size_t levels = cfg.completeness_levels.size();
  const std::size_t total = levels * static_cast<std::size_t>(cfg.n_cases);
  std::vector<SyntheticCase> cases(total);
  ParallelFor(total, threads, [&](std::size_t k) {
    cases[k] = GenerateSweepCase(cfg, k / cfg.n_cases, static_cast<int>(k % cfg.n_cases));
  });
  std::vector<std::string> names;
  nlohmann::json manifest = SweepToJson(cfg);
  manifest["cases"] = nlohmann::json::array();
  for (std::size_t k = 0; k < total; ++k) {
    const std::string name = CaseDirName(k / cfg.n_cases, static_cast<int>(k % cfg.n_cases));
    WriteCase(out_dir / name, cases[k]);
    manifest["cases"].push_back(name);
    names.push_back(name);
  }
  WriteFileBytes((out_dir / "manifest.json").string(), manifest.dump(2) + "\n");
  return names;
}

inline EvalCase LoadCase(const std::filesystem::path& dir) {
  EvalCase c;
  const std::string plan_path = (dir / "plan.json").string();
  try {
    c.plan = ParsePlan(ReadFileBytes(plan_path));
  } catch (const SchemaError& e) {
    throw SchemaError(plan_path + ": " + e.what());
  }
  c.lidar = ReadPgm((dir / "lidar.pgm").string());
  const std::string truth_path = (dir / "truth.json").string();
  try {
    c.truth = TruthFromJson(nlohmann::json::parse(ReadFileBytes(truth_path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(truth_path + ": " + e.what());
  }
  return c;
}

inline std::vector<EvalCase> LoadDataset(const std::filesystem::path& dir) {
  const std::string manifest_path = (dir / "manifest.json").string();
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(ReadFileBytes(manifest_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(manifest_path + ": " + e.what());
  }
  std::vector<EvalCase> cases;
  for (const auto& name : manifest.at("cases")) {
    cases.push_back(LoadCase(dir / name.get<std::string>()));
  }
  if (cases.empty()) throw Error("dataset '" + dir.string() + "' has no cases");
  return cases;
}

}  // namespace planreg

#endif  // PLANREG_SYNTHETIC_H_
