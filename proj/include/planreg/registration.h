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

#ifndef PLANREG_REGISTRATION_H_
#define PLANREG_REGISTRATION_H_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "planreg/contour.h"
#include "planreg/d4.h"
#include "planreg/error.h"
#include "planreg/floorplan.h"
#include "planreg/geometry.h"
#include "planreg/mask.h"
#include "planreg/parallel.h"
#include "planreg/pgm.h"
#include "planreg/raster.h"

namespace planreg {

// Rotation/flip plus the per-axis scale, expressed as plan units per LiDAR
// cell (s_h = H1 / H2, s_v = V1 / V2).
struct TransformParams {
  D4 element;
  double s_h = 1.0;
  double s_v = 1.0;
};

// Affine map from plan units into LiDAR raster cells:
//   cell = (g(p) - plan_anchor) / s + lidar_anchor
// where g is the linear D4 action, plan_anchor the min corner of the
// transformed rooms, and lidar_anchor the min corner of the LiDAR content.
struct PlanToLidar {
  TransformParams transform;
  Point plan_anchor;
  Point lidar_anchor;

  Point Map(Point p) const {
    const Point q = transform.element.ApplyLinear(p);
    return Point{(q.x - plan_anchor.x) / transform.s_h + lidar_anchor.x,
                 (q.y - plan_anchor.y) / transform.s_v + lidar_anchor.y};
  }
  std::vector<Point> Map(const Polygon& poly) const {
    std::vector<Point> out;
    out.reserve(poly.size());
    for (const Point& p : poly.vertices) out.push_back(Map(p));
    return out;
  }
};

// Min corner of the rooms after the linear D4 action, in plan units.
inline Box TransformedExtent(const FloorPlan& plan, const std::vector<std::size_t>& rooms,
                             D4 g) {
  std::vector<Point> pts;
  for (std::size_t i : rooms) {
    for (const Point& p : plan.rooms.at(i).outline.vertices) pts.push_back(g.ApplyLinear(p));
  }
  return BoundingBox(pts);
}

inline BinaryMask RenderMapped(const FloorPlan& plan, const std::vector<std::size_t>& rooms,
                               const PlanToLidar& map, int width, int height) {
  BinaryMask mask(width, height);
  for (std::size_t i : rooms) FillPolygon(mask, map.Map(plan.rooms.at(i).outline));
  return mask;
}

inline std::vector<std::size_t> AllRooms(const FloorPlan& plan) {
  std::vector<std::size_t> idx(plan.rooms.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

// ---------------------------------------------------------------------------
// LiDAR preprocessing.

// Converts a stored LiDAR map into a structure-intensity image (bright = seen
// structure). Occupancy maps (any pixel at the "unknown" grey level) map both
// free and occupied cells to 255; plain masks are inverted so their dark
// occupied cells become bright.
inline GrayImage LidarIntensity(const GrayImage& stored) {
  const bool tri_state =
      std::find(stored.pixels.begin(), stored.pixels.end(), kPgmUnknown) != stored.pixels.end();
  GrayImage out(stored.width, stored.height);
  for (std::size_t i = 0; i < stored.pixels.size(); ++i) {
    const std::uint8_t v = stored.pixels[i];
    if (tri_state) {
      out.pixels[i] = (v == kPgmUnknown) ? 0 : 255;
    } else {
      out.pixels[i] = static_cast<std::uint8_t>(255 - v);
    }
  }
  return out;
}

struct PreprocessedLidar {
  BinaryMask mask;  // filled region, cropped to content
  int origin_x = 0;  // crop offset in the input image
  int origin_y = 0;
};

inline constexpr double kDefaultSimplifyTolerance = 2.0;

// Binarize, drop components smaller than alpha, replace each component by its
// simplified outer outline, fill enclosed holes, and crop.
inline PreprocessedLidar PreprocessLidar(const GrayImage& img, const ComponentFilterConfig& cfg,
                                         double simplify_tol = kDefaultSimplifyTolerance) {
  const BinaryMask binary = Binarize(img, cfg.theta);
  const BinaryMask kept = FilterComponents(binary, cfg.alpha, Connectivity::kEight);
  if (kept.CountOccupied() == 0) {
    throw EmptyStructureError("no structure left after filtering components smaller than " +
                              std::to_string(cfg.alpha) + " cells");
  }
  BinaryMask smooth(kept.width(), kept.height());
  for (const Polygon& outline : ExtractOutlines(kept, simplify_tol)) {
    FillPolygon(smooth, outline.vertices);
  }
  const BinaryMask filled = FillHoles(smooth);
  if (filled.CountOccupied() == 0) {
    throw EmptyStructureError("structure vanished during contour simplification");
  }
  const CellRect rect = ContentRect(filled, 0);
  return PreprocessedLidar{Crop(filled, rect), rect.min_x, rect.min_y};
}

// ---------------------------------------------------------------------------
// Registration.

struct RegisterOptions {
  int working_size = 200;  // both sides are resampled to this square
  int render_size = kVariantRenderSize;
  unsigned threads = 1;
};

struct Candidate {
  std::size_t variant = 0;
  D4 element;
  double iou = 0.0;
  std::size_t intersection = 0;
  std::size_t union_area = 0;
};

struct RegistrationResult {
  TransformParams best;
  std::size_t variant_index = 0;
  std::vector<std::string> variant;
  double iou = 0.0;
  std::vector<std::vector<std::string>> variant_sets;
  std::vector<Candidate> candidates;  // variant-major, D4 id minor
  double h1 = 0.0, v1 = 0.0;  // transformed variant extent, plan units
  double h2 = 0.0, v2 = 0.0;  // LiDAR content extent, cells
  Point plan_anchor;
  Point lidar_anchor;

  PlanToLidar Mapping(Point extra_offset = {}) const {
    return PlanToLidar{best, plan_anchor, lidar_anchor + extra_offset};
  }
};

// Exhaustive search over room-subset variants x D4 elements for the largest
// IoU between the resampled variant and the resampled LiDAR region, followed by
// per-axis scale recovery from the native-resolution extents.
//
// Ties resolve to the earliest candidate (variant order, then D4 id), which
// the ordered reduction below preserves regardless of thread count.
inline RegistrationResult Register(const BinaryMask& lidar, const FloorPlan& plan,
                                   const RegisterOptions& opt = {}) {
  const CellRect lidar_rect = OccupiedRect(lidar);
  if (lidar_rect.empty()) throw EmptyGeometryError("LiDAR mask has no occupied cells");
  const int n = opt.working_size;
  const BinaryMask lidar_small = ResizeNearest(Crop(lidar, lidar_rect), n, n);

  std::vector<PlanVariant> variants = EnumerateVariants(plan, opt.render_size);
  RegistrationResult result;
  result.candidates.resize(variants.size() * 8);
  ParallelFor(variants.size(), opt.threads, [&](std::size_t v) {
    const BinaryMask small = ResizeNearest(CropToContent(variants[v].mask, 0), n, n);
    for (const D4 g : D4::All()) {
      const IouResult r = MaskIou(ApplyD4(small, g), lidar_small);
      result.candidates[v * 8 + g.id()] =
          Candidate{v, g, r.iou, r.intersection, r.union_area};
    }
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.candidates.size(); ++i) {
    if (result.candidates[i].iou > result.candidates[best].iou) best = i;
  }
  if (result.candidates[best].iou <= 0.0) {
    throw NoMatchError("no floor-plan variant overlaps the LiDAR map");
  }
  const Candidate& c = result.candidates[best];
  result.variant_index = c.variant;
  result.variant = variants[c.variant].included;
  result.iou = c.iou;
  for (auto& v : variants) result.variant_sets.push_back(std::move(v.included));

  const Box extent = TransformedExtent(plan, RoomIndices(plan, result.variant), c.element);
  result.h1 = extent.width();
  result.v1 = extent.height();
  result.h2 = lidar_rect.width();
  result.v2 = lidar_rect.height();
  result.best = TransformParams{c.element, result.h1 / result.h2, result.v1 / result.v2};
  result.plan_anchor = Point{extent.min_x, extent.min_y};
  result.lidar_anchor =
      Point{static_cast<double>(lidar_rect.min_x), static_cast<double>(lidar_rect.min_y)};
  return result;
}

inline nlohmann::json RegistrationToJson(const RegistrationResult& r) {
  nlohmann::json cands = nlohmann::json::array();
  for (const Candidate& c : r.candidates) {
    cands.push_back({{"variant", r.variant_sets.at(c.variant)},
                     {"rot", c.element.degrees()},
                     {"flip", std::string(FlipName(c.element.flip()))},
                     {"iou", c.iou}});
  }
  return {{"rot", r.best.element.degrees()},
          {"flip", std::string(FlipName(r.best.element.flip()))},
          {"s_h", r.best.s_h},
          {"s_v", r.best.s_v},
          {"variant", r.variant},
          {"iou", r.iou},
          {"h1", r.h1},
          {"v1", r.v1},
          {"h2", r.h2},
          {"v2", r.v2},
          {"plan_anchor", {r.plan_anchor.x, r.plan_anchor.y}},
          {"lidar_anchor", {r.lidar_anchor.x, r.lidar_anchor.y}},
          {"candidates", cands}};
}

// ---------------------------------------------------------------------------
// Metrics.

inline double IouA(std::span<const double> per_room_ious) {
  if (per_room_ious.empty()) throw Error("IoU_a of an empty room list");
  double sum = 0.0;
  for (double v : per_room_ious) sum += v;
  return sum / static_cast<double>(per_room_ious.size());
}

struct GroundTruth {
  TransformParams transform;
  Point plan_anchor;   // min corner of the transformed full plan, plan units
  Point lidar_anchor;  // where that corner lands in the LiDAR image, cells
  double completeness = 1.0;

  PlanToLidar Mapping() const { return PlanToLidar{transform, plan_anchor, lidar_anchor}; }
};

struct EvalCase {
  FloorPlan plan;
  GrayImage lidar;  // as stored (PGM grey levels)
  GroundTruth truth;
};

struct EvalConfig {
  ComponentFilterConfig filter;
  double simplify_tol = kDefaultSimplifyTolerance;
  RegisterOptions reg;
};

struct CaseOutcome {
  double completeness = 1.0;
  bool rotation_ok = false;
  bool fold_ok = false;
  double iou_a = 0.0;
  double fused_iou = 0.0;
  double scale_error_h = 0.0;  // relative
  double scale_error_v = 0.0;
  double time_s = 0.0;
  D4 recovered;
  bool failed = false;  // registration threw
};

// Per-room IoU between the plan placed by `recovered` and by `truth`, both
// rendered into a width x height frame.
inline std::vector<double> PerRoomIou(const FloorPlan& plan, const PlanToLidar& recovered,
                                      const PlanToLidar& truth, int width, int height) {
  std::vector<double> out;
  for (std::size_t i = 0; i < plan.rooms.size(); ++i) {
    const BinaryMask a = RenderMapped(plan, {i}, recovered, width, height);
    const BinaryMask b = RenderMapped(plan, {i}, truth, width, height);
    out.push_back(MaskIou(a, b).iou);
  }
  return out;
}

inline CaseOutcome EvaluateCase(const EvalCase& c, const EvalConfig& cfg) {
  CaseOutcome out;
  out.completeness = c.truth.completeness;
  const PreprocessedLidar pre =
      PreprocessLidar(LidarIntensity(c.lidar), cfg.filter, cfg.simplify_tol);
  const auto t0 = std::chrono::steady_clock::now();
  RegistrationResult r;
  try {
    r = Register(pre.mask, c.plan, cfg.reg);
  } catch (const NoMatchError&) {
    out.failed = true;
    out.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }
  out.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.recovered = r.best.element;
  out.rotation_ok = r.best.element.quarter_turns() == c.truth.transform.element.quarter_turns();
  out.fold_ok = r.best.element.flip() == c.truth.transform.element.flip();
  out.fused_iou = r.iou;
  out.scale_error_h = std::abs(r.best.s_h / c.truth.transform.s_h - 1.0);
  out.scale_error_v = std::abs(r.best.s_v / c.truth.transform.s_v - 1.0);
  const PlanToLidar recovered =
      r.Mapping(Point{static_cast<double>(pre.origin_x), static_cast<double>(pre.origin_y)});
  const std::vector<double> ious =
      PerRoomIou(c.plan, recovered, c.truth.Mapping(), c.lidar.width, c.lidar.height);
  out.iou_a = IouA(ious);
  return out;
}

struct MetricsReport {
  std::size_t cases = 0;
  double fold_accuracy = 0.0;
  double rotation_accuracy = 0.0;
  double iou_a = 0.0;
  double mean_fused_iou = 0.0;
  double mean_time_s = 0.0;
};

inline MetricsReport Summarize(std::span<const CaseOutcome> outcomes) {
  MetricsReport m;
  m.cases = outcomes.size();
  if (outcomes.empty()) return m;
  for (const CaseOutcome& o : outcomes) {
    m.fold_accuracy += o.fold_ok;
    m.rotation_accuracy += o.rotation_ok;
    m.iou_a += o.iou_a;
    m.mean_fused_iou += o.fused_iou;
    m.mean_time_s += o.time_s;
  }
  const double n = static_cast<double>(outcomes.size());
  m.fold_accuracy /= n;
  m.rotation_accuracy /= n;
  m.iou_a /= n;
  m.mean_fused_iou /= n;
  m.mean_time_s /= n;
  return m;
}

inline std::vector<CaseOutcome> EvaluateCases(std::span<const EvalCase> cases,
                                              const EvalConfig& cfg, unsigned threads = 1) {
  std::vector<CaseOutcome> outcomes(cases.size());
  ParallelFor(cases.size(), threads, [&](std::size_t i) {
    outcomes[i] = EvaluateCase(cases[i], cfg);
  });
  return outcomes;
}

inline MetricsReport Evaluate(std::span<const EvalCase> cases, const EvalConfig& cfg = {}) {
  if (cases.empty()) throw Error("evaluation needs at least one case");
  const std::vector<CaseOutcome> outcomes = EvaluateCases(cases, cfg);
  return Summarize(outcomes);
}

inline nlohmann::json MetricsToJson(const MetricsReport& m) {
  return {{"cases", m.cases},
          {"fold_accuracy", m.fold_accuracy},
          {"rotation_accuracy", m.rotation_accuracy},
          {"iou_a", m.iou_a},
          {"mean_fused_iou", m.mean_fused_iou},
          {"mean_time_s", m.mean_time_s}};
}

}  // namespace planreg

#endif  // PLANREG_REGISTRATION_H_
