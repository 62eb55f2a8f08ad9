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

#ifndef PLANREG_RASTER_H_
#define PLANREG_RASTER_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "planreg/d4.h"
#include "planreg/error.h"
#include "planreg/geometry.h"
#include "planreg/mask.h"

namespace planreg {

enum class Connectivity { kFour = 4, kEight = 8 };

struct ComponentFilterConfig {
  int theta = 128;  // binarization threshold
  int alpha = 50;   // minimum component area, cells
};

// Inclusive cell rectangle.
struct CellRect {
  int min_x = 0;
  int min_y = 0;
  int max_x = -1;
  int max_y = -1;

  int width() const { return max_x - min_x + 1; }
  int height() const { return max_y - min_y + 1; }
  bool empty() const { return max_x < min_x || max_y < min_y; }
};

// Pixels at or above theta become 1.
inline BinaryMask Binarize(const GrayImage& img, int theta) {
  BinaryMask out(img.width, img.height);
  auto& cells = out.mutable_cells();
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    cells[i] = img.pixels[i] >= theta ? 1 : 0;
  }
  return out;
}

struct ComponentLabels {
  std::vector<int> label;  // -1 for empty cells
  std::vector<std::size_t> area;
};

// Labels are assigned in row-major order of each component's first cell.
inline ComponentLabels LabelComponents(const BinaryMask& mask, Connectivity conn) {
  const int w = mask.width();
  const int h = mask.height();
  ComponentLabels result;
  result.label.assign(mask.size(), -1);
  std::vector<std::size_t> queue;
  queue.reserve(mask.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t seed = mask.Index(x, y);
      if (!mask.cells()[seed] || result.label[seed] >= 0) continue;
      const int id = static_cast<int>(result.area.size());
      queue.clear();
      queue.push_back(seed);
      result.label[seed] = id;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const int cx = static_cast<int>(queue[head] % w);
        const int cy = static_cast<int>(queue[head] / w);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            if (conn == Connectivity::kFour && dx != 0 && dy != 0) continue;
            const int nx = cx + dx;
            const int ny = cy + dy;
            if (!mask.InBounds(nx, ny)) continue;
            const std::size_t ni = mask.Index(nx, ny);
            if (mask.cells()[ni] && result.label[ni] < 0) {
              result.label[ni] = id;
              queue.push_back(ni);
            }
          }
        }
      }
      result.area.push_back(queue.size());
    }
  }
  return result;
}

// Keeps the occupied cells whose connected component has at least `alpha`
// cells.
inline BinaryMask FilterComponents(const BinaryMask& mask, int alpha,
                                   Connectivity conn = Connectivity::kEight) {
  if (alpha <= 0) return mask;
  const ComponentLabels labels = LabelComponents(mask, conn);
  BinaryMask out(mask.width(), mask.height());
  auto& cells = out.mutable_cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const int l = labels.label[i];
    cells[i] = (l >= 0 && labels.area[l] >= static_cast<std::size_t>(alpha)) ? 1 : 0;
  }
  return out;
}

// 4-connected flood fill from the cell containing `seed`.
inline BinaryMask FloodFill(const BinaryMask& mask, Point seed, bool value) {
  const int sx = static_cast<int>(std::floor(seed.x));
  const int sy = static_cast<int>(std::floor(seed.y));
  if (!mask.InBounds(sx, sy)) {
    throw BoundsError("flood fill seed (" + std::to_string(sx) + ", " +
                      std::to_string(sy) + ") outside " +
                      std::to_string(mask.width()) + "x" +
                      std::to_string(mask.height()) + " mask");
  }
  BinaryMask out = mask;
  const bool original = mask.Get(sx, sy);
  if (original == value) return out;
  const int w = mask.width();
  std::vector<std::size_t> stack = {mask.Index(sx, sy)};
  out.Set(sx, sy, value);
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const int cx = static_cast<int>(i % w);
    const int cy = static_cast<int>(i / w);
    constexpr int kDx[4] = {1, -1, 0, 0};
    constexpr int kDy[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int nx = cx + kDx[k];
      const int ny = cy + kDy[k];
      if (out.InBounds(nx, ny) && out.Get(nx, ny) == original) {
        out.Set(nx, ny, value);
        stack.push_back(out.Index(nx, ny));
      }
    }
  }
  return out;
}

// Sets every empty cell that is not 4-connected to the mask border.
inline BinaryMask FillHoles(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  // Pad by one cell so the whole exterior is a single 4-connected region.
  BinaryMask padded(w + 2, h + 2);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) padded.Set(x + 1, y + 1, mask.Get(x, y));
  }
  const BinaryMask exterior = FloodFill(padded, Point{0.0, 0.0}, true);
  BinaryMask out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // Cells the fill could not reach are enclosed holes or already occupied.
      out.Set(x, y, !exterior.Get(x + 1, y + 1) || mask.Get(x, y));
    }
  }
  return out;
}

inline CellRect OccupiedRect(const BinaryMask& mask) {
  CellRect r{mask.width(), mask.height(), -1, -1};
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.Get(x, y)) continue;
      r.min_x = std::min(r.min_x, x);
      r.min_y = std::min(r.min_y, y);
      r.max_x = std::max(r.max_x, x);
      r.max_y = std::max(r.max_y, y);
    }
  }
  if (r.max_x < 0) return CellRect{};
  return r;
}

inline BinaryMask Crop(const BinaryMask& mask, const CellRect& rect) {
  BinaryMask out(rect.width(), rect.height());
  for (int y = 0; y < rect.height(); ++y) {
    for (int x = 0; x < rect.width(); ++x) {
      out.Set(x, y, mask.Get(rect.min_x + x, rect.min_y + y));
    }
  }
  return out;
}

// The occupied bounding box grown by `margin` and clamped to the mask.
inline CellRect ContentRect(const BinaryMask& mask, int margin) {
  CellRect r = OccupiedRect(mask);
  if (r.empty()) throw EmptyGeometryError("cannot crop a mask with no occupied cells");
  r.min_x = std::max(0, r.min_x - margin);
  r.min_y = std::max(0, r.min_y - margin);
  r.max_x = std::min(mask.width() - 1, r.max_x + margin);
  r.max_y = std::min(mask.height() - 1, r.max_y + margin);
  return r;
}

inline BinaryMask CropToContent(const BinaryMask& mask, int margin) {
  return Crop(mask, ContentRect(mask, margin));
}

// Nearest-neighbour resampling; the aspect ratio follows the requested size.
inline BinaryMask ResizeNearest(const BinaryMask& mask, int out_w, int out_h) {
  if (out_w <= 0 || out_h <= 0) throw ShapeError("resize target must be positive");
  if (mask.empty()) throw ShapeError("cannot resize an empty mask");
  BinaryMask out(out_w, out_h);
  std::vector<int> src_x(out_w);
  for (int x = 0; x < out_w; ++x) {
    src_x[x] = std::min(mask.width() - 1,
                        static_cast<int>((2LL * x + 1) * mask.width() / (2LL * out_w)));
  }
  for (int y = 0; y < out_h; ++y) {
    const int sy = std::min(mask.height() - 1,
                            static_cast<int>((2LL * y + 1) * mask.height() / (2LL * out_h)));
    for (int x = 0; x < out_w; ++x) out.Set(x, y, mask.Get(src_x[x], sy));
  }
  return out;
}

struct IouResult {
  double iou = 0.0;
  std::size_t intersection = 0;
  std::size_t union_area = 0;
  // Set when both masks are empty; iou is reported as 0 in that case.
  bool empty_union = false;
};

inline IouResult MaskIou(const BinaryMask& a, const BinaryMask& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw ShapeError("IoU of masks with different shapes: " +
                     std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                     " vs " + std::to_string(b.width()) + "x" +
                     std::to_string(b.height()));
  }
  IouResult r;
  const auto& ca = a.cells();
  const auto& cb = b.cells();
  for (std::size_t i = 0; i < ca.size(); ++i) {
    r.intersection += ca[i] & cb[i];
    r.union_area += ca[i] | cb[i];
  }
  r.empty_union = r.union_area == 0;
  r.iou = r.empty_union ? 0.0
                        : static_cast<double>(r.intersection) /
                              static_cast<double>(r.union_area);
  return r;
}

// Mirror across the vertical axis first (if requested), then rotate
// counter-clockwise on screen. Quarter turns swap the dimensions.
inline BinaryMask ApplyD4(const BinaryMask& mask, D4 g) {
  const int w = mask.width();
  const int h = mask.height();
  const int out_w = g.swaps_axes() ? h : w;
  const int out_h = g.swaps_axes() ? w : h;
  BinaryMask out(out_w, out_h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.Get(x, y)) continue;
      int px = g.flipped() ? w - 1 - x : x;
      int py = y;
      int cur_w = w;
      int cur_h = h;
      for (int t = 0; t < g.quarter_turns(); ++t) {
        const int nx = py;
        const int ny = cur_w - 1 - px;
        px = nx;
        py = ny;
        std::swap(cur_w, cur_h);
      }
      out.Set(px, py, true);
    }
  }
  return out;
}

inline BinaryMask ApplyD4(const BinaryMask& mask, int degrees, Flip flip) {
  return ApplyD4(mask, D4::FromDegrees(degrees, flip));
}

// Sets every cell whose centre lies inside the ring (even-odd rule). The ring
// is in cell coordinates: cell (i, j) covers [i, i+1) x [j, j+1).
inline void FillPolygon(BinaryMask& mask, std::span<const Point> ring) {
  if (ring.size() < 3) return;
  const Box box = BoundingBox(ring);
  const int y0 = std::max(0, static_cast<int>(std::floor(box.min_y - 0.5)));
  const int y1 = std::min(mask.height() - 1, static_cast<int>(std::ceil(box.max_y)));
  std::vector<double> xs;
  for (int j = y0; j <= y1; ++j) {
    const double yc = j + 0.5;
    xs.clear();
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const Point a = ring[i];
      const Point b = ring[(i + 1) % ring.size()];
      if ((a.y <= yc && yc < b.y) || (b.y <= yc && yc < a.y)) {
        xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
      }
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      // Cells with centre in [xs[k], xs[k+1]).
      const int i0 = std::max(0, static_cast<int>(std::ceil(xs[k] - 0.5)));
      const int i1 = std::min(mask.width(), static_cast<int>(std::ceil(xs[k + 1] - 0.5)));
      for (int i = i0; i < i1; ++i) mask.Set(i, j, true);
    }
  }
}

inline BinaryMask RasterizePolygon(std::span<const Point> ring, int width, int height) {
  BinaryMask mask(width, height);
  FillPolygon(mask, ring);
  return mask;
}

// Marks the cells a segment passes through, sampled at quarter-cell steps.
// Endpoints are put in a canonical order so a shared edge drawn from either
// side touches the same cells.
inline void DrawSegment(BinaryMask& mask, Point a, Point b) {
  if (b.x < a.x || (b.x == a.x && b.y < a.y)) std::swap(a, b);
  const double len = Distance(a, b);
  const int steps = std::max(1, static_cast<int>(std::ceil(len * 4.0)));
  for (int s = 0; s <= steps; ++s) {
    const double t = static_cast<double>(s) / steps;
    const int x = static_cast<int>(std::floor(a.x + (b.x - a.x) * t));
    const int y = static_cast<int>(std::floor(a.y + (b.y - a.y) * t));
    if (mask.InBounds(x, y)) mask.Set(x, y, true);
  }
}

inline void DrawRing(BinaryMask& mask, std::span<const Point> ring) {
  for (std::size_t i = 0; i < ring.size(); ++i) {
    DrawSegment(mask, ring[i], ring[(i + 1) % ring.size()]);
  }
}

inline BinaryMask Union(const BinaryMask& a, const BinaryMask& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw ShapeError("union of masks with different shapes");
  }
  BinaryMask out = a;
  auto& c = out.mutable_cells();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] |= b.cells()[i];
  return out;
}

}  // namespace planreg

#endif  // PLANREG_RASTER_H_
