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

#ifndef PLANREG_GEOMETRY_H_
#define PLANREG_GEOMETRY_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "planreg/error.h"

namespace planreg {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
};

inline double Distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

// A closed ring of vertices; the edge from the last vertex back to the first is
// implicit. Either winding is accepted.
struct Polygon {
  std::vector<Point> vertices;

  std::size_t size() const { return vertices.size(); }
  const Point& operator[](std::size_t i) const { return vertices[i]; }
  friend bool operator==(const Polygon&, const Polygon&) = default;
};

// Axis-aligned extents. For polygons these are continuous coordinates; for
// masks see MaskBoundingBox() in contour.h, which counts whole cells.
struct Box {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
};

inline void ValidatePolygon(const Polygon& poly) {
  if (poly.size() < 3) {
    throw InvalidPolygonError("polygon needs at least 3 vertices, got " +
                              std::to_string(poly.size()));
  }
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& p = poly[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidPolygonError("polygon has a non-finite vertex");
    }
    if (p == poly[(i + 1) % poly.size()]) {
      throw InvalidPolygonError("polygon has repeated consecutive vertices");
    }
  }
}

// Twice-signed area via the shoelace sum; positive for counter-clockwise rings
// in a y-up frame (clockwise on screen when y points down).
inline double SignedArea(std::span<const Point> ring) {
  double sum = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % n];
    sum += a.x * b.y - b.x * a.y;
  }
  return 0.5 * sum;
}

// Area enclosed by a simple polygon (Gauss's area formula).
inline double ShoelaceArea(const Polygon& poly) {
  if (poly.size() < 3) {
    throw InvalidPolygonError("shoelace area needs at least 3 vertices");
  }
  return std::abs(SignedArea(poly.vertices));
}

inline Box BoundingBox(std::span<const Point> points) {
  if (points.empty()) throw EmptyGeometryError("bounding box of empty point set");
  Box box{points[0].x, points[0].y, points[0].x, points[0].y};
  for (const Point& p : points) {
    box.min_x = std::min(box.min_x, p.x);
    box.min_y = std::min(box.min_y, p.y);
    box.max_x = std::max(box.max_x, p.x);
    box.max_y = std::max(box.max_y, p.y);
  }
  return box;
}

inline Box BoundingBox(const Polygon& poly) { return BoundingBox(poly.vertices); }

inline double PointSegmentDistance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  if (len2 == 0.0) return Distance(p, a);
  const double t =
      std::clamp(((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2, 0.0, 1.0);
  return Distance(p, a + ab * t);
}

// Distance from p to the closed boundary of the ring.
inline double PointRingDistance(Point p, std::span<const Point> ring) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ring.size(); ++i) {
    best = std::min(best,
                    PointSegmentDistance(p, ring[i], ring[(i + 1) % ring.size()]));
  }
  return best;
}

// Even-odd containment test.
inline bool PointInPolygon(Point p, std::span<const Point> ring) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = ring[i];
    const Point& b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

namespace internal {

inline double Cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline bool OnSegment(Point p, Point a, Point b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

inline bool SegmentsIntersect(Point p1, Point p2, Point q1, Point q2) {
  const double d1 = Cross(q1, q2, p1);
  const double d2 = Cross(q1, q2, p2);
  const double d3 = Cross(p1, p2, q1);
  const double d4 = Cross(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0 && OnSegment(p1, q1, q2)) return true;
  if (d2 == 0 && OnSegment(p2, q1, q2)) return true;
  if (d3 == 0 && OnSegment(q1, p1, p2)) return true;
  if (d4 == 0 && OnSegment(q2, p1, p2)) return true;
  return false;
}

}  // namespace internal

// True when no two non-adjacent edges touch and adjacent edges meet only at
// their shared vertex. Quadratic; outlines here have tens of vertices.
inline bool IsSimplePolygon(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a1 = poly[i];
    const Point a2 = poly[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point b1 = poly[j];
      const Point b2 = poly[(j + 1) % n];
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        // Adjacent edges may only overlap if they fold back on each other.
        const Point shared = (j == i + 1) ? a2 : a1;
        const Point other_a = (j == i + 1) ? a1 : a2;
        const Point other_b = (j == i + 1) ? b2 : b1;
        if (internal::Cross(shared, other_a, other_b) == 0.0) {
          const Point da = other_a - shared;
          const Point db = other_b - shared;
          if (da.x * db.x + da.y * db.y > 0.0) return false;
        }
        continue;
      }
      if (internal::SegmentsIntersect(a1, a2, b1, b2)) return false;
    }
  }
  return std::abs(SignedArea(poly.vertices)) > 0.0;
}

// Closed-contour polyline simplification by recursive split at the point of
// maximum deviation. The ring is anchored at two extreme points (the point
// farthest from the first input point, and the point farthest from that one),
// so the anchors are genuine hull vertices rather than arbitrary samples.
//
// Every dropped point lies within `tolerance` of the output edge that replaced
// it; output vertices are a subsequence of the input in input order.
inline Polygon SimplifyContour(std::span<const Point> points, double tolerance) {
  const std::size_t n = points.size();
  if (n < 3) {
    throw InvalidPolygonError("contour simplification needs at least 3 points");
  }
  tolerance = std::max(tolerance, 0.0);

  auto farthest_from = [&](std::size_t from) {
    std::size_t best = from;
    double best_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = Distance(points[i], points[from]);
      if (d > best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  };
  const std::size_t a = farthest_from(0);
  const std::size_t b = farthest_from(a);
  if (a == b) throw InvalidPolygonError("contour collapses to a single point");

  std::vector<bool> keep(n, false);
  keep[a] = keep[b] = true;

  // Chains are walked modulo n: a -> b and b -> a.
  std::vector<std::pair<std::size_t, std::size_t>> stack = {{a, (b + n - a) % n},
                                                            {b, (a + n - b) % n}};
  while (!stack.empty()) {
    const auto [start, span_len] = stack.back();
    stack.pop_back();
    if (span_len < 2) continue;
    const Point p0 = points[start];
    const Point p1 = points[(start + span_len) % n];
    double max_d = -1.0;
    std::size_t max_k = 0;
    for (std::size_t k = 1; k < span_len; ++k) {
      const double d = PointSegmentDistance(points[(start + k) % n], p0, p1);
      if (d > max_d) {
        max_d = d;
        max_k = k;
      }
    }
    if (max_d > tolerance) {
      keep[(start + max_k) % n] = true;
      stack.push_back({start, max_k});
      stack.push_back({(start + max_k) % n, span_len - max_k});
    }
  }

  Polygon out;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i] && (out.vertices.empty() || out.vertices.back() != points[i])) {
      out.vertices.push_back(points[i]);
    }
  }
  if (out.size() > 1 && out.vertices.front() == out.vertices.back()) {
    out.vertices.pop_back();
  }
  if (out.size() < 3) {
    // Degenerate (collinear) input: fall back to the two anchors plus the
    // point farthest from their chord, which is the best 3-vertex ring.
    std::size_t best = a;
    double best_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = PointSegmentDistance(points[i], points[a], points[b]);
      if (d > best_d && i != a && i != b) {
        best_d = d;
        best = i;
      }
    }
    std::vector<std::size_t> idx = {a, b, best};
    std::sort(idx.begin(), idx.end());
    out.vertices.clear();
    for (std::size_t i : idx) out.vertices.push_back(points[i]);
  }
  return out;
}

// Vertices whose turning angle (between incoming and outgoing edge directions)
// exceeds `min_turn_radians`.
inline std::vector<Point> DominantPoints(const Polygon& poly, double min_turn_radians) {
  std::vector<Point> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point prev = poly[(i + n - 1) % n];
    const Point cur = poly[i];
    const Point next = poly[(i + 1) % n];
    const Point u = cur - prev;
    const Point v = next - cur;
    const double turn = std::abs(std::atan2(u.x * v.y - u.y * v.x, u.x * v.x + u.y * v.y));
    if (turn > min_turn_radians) out.push_back(cur);
  }
  return out;
}

}  // namespace planreg

#endif  // PLANREG_GEOMETRY_H_
