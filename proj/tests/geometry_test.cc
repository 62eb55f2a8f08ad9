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
#include <numbers>

#include "gtest/gtest.h"
#include "planreg/geometry.h"
#include "planreg/random.h"

namespace planreg {
namespace {

Polygon Square(double s) { return Polygon{{{0, 0}, {s, 0}, {s, s}, {0, s}}}; }

TEST(ShoelaceTest, UnitSquare) { EXPECT_DOUBLE_EQ(ShoelaceArea(Square(1.0)), 1.0); }

TEST(ShoelaceTest, WindingDoesNotMatter) {
  Polygon cw = Square(3.0);
  std::reverse(cw.vertices.begin(), cw.vertices.end());
  EXPECT_DOUBLE_EQ(ShoelaceArea(cw), 9.0);
  EXPECT_DOUBLE_EQ(SignedArea(cw.vertices), -SignedArea(Square(3.0).vertices));
}

TEST(ShoelaceTest, LShapeMatchesRectangleDecomposition) {
  const Polygon l{{{0, 0}, {6, 0}, {6, 2}, {2, 2}, {2, 5}, {0, 5}}};
  EXPECT_DOUBLE_EQ(ShoelaceArea(l), 6.0 * 2.0 + 2.0 * 3.0);
}

TEST(ShoelaceTest, RegularPolygonApproachesCircle) {
  Polygon p;
  const int n = 720;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    p.vertices.push_back({10.0 * std::cos(a), 10.0 * std::sin(a)});
  }
  const double exact = 0.5 * n * 100.0 * std::sin(2.0 * std::numbers::pi / n);
  EXPECT_NEAR(ShoelaceArea(p), exact, 1e-9);
}

TEST(ShoelaceTest, DegenerateInputThrows) {
  EXPECT_THROW(ShoelaceArea(Polygon{{{0, 0}, {1, 1}}}), Error);
}

TEST(PolygonTest, ValidateRejectsRepeatedVertex) {
  EXPECT_THROW(ValidatePolygon(Polygon{{{0, 0}, {0, 0}, {1, 1}, {0, 1}}}), Error);
}

TEST(PolygonTest, PointInPolygon) {
  const Polygon l{{{0, 0}, {6, 0}, {6, 2}, {2, 2}, {2, 5}, {0, 5}}};
  EXPECT_TRUE(PointInPolygon({1, 4}, l.vertices));
  EXPECT_TRUE(PointInPolygon({5, 1}, l.vertices));
  EXPECT_FALSE(PointInPolygon({4, 4}, l.vertices));
  EXPECT_FALSE(PointInPolygon({-1, 1}, l.vertices));
}

TEST(PolygonTest, SimplicityDetectsBowTie) {
  EXPECT_TRUE(IsSimplePolygon(Square(2.0)));
  EXPECT_FALSE(IsSimplePolygon(Polygon{{{0, 0}, {2, 2}, {2, 0}, {0, 2}}}));
}

TEST(PolygonTest, BoundingBox) {
  const Box b = BoundingBox(Polygon{{{1, -2}, {4, 0}, {-3, 5}}});
  EXPECT_EQ(b.min_x, -3);
  EXPECT_EQ(b.min_y, -2);
  EXPECT_EQ(b.max_x, 4);
  EXPECT_EQ(b.max_y, 5);
}

TEST(PolygonTest, PointSegmentDistance) {
  EXPECT_DOUBLE_EQ(PointSegmentDistance({1, 1}, {0, 0}, {2, 0}), 1.0);
  EXPECT_DOUBLE_EQ(PointSegmentDistance({3, 0}, {0, 0}, {2, 0}), 1.0);
}

TEST(SimplifyTest, DropsCollinearAndNoisyPoints) {
  std::vector<Point> ring;
  Rng rng(5);
  for (int i = 0; i < 10; ++i) ring.push_back({double(i), rng.Uniform(-0.2, 0.2)});
  for (int i = 0; i < 10; ++i) ring.push_back({10.0 + rng.Uniform(-0.2, 0.2), double(i)});
  for (int i = 10; i > 0; --i) ring.push_back({double(i), 10.0 + rng.Uniform(-0.2, 0.2)});
  for (int i = 10; i > 0; --i) ring.push_back({rng.Uniform(-0.2, 0.2), double(i)});
  const Polygon s = SimplifyContour(ring, 1.0);
  EXPECT_EQ(s.size(), 4u);
  EXPECT_NEAR(ShoelaceArea(s), 100.0, 6.0);
}

TEST(SimplifyTest, ZeroToleranceKeepsCorners) {
  const Polygon l{{{0, 0}, {6, 0}, {6, 2}, {2, 2}, {2, 5}, {0, 5}}};
  EXPECT_DOUBLE_EQ(ShoelaceArea(SimplifyContour(l.vertices, 0.0)), ShoelaceArea(l));
}

}  // namespace
}  // namespace planreg
