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

#include <array>
#include <set>

#include "gtest/gtest.h"
#include "planreg/d4.h"
#include "planreg/random.h"
#include "planreg/raster.h"

namespace planreg {
namespace {

// 2x2 integer matrix of the linear action, read off the basis vectors.
using Mat = std::array<int, 4>;

Mat MatrixOf(D4 g) {
  const Point ex = g.ApplyLinear({1, 0});
  const Point ey = g.ApplyLinear({0, 1});
  return {static_cast<int>(ex.x), static_cast<int>(ey.x), static_cast<int>(ex.y),
          static_cast<int>(ey.y)};
}

Mat Mul(const Mat& a, const Mat& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

BinaryMask AsymmetricFixture() {
  // An L with a notch; no symmetry of the square maps it to itself.
  BinaryMask m(7, 5);
  for (int x = 0; x < 7; ++x) m.Set(x, 0, true);
  for (int y = 0; y < 5; ++y) m.Set(0, y, true);
  m.Set(1, 1, true);
  m.Set(5, 1, true);
  return m;
}

TEST(D4Test, IdsRoundTrip) {
  for (int id = 0; id < 8; ++id) EXPECT_EQ(D4::FromId(id).id(), id);
  EXPECT_EQ(D4::FromDegrees(270, Flip::kHorizontal).id(), 7);
  EXPECT_THROW(D4::FromDegrees(45, Flip::kNone), Error);
}

TEST(D4Test, EightDistinctTransformsOfAsymmetricMask) {
  const BinaryMask m = AsymmetricFixture();
  std::vector<BinaryMask> images;
  for (D4 g : D4::All()) images.push_back(ApplyD4(m, g));
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      EXPECT_NE(images[i], images[j]) << i << " vs " << j;
    }
  }
}

TEST(D4Test, MatricesAreTheEightSignedPermutations) {
  std::set<Mat> seen;
  for (D4 g : D4::All()) {
    const Mat m = MatrixOf(g);
    const int det = m[0] * m[3] - m[1] * m[2];
    EXPECT_EQ(det, g.flipped() ? -1 : 1);
    seen.insert(m);
  }
  EXPECT_EQ(seen.size(), 8u);
}

TEST(D4Test, CompositionTableMatchesMatrixProduct) {
  for (D4 a : D4::All()) {
    for (D4 b : D4::All()) {
      EXPECT_EQ(MatrixOf(Compose(b, a)), Mul(MatrixOf(b), MatrixOf(a)))
          << "b=" << b.id() << " a=" << a.id();
    }
  }
}

TEST(D4Test, GroupAxioms) {
  const D4 e = D4::FromId(0);
  for (D4 a : D4::All()) {
    EXPECT_EQ(Compose(a, e), a);
    EXPECT_EQ(Compose(e, a), a);
    EXPECT_EQ(Compose(Inverse(a), a), e);
    EXPECT_EQ(Compose(a, Inverse(a)), e);
    for (D4 b : D4::All()) {
      for (D4 c : D4::All()) {
        EXPECT_EQ(Compose(c, Compose(b, a)), Compose(Compose(c, b), a));
      }
    }
  }
  // Non-abelian: a reflection does not commute with a quarter turn.
  EXPECT_NE(Compose(D4::FromId(1), D4::FromId(4)), Compose(D4::FromId(4), D4::FromId(1)));
}

TEST(D4Test, MaskActionComposes) {
  Rng rng(9);
  BinaryMask m(6, 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 6; ++x) m.Set(x, y, rng.Uniform() < 0.5);
  }
  for (D4 a : D4::All()) {
    for (D4 b : D4::All()) {
      EXPECT_EQ(ApplyD4(ApplyD4(m, a), b), ApplyD4(m, Compose(b, a)));
    }
  }
}

TEST(D4Test, QuarterTurnSwapsDimensions) {
  const BinaryMask r = ApplyD4(AsymmetricFixture(), D4::FromId(1));
  EXPECT_EQ(r.width(), 5);
  EXPECT_EQ(r.height(), 7);
}

TEST(D4Test, FlipNames) {
  EXPECT_EQ(ParseFlip(FlipName(Flip::kHorizontal)), Flip::kHorizontal);
  EXPECT_EQ(ParseFlip(FlipName(Flip::kNone)), Flip::kNone);
  EXPECT_THROW(ParseFlip("diagonal"), Error);
}

}  // namespace
}  // namespace planreg
