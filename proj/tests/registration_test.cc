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

#include <filesystem>
#include <vector>

#include "gtest/gtest.h"
#include "planreg/registration.h"
#include "planreg/synthetic.h"

namespace planreg {
namespace {

// Asymmetric four-room plan in centimetres.
FloorPlan Fixture() {
  FloorPlan p;
  p.units_per_cell = 5.0;
  p.rooms = {{"living", RoomKind::kLivingRoom, Rect(0, 0, 600, 400)},
             {"bed", RoomKind::kBedroom, Rect(600, 0, 900, 300)},
             {"bath", RoomKind::kOther, Rect(0, 400, 300, 650)},
             {"study", RoomKind::kOther, Rect(300, 400, 500, 550)}};
  return p;
}

struct Registered {
  SyntheticCase truth;
  RegistrationResult result;
  PreprocessedLidar pre;
};

Registered RegisterFixture(D4 g, double s_h, double s_v, double completeness = 1.0) {
  Rng rng(1);
  Registered r;
  r.truth = MakeCase(Fixture(), TransformParams{g, s_h, s_v}, completeness, rng);
  r.pre = PreprocessLidar(LidarIntensity(MaskToGray(r.truth.lidar)), {});
  r.result = Register(r.pre.mask, r.truth.plan);
  return r;
}

TEST(RegisterTest, IdentityPair) {
  const Registered r = RegisterFixture(D4::FromId(0), 2.5, 2.5);
  EXPECT_EQ(r.result.best.element.degrees(), 0);
  EXPECT_EQ(r.result.best.element.flip(), Flip::kNone);
  EXPECT_NEAR(r.result.best.s_h, 2.5, 0.05 * 2.5);
  EXPECT_NEAR(r.result.best.s_v, 2.5, 0.05 * 2.5);
  EXPECT_GT(r.result.iou, 0.95);
  EXPECT_EQ(r.result.variant.size(), 4u);
}

TEST(RegisterTest, RecoversEveryD4ElementAndScales) {
  for (D4 g : D4::All()) {
    const Registered r = RegisterFixture(g, 2.0, 3.0);
    EXPECT_EQ(r.result.best.element, g) << "truth id " << g.id();
    EXPECT_NEAR(r.result.best.s_h / 2.0, 1.0, 0.05) << "truth id " << g.id();
    EXPECT_NEAR(r.result.best.s_v / 3.0, 1.0, 0.05) << "truth id " << g.id();
  }
}

TEST(RegisterTest, RecoveredMappingPlacesRoomsOnTruth) {
  const D4 g = D4::FromDegrees(90, Flip::kHorizontal);
  const Registered r = RegisterFixture(g, 2.0, 2.0);
  const PlanToLidar recovered = r.result.Mapping(
      Point{static_cast<double>(r.pre.origin_x), static_cast<double>(r.pre.origin_y)});
  const std::vector<double> ious = PerRoomIou(r.truth.plan, recovered, r.truth.truth.Mapping(),
                                              r.truth.lidar.width(), r.truth.lidar.height());
  for (double v : ious) EXPECT_GT(v, 0.9);
}

TEST(RegisterTest, CandidatesAreVariantMajor) {
  const Registered r = RegisterFixture(D4::FromId(3), 2.0, 2.0);
  ASSERT_EQ(r.result.candidates.size(), r.result.variant_sets.size() * 8);
  for (std::size_t i = 0; i < r.result.candidates.size(); ++i) {
    EXPECT_EQ(r.result.candidates[i].variant, i / 8);
    EXPECT_EQ(r.result.candidates[i].element.id(), static_cast<int>(i % 8));
    EXPECT_LE(r.result.candidates[i].iou, r.result.iou);
  }
}

TEST(RegisterTest, PartialCoverageChoosesSubsetVariant) {
  const Registered r = RegisterFixture(D4::FromId(0), 2.0, 2.0, 0.6);
  EXPECT_EQ(r.result.variant.front(), "living");
  EXPECT_LT(r.result.variant.size(), 4u);
  EXPECT_EQ(r.result.best.element.id(), 0);
}

TEST(RegisterTest, EmptyLidarThrows) {
  EXPECT_THROW(Register(BinaryMask(10, 10), Fixture()), EmptyGeometryError);
}

TEST(RegisterTest, JsonCarriesTransform) {
  const Registered r = RegisterFixture(D4::FromId(6), 2.0, 2.0);
  const nlohmann::json j = RegistrationToJson(r.result);
  EXPECT_EQ(j.at("rot").get<int>(), 180);
  EXPECT_EQ(j.at("flip").get<std::string>(), "horizontal");
  EXPECT_EQ(j.at("candidates").size(), r.result.candidates.size());
}

TEST(PreprocessTest, SmallSpeckleIsFilteredOut) {
  BinaryMask m(100, 100);
  FillPolygon(m, Rect(10, 10, 60, 50).vertices);
  m.Set(90, 90, true);
  const PreprocessedLidar pre = PreprocessLidar(LidarIntensity(MaskToGray(m)), {128, 50});
  EXPECT_EQ(pre.origin_x, 10);
  EXPECT_EQ(pre.origin_y, 10);
  EXPECT_EQ(pre.mask.width(), 50);
  EXPECT_EQ(pre.mask.height(), 40);
}

TEST(PreprocessTest, NothingLeftThrows) {
  BinaryMask m(20, 20);
  m.Set(3, 3, true);
  EXPECT_THROW(PreprocessLidar(LidarIntensity(MaskToGray(m)), {128, 50}), EmptyStructureError);
}

TEST(PreprocessTest, OccupancyGreyLevelsCountAsStructure) {
  GrayImage img(4, 1, kPgmUnknown);
  img.at(1, 0) = kPgmFree;
  img.at(2, 0) = kPgmOccupied;
  const GrayImage in = LidarIntensity(img);
  EXPECT_EQ(in.at(0, 0), 0);
  EXPECT_EQ(in.at(1, 0), 255);
  EXPECT_EQ(in.at(2, 0), 255);
}

TEST(MetricsTest, IouAIsMean) {
  const std::vector<double> v = {1.0, 0.5, 0.0};
  EXPECT_DOUBLE_EQ(IouA(v), 0.5);
  EXPECT_THROW(IouA(std::vector<double>{}), Error);
}

TEST(MetricsTest, OraclePerfectCasesScoreOne) {
  std::vector<EvalCase> cases;
  for (D4 g : D4::All()) {
    Rng rng(static_cast<std::uint64_t>(g.id()) + 1);
    const SyntheticCase c = MakeCase(Fixture(), TransformParams{g, 2.0, 2.0}, 1.0, rng);
    cases.push_back({c.plan, MaskToGray(c.lidar), c.truth});
  }
  const MetricsReport m = Evaluate(cases);
  EXPECT_EQ(m.cases, 8u);
  EXPECT_DOUBLE_EQ(m.rotation_accuracy, 1.0);
  EXPECT_DOUBLE_EQ(m.fold_accuracy, 1.0);
  EXPECT_GT(m.iou_a, 0.95);
}

TEST(MetricsTest, EmptyDatasetThrows) {
  EXPECT_THROW(Evaluate(std::vector<EvalCase>{}), Error);
}

}  // namespace
}  // namespace planreg
