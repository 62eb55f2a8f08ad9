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
#include <string>

#include "gtest/gtest.h"
#include "planreg/synthetic.h"

namespace planreg {
namespace {

namespace fs = std::filesystem;

fs::path TempDir(const std::string& name) {
  const fs::path p = fs::path(::testing::TempDir()) / ("planreg_" + name);
  fs::remove_all(p);
  return p;
}

TEST(PlanGenTest, PlansAreValidAndAsymmetric) {
  Rng rng(4);
  for (int i = 0; i < 10; ++i) {
    PlanGenConfig cfg;
    cfg.rooms = 4 + i % 3;
    const FloorPlan p = GenerateRectilinearPlan(rng, cfg);
    EXPECT_NO_THROW(ValidatePlan(p));
    EXPECT_EQ(p.rooms.size(), static_cast<std::size_t>(cfg.rooms));
    EXPECT_TRUE(SilhouetteIsAsymmetric(p, cfg.max_symmetry_iou));
  }
}

TEST(SweepTest, AreaRatioTracksCompleteness) {
  SweepConfig cfg;
  cfg.n_cases = 12;
  cfg.completeness_levels = {0.5, 0.7, 0.9, 1.0};
  for (std::size_t level = 0; level < cfg.completeness_levels.size(); ++level) {
    for (int i = 0; i < cfg.n_cases; ++i) {
      const SyntheticCase c = GenerateSweepCase(cfg, level, i);
      const double plan_cells =
          c.plan.TotalArea() / (c.truth.transform.s_h * c.truth.transform.s_v);
      const double ratio = static_cast<double>(c.lidar.CountOccupied()) / plan_cells;
      EXPECT_NEAR(ratio, cfg.completeness_levels[level], 0.05)
          << "level " << level << " case " << i;
    }
  }
}

TEST(SweepTest, SameCaseIndexSharesPlanAcrossLevels) {
  SweepConfig cfg;
  cfg.completeness_levels = {0.5, 1.0};
  const SyntheticCase a = GenerateSweepCase(cfg, 0, 3);
  const SyntheticCase b = GenerateSweepCase(cfg, 1, 3);
  EXPECT_EQ(a.plan, b.plan);
  EXPECT_EQ(a.truth.transform.element, b.truth.transform.element);
  EXPECT_LT(a.lidar.CountOccupied(), b.lidar.CountOccupied());
}

TEST(SweepTest, ConfigValidation) {
  SweepConfig cfg;
  cfg.completeness_levels = {0.9, 0.5};
  EXPECT_THROW(cfg.Validate(), Error);
  cfg.completeness_levels = {0.0};
  EXPECT_THROW(cfg.Validate(), Error);
  cfg.completeness_levels = {1.0};
  cfg.n_cases = 0;
  EXPECT_THROW(cfg.Validate(), Error);
}

TEST(DatasetTest, WritesOneTriplePerCase) {
  const fs::path dir = TempDir("ten");
  SweepConfig cfg;
  cfg.n_cases = 10;
  const auto names = GenerateDataset(cfg, dir);
  ASSERT_EQ(names.size(), 10u);
  for (const auto& n : names) {
    EXPECT_TRUE(fs::exists(dir / n / "plan.json"));
    EXPECT_TRUE(fs::exists(dir / n / "lidar.pgm"));
    EXPECT_TRUE(fs::exists(dir / n / "truth.json"));
  }
  const auto cases = LoadDataset(dir);
  EXPECT_EQ(cases.size(), 10u);
  const SyntheticCase c0 = GenerateSweepCase(cfg, 0, 0);
  EXPECT_EQ(cases[0].plan, c0.plan);
  EXPECT_EQ(GrayToMask(cases[0].lidar), c0.lidar);
  EXPECT_EQ(cases[0].truth.transform.element, c0.truth.transform.element);
  fs::remove_all(dir);
}

TEST(DatasetTest, SameSeedGivesIdenticalFiles) {
  const fs::path a = TempDir("det_a");
  const fs::path b = TempDir("det_b");
  SweepConfig cfg;
  cfg.n_cases = 4;
  cfg.completeness_levels = {0.7, 1.0};
  cfg.rng_seed = 9;
  GenerateDataset(cfg, a, 1);
  GenerateDataset(cfg, b, 3);
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const fs::path rel = fs::relative(e.path(), a);
    EXPECT_EQ(ReadFileBytes(e.path().string()), ReadFileBytes((b / rel).string())) << rel;
    ++files;
  }
  EXPECT_EQ(files, 1u + 8u * 3u);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(DatasetTest, MissingManifestIsAnError) {
  const fs::path dir = TempDir("empty");
  fs::create_directories(dir);
  EXPECT_THROW(LoadDataset(dir), Error);
  fs::remove_all(dir);
}

TEST(TruthTest, JsonRoundTrip) {
  GroundTruth t;
  t.transform = {D4::FromId(5), 1.5, 2.5};
  t.plan_anchor = {-10, 20};
  t.lidar_anchor = {12, 12};
  t.completeness = 0.7;
  const GroundTruth back = TruthFromJson(TruthToJson(t, {"living"}));
  EXPECT_EQ(back.transform.element, t.transform.element);
  EXPECT_EQ(back.transform.s_h, 1.5);
  EXPECT_EQ(back.plan_anchor, t.plan_anchor);
  EXPECT_EQ(back.completeness, 0.7);
  EXPECT_THROW(TruthFromJson(nlohmann::json::object()), SchemaError);
}

}  // namespace
}  // namespace planreg
