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

#include <algorithm>
#include <limits>
#include <string>

#include "gtest/gtest.h"
#include "planreg/sim/mission.h"
#include "planreg/sim/scenarios.h"

namespace planreg::sim {
namespace {

bool HasEventPrefix(const LogRecord& r, const std::string& prefix) {
  return std::any_of(r.events.begin(), r.events.end(),
                     [&](const std::string& e) { return e.rfind(prefix, 0) == 0; });
}

bool Visited(const MissionLog& log, const std::string& room) {
  return std::find(log.rooms_visited.begin(), log.rooms_visited.end(), room) !=
         log.rooms_visited.end();
}

class ClosedDoorTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    world_ = new World(BuildWorld(ClosedDoorScenario()));
    log_ = new MissionLog(RunFrSlam(*world_, world_->spec.plan, MissionConfig{}));
  }
  static void TearDownTestSuite() {
    delete log_;
    delete world_;
  }
  static World* world_;
  static MissionLog* log_;
};
World* ClosedDoorTest::world_ = nullptr;
MissionLog* ClosedDoorTest::log_ = nullptr;

TEST_F(ClosedDoorTest, ExactlyOneObstructionReRegistration) {
  EXPECT_EQ(log_->obstruction_registrations, 1);
  EXPECT_EQ(log_->targets_found, 1);
  EXPECT_FALSE(log_->timed_out);
  int with_replan = 0;
  for (const LogRecord& r : log_->trajectory) {
    if (HasEventPrefix(r, "registration:obstruction")) {
      EXPECT_TRUE(HasEventPrefix(r, "replan"));
      ++with_replan;
    }
  }
  EXPECT_EQ(with_replan, 1);
}

TEST_F(ClosedDoorTest, DResetsExactlyAtRegistrations) {
  double prev_d = 0.0;
  for (std::size_t i = 1; i < log_->trajectory.size(); ++i) {
    const LogRecord& r = log_->trajectory[i];
    if (HasEventPrefix(r, "registration")) {
      EXPECT_EQ(r.d, 0.0) << "t=" << r.t;
    } else {
      EXPECT_GE(r.d, prev_d) << "t=" << r.t;
    }
    prev_d = r.d;
  }
}

TEST_F(ClosedDoorTest, SDecreasesByTravelBetweenReplans) {
  const auto& traj = log_->trajectory;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const LogRecord& r = traj[i];
    if (HasEventPrefix(r, "replan") || HasEventPrefix(r, "registration")) continue;
    const double travel = r.d - traj[i - 1].d;
    EXPECT_NEAR(traj[i - 1].remaining - r.remaining, travel, 1e-9) << "t=" << r.t;
  }
}

TEST_F(ClosedDoorTest, RegistrationCostIsCharged) {
  const double steps = static_cast<double>(std::count_if(
      log_->trajectory.begin() + 1, log_->trajectory.end(),
      [](const LogRecord& r) { return !HasEventPrefix(r, "start"); }));
  EXPECT_NEAR(log_->total_time_s, steps * 0.1 + log_->registrations * 1.0, 0.1 + 1e-9);
}

TEST_F(ClosedDoorTest, PostLocalizeErrorsAreSmall) {
  ASSERT_FALSE(log_->localization_errors.empty());
  for (double e : log_->localization_errors) EXPECT_LE(e, 2.0);
}

TEST_F(ClosedDoorTest, BeatsBaseline) {
  const MissionLog base = RunBaselineExplorer(*world_, MissionConfig{});
  EXPECT_EQ(base.targets_found, 1);
  EXPECT_LT(log_->total_time_s, base.total_time_s);
}

TEST(MissionTest, OpenDoorsVisitOnlyRoomsOnTheWay) {
  WorldSpec spec = ClosedDoorScenario();
  for (Door& d : spec.doors) d.closed = false;
  const World w = BuildWorld(spec);
  const MissionLog log = RunFrSlam(w, spec.plan, MissionConfig{});
  EXPECT_EQ(log.targets_found, 1);
  EXPECT_EQ(log.obstruction_registrations, 0);
  EXPECT_FALSE(Visited(log, "study"));
  EXPECT_FALSE(Visited(log, "hall"));
  EXPECT_TRUE(Visited(log, "bedroom"));
}

TEST(MissionTest, InfiniteDWithoutObstructionRegistersOnce) {
  WorldSpec spec = ClosedDoorScenario();
  for (Door& d : spec.doors) d.closed = false;
  const World w = BuildWorld(spec);
  MissionConfig cfg;
  cfg.motion.relocation_distance = std::numeric_limits<double>::infinity();
  const MissionLog log = RunFrSlam(w, spec.plan, cfg);
  EXPECT_EQ(log.targets_found, 1);
  EXPECT_EQ(log.registrations, 1);
}

TEST(MissionTest, SameSeedIsBitIdentical) {
  const World w = BuildWorld(SeededWorlds()[2]);
  MissionConfig cfg;
  cfg.motion.rng_seed = 42;
  const std::string a = MissionLogToJsonLines(RunFrSlam(w, w.spec.plan, cfg), false);
  const std::string b = MissionLogToJsonLines(RunFrSlam(w, w.spec.plan, cfg), false);
  EXPECT_EQ(a, b);
  const std::string c = MissionLogToJsonLines(RunBaselineExplorer(w, cfg), false);
  const std::string d = MissionLogToJsonLines(RunBaselineExplorer(w, cfg), false);
  EXPECT_EQ(c, d);
  cfg.motion.rng_seed = 43;
  EXPECT_NE(a, MissionLogToJsonLines(RunFrSlam(w, w.spec.plan, cfg), false));
}

TEST(MissionTest, TimeCapGivesPartialLog) {
  const World w = BuildWorld(SeededWorlds()[0]);
  MissionConfig cfg;
  cfg.time_cap_s = 3.0;
  const MissionLog log = RunBaselineExplorer(w, cfg);
  EXPECT_TRUE(log.timed_out);
  EXPECT_FALSE(log.trajectory.empty());
  EXPECT_LE(log.total_time_s, 3.0 + 1e-9);
}

WorldSpec SingleRoom() {
  WorldSpec spec;
  spec.plan.units_per_cell = 10.0;
  spec.plan.rooms = {Room{"living", RoomKind::kLivingRoom, Rect(0, 0, 300, 200)}};
  spec.resolution_cells_per_unit = 0.1;
  spec.targets = {Target{{250, 150}, "living"}};
  spec.start = {50, 50};
  return spec;
}

TEST(BaselineTest, SingleRoomCompletes) {
  const World w = BuildWorld(SingleRoom());
  MissionConfig cfg;
  cfg.known_target_count = false;
  const MissionLog log = RunBaselineExplorer(w, cfg);
  EXPECT_EQ(log.rooms_visited, std::vector<std::string>{"living"});
  EXPECT_EQ(log.targets_found, 1);
  EXPECT_FALSE(log.timed_out);
  EXPECT_FALSE(log.stuck);
}

TEST(BaselineTest, TargetInLastRoomVisitsAllRooms) {
  WorldSpec spec = SeededWorlds()[4];
  MissionConfig cfg;
  cfg.known_target_count = false;
  spec.targets.clear();
  const MissionLog survey = RunBaselineExplorer(BuildWorld(spec), cfg);
  ASSERT_EQ(survey.rooms_visited.size(), spec.plan.rooms.size());
  const std::string last = survey.rooms_visited.back();
  const Room& room = spec.plan.rooms[spec.plan.IndexOf(last)];
  const Box b = BoundingBox(room.outline);
  Point centre{(b.min_x + b.max_x) / 2, (b.min_y + b.max_y) / 2};
  spec.targets = {Target{centre, last}};
  const MissionLog log = RunBaselineExplorer(BuildWorld(spec), MissionConfig{});
  EXPECT_EQ(log.targets_found, 1);
  EXPECT_EQ(log.rooms_visited.size(), spec.plan.rooms.size());
}

TEST(MissionTest, SamePlacementComparesMappedCorners) {
  const FloorPlan plan = SingleRoom().plan;
  const PlanToLidar a{TransformParams{D4::FromId(0), 10.0, 10.0}, {0, 0}, {2, 2}};
  PlanToLidar b = a;
  b.lidar_anchor = {3.0, 3.0};
  EXPECT_TRUE(internal::SamePlacement(plan, a, a, 0.0));
  EXPECT_TRUE(internal::SamePlacement(plan, a, b, 1.5));
  EXPECT_FALSE(internal::SamePlacement(plan, a, b, 1.4));
  b = a;
  b.transform.element = D4::FromId(2);
  EXPECT_FALSE(internal::SamePlacement(plan, a, b, 1.5));
}

nlohmann::json LastLine(const std::string& text) {
  const std::size_t from = text.rfind('\n', text.size() - 2) + 1;
  return nlohmann::json::parse(text.substr(from));
}

TEST(LogTest, JsonLinesEndWithSummary) {
  const World w = BuildWorld(SingleRoom());
  const MissionLog log = RunFrSlam(w, w.spec.plan, MissionConfig{});
  const std::string text = MissionLogToJsonLines(log, false);
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')),
            log.trajectory.size() + 1);
  const nlohmann::json summary = LastLine(text).at("summary");
  EXPECT_EQ(summary.at("registrations").get<int>(), log.registrations);
  EXPECT_FALSE(summary.contains("registration_wall_s"));
  EXPECT_TRUE(LastLine(MissionLogToJsonLines(log, true)).at("summary").contains(
      "registration_wall_s"));
}

}  // namespace
}  // namespace planreg::sim
