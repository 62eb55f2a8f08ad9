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

// planreg command-line tool: gen | register | evaluate | simulate.
//
// Exit codes: 0 success, 1 error, 3 simulated mission hit its time cap.
// Usage errors use CLI11's own codes.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "planreg/error.h"
#include "planreg/floorplan.h"
#include "planreg/parallel.h"
#include "planreg/pgm.h"
#include "planreg/registration.h"
#include "planreg/sim/mission.h"
#include "planreg/sim/scenarios.h"
#include "planreg/sim/world.h"
#include "planreg/synthetic.h"

namespace {

constexpr int kExitError = 1;
constexpr int kExitTimeout = 3;

namespace fs = std::filesystem;
using planreg::Error;

// Flags shared by register and evaluate.
struct PreprocessFlags {
  int theta = 128;
  int alpha = 50;
  double tolerance = planreg::kDefaultSimplifyTolerance;

  void Add(CLI::App* cmd) {
    cmd->add_option("--theta", theta, "binarization threshold")
        ->capture_default_str()
        ->check(CLI::Range(0, 255));
    cmd->add_option("--alpha", alpha, "minimum component area, cells")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--tolerance", tolerance, "contour simplification tolerance, cells")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
  }
  planreg::EvalConfig Config() const {
    planreg::EvalConfig cfg;
    cfg.filter.theta = theta;
    cfg.filter.alpha = alpha;
    cfg.simplify_tol = tolerance;
    return cfg;
  }
};

// Prefixes library errors with the file they came from.
template <typename F>
auto WithFile(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const planreg::IoError&) {
    throw;
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

void WriteJson(const std::string& path, const nlohmann::json& j) {
  planreg::WriteFileBytes(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// gen

struct GenFlags {
  std::string out;
  int cases = 10;
  std::vector<double> levels = {1.0};
  std::uint32_t seed = 1;
  std::vector<int> plan_sizes = {4, 5, 6};
  int worlds = 0;
  unsigned threads = 0;
};

int RunGen(const GenFlags& f) {
  if (f.worlds > 0) {
    fs::create_directories(f.out);
    const auto specs = planreg::sim::SeededWorlds(f.seed, f.worlds);
    for (std::size_t i = 0; i < specs.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "world_%02zu.json", i);
      WriteJson((fs::path(f.out) / name).string(), planreg::sim::WorldSpecToJson(specs[i]));
    }
    WriteJson((fs::path(f.out) / "closed_door.json").string(),
              planreg::sim::WorldSpecToJson(planreg::sim::ClosedDoorScenario()));
    std::cout << "wrote " << specs.size() << " worlds and closed_door.json to " << f.out << "\n";
    return 0;
  }
  planreg::SweepConfig cfg;
  cfg.n_cases = f.cases;
  cfg.completeness_levels = f.levels;
  cfg.rng_seed = f.seed;
  cfg.plan_sizes = f.plan_sizes;
  const unsigned threads = f.threads > 0 ? f.threads : planreg::DefaultThreadCount();
  const auto names = planreg::GenerateDataset(cfg, f.out, threads);
  std::cout << "wrote " << names.size() << " cases to " << f.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// register

struct RegisterFlags {
  std::string plan;
  std::string lidar;
  std::string out;
  std::string out_mask;
  PreprocessFlags pre;
};

int RunRegister(const RegisterFlags& f) {
  const planreg::FloorPlan plan =
      WithFile(f.plan, [&] { return planreg::ParsePlan(planreg::ReadFileBytes(f.plan)); });
  const planreg::GrayImage lidar = WithFile(f.lidar, [&] { return planreg::ReadPgm(f.lidar); });
  const planreg::EvalConfig cfg = f.pre.Config();
  const planreg::PreprocessedLidar pre = WithFile(f.lidar, [&] {
    return planreg::PreprocessLidar(planreg::LidarIntensity(lidar), cfg.filter, cfg.simplify_tol);
  });
  const auto t0 = std::chrono::steady_clock::now();
  const planreg::RegistrationResult r = planreg::Register(pre.mask, plan, cfg.reg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const planreg::PlanToLidar mapping = r.Mapping(
      planreg::Point{static_cast<double>(pre.origin_x), static_cast<double>(pre.origin_y)});
  nlohmann::json j = planreg::RegistrationToJson(r);
  j["lidar_anchor"] = {mapping.lidar_anchor.x, mapping.lidar_anchor.y};
  j["time_s"] = secs;
  WriteJson(f.out, j);
  if (!f.out_mask.empty()) {
    const planreg::BinaryMask placed = planreg::RenderMapped(
        plan, planreg::RoomIndices(plan, r.variant), mapping, lidar.width, lidar.height);
    planreg::WritePgm(f.out_mask, planreg::MaskToGray(placed));
  }
  std::cout << "rot=" << r.best.element.degrees()
            << " flip=" << planreg::FlipName(r.best.element.flip()) << " s_h=" << r.best.s_h
            << " s_v=" << r.best.s_v << " iou=" << r.iou << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateFlags {
  std::string dataset;
  std::string report;
  PreprocessFlags pre;
  unsigned threads = 1;
};

void PrintTable(const std::vector<std::pair<std::string, planreg::MetricsReport>>& rows) {
  std::printf("%-14s %6s %18s %22s %10s %16s\n", "Completeness", "Cases", "Fold Accuracy(%)",
              "Rotation Accuracy(%)", "IoU_a(%)", "Average Time(s)");
  for (const auto& [label, m] : rows) {
    std::printf("%-14s %6zu %18.1f %22.1f %10.1f %16.3f\n", label.c_str(), m.cases,
                100.0 * m.fold_accuracy, 100.0 * m.rotation_accuracy, 100.0 * m.iou_a,
                m.mean_time_s);
  }
}

int RunEvaluate(const EvaluateFlags& f) {
  const std::vector<planreg::EvalCase> cases = planreg::LoadDataset(f.dataset);
  const std::vector<planreg::CaseOutcome> outcomes =
      planreg::EvaluateCases(cases, f.pre.Config(), f.threads > 0 ? f.threads : 1);

  std::map<double, std::vector<planreg::CaseOutcome>> buckets;
  for (const auto& o : outcomes) buckets[o.completeness].push_back(o);
  std::vector<std::pair<std::string, planreg::MetricsReport>> rows;
  nlohmann::json by_level = nlohmann::json::array();
  for (const auto& [level, group] : buckets) {
    const planreg::MetricsReport m = planreg::Summarize(group);
    char label[32];
    std::snprintf(label, sizeof(label), "%.2f", level);
    rows.emplace_back(label, m);
    nlohmann::json j = planreg::MetricsToJson(m);
    j["completeness"] = level;
    by_level.push_back(j);
  }
  const planreg::MetricsReport all = planreg::Summarize(outcomes);
  rows.emplace_back("all", all);
  PrintTable(rows);

  nlohmann::json per_case = nlohmann::json::array();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    per_case.push_back({{"completeness", o.completeness},
                        {"failed", o.failed},
                        {"rotation_ok", o.rotation_ok},
                        {"fold_ok", o.fold_ok},
                        {"iou_a", o.iou_a},
                        {"fused_iou", o.fused_iou},
                        {"scale_error_h", o.scale_error_h},
                        {"scale_error_v", o.scale_error_v},
                        {"time_s", o.time_s}});
  }
  if (!f.report.empty()) {
    WriteJson(f.report, {{"overall", planreg::MetricsToJson(all)},
                         {"by_completeness", by_level},
                         {"cases", per_case}});
  }
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateFlags {
  std::string world;
  std::string plan;
  std::string mode = "fr_slam";
  std::string out;
  std::uint64_t seed = 1;
  double timeout_s = 600.0;
  double relocation_distance = 50.0;
  double sigma = 0.05;
  bool coverage = false;
  bool no_wall_time = false;
};

int RunSimulate(const SimulateFlags& f) {
  namespace sim = planreg::sim;
  const sim::WorldSpec spec =
      WithFile(f.world, [&] { return sim::ParseWorldSpec(planreg::ReadFileBytes(f.world)); });
  const planreg::FloorPlan plan =
      f.plan.empty()
          ? spec.plan
          : WithFile(f.plan, [&] { return planreg::ParsePlan(planreg::ReadFileBytes(f.plan)); });
  const sim::World world = WithFile(f.world, [&] { return sim::BuildWorld(spec); });

  sim::MissionConfig cfg;
  cfg.motion.rng_seed = f.seed;
  cfg.motion.noise_sigma_xy = f.sigma;
  cfg.motion.relocation_distance = f.relocation_distance;
  cfg.time_cap_s = f.timeout_s;
  cfg.known_target_count = !f.coverage;

  const sim::MissionLog log =
      f.mode == "fr_slam" ? sim::RunFrSlam(world, plan, cfg) : sim::RunBaselineExplorer(world, cfg);
  if (!f.out.empty()) {
    planreg::WriteFileBytes(f.out, sim::MissionLogToJsonLines(log, !f.no_wall_time));
  }
  std::string rooms;
  for (const auto& r : log.rooms_visited) rooms += (rooms.empty() ? "" : ",") + r;
  std::printf("mode=%s total_time_s=%.1f registrations=%d targets_found=%d/%zu rooms_visited=%zu "
              "[%s]%s\n",
              log.mode.c_str(), log.total_time_s, log.registrations, log.targets_found,
              spec.targets.size(), log.rooms_visited.size(), rooms.c_str(),
              log.timed_out ? " TIMEOUT" : "");
  return log.timed_out ? kExitTimeout : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floor-plan to LiDAR map registration and search simulation"};
  app.require_subcommand(1);

  GenFlags gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a synthetic dataset or simulator worlds");
  gen_cmd->add_option("--out", gen.out, "output directory")->required();
  gen_cmd->add_option("--cases", gen.cases, "cases per completeness level")->capture_default_str();
  gen_cmd->add_option("--levels", gen.levels, "completeness levels, ascending")
      ->delimiter(',')
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "generator seed")->capture_default_str();
  gen_cmd->add_option("--plan-sizes", gen.plan_sizes, "room counts, cycled per case")
      ->delimiter(',')
      ->capture_default_str();
  gen_cmd->add_option("--worlds", gen.worlds, "write this many simulator worlds instead");
  gen_cmd->add_option("--threads", gen.threads, "worker threads, 0 = all cores");

  RegisterFlags reg;
  CLI::App* reg_cmd = app.add_subcommand("register", "register a floor plan to a LiDAR map");
  reg_cmd->add_option("--plan", reg.plan, "floor-plan JSON")->required()->check(CLI::ExistingFile);
  reg_cmd->add_option("--lidar", reg.lidar, "LiDAR map PGM")->required()->check(CLI::ExistingFile);
  reg_cmd->add_option("--out", reg.out, "result JSON")->required();
  reg_cmd->add_option("--out-mask", reg.out_mask, "registered plan mask PGM");
  reg.pre.Add(reg_cmd);

  EvaluateFlags ev;
  CLI::App* ev_cmd = app.add_subcommand("evaluate", "score registration on a generated dataset");
  ev_cmd->add_option("--dataset", ev.dataset, "dataset directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  ev_cmd->add_option("--report", ev.report, "report JSON");
  ev_cmd->add_option("--threads", ev.threads, "worker threads")->capture_default_str();
  ev.pre.Add(ev_cmd);

  SimulateFlags sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "run a search mission");
  sim_cmd->add_option("--world", sim.world, "world JSON")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--plan", sim.plan, "floor plan to register (default: the world's)")
      ->check(CLI::ExistingFile);
  sim_cmd->add_option("--mode", sim.mode, "fr_slam or baseline")
      ->capture_default_str()
      ->check(CLI::IsMember({"fr_slam", "baseline"}));
  sim_cmd->add_option("--out", sim.out, "JSON-lines mission log");
  sim_cmd->add_option("--seed", sim.seed, "motion noise seed")->capture_default_str();
  sim_cmd->add_option("--timeout-s", sim.timeout_s, "simulated time cap, seconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--relocation-distance", sim.relocation_distance,
                      "re-register after this many cells (inf allowed)")
      ->capture_default_str();
  sim_cmd->add_option("--sigma", sim.sigma, "position noise per step, cells")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  sim_cmd->add_flag("--coverage", sim.coverage, "stop on full room coverage, not target count");
  sim_cmd->add_flag("--no-wall-time", sim.no_wall_time, "omit measured wall time from the log");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cmd->parsed()) return RunGen(gen);
    if (reg_cmd->parsed()) return RunRegister(reg);
    if (ev_cmd->parsed()) return RunEvaluate(ev);
    if (sim_cmd->parsed()) return RunSimulate(sim);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
