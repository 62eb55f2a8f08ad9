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

#ifndef PLANREG_SIM_MOTION_H_
#define PLANREG_SIM_MOTION_H_

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "planreg/error.h"
#include "planreg/random.h"
#include "planreg/sim/world.h"

namespace planreg::sim {

struct MotionConfig {
  double noise_sigma_xy = 0.05;        // cells per step
  double noise_sigma_heading = 0.0;    // radians per step
  double speed = 10.0;                 // cells per second
  double relocation_distance = 50.0;   // D, cells
  std::uint64_t rng_seed = 1;

  void Validate() const {
    if (!(noise_sigma_xy >= 0.0) || !(noise_sigma_heading >= 0.0)) {
      throw Error("noise sigmas must be >= 0");
    }
    if (!(speed > 0.0)) throw Error("speed must be > 0");
    if (!(relocation_distance > 0.0)) throw Error("relocation distance must be > 0");
  }
};

struct Control {
  double v = 0.0;      // cells per second
  double omega = 0.0;  // radians per second
};

inline double WrapAngle(double a) {
  a = std::fmod(a + std::numbers::pi, 2.0 * std::numbers::pi);
  if (a < 0) a += 2.0 * std::numbers::pi;
  return a - std::numbers::pi;
}

// Unicycle kinematics, x_t = g(u_t, x_{t-1}) + eps_t, with eps drawn from
// `rng` as independent Gaussians. Three draws are made per call whatever the
// sigmas, so the stream position does not depend on the configuration.
inline Pose StepMotion(const Pose& pose, const Control& u, double dt, const MotionConfig& cfg,
                       Rng& rng) {
  if (!(dt > 0.0)) throw Error("dt must be > 0");
  Pose next;
  next.x = pose.x + u.v * std::cos(pose.heading) * dt;
  next.y = pose.y + u.v * std::sin(pose.heading) * dt;
  next.heading = pose.heading + u.omega * dt;
  const double ex = rng.Gaussian();
  const double ey = rng.Gaussian();
  const double eh = rng.Gaussian();
  next.x += cfg.noise_sigma_xy * ex;
  next.y += cfg.noise_sigma_xy * ey;
  next.heading = WrapAngle(next.heading + cfg.noise_sigma_heading * eh);
  return next;
}

}  // namespace planreg::sim

#endif  // PLANREG_SIM_MOTION_H_
