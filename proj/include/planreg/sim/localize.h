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

#ifndef PLANREG_SIM_LOCALIZE_H_
#define PLANREG_SIM_LOCALIZE_H_

#include <cmath>
#include <cstddef>
#include <vector>

#include "planreg/error.h"
#include "planreg/mask.h"
#include "planreg/sim/world.h"

namespace planreg::sim {

struct LocalizeResult {
  Pose pose;
  int dx = 0;  // applied correction, cells
  int dy = 0;
  std::size_t score = 0;
  std::size_t structure = 0;  // occupied patch cells
};

// Square patch of side 2r+1 centred on the cell holding `center`; patch cell
// (i, j) stands for map cell (cx - r + i, cy - r + j).
inline Cell PatchOrigin(Point center, int r) {
  const Cell c = CellOf(center);
  return Cell{c.x - r, c.y - r};
}

// Exhaustive integer translation search within `search_radius` cells of the
// prior. The score of an offset is the number of occupied patch cells that
// land on occupied motion-map cells. Heading is kept. Ties go to the smaller
// offset, then row-major (dy, then dx). Throws LocalizationError when the
// patch is empty or no offset scores higher than another (no signal).
inline LocalizeResult Localize(const BinaryMask& patch, const BinaryMask& motion_map,
                               const Pose& prior, double search_radius) {
  if (patch.width() != patch.height() || patch.width() % 2 == 0) {
    throw ShapeError("localization patch must be square with odd side");
  }
  const int r = patch.width() / 2;
  std::vector<Cell> occupied;
  for (int j = 0; j < patch.height(); ++j) {
    for (int i = 0; i < patch.width(); ++i) {
      if (patch.Get(i, j)) occupied.push_back(Cell{i, j});
    }
  }
  if (occupied.empty()) throw LocalizationError("local structure is empty");
  const Cell origin = PatchOrigin(prior.position(), r);
  const int R = static_cast<int>(std::floor(search_radius));
  const double r2 = search_radius * search_radius;

  LocalizeResult best;
  bool have = false;
  bool varied = false;
  int candidates = 0;
  std::size_t first_score = 0;
  int best_norm = 0;
  for (int dy = -R; dy <= R; ++dy) {
    for (int dx = -R; dx <= R; ++dx) {
      const int norm = dx * dx + dy * dy;
      if (norm > r2) continue;
      std::size_t score = 0;
      for (const Cell& c : occupied) {
        score += motion_map.GetOr0(origin.x + c.x + dx, origin.y + c.y + dy);
      }
      ++candidates;
      if (!have) {
        first_score = score;
      } else if (score != first_score) {
        varied = true;
      }
      // Row-major scan order already gives the row-major tie-break.
      if (!have || score > best.score || (score == best.score && norm < best_norm)) {
        best.score = score;
        best.dx = dx;
        best.dy = dy;
        best_norm = norm;
        have = true;
      }
    }
  }
  if (best.score == 0) throw LocalizationError("no overlap between local structure and map");
  if (candidates > 1 && !varied) throw LocalizationError("local structure does not constrain the position");
  best.structure = occupied.size();
  best.pose = Pose{prior.x + best.dx, prior.y + best.dy, prior.heading};
  return best;
}

}  // namespace planreg::sim

#endif  // PLANREG_SIM_LOCALIZE_H_
