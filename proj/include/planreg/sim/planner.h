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

#ifndef PLANREG_SIM_PLANNER_H_
#define PLANREG_SIM_PLANNER_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <vector>

#include "planreg/error.h"
#include "planreg/sim/world.h"

namespace planreg::sim {

// Per-cell traversal cost; 0 marks a blocked cell, otherwise >= 1.
class CostGrid {
 public:
  CostGrid() = default;
  CostGrid(int width, int height, double fill = 1.0)
      : width_(width), height_(height), cost_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool InBounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  double Get(int x, int y) const { return cost_[Index(x, y)]; }
  void Set(int x, int y, double c) { cost_[Index(x, y)] = c; }
  bool Passable(int x, int y) const { return InBounds(x, y) && Get(x, y) > 0.0; }
  std::size_t Index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> cost_;
};

inline constexpr int kNeighbourDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
inline constexpr int kNeighbourDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

// Cost of the move a -> b between 8-neighbours: step length times the mean of
// the two cell costs. Diagonal moves may not cut a blocked corner.
inline double MoveCost(const CostGrid& g, Cell a, Cell b) {
  const int dx = b.x - a.x;
  const int dy = b.y - a.y;
  if (!g.Passable(b.x, b.y)) return -1.0;
  double len = 1.0;
  if (dx != 0 && dy != 0) {
    if (!g.Passable(a.x + dx, a.y) || !g.Passable(a.x, a.y + dy)) return -1.0;
    len = std::numbers::sqrt2;
  }
  return len * 0.5 * (g.Get(a.x, a.y) + g.Get(b.x, b.y));
}

inline double PathCost(const CostGrid& g, const std::vector<Cell>& path) {
  double c = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) c += MoveCost(g, path[i - 1], path[i]);
  return c;
}

inline double PathLength(const std::vector<Cell>& path) {
  double len = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    len += Distance(CenterOf(path[i - 1]), CenterOf(path[i]));
  }
  return len;
}

// A* over the 8-connected grid with the Euclidean heuristic (admissible since
// every cell cost is >= 1). Returns the cell sequence from `from` to `to`
// inclusive, or an empty path when the goal is unreachable. Ties in the open
// list break on lower heuristic, then on cell index, so results are stable.
inline std::vector<Cell> PlanPath(const CostGrid& g, Cell from, Cell to) {
  if (!g.Passable(from.x, from.y)) throw InvalidEndpointError("start cell is blocked");
  if (!g.Passable(to.x, to.y)) throw InvalidEndpointError("goal cell is blocked");
  const std::size_t n = static_cast<std::size_t>(g.width()) * g.height();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  std::vector<std::int64_t> parent(n, -1);
  std::vector<std::uint8_t> closed(n, 0);
  auto h = [&](int x, int y) { return std::hypot(x - to.x, y - to.y); };

  struct Entry {
    double f;
    double h;
    std::size_t index;
    bool operator>(const Entry& o) const {
      if (f != o.f) return f > o.f;
      if (h != o.h) return h > o.h;
      return index > o.index;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  const std::size_t s = g.Index(from.x, from.y);
  const std::size_t goal = g.Index(to.x, to.y);
  dist[s] = 0.0;
  open.push(Entry{h(from.x, from.y), h(from.x, from.y), s});
  while (!open.empty()) {
    const Entry e = open.top();
    open.pop();
    if (closed[e.index]) continue;
    closed[e.index] = 1;
    if (e.index == goal) break;
    const Cell a{static_cast<int>(e.index % g.width()), static_cast<int>(e.index / g.width())};
    for (int k = 0; k < 8; ++k) {
      const Cell b{a.x + kNeighbourDx[k], a.y + kNeighbourDy[k]};
      const double mc = MoveCost(g, a, b);
      if (mc < 0) continue;
      const std::size_t bi = g.Index(b.x, b.y);
      if (closed[bi]) continue;
      const double nd = dist[e.index] + mc;
      if (nd < dist[bi]) {
        dist[bi] = nd;
        parent[bi] = static_cast<std::int64_t>(e.index);
        const double hb = h(b.x, b.y);
        open.push(Entry{nd + hb, hb, bi});
      }
    }
  }
  if (dist[goal] == kInf) return {};
  std::vector<Cell> path;
  for (std::int64_t i = static_cast<std::int64_t>(goal); i >= 0; i = parent[static_cast<std::size_t>(i)]) {
    path.push_back(Cell{static_cast<int>(i % g.width()), static_cast<int>(i / g.width())});
  }
  std::reverse(path.begin(), path.end());
  return path;
}

struct DistanceField {
  std::vector<double> dist;  // infinity where unreachable
  std::vector<std::int64_t> parent;
};

// Single-source Dijkstra with the same move model as PlanPath.
inline DistanceField Dijkstra(const CostGrid& g, Cell from) {
  const std::size_t n = static_cast<std::size_t>(g.width()) * g.height();
  DistanceField f{std::vector<double>(n, std::numeric_limits<double>::infinity()),
                  std::vector<std::int64_t>(n, -1)};
  if (!g.Passable(from.x, from.y)) return f;
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  const std::size_t s = g.Index(from.x, from.y);
  f.dist[s] = 0.0;
  open.push({0.0, s});
  while (!open.empty()) {
    const auto [d, i] = open.top();
    open.pop();
    if (d > f.dist[i]) continue;
    const Cell a{static_cast<int>(i % g.width()), static_cast<int>(i / g.width())};
    for (int k = 0; k < 8; ++k) {
      const Cell b{a.x + kNeighbourDx[k], a.y + kNeighbourDy[k]};
      const double mc = MoveCost(g, a, b);
      if (mc < 0) continue;
      const std::size_t bi = g.Index(b.x, b.y);
      if (d + mc < f.dist[bi]) {
        f.dist[bi] = d + mc;
        f.parent[bi] = static_cast<std::int64_t>(i);
        open.push({f.dist[bi], bi});
      }
    }
  }
  return f;
}

inline std::vector<Cell> ExtractPath(const CostGrid& g, const DistanceField& f, Cell to) {
  if (!g.InBounds(to.x, to.y)) return {};
  const std::size_t goal = g.Index(to.x, to.y);
  if (f.dist[goal] == std::numeric_limits<double>::infinity()) return {};
  std::vector<Cell> path;
  for (std::int64_t i = static_cast<std::int64_t>(goal); i >= 0; i = f.parent[static_cast<std::size_t>(i)]) {
    path.push_back(Cell{static_cast<int>(i % g.width()), static_cast<int>(i / g.width())});
  }
  std::reverse(path.begin(), path.end());
  return path;
}

// Dijkstra from `from` that stops at the first settled cell satisfying
// `accept` and returns the path to it; empty if none is reachable.
template <typename Accept>
std::vector<Cell> PathToNearest(const CostGrid& g, Cell from, Accept&& accept) {
  const std::size_t n = static_cast<std::size_t>(g.width()) * g.height();
  DistanceField f{std::vector<double>(n, std::numeric_limits<double>::infinity()),
                  std::vector<std::int64_t>(n, -1)};
  if (!g.Passable(from.x, from.y)) return {};
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  const std::size_t s = g.Index(from.x, from.y);
  f.dist[s] = 0.0;
  open.push({0.0, s});
  while (!open.empty()) {
    const auto [d, i] = open.top();
    open.pop();
    if (d > f.dist[i]) continue;
    const Cell a{static_cast<int>(i % g.width()), static_cast<int>(i / g.width())};
    if (accept(a)) return ExtractPath(g, f, a);
    for (int k = 0; k < 8; ++k) {
      const Cell b{a.x + kNeighbourDx[k], a.y + kNeighbourDy[k]};
      const double mc = MoveCost(g, a, b);
      if (mc < 0) continue;
      const std::size_t bi = g.Index(b.x, b.y);
      if (d + mc < f.dist[bi]) {
        f.dist[bi] = d + mc;
        f.parent[bi] = static_cast<std::int64_t>(i);
        open.push({f.dist[bi], bi});
      }
    }
  }
  return {};
}

// Raises the cost of passable cells near blocked ones so paths keep clear of
// walls: +4 next to a blocked cell, +1 at Chebyshev distance 2.
inline void InflateObstacles(CostGrid& g) {
  const CostGrid base = g;
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      if (!base.Passable(x, y)) continue;
      int nearest = 3;
      for (int dy = -2; dy <= 2; ++dy) {
        for (int dx = -2; dx <= 2; ++dx) {
          if (base.InBounds(x + dx, y + dy) && !base.Passable(x + dx, y + dy)) {
            nearest = std::min(nearest, std::max(std::abs(dx), std::abs(dy)));
          }
        }
      }
      if (nearest == 1) g.Set(x, y, base.Get(x, y) + 4.0);
      if (nearest == 2) g.Set(x, y, base.Get(x, y) + 1.0);
    }
  }
}

// Nearest passable cell to `c` by Chebyshev ring search, up to max_radius.
inline std::optional<Cell> NearestPassable(const CostGrid& g, Cell c, int max_radius) {
  for (int r = 0; r <= max_radius; ++r) {
    std::optional<Cell> best;
    double best_d = 0.0;
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        if (std::max(std::abs(dx), std::abs(dy)) != r) continue;
        if (!g.Passable(c.x + dx, c.y + dy)) continue;
        const double d = std::hypot(dx, dy);
        if (!best || d < best_d) {
          best = Cell{c.x + dx, c.y + dy};
          best_d = d;
        }
      }
    }
    if (best) return best;
  }
  return std::nullopt;
}

}  // namespace planreg::sim

#endif  // PLANREG_SIM_PLANNER_H_
