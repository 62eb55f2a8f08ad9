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

#ifndef PLANREG_D4_H_
#define PLANREG_D4_H_

#include <array>
#include <string>
#include <string_view>

#include "planreg/error.h"
#include "planreg/geometry.h"

namespace planreg {

enum class Flip { kNone, kHorizontal };

inline std::string_view FlipName(Flip f) {
  return f == Flip::kNone ? "none" : "horizontal";
}

inline Flip ParseFlip(std::string_view s) {
  if (s == "none") return Flip::kNone;
  if (s == "horizontal") return Flip::kHorizontal;
  throw SchemaError("unknown flip '" + std::string(s) + "'");
}

// Element of the dihedral group of the square, written as "mirror across the
// vertical axis (optional), then rotate counter-clockwise on screen by
// quarter_turns * 90 degrees". With y pointing down a counter-clockwise
// on-screen quarter turn maps (x, y) to (y, -x).
//
// Canonical id = 4 * flip + quarter_turns, so the identity is 0 and ids 0..3
// are the pure rotations.
class D4 {
 public:
  constexpr D4() = default;
  constexpr D4(int quarter_turns, Flip flip)
      : turns_(((quarter_turns % 4) + 4) % 4), flip_(flip) {}

  static D4 FromDegrees(int degrees, Flip flip) {
    if (degrees % 90 != 0) {
      throw SchemaError("rotation must be a multiple of 90 degrees, got " +
                        std::to_string(degrees));
    }
    return D4(degrees / 90, flip);
  }
  static constexpr D4 FromId(int id) {
    return D4(id % 4, id >= 4 ? Flip::kHorizontal : Flip::kNone);
  }
  // Mirror across the horizontal axis, i.e. y -> -y.
  static constexpr D4 VerticalFlip() { return D4(2, Flip::kHorizontal); }

  static constexpr std::array<D4, 8> All() {
    return {FromId(0), FromId(1), FromId(2), FromId(3),
            FromId(4), FromId(5), FromId(6), FromId(7)};
  }

  constexpr int quarter_turns() const { return turns_; }
  constexpr int degrees() const { return turns_ * 90; }
  constexpr Flip flip() const { return flip_; }
  constexpr bool flipped() const { return flip_ == Flip::kHorizontal; }
  constexpr int id() const { return (flipped() ? 4 : 0) + turns_; }
  constexpr bool swaps_axes() const { return (turns_ & 1) != 0; }

  // Linear action on plan coordinates; the translation is supplied by callers
  // that re-anchor the result (bounding-box alignment).
  constexpr Point ApplyLinear(Point p) const {
    if (flipped()) p.x = -p.x;
    for (int i = 0; i < turns_; ++i) p = Point{p.y, -p.x};
    return p;
  }

  friend constexpr bool operator==(D4, D4) = default;

 private:
  int turns_ = 0;
  Flip flip_ = Flip::kNone;
};

// Returns the element "apply `first`, then `second`".
constexpr D4 Compose(D4 second, D4 first) {
  // R^a F^f  R^b F^g: moving F past R^b inverts the rotation.
  if (second.flipped()) {
    return D4(second.quarter_turns() - first.quarter_turns(),
              first.flipped() ? Flip::kNone : Flip::kHorizontal);
  }
  return D4(second.quarter_turns() + first.quarter_turns(), first.flip());
}

constexpr D4 Inverse(D4 g) {
  return g.flipped() ? g : D4(-g.quarter_turns(), Flip::kNone);
}

inline int D4CanonicalId(int degrees, Flip flip) {
  return D4::FromDegrees(degrees, flip).id();
}

}  // namespace planreg

#endif  // PLANREG_D4_H_
