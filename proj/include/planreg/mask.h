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

#ifndef PLANREG_MASK_H_
#define PLANREG_MASK_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "planreg/error.h"

namespace planreg {

// 8-bit single-channel image, row-major, y pointing down.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {
    if (w < 0 || h < 0) throw ShapeError("negative image dimensions");
  }

  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

// Binary raster with cells in {0, 1}; row-major, y pointing down.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height)
      : width_(width), height_(height),
        cells_(static_cast<std::size_t>(width) * height, 0) {
    if (width < 0 || height < 0) throw ShapeError("negative mask dimensions");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  bool InBounds(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  std::size_t Index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  bool Get(int x, int y) const { return cells_[Index(x, y)] != 0; }
  // Out-of-bounds reads are empty.
  bool GetOr0(int x, int y) const { return InBounds(x, y) && Get(x, y); }
  void Set(int x, int y, bool v) { cells_[Index(x, y)] = v ? 1 : 0; }

  const std::vector<std::uint8_t>& cells() const { return cells_; }
  std::vector<std::uint8_t>& mutable_cells() { return cells_; }

  std::size_t CountOccupied() const {
    std::size_t n = 0;
    for (std::uint8_t c : cells_) n += c;
    return n;
  }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> cells_;
};

}  // namespace planreg

#endif  // PLANREG_MASK_H_
