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

#ifndef PLANREG_PGM_H_
#define PLANREG_PGM_H_

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "planreg/error.h"
#include "planreg/mask.h"

namespace planreg {

// Occupancy-map grey levels (map_server convention).
inline constexpr std::uint8_t kPgmOccupied = 0;
inline constexpr std::uint8_t kPgmFree = 254;
inline constexpr std::uint8_t kPgmUnknown = 205;
// Plain binary masks export occupied cells as black on white.
inline constexpr std::uint8_t kPgmMaskOccupied = 0;
inline constexpr std::uint8_t kPgmMaskEmpty = 255;

enum class PgmEncoding { kBinary /* P5 */, kAscii /* P2 */ };

namespace internal {

class PgmTokenizer {
 public:
  explicit PgmTokenizer(std::string_view data) : data_(data) {}

  int NextInt(const char* what) {
    SkipSpaceAndComments();
    if (pos_ >= data_.size() || !std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      throw FormatError(std::string("PGM: expected ") + what + " at line " +
                        std::to_string(line_));
    }
    long value = 0;
    while (pos_ < data_.size() && std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      value = value * 10 + (data_[pos_] - '0');
      if (value > 1'000'000'000) throw FormatError("PGM: number too large");
      ++pos_;
    }
    return static_cast<int>(value);
  }

  std::string_view Magic() {
    if (data_.size() < 2) throw FormatError("PGM: file too short");
    pos_ = 2;
    return data_.substr(0, 2);
  }

  // Exactly one whitespace byte separates the header from binary raster data.
  std::size_t RasterStart() {
    if (pos_ >= data_.size() || !std::isspace(static_cast<unsigned char>(data_[pos_]))) {
      throw FormatError("PGM: missing whitespace before raster data");
    }
    return pos_ + 1;
  }

 private:
  void SkipSpaceAndComments() {
    while (pos_ < data_.size()) {
      const char c = data_[pos_];
      if (c == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (c == '\n') ++line_;
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view data_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace internal

inline GrayImage DecodePgm(std::string_view data) {
  internal::PgmTokenizer tok(data);
  const std::string_view magic = tok.Magic();
  if (magic != "P5" && magic != "P2") {
    throw FormatError("PGM: unsupported magic '" + std::string(magic) + "'");
  }
  const int w = tok.NextInt("width");
  const int h = tok.NextInt("height");
  const int maxval = tok.NextInt("maxval");
  if (w <= 0 || h <= 0) throw FormatError("PGM: non-positive dimensions");
  if (maxval <= 0 || maxval > 255) {
    throw FormatError("PGM: only 8-bit maxval (1..255) is supported");
  }
  GrayImage img(w, h);
  if (magic == "P5") {
    const std::size_t start = tok.RasterStart();
    const std::size_t need = static_cast<std::size_t>(w) * h;
    if (data.size() < start + need) {
      throw FormatError("PGM: truncated raster (" + std::to_string(data.size() - start) +
                        " of " + std::to_string(need) + " bytes)");
    }
    for (std::size_t i = 0; i < need; ++i) {
      img.pixels[i] = static_cast<std::uint8_t>(data[start + i]);
    }
  } else {
    for (auto& px : img.pixels) {
      const int v = tok.NextInt("pixel value");
      if (v > maxval) throw FormatError("PGM: pixel exceeds maxval");
      px = static_cast<std::uint8_t>(v);
    }
  }
  return img;
}

inline std::string EncodePgm(const GrayImage& img, PgmEncoding enc = PgmEncoding::kBinary) {
  std::ostringstream os;
  os << (enc == PgmEncoding::kBinary ? "P5" : "P2") << '\n'
     << img.width << ' ' << img.height << '\n'
     << 255 << '\n';
  if (enc == PgmEncoding::kBinary) {
    os.write(reinterpret_cast<const char*>(img.pixels.data()),
             static_cast<std::streamsize>(img.pixels.size()));
  } else {
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        if (x) os << ' ';
        os << static_cast<int>(img.at(x, y));
      }
      os << '\n';
    }
  }
  return os.str();
}

inline std::string ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void WriteFileBytes(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline GrayImage ReadPgm(const std::string& path) {
  try {
    return DecodePgm(ReadFileBytes(path));
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline void WritePgm(const std::string& path, const GrayImage& img,
                     PgmEncoding enc = PgmEncoding::kBinary) {
  WriteFileBytes(path, EncodePgm(img, enc));
}

inline GrayImage MaskToGray(const BinaryMask& mask) {
  GrayImage img(mask.width(), mask.height(), kPgmMaskEmpty);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask.cells()[i]) img.pixels[i] = kPgmMaskOccupied;
  }
  return img;
}

// Inverse of MaskToGray: dark pixels (< 128) are occupied.
inline BinaryMask GrayToMask(const GrayImage& img) {
  BinaryMask mask(img.width, img.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    mask.mutable_cells()[i] = img.pixels[i] < 128 ? 1 : 0;
  }
  return mask;
}

}  // namespace planreg

#endif  // PLANREG_PGM_H_
