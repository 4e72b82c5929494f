// Copyright 2026 The Lumen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LUMEN_RASTER_HPP_
#define LUMEN_RASTER_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace lumen {

struct PixelCoord {
  int x = 0;
  int y = 0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

enum class DamageClass { kLacuna, kDegradation, kAbrasion, kOverpaint };

std::string_view DamageClassName(DamageClass tag);
std::optional<DamageClass> ParseDamageClass(std::string_view name);

/// Row-major floating point raster with 1 or 3 interleaved channels.
///
/// Values are kept in [0,1]: the constructor and set() clamp on write, so a
/// RasterImage can never hold an out-of-range sample. Intermediate solver
/// state lives in plain vectors and only becomes a RasterImage on write-back.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, int channels, double fill = 0.0);
  RasterImage(int width, int height, int channels, std::vector<double> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const double> data() const noexcept { return data_; }

  double at(int x, int y, int c = 0) const noexcept {
    return data_[index(x, y, c)];
  }
  void set(int x, int y, int c, double value) noexcept;

  std::size_t index(int x, int y, int c = 0) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  bool contains(PixelCoord p) const noexcept {
    return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_;
  }

  /// Copies one channel out as a single-channel image.
  RasterImage channel(int c) const;
  /// Interleaves single-channel planes of identical size.
  static RasterImage FromChannels(std::span<const RasterImage> planes);

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// Per-pixel damage flags; true marks an unknown pixel to be synthesized.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);
  BinaryMask(int width, int height, std::vector<std::uint8_t> bits);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return bits_.size(); }

  bool at(int x, int y) const noexcept { return bits_[index(x, y)] != 0; }
  bool at(std::size_t i) const noexcept { return bits_[i] != 0; }
  void set(int x, int y, bool v) noexcept { bits_[index(x, y)] = v ? 1 : 0; }
  void set(std::size_t i, bool v) noexcept { bits_[i] = v ? 1 : 0; }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }
  bool contains(PixelCoord p) const noexcept {
    return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_;
  }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct MaskStats {
  std::size_t count_true = 0;
  double fraction = 0.0;
};

MaskStats mask_stats(const BinaryMask& mask);

/// Rec. 709 luminance; single-channel input is returned unchanged.
RasterImage to_grayscale(const RasterImage& image);

/// Throws DimensionMismatch unless mask and image share width and height.
void RequireSameSize(const RasterImage& image, const BinaryMask& mask);

}  // namespace lumen

#endif  // LUMEN_RASTER_HPP_
