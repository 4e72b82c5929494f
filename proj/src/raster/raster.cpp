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

#include "lumen/raster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "lumen/error.hpp"

namespace lumen {

namespace {

double Clamp01(double v) noexcept {
  if (!(v > 0.0)) return 0.0;  // also maps NaN to 0
  return v < 1.0 ? v : 1.0;
}

void CheckShape(int width, int height, int channels) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "raster dimensions must be positive, got " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
  if (channels != 1 && channels != 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "raster must have 1 or 3 channels, got " +
                    std::to_string(channels));
  }
}

constexpr std::array<std::string_view, 4> kDamageNames = {
    "lacuna", "degradation", "abrasion", "overpaint"};

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDecodeError: return "DecodeError";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kOutOfBounds: return "OutOfBounds";
    case ErrorCode::kIndexOutOfBounds: return "IndexOutOfBounds";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kAllUnknown: return "AllUnknown";
    case ErrorCode::kSolverDiverged: return "SolverDiverged";
    case ErrorCode::kNoValidSource: return "NoValidSource";
  }
  return "Unknown";
}

std::string_view DamageClassName(DamageClass tag) {
  return kDamageNames[static_cast<std::size_t>(tag)];
}

std::optional<DamageClass> ParseDamageClass(std::string_view name) {
  for (std::size_t i = 0; i < kDamageNames.size(); ++i) {
    if (kDamageNames[i] == name) return static_cast<DamageClass>(i);
  }
  return std::nullopt;
}

RasterImage::RasterImage(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  CheckShape(width, height, channels);
  data_.assign(pixel_count() * static_cast<std::size_t>(channels),
               Clamp01(fill));
}

RasterImage::RasterImage(int width, int height, int channels,
                         std::vector<double> data)
    : width_(width), height_(height), channels_(channels),
      data_(std::move(data)) {
  CheckShape(width, height, channels);
  if (data_.size() != pixel_count() * static_cast<std::size_t>(channels)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "raster data length " + std::to_string(data_.size()) +
                    " does not match " + std::to_string(width) + "x" +
                    std::to_string(height) + "x" + std::to_string(channels));
  }
  for (double& v : data_) v = Clamp01(v);
}

void RasterImage::set(int x, int y, int c, double value) noexcept {
  data_[index(x, y, c)] = Clamp01(value);
}

RasterImage RasterImage::channel(int c) const {
  if (c < 0 || c >= channels_) {
    throw Error(ErrorCode::kIndexOutOfBounds,
                "channel " + std::to_string(c) + " out of range");
  }
  std::vector<double> plane(pixel_count());
  for (std::size_t i = 0; i < plane.size(); ++i) {
    plane[i] = data_[i * static_cast<std::size_t>(channels_) +
                     static_cast<std::size_t>(c)];
  }
  return RasterImage(width_, height_, 1, std::move(plane));
}

RasterImage RasterImage::FromChannels(std::span<const RasterImage> planes) {
  if (planes.size() != 1 && planes.size() != 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "expected 1 or 3 channel planes");
  }
  const RasterImage& first = planes.front();
  for (const RasterImage& p : planes) {
    if (p.channels() != 1 || p.width() != first.width() ||
        p.height() != first.height()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "channel planes must be single-channel and equally sized");
    }
  }
  const std::size_t nc = planes.size();
  std::vector<double> data(first.pixel_count() * nc);
  for (std::size_t c = 0; c < nc; ++c) {
    auto src = planes[c].data();
    for (std::size_t i = 0; i < src.size(); ++i) data[i * nc + c] = src[i];
  }
  return RasterImage(first.width(), first.height(), static_cast<int>(nc),
                     std::move(data));
}

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidArgument, "mask dimensions must be positive");
  }
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
               fill ? 1 : 0);
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidArgument, "mask dimensions must be positive");
  }
  if (bits_.size() !=
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::kDimensionMismatch, "mask bit count mismatch");
  }
  for (auto& b : bits_) b = b ? 1 : 0;
}

MaskStats mask_stats(const BinaryMask& mask) {
  MaskStats stats;
  for (std::uint8_t b : mask.bits()) stats.count_true += b;
  if (mask.pixel_count() > 0) {
    stats.fraction = static_cast<double>(stats.count_true) /
                     static_cast<double>(mask.pixel_count());
  }
  return stats;
}

RasterImage to_grayscale(const RasterImage& image) {
  if (image.channels() == 1) return image;
  auto src = image.data();
  std::vector<double> gray(image.pixel_count());
  for (std::size_t i = 0; i < gray.size(); ++i) {
    gray[i] = 0.2126 * src[3 * i] + 0.7152 * src[3 * i + 1] +
              0.0722 * src[3 * i + 2];
  }
  return RasterImage(image.width(), image.height(), 1, std::move(gray));
}

void RequireSameSize(const RasterImage& image, const BinaryMask& mask) {
  if (image.width() != mask.width() || image.height() != mask.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "mask is " + std::to_string(mask.width()) + "x" +
                    std::to_string(mask.height()) + " but image is " +
                    std::to_string(image.width()) + "x" +
                    std::to_string(image.height()));
  }
}

}  // namespace lumen
