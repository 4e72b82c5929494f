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

#ifndef LUMEN_IMAGE_IO_HPP_
#define LUMEN_IMAGE_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lumen/raster.hpp"

namespace lumen {

// Decoding accepts 8/16-bit gray, gray+alpha, RGB and RGBA PNG plus binary
// PGM (P5) / PPM (P6). Alpha is dropped with a warning on stderr. Samples
// are normalized by the format maximum (255, 65535 or the netpbm maxval).
RasterImage decode_image(std::span<const std::uint8_t> bytes);
RasterImage load_image(const std::filesystem::path& path);

// Quantizes with round(v * 255), halves rounding up.
std::uint8_t QuantizeSample(double v) noexcept;

std::vector<std::uint8_t> encode_png(const RasterImage& image);
std::vector<std::uint8_t> encode_netpbm(const RasterImage& image);

/// Writes 8-bit PNG, or binary PGM/PPM when the extension is .pgm/.ppm.
void save_image(const RasterImage& image, const std::filesystem::path& path);

// Masks travel as 8-bit grayscale: 0 known, 255 damaged; >= 128 reads true.
BinaryMask decode_mask(std::span<const std::uint8_t> bytes);
BinaryMask load_mask(const std::filesystem::path& path);
std::vector<std::uint8_t> encode_mask_png(const BinaryMask& mask);
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes);

}  // namespace lumen

#endif  // LUMEN_IMAGE_IO_HPP_
