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

#include "lumen/damage_detect.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lumen/error.hpp"

namespace lumen {

namespace {

double ColorDistance(std::span<const double> data, std::size_t a,
                     std::size_t b, int channels) {
  double sum = 0.0;
  for (int c = 0; c < channels; ++c) {
    const double d = data[a + c] - data[b + c];
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace

BinaryMask grow_region(const RasterImage& image, const SeedSet& seed_set) {
  if (image.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot grow region on empty image");
  }
  if (!(seed_set.tolerance >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tolerance must be >= 0");
  }
  for (const PixelCoord& s : seed_set.seeds) {
    if (!image.contains(s)) {
      throw Error(ErrorCode::kOutOfBounds,
                  "seed (" + std::to_string(s.x) + "," + std::to_string(s.y) +
                      ") outside " + std::to_string(image.width()) + "x" +
                      std::to_string(image.height()) + " image");
    }
  }

  const int w = image.width();
  const int h = image.height();
  const int nc = image.channels();
  auto data = image.data();
  BinaryMask out(w, h, false);

  // Regions of different seeds may overlap without being identical, so each
  // seed floods on its own visit stamp and ORs into the output.
  std::vector<std::uint32_t> stamp(image.pixel_count(), 0);
  std::vector<std::size_t> stack;
  std::uint32_t generation = 0;
  for (const PixelCoord& s : seed_set.seeds) {
    ++generation;
    const std::size_t seed = out.index(s.x, s.y);
    const std::size_t seed_offset = seed * nc;
    stack.clear();
    stack.push_back(seed);
    stamp[seed] = generation;
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      out.set(p, true);
      const int x = static_cast<int>(p % w);
      const int y = static_cast<int>(p / w);
      const auto visit = [&](std::size_t q) {
        if (stamp[q] == generation) return;
        if (ColorDistance(data, q * nc, seed_offset, nc) <= seed_set.tolerance) {
          stamp[q] = generation;
          stack.push_back(q);
        }
      };
      if (x > 0) visit(p - 1);
      if (x + 1 < w) visit(p + 1);
      if (y > 0) visit(p - w);
      if (y + 1 < h) visit(p + w);
    }
  }
  return out;
}

BinaryMask dilate_mask(const BinaryMask& mask, int radius) {
  if (radius < 0) {
    throw Error(ErrorCode::kInvalidArgument, "dilation radius must be >= 0");
  }
  if (radius == 0) return mask;
  const int w = mask.width();
  const int h = mask.height();
  // Separable square element: horizontal pass, then vertical. Each pass
  // tracks the nearest true pixel on either side, O(n) per line.
  BinaryMask horizontal(w, h, false);
  std::vector<int> left(w), right(w);
  for (int y = 0; y < h; ++y) {
    int last_true = -1 - radius - 1;
    for (int x = 0; x < w; ++x) {
      if (mask.at(x, y)) last_true = x;
      left[x] = last_true;
    }
    int next_true = w + radius + 1;
    for (int x = w - 1; x >= 0; --x) {
      if (mask.at(x, y)) next_true = x;
      right[x] = next_true;
    }
    for (int x = 0; x < w; ++x) {
      horizontal.set(x, y, x - left[x] <= radius || right[x] - x <= radius);
    }
  }
  BinaryMask out(w, h, false);
  std::vector<int> up(h), down(h);
  for (int x = 0; x < w; ++x) {
    int last_true = -1 - radius - 1;
    for (int y = 0; y < h; ++y) {
      if (horizontal.at(x, y)) last_true = y;
      up[y] = last_true;
    }
    int next_true = h + radius + 1;
    for (int y = h - 1; y >= 0; --y) {
      if (horizontal.at(x, y)) next_true = y;
      down[y] = next_true;
    }
    for (int y = 0; y < h; ++y) {
      out.set(x, y, y - up[y] <= radius || down[y] - y <= radius);
    }
  }
  return out;
}

BinaryMask close_holes(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  // Flood the false pixels reachable from the border; whatever false pixel
  // remains unreached is enclosed.
  std::vector<std::uint8_t> outside(mask.pixel_count(), 0);
  std::vector<std::size_t> stack;
  const auto push = [&](int x, int y) {
    const std::size_t i = mask.index(x, y);
    if (!mask.at(i) && !outside[i]) {
      outside[i] = 1;
      stack.push_back(i);
    }
  };
  for (int x = 0; x < w; ++x) {
    push(x, 0);
    push(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    push(0, y);
    push(w - 1, y);
  }
  while (!stack.empty()) {
    const std::size_t p = stack.back();
    stack.pop_back();
    const int x = static_cast<int>(p % w);
    const int y = static_cast<int>(p / w);
    if (x > 0) push(x - 1, y);
    if (x + 1 < w) push(x + 1, y);
    if (y > 0) push(x, y - 1);
    if (y + 1 < h) push(x, y + 1);
  }
  BinaryMask out = mask;
  for (std::size_t i = 0; i < outside.size(); ++i) {
    if (!mask.at(i) && !outside[i]) out.set(i, true);
  }
  return out;
}

}  // namespace lumen
