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

#include "lumen/exemplar_inpaint.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lumen/error.hpp"
#include "lumen/simd/kernels.hpp"

namespace lumen {

namespace {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Working state of the greedy fill: image values, the shrinking mask and
// the confidence map.
class FillState {
 public:
  FillState(const RasterImage& image, const BinaryMask& mask)
      : w_(image.width()), h_(image.height()), nc_(image.channels()),
        values_(image.data().begin(), image.data().end()),
        unknown_(mask.bits().begin(), mask.bits().end()),
        confidence_(mask.pixel_count()) {
    for (std::size_t i = 0; i < unknown_.size(); ++i) {
      confidence_[i] = unknown_[i] ? 0.0 : 1.0;
    }
    gray_.resize(unknown_.size());
    for (std::size_t i = 0; i < gray_.size(); ++i) gray_[i] = Luminance(i);
  }

  int width() const { return w_; }
  int height() const { return h_; }
  int channels() const { return nc_; }
  std::size_t Index(int x, int y) const {
    return static_cast<std::size_t>(y) * w_ + x;
  }
  bool InBounds(int x, int y) const { return x >= 0 && y >= 0 && x < w_ && y < h_; }
  bool Unknown(int x, int y) const { return unknown_[Index(x, y)] != 0; }
  bool KnownInBounds(int x, int y) const { return InBounds(x, y) && !Unknown(x, y); }
  const std::vector<double>& values() const { return values_; }

  // Mean confidence over the in-bounds part of the patch.
  double PatchConfidence(int cx, int cy, int half) const {
    double sum = 0.0;
    int count = 0;
    for (int y = cy - half; y <= cy + half; ++y) {
      for (int x = cx - half; x <= cx + half; ++x) {
        if (!InBounds(x, y)) continue;
        sum += confidence_[Index(x, y)];
        ++count;
      }
    }
    return sum / count;
  }

  // Central difference where both neighbours are known, one-sided where only
  // one is, zero otherwise. Components lie in [-1, 1].
  Vec2 Gradient(int x, int y) const {
    const auto axis = [&](int dx, int dy) {
      const bool fwd = KnownInBounds(x + dx, y + dy);
      const bool back = KnownInBounds(x - dx, y - dy);
      const double here = gray_[Index(x, y)];
      if (fwd && back) {
        return 0.5 * (gray_[Index(x + dx, y + dy)] - gray_[Index(x - dx, y - dy)]);
      }
      if (fwd) return gray_[Index(x + dx, y + dy)] - here;
      if (back) return here - gray_[Index(x - dx, y - dy)];
      return 0.0;
    };
    return {axis(1, 0), axis(0, 1)};
  }

  // Strongest confidence-weighted gradient among known pixels of the patch.
  Vec2 Isophote(int cx, int cy, int half) const {
    Vec2 best;
    double best_norm = -1.0;
    for (int y = cy - half; y <= cy + half; ++y) {
      for (int x = cx - half; x <= cx + half; ++x) {
        if (!KnownInBounds(x, y)) continue;
        const Vec2 g = Gradient(x, y);
        const double c = confidence_[Index(x, y)];
        const Vec2 weighted{c * g.x, c * g.y};
        const double norm = weighted.x * weighted.x + weighted.y * weighted.y;
        if (norm > best_norm) {
          best_norm = norm;
          best = weighted;
        }
      }
    }
    return best;
  }

  // Central differences of the unknown indicator; out-of-image samples
  // repeat the centre so the image border does not read as a front.
  std::optional<Vec2> FrontNormal(int x, int y) const {
    const auto m = [&](int px, int py) {
      return InBounds(px, py) ? static_cast<double>(Unknown(px, py))
                              : static_cast<double>(Unknown(x, y));
    };
    const Vec2 g{0.5 * (m(x + 1, y) - m(x - 1, y)), 0.5 * (m(x, y + 1) - m(x, y - 1))};
    const double norm = std::hypot(g.x, g.y);
    if (norm == 0.0) return std::nullopt;
    return Vec2{g.x / norm, g.y / norm};
  }

  double ConfidenceAt(int x, int y) const { return confidence_[Index(x, y)]; }

  void Fill(int x, int y, std::size_t source_pixel, double confidence) {
    const std::size_t p = Index(x, y);
    for (int c = 0; c < nc_; ++c) {
      values_[p * nc_ + c] = values_[source_pixel * nc_ + c];
    }
    gray_[p] = gray_[source_pixel];
    confidence_[p] = confidence;
    unknown_[p] = 0;
  }

 private:
  double Luminance(std::size_t p) const {
    if (nc_ == 1) return values_[p];
    return 0.2126 * values_[3 * p] + 0.7152 * values_[3 * p + 1] +
           0.0722 * values_[3 * p + 2];
  }

  int w_, h_, nc_;
  std::vector<double> values_;
  std::vector<std::uint8_t> unknown_;
  std::vector<double> confidence_;
  std::vector<double> gray_;
};

// Centres whose whole patch is in-bounds and known in the original mask,
// row-major. Uses a summed-area table of the unknown indicator.
std::vector<PixelCoord> SourceCentres(const BinaryMask& mask, int half) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<PixelCoord> centres;
  if (2 * half + 1 > w || 2 * half + 1 > h) return centres;
  std::vector<int> sat(static_cast<std::size_t>(w + 1) * (h + 1), 0);
  const auto at = [&](int x, int y) -> int& {
    return sat[static_cast<std::size_t>(y) * (w + 1) + x];
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      at(x + 1, y + 1) = at(x, y + 1) + at(x + 1, y) - at(x, y) + (mask.at(x, y) ? 1 : 0);
    }
  }
  for (int cy = half; cy < h - half; ++cy) {
    for (int cx = half; cx < w - half; ++cx) {
      const int x0 = cx - half, y0 = cy - half, x1 = cx + half + 1, y1 = cy + half + 1;
      if (at(x1, y1) - at(x0, y1) - at(x1, y0) + at(x0, y0) == 0) {
        centres.push_back({cx, cy});
      }
    }
  }
  return centres;
}

}  // namespace

void ExemplarParams::Validate() const {
  if (patch_size < 3 || patch_size % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "patch_size must be an odd integer >= 3, got " +
                    std::to_string(patch_size));
  }
  if (search_window.has_value() && *search_window < patch_size) {
    throw Error(ErrorCode::kInvalidArgument,
                "search_window must be >= patch_size");
  }
  if (!(data_term_alpha > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "data_term_alpha must be > 0");
  }
}

std::vector<PixelCoord> fill_front(const BinaryMask& mask) {
  std::vector<PixelCoord> front;
  const int w = mask.width();
  const int h = mask.height();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      const bool touches_known = (x > 0 && !mask.at(x - 1, y)) ||
                                 (x + 1 < w && !mask.at(x + 1, y)) ||
                                 (y > 0 && !mask.at(x, y - 1)) ||
                                 (y + 1 < h && !mask.at(x, y + 1));
      if (touches_known) front.push_back({x, y});
    }
  }
  return front;
}

PatchDistance patch_ssd(const RasterImage& image, const BinaryMask& mask,
                        PixelCoord target, PixelCoord source, int patch_size) {
  RequireSameSize(image, mask);
  const int half = patch_size / 2;
  PatchDistance result;
  for (int dy = -half; dy <= half; ++dy) {
    for (int dx = -half; dx <= half; ++dx) {
      const PixelCoord s{source.x + dx, source.y + dy};
      if (!mask.contains(s) || mask.at(s.x, s.y)) return result;
    }
  }
  result.valid = true;
  for (int dy = -half; dy <= half; ++dy) {
    for (int dx = -half; dx <= half; ++dx) {
      const PixelCoord t{target.x + dx, target.y + dy};
      if (!mask.contains(t) || mask.at(t.x, t.y)) continue;
      for (int c = 0; c < image.channels(); ++c) {
        const double d = image.at(t.x, t.y, c) - image.at(source.x + dx, source.y + dy, c);
        result.ssd += d * d;
      }
    }
  }
  return result;
}

ExemplarResult inpaint_exemplar(const RasterImage& image, const BinaryMask& mask,
                                const ExemplarParams& params) {
  params.Validate();
  RequireSameSize(image, mask);
  ExemplarResult result;
  if (mask_stats(mask).count_true == 0) {
    result.image = image;
    return result;
  }
  const int half = params.patch_size / 2;
  const std::vector<PixelCoord> sources = SourceCentres(mask, half);
  if (sources.empty()) {
    throw Error(ErrorCode::kNoValidSource,
                "no fully known " + std::to_string(params.patch_size) + "x" +
                    std::to_string(params.patch_size) + " source patch exists");
  }

  FillState state(image, mask);
  const int w = state.width();
  const int nc = state.channels();
  const std::size_t row_len = static_cast<std::size_t>(params.patch_size) * nc;
  std::vector<double> target_values(row_len * params.patch_size);
  std::vector<double> target_weights(row_len * params.patch_size);
  BinaryMask working = mask;

  while (true) {
    const std::vector<PixelCoord> front = fill_front(working);
    if (front.empty()) break;

    // (1)+(2): highest priority on the front; strict > keeps the first
    // row-major pixel among ties.
    PixelCoord pick = front.front();
    double best_priority = -1.0;
    for (const PixelCoord& p : front) {
      const double confidence = state.PatchConfidence(p.x, p.y, half);
      const std::optional<Vec2> normal = state.FrontNormal(p.x, p.y);
      double priority = confidence;
      if (normal.has_value()) {
        const Vec2 iso = state.Isophote(p.x, p.y, half);
        const double data_term =
            std::abs(-iso.y * normal->x + iso.x * normal->y) / params.data_term_alpha;
        result.max_data_term = std::max(result.max_data_term, data_term);
        priority = confidence * data_term;
      }
      if (priority > best_priority) {
        best_priority = priority;
        pick = p;
      }
    }

    // (3): gather the target patch once, then scan candidate sources.
    for (int dy = -half; dy <= half; ++dy) {
      for (int dx = -half; dx <= half; ++dx) {
        const int x = pick.x + dx, y = pick.y + dy;
        const bool known = state.KnownInBounds(x, y);
        const std::size_t base =
            static_cast<std::size_t>(dy + half) * row_len + static_cast<std::size_t>(dx + half) * nc;
        for (int c = 0; c < nc; ++c) {
          target_values[base + c] = known ? state.values()[state.Index(x, y) * nc + c] : 0.0;
          target_weights[base + c] = known ? 1.0 : 0.0;
        }
      }
    }
    const auto& kernels = simd::Active();
    const auto scan = [&](bool windowed) {
      double best_ssd = std::numeric_limits<double>::infinity();
      const PixelCoord* best = nullptr;
      for (const PixelCoord& s : sources) {
        if (windowed && (std::abs(s.x - pick.x) > *params.search_window ||
                         std::abs(s.y - pick.y) > *params.search_window)) {
          continue;
        }
        double ssd = 0.0;
        for (int dy = -half; dy <= half && ssd < best_ssd; ++dy) {
          const double* src = state.values().data() +
                              state.Index(s.x - half, s.y + dy) * nc;
          const std::size_t off = static_cast<std::size_t>(dy + half) * row_len;
          ssd += kernels.weighted_ssd(src, target_values.data() + off,
                                      target_weights.data() + off, row_len);
        }
        if (ssd < best_ssd) {
          best_ssd = ssd;
          best = &s;
        }
      }
      return best;
    };
    const PixelCoord* source = scan(params.search_window.has_value());
    if (source == nullptr) source = scan(false);  // empty window

    // (4): copy into unknown target pixels, inheriting the target confidence.
    const double inherited = state.PatchConfidence(pick.x, pick.y, half);
    for (int dy = -half; dy <= half; ++dy) {
      for (int dx = -half; dx <= half; ++dx) {
        const int x = pick.x + dx, y = pick.y + dy;
        if (!state.InBounds(x, y) || !state.Unknown(x, y)) continue;
        state.Fill(x, y, state.Index(source->x + dx, source->y + dy), inherited);
        working.set(x, y, false);
      }
    }
    ++result.iterations;
  }

  result.image = RasterImage(w, state.height(), nc, state.values());
  return result;
}

}  // namespace lumen
