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

#ifndef LUMEN_EXEMPLAR_INPAINT_HPP_
#define LUMEN_EXEMPLAR_INPAINT_HPP_

#include <optional>
#include <vector>

#include "lumen/raster.hpp"

namespace lumen {

struct ExemplarParams {
  int patch_size = 9;
  /// Source search radius around the target centre; nullopt searches the
  /// whole image.
  std::optional<int> search_window;
  double data_term_alpha = 1.0;

  void Validate() const;
};

/// Unknown pixels with at least one known 4-neighbour, row-major.
std::vector<PixelCoord> fill_front(const BinaryMask& mask);

struct PatchDistance {
  double ssd = 0.0;
  bool valid = false;
};

/// Sum of squared differences between the patch around `target` and the one
/// around `source`, over target pixels that are in-bounds and known, summed
/// across channels. Invalid when the source patch leaves the image or
/// touches an unknown pixel.
PatchDistance patch_ssd(const RasterImage& image, const BinaryMask& mask,
                        PixelCoord target, PixelCoord source, int patch_size);

struct ExemplarResult {
  RasterImage image;
  int iterations = 0;
  /// Largest data term seen on the fill front; bounded by sqrt(2)/alpha.
  double max_data_term = 0.0;
};

/// Greedy priority-ordered patch copying until the mask is exhausted.
///
/// Each round picks the fill-front pixel with the highest confidence x data
/// term, finds the fully known source patch with the smallest SSD to it,
/// and copies that patch into the still-unknown pixels of the target. All
/// ties resolve to the smallest row-major index, so the output is
/// deterministic. Throws NoValidSource when the mask is non-empty and no
/// fully known in-bounds patch exists.
ExemplarResult inpaint_exemplar(const RasterImage& image, const BinaryMask& mask,
                                const ExemplarParams& params);

}  // namespace lumen

#endif  // LUMEN_EXEMPLAR_INPAINT_HPP_
