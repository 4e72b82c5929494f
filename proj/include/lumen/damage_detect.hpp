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

#ifndef LUMEN_DAMAGE_DETECT_HPP_
#define LUMEN_DAMAGE_DETECT_HPP_

#include <vector>

#include "lumen/raster.hpp"

namespace lumen {

struct SeedSet {
  std::vector<PixelCoord> seeds;
  /// Euclidean distance over channels, in normalized [0,1] units.
  double tolerance = 0.0;
  /// Carried into job records; does not change the growth rule.
  DamageClass damage_class = DamageClass::kLacuna;
};

/// Union over seeds of the 4-connected component around each seed whose
/// pixels lie within `tolerance` of that seed's own value.
///
/// Throws OutOfBounds for a seed outside the image and InvalidArgument for a
/// negative tolerance. An empty seed list yields an all-false mask.
BinaryMask grow_region(const RasterImage& image, const SeedSet& seed_set);

/// Dilation by a (2*radius+1)^2 square structuring element.
BinaryMask dilate_mask(const BinaryMask& mask, int radius);

/// Fills every false 4-connected component that does not touch the border.
BinaryMask close_holes(const BinaryMask& mask);

}  // namespace lumen

#endif  // LUMEN_DAMAGE_DETECT_HPP_
