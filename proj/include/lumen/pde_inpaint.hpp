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

#ifndef LUMEN_PDE_INPAINT_HPP_
#define LUMEN_PDE_INPAINT_HPP_

#include <cstddef>
#include <vector>

#include "lumen/raster.hpp"
#include "lumen/sparse.hpp"

namespace lumen {

enum class DiffusionKind { kHarmonic, kTotalVariation };

struct DiffusionMethod {
  DiffusionKind kind = DiffusionKind::kHarmonic;
  double tv_epsilon = 1e-3;
  int tv_outer_iters = 30;

  /// Throws InvalidArgument unless tv_epsilon > 0 and tv_outer_iters >= 1.
  void Validate() const;
};

/// Discrete Laplace system over the unknown pixels of one channel.
///
/// Row i belongs to pixel unknown_pixels[i] (row-major linear index). The
/// stencil is the 5-point Laplacian truncated at the image border, which is
/// the homogeneous Neumann condition; known neighbours move to the rhs.
struct DiffusionSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;
  std::vector<std::size_t> unknown_pixels;
};

DiffusionSystem build_harmonic_system(const RasterImage& channel,
                                      const BinaryMask& mask);

/// Same layout with per-edge conductances: edge (p,q) contributes weight
/// edge_weight(p,q) instead of 1. `horizontal` has (width-1)*height entries
/// for edges (x,y)-(x+1,y); `vertical` has width*(height-1) for (x,y)-(x,y+1).
DiffusionSystem build_weighted_system(const RasterImage& channel,
                                      const BinaryMask& mask,
                                      const std::vector<double>& horizontal,
                                      const std::vector<double>& vertical);

struct InpaintResult {
  RasterImage image;
  std::vector<SolveReport> solver_reports;  // one per channel
  /// Largest |u(p) - mean of in-image neighbours| over unknown pixels.
  /// Only meaningful for the harmonic method.
  double residual_mean_value = 0.0;
};

/// Fills the masked pixels of every channel independently. Known pixels
/// are copied through bit for bit.
///
/// Throws AllUnknown when the mask covers the image, DimensionMismatch on
/// size disagreement and SolverDiverged when a CG solve does not converge.
InpaintResult inpaint_diffusion(const RasterImage& image, const BinaryMask& mask,
                                const DiffusionMethod& method,
                                double solver_tol = 1e-10);

}  // namespace lumen

#endif  // LUMEN_PDE_INPAINT_HPP_
