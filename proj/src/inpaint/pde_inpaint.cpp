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

#include "lumen/pde_inpaint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lumen/error.hpp"

namespace lumen {

namespace {

constexpr std::size_t kKnown = std::numeric_limits<std::size_t>::max();

void CheckInputs(const RasterImage& channel, const BinaryMask& mask) {
  if (channel.channels() != 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "diffusion systems are built per channel");
  }
  RequireSameSize(channel, mask);
  if (mask_stats(mask).count_true == mask.pixel_count()) {
    throw Error(ErrorCode::kAllUnknown,
                "mask covers entire image; no known data to diffuse");
  }
}

// EdgeWeight(p, q) with q a 4-neighbour of p.
template <typename EdgeWeight>
DiffusionSystem BuildSystem(const RasterImage& channel, const BinaryMask& mask,
                            EdgeWeight edge_weight) {
  const int w = channel.width();
  const int h = channel.height();
  auto values = channel.data();

  DiffusionSystem sys;
  std::vector<std::size_t> row_of(mask.pixel_count(), kKnown);
  for (std::size_t i = 0; i < mask.pixel_count(); ++i) {
    if (mask.at(i)) {
      row_of[i] = sys.unknown_pixels.size();
      sys.unknown_pixels.push_back(i);
    }
  }
  const std::size_t n = sys.unknown_pixels.size();
  sys.rhs.assign(n, 0.0);
  std::vector<Triplet> triplets;
  triplets.reserve(n * 5);

  for (std::size_t row = 0; row < n; ++row) {
    const std::size_t p = sys.unknown_pixels[row];
    const int x = static_cast<int>(p % w);
    const int y = static_cast<int>(p / w);
    double diag = 0.0;
    const auto couple = [&](std::size_t q) {
      const double weight = edge_weight(p, q);
      diag += weight;
      if (row_of[q] == kKnown) {
        sys.rhs[row] += weight * values[q];
      } else {
        triplets.push_back({row, row_of[q], -weight});
      }
    };
    if (y > 0) couple(p - w);
    if (x > 0) couple(p - 1);
    if (x + 1 < w) couple(p + 1);
    if (y + 1 < h) couple(p + w);
    triplets.push_back({row, row, diag});
  }
  sys.matrix = assemble_csr(triplets, n, n);
  return sys;
}

// Diffusivity 1/sqrt(|grad u|^2 + eps^2) evaluated on each edge: the normal
// component is the forward difference across the edge, the tangential one
// the mean of the central differences at its two endpoints.
void TvEdgeWeights(const std::vector<double>& u, int w, int h, double eps,
                   std::vector<double>* horizontal, std::vector<double>* vertical) {
  const auto at = [&](int x, int y) { return u[static_cast<std::size_t>(y) * w + x]; };
  const auto central_x = [&](int x, int y) {
    const int lo = std::max(x - 1, 0), hi = std::min(x + 1, w - 1);
    return hi > lo ? (at(hi, y) - at(lo, y)) / (hi - lo) : 0.0;
  };
  const auto central_y = [&](int x, int y) {
    const int lo = std::max(y - 1, 0), hi = std::min(y + 1, h - 1);
    return hi > lo ? (at(x, hi) - at(x, lo)) / (hi - lo) : 0.0;
  };
  const double eps2 = eps * eps;
  horizontal->assign(static_cast<std::size_t>(w - 1) * h, 0.0);
  vertical->assign(static_cast<std::size_t>(w) * (h - 1), 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x + 1 < w; ++x) {
      const double dn = at(x + 1, y) - at(x, y);
      const double dt = 0.5 * (central_y(x, y) + central_y(x + 1, y));
      (*horizontal)[static_cast<std::size_t>(y) * (w - 1) + x] =
          1.0 / std::sqrt(dn * dn + dt * dt + eps2);
    }
  }
  for (int y = 0; y + 1 < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dn = at(x, y + 1) - at(x, y);
      const double dt = 0.5 * (central_x(x, y) + central_x(x, y + 1));
      (*vertical)[static_cast<std::size_t>(y) * w + x] = 1.0 / std::sqrt(dn * dn + dt * dt + eps2);
    }
  }
}

double MeanValueDefect(const std::vector<double>& u, const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  double worst = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      const std::size_t p = mask.index(x, y);
      double sum = 0.0;
      int count = 0;
      if (y > 0) { sum += u[p - w]; ++count; }
      if (x > 0) { sum += u[p - 1]; ++count; }
      if (x + 1 < w) { sum += u[p + 1]; ++count; }
      if (y + 1 < h) { sum += u[p + w]; ++count; }
      if (count > 0) worst = std::max(worst, std::abs(u[p] - sum / count));
    }
  }
  return worst;
}

void RequireConverged(const SolveReport& report, int channel) {
  if (!report.converged) {
    throw Error(ErrorCode::kSolverDiverged,
                "CG did not converge on channel " + std::to_string(channel) +
                    " after " + std::to_string(report.iterations) +
                    " iterations (residual " +
                    std::to_string(report.final_residual_norm) + ")");
  }
}

}  // namespace

void DiffusionMethod::Validate() const {
  if (!(tv_epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tv_epsilon must be > 0");
  }
  if (tv_outer_iters < 1) {
    throw Error(ErrorCode::kInvalidArgument, "tv_outer_iters must be >= 1");
  }
}

DiffusionSystem build_harmonic_system(const RasterImage& channel,
                                      const BinaryMask& mask) {
  CheckInputs(channel, mask);
  return BuildSystem(channel, mask, [](std::size_t, std::size_t) { return 1.0; });
}

DiffusionSystem build_weighted_system(const RasterImage& channel,
                                      const BinaryMask& mask,
                                      const std::vector<double>& horizontal,
                                      const std::vector<double>& vertical) {
  CheckInputs(channel, mask);
  const std::size_t w = static_cast<std::size_t>(channel.width());
  const std::size_t h = static_cast<std::size_t>(channel.height());
  if (horizontal.size() != (w - 1) * h || vertical.size() != w * (h - 1)) {
    throw Error(ErrorCode::kDimensionMismatch, "edge weight arrays have wrong size");
  }
  return BuildSystem(channel, mask, [&](std::size_t p, std::size_t q) {
    const std::size_t lo = std::min(p, q);
    const std::size_t hi = std::max(p, q);
    if (hi == lo + 1) return horizontal[(lo / w) * (w - 1) + lo % w];
    return vertical[lo];
  });
}

InpaintResult inpaint_diffusion(const RasterImage& image, const BinaryMask& mask,
                                const DiffusionMethod& method, double solver_tol) {
  method.Validate();
  if (!(solver_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "solver_tol must be > 0");
  }
  RequireSameSize(image, mask);
  if (mask_stats(mask).count_true == mask.pixel_count()) {
    throw Error(ErrorCode::kAllUnknown, "mask covers entire image");
  }

  const int w = image.width();
  const int h = image.height();
  const int nc = image.channels();
  std::vector<double> out(image.data().begin(), image.data().end());
  InpaintResult result;
  SolverOptions options;
  options.tol = solver_tol;
  options.max_iter = std::max<int>(1000, 10 * static_cast<int>(mask.pixel_count()));

  for (int c = 0; c < nc; ++c) {
    const RasterImage plane = image.channel(c);
    DiffusionSystem sys = build_harmonic_system(plane, mask);
    SolveResult solve = solve_cg(sys.matrix, sys.rhs, options);
    RequireConverged(solve.report, c);
    SolveReport report = solve.report;

    std::vector<double> u(plane.data().begin(), plane.data().end());
    for (std::size_t i = 0; i < sys.unknown_pixels.size(); ++i) {
      u[sys.unknown_pixels[i]] = solve.x[i];
    }

    if (method.kind == DiffusionKind::kTotalVariation && !sys.unknown_pixels.empty()) {
      std::vector<double> horizontal, vertical;
      for (int k = 0; k < method.tv_outer_iters; ++k) {
        TvEdgeWeights(u, w, h, method.tv_epsilon, &horizontal, &vertical);
        DiffusionSystem weighted =
            build_weighted_system(plane, mask, horizontal, vertical);
        std::vector<double> warm(weighted.unknown_pixels.size());
        for (std::size_t i = 0; i < warm.size(); ++i) {
          warm[i] = u[weighted.unknown_pixels[i]];
        }
        SolveResult step = solve_cg(weighted.matrix, weighted.rhs, options,
                                    std::span<const double>(warm));
        RequireConverged(step.report, c);
        report.iterations += step.report.iterations;
        report.final_residual_norm = step.report.final_residual_norm;
        for (std::size_t i = 0; i < step.x.size(); ++i) {
          u[weighted.unknown_pixels[i]] = step.x[i];
        }
      }
    }

    result.residual_mean_value =
        std::max(result.residual_mean_value, MeanValueDefect(u, mask));
    for (std::size_t p : sys.unknown_pixels) {
      out[p * nc + c] = u[p];
    }
    result.solver_reports.push_back(report);
  }
  result.image = RasterImage(w, h, nc, std::move(out));
  return result;
}

}  // namespace lumen
