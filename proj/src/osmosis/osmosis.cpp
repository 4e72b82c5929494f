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

#include "lumen/osmosis.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "lumen/error.hpp"

namespace lumen {

namespace {

double Mean(std::span<const double> u) {
  return std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(u.size());
}

// I - dt * A, with A's entries scaled in place.
CsrMatrix ImplicitSystem(const CsrMatrix& op, double dt) {
  std::vector<Triplet> triplets;
  triplets.reserve(op.nnz() + op.rows());
  const auto offsets = op.row_offsets();
  const auto cols = op.col_indices();
  const auto vals = op.values();
  for (std::size_t r = 0; r < op.rows(); ++r) {
    triplets.push_back({r, r, 1.0});
    for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) {
      triplets.push_back({r, static_cast<std::size_t>(cols[k]), -dt * vals[k]});
    }
  }
  return assemble_csr(triplets, op.rows(), op.cols());
}

std::vector<double> Presmooth(const RasterImage& guidance, const OsmosisParams& params) {
  std::vector<double> g(guidance.data().begin(), guidance.data().end());
  if (params.presmooth_steps == 0) return g;
  const CsrMatrix heat = assemble_osmosis_operator(
      DriftField::Zero(guidance.width(), guidance.height()), guidance.width(),
      guidance.height());
  OsmosisParams smoothing = params;
  smoothing.dt = params.presmooth_dt;
  smoothing.steps = params.presmooth_steps;
  smoothing.steady_tol = 0.0;
  return evolve_osmosis(g, heat, smoothing).values;
}

}  // namespace

DriftField DriftField::Zero(int width, int height) {
  DriftField d;
  d.width = width;
  d.height = height;
  d.d1.assign(static_cast<std::size_t>(width - 1) * height, 0.0);
  d.d2.assign(static_cast<std::size_t>(width) * (height - 1), 0.0);
  return d;
}

bool DriftField::Consistent() const {
  return width >= 1 && height >= 1 &&
         d1.size() == static_cast<std::size_t>(width - 1) * height &&
         d2.size() == static_cast<std::size_t>(width) * (height - 1);
}

void OsmosisParams::Validate() const {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dt must be > 0");
  if (steps < 1) throw Error(ErrorCode::kInvalidArgument, "steps must be >= 1");
  if (!(steady_tol >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "steady_tol must be >= 0");
  }
  if (!(offset > 0.0)) throw Error(ErrorCode::kInvalidArgument, "offset must be > 0");
  if (!(solver_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "solver_tol must be > 0");
  }
  if (presmooth_steps < 0 || !(presmooth_dt > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "presmooth_steps must be >= 0 and presmooth_dt > 0");
  }
}

DriftField compute_drift(std::span<const double> guidance, int width, int height,
                         double offset) {
  if (width < 1 || height < 1 ||
      guidance.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kDimensionMismatch, "guidance size mismatch");
  }
  if (!(offset > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "drift offset must be > 0");
  }
  DriftField d = DriftField::Zero(width, height);
  const auto face = [&](std::size_t p, std::size_t q) {
    const double vp = guidance[p] + offset;
    const double vq = guidance[q] + offset;
    return 2.0 * (vq - vp) / (vq + vp);
  };
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x + 1 < width; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * width + x;
      d.d1[static_cast<std::size_t>(y) * (width - 1) + x] = face(p, p + 1);
    }
  }
  for (int y = 0; y + 1 < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * width + x;
      d.d2[p] = face(p, p + width);
    }
  }
  return d;
}

DriftField compute_drift(const RasterImage& guidance, double offset) {
  if (guidance.channels() != 1) {
    throw Error(ErrorCode::kInvalidArgument, "drift guidance must be single-channel");
  }
  return compute_drift(guidance.data(), guidance.width(), guidance.height(), offset);
}

CsrMatrix assemble_osmosis_operator(const DriftField& drift, int width, int height) {
  if (drift.width != width || drift.height != height || !drift.Consistent()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "drift field does not match a " + std::to_string(width) + "x" +
                    std::to_string(height) + " grid");
  }
  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::vector<Triplet> triplets;
  triplets.reserve(8 * n);
  const auto add_face = [&](std::size_t p, std::size_t q, double delta) {
    // du_p += (u_q - u_p) - delta (u_q + u_p) / 2; du_q -= the same.
    const double a = 1.0 + 0.5 * delta;
    const double b = 1.0 - 0.5 * delta;
    triplets.push_back({p, p, -a});
    triplets.push_back({p, q, b});
    triplets.push_back({q, p, a});
    triplets.push_back({q, q, -b});
  };
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x + 1 < width; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * width + x;
      add_face(p, p + 1, drift.d1[static_cast<std::size_t>(y) * (width - 1) + x]);
    }
  }
  for (int y = 0; y + 1 < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * width + x;
      add_face(p, p + width, drift.d2[p]);
    }
  }
  return assemble_csr(triplets, n, n);
}

OsmosisRun evolve_osmosis(std::span<const double> u0, const CsrMatrix& op,
                          const OsmosisParams& params) {
  params.Validate();
  if (op.rows() != u0.size() || op.cols() != u0.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "osmosis state and operator differ in size");
  }
  const CsrMatrix system = ImplicitSystem(op, params.dt);
  SolverOptions options;
  options.tol = params.solver_tol;
  options.max_iter = std::max<int>(1000, 4 * static_cast<int>(u0.size()));
  options.jacobi = true;

  OsmosisRun run;
  run.values.assign(u0.begin(), u0.end());
  run.means.push_back(Mean(run.values));
  for (int k = 0; k < params.steps; ++k) {
    SolveResult step = solve_bicgstab(system, run.values, options,
                                      std::span<const double>(run.values));
    run.reports.push_back(step.report);
    if (!step.report.converged) {
      throw Error(ErrorCode::kSolverDiverged,
                  "osmosis step " + std::to_string(k) +
                      ": BiCGStab stopped at residual " +
                      std::to_string(step.report.final_residual_norm));
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < step.x.size(); ++i) {
      const double d = step.x[i] - run.values[i];
      diff += d * d;
    }
    const double scale = Norm2(run.values);
    const double update = scale > 0.0 ? std::sqrt(diff) / scale : std::sqrt(diff);
    run.values = std::move(step.x);
    run.update_norms.push_back(update);
    run.means.push_back(Mean(run.values));
    ++run.steps_taken;
    if (update <= params.steady_tol) {
      run.reached_steady_state = true;
      break;
    }
  }
  return run;
}

RasterImage osmosis_evolve(const RasterImage& u0, const DriftField& drift,
                           const OsmosisParams& params) {
  if (u0.channels() != 1) {
    throw Error(ErrorCode::kInvalidArgument, "osmosis evolves a single channel");
  }
  const CsrMatrix op = assemble_osmosis_operator(drift, u0.width(), u0.height());
  OsmosisRun run = evolve_osmosis(u0.data(), op, params);
  return RasterImage(u0.width(), u0.height(), 1, std::move(run.values));
}

FusionResult fuse_multispectral(const RasterImage& visible, const RasterImage& source,
                                const std::optional<BinaryMask>& region,
                                const OsmosisParams& params) {
  params.Validate();
  if (visible.width() != source.width() || visible.height() != source.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "visible and source images must have equal dimensions");
  }
  if (region.has_value()) RequireSameSize(visible, *region);

  const int w = visible.width();
  const int h = visible.height();
  const RasterImage guidance = to_grayscale(source);
  const std::vector<double> smoothed = Presmooth(guidance, params);
  const DriftField source_drift = compute_drift(smoothed, w, h, params.offset);
  const auto inside = [&](std::size_t p) {
    return !region.has_value() || region->at(p);
  };

  FusionResult result;
  std::vector<RasterImage> planes;
  for (int c = 0; c < visible.channels(); ++c) {
    const RasterImage plane = visible.channel(c);
    DriftField drift = compute_drift(plane, params.offset);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x + 1 < w; ++x) {
        const std::size_t p = static_cast<std::size_t>(y) * w + x;
        const std::size_t f = static_cast<std::size_t>(y) * (w - 1) + x;
        if (inside(p) || inside(p + 1)) drift.d1[f] = source_drift.d1[f];
      }
    }
    for (int y = 0; y + 1 < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t p = static_cast<std::size_t>(y) * w + x;
        if (inside(p) || inside(p + w)) drift.d2[p] = source_drift.d2[p];
      }
    }
    std::vector<double> u0(plane.data().begin(), plane.data().end());
    for (double& v : u0) v += params.offset;
    OsmosisRun run = evolve_osmosis(u0, assemble_osmosis_operator(drift, w, h), params);
    std::vector<double> out(run.values);
    for (double& v : out) v -= params.offset;
    planes.emplace_back(w, h, 1, std::move(out));
    result.channel_runs.push_back(std::move(run));
  }
  result.image = RasterImage::FromChannels(planes);
  return result;
}

}  // namespace lumen
