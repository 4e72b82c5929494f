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

#ifndef LUMEN_OSMOSIS_HPP_
#define LUMEN_OSMOSIS_HPP_

#include <optional>
#include <span>
#include <vector>

#include "lumen/raster.hpp"
#include "lumen/sparse.hpp"

namespace lumen {

/// Drift on the faces of the pixel grid.
///
/// `d1[y * (width - 1) + x]` sits on the face between (x, y) and (x+1, y);
/// `d2[y * width + x]` on the face between (x, y) and (x, y+1). Both are
/// oriented towards increasing coordinates.
struct DriftField {
  int width = 0;
  int height = 0;
  std::vector<double> d1;
  std::vector<double> d2;

  static DriftField Zero(int width, int height);
  bool Consistent() const;
};

struct OsmosisParams {
  double dt = 1000.0;
  int steps = 500;
  double steady_tol = 1e-8;
  double offset = 1.0 / 255.0;
  double solver_tol = 1e-12;
  /// Zero-drift diffusion steps applied to the guidance before its drift is
  /// taken, to suppress source noise. 0 disables it.
  int presmooth_steps = 0;
  double presmooth_dt = 0.25;

  void Validate() const;
};

/// Face drift 2 (v_q - v_p) / (v_q + v_p) with v = guidance + offset, the
/// face discretization of grad ln v.
DriftField compute_drift(const RasterImage& guidance, double offset);
DriftField compute_drift(std::span<const double> guidance, int width, int height,
                         double offset);

/// Operator A with du/dt = A u. Each interior face between p and q with
/// drift delta (p -> q) carries the flux (u_q - u_p) - delta (u_q + u_p) / 2
/// into p and out of q; walls carry none. Columns of A sum to zero.
CsrMatrix assemble_osmosis_operator(const DriftField& drift, int width, int height);

struct OsmosisRun {
  std::vector<double> values;  // unclamped final state
  int steps_taken = 0;
  bool reached_steady_state = false;
  std::vector<double> update_norms;  // ||u^{k+1} - u^k|| / ||u^k|| per step
  std::vector<double> means;         // mean of u^k, starting with u^0
  std::vector<SolveReport> reports;
};

/// Implicit Euler (I - dt A) u^{k+1} = u^k solved by BiCGStab warm-started
/// from u^k, until `steps` are exhausted or the relative update drops to
/// steady_tol. Throws SolverDiverged if a step fails to converge.
OsmosisRun evolve_osmosis(std::span<const double> u0, const CsrMatrix& op,
                          const OsmosisParams& params);

/// RasterImage wrapper of evolve_osmosis; the result is clamped to [0,1].
RasterImage osmosis_evolve(const RasterImage& u0, const DriftField& drift,
                           const OsmosisParams& params);

struct FusionResult {
  RasterImage image;
  std::vector<OsmosisRun> channel_runs;
};

/// Transfers structure from `source` into `visible` inside `region`
/// (nullopt = whole image).
///
/// Each visible channel v evolves from v + offset under a drift that comes
/// from the (grayscale, optionally presmoothed) source on faces with an
/// endpoint inside the region and from v itself elsewhere; the offset is
/// removed again on write-back. Outside the region the channel is its own
/// steady state, so changes concentrate inside it.
FusionResult fuse_multispectral(const RasterImage& visible, const RasterImage& source,
                                const std::optional<BinaryMask>& region,
                                const OsmosisParams& params);

}  // namespace lumen

#endif  // LUMEN_OSMOSIS_HPP_
