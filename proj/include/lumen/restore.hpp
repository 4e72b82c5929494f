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

#ifndef LUMEN_RESTORE_HPP_
#define LUMEN_RESTORE_HPP_

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "lumen/exemplar_inpaint.hpp"
#include "lumen/osmosis.hpp"
#include "lumen/pde_inpaint.hpp"
#include "lumen/raster.hpp"

// One parameter vocabulary for the CLI, the job service and its clients.
// Field names match the job JSON: method, tv_epsilon, tv_outer_iters,
// solver_tol, patch_size, search_window, data_term_alpha, region, dt, steps,
// steady_tol, offset, presmooth_steps, presmooth_dt.

namespace lumen {

enum class RestorationMethod { kHarmonic, kTv, kExemplar, kOsmosis };

std::string_view MethodName(RestorationMethod method);
std::optional<RestorationMethod> ParseMethod(std::string_view name);

struct RestorationParams {
  RestorationMethod method = RestorationMethod::kHarmonic;
  DiffusionMethod diffusion;
  double diffusion_solver_tol = 1e-10;
  ExemplarParams exemplar;
  OsmosisParams osmosis;
  /// Osmosis region: "full" or the id/path of a mask.
  std::string region = "full";

  bool NeedsMask() const { return method != RestorationMethod::kOsmosis; }
  bool NeedsSource() const { return method == RestorationMethod::kOsmosis; }
};

/// Reads "method" plus that method's fields from a JSON object; missing
/// fields keep their defaults. Throws InvalidArgument on bad types/values.
RestorationParams ParseRestorationParams(const nlohmann::json& j);

/// Canonical form with every field of the method spelled out.
nlohmann::json ToJson(const RestorationParams& params);

struct RestorationOutcome {
  RasterImage image;
  nlohmann::json report;  // solver diagnostics
};

/// Runs the selected method. `mask` is required for the inpainting methods,
/// `source` for osmosis; `region` (osmosis) of nullopt means the full image.
RestorationOutcome RunRestoration(const RestorationParams& params,
                                  const RasterImage& image, const BinaryMask* mask,
                                  const RasterImage* source,
                                  const std::optional<BinaryMask>& region);

nlohmann::json ToJson(const SolveReport& report);

}  // namespace lumen

#endif  // LUMEN_RESTORE_HPP_
