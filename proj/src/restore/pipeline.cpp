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

#include "lumen/error.hpp"
#include "lumen/restore.hpp"

namespace lumen {

RestorationOutcome RunRestoration(const RestorationParams& params,
                                  const RasterImage& image, const BinaryMask* mask,
                                  const RasterImage* source,
                                  const std::optional<BinaryMask>& region) {
  RestorationOutcome outcome;
  nlohmann::json& report = outcome.report;
  report["method"] = std::string(MethodName(params.method));

  if (params.NeedsMask() && mask == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(MethodName(params.method)) + " requires a mask");
  }
  if (params.NeedsSource() && source == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "osmosis requires a source image");
  }

  switch (params.method) {
    case RestorationMethod::kHarmonic:
    case RestorationMethod::kTv: {
      InpaintResult r = inpaint_diffusion(image, *mask, params.diffusion,
                                          params.diffusion_solver_tol);
      report["solver_reports"] = nlohmann::json::array();
      for (const SolveReport& s : r.solver_reports) {
        report["solver_reports"].push_back(ToJson(s));
      }
      report["residual_mean_value"] = r.residual_mean_value;
      outcome.image = std::move(r.image);
      break;
    }
    case RestorationMethod::kExemplar: {
      ExemplarResult r = inpaint_exemplar(image, *mask, params.exemplar);
      report["iterations"] = r.iterations;
      report["max_data_term"] = r.max_data_term;
      outcome.image = std::move(r.image);
      break;
    }
    case RestorationMethod::kOsmosis: {
      FusionResult r = fuse_multispectral(image, *source, region, params.osmosis);
      report["channels"] = nlohmann::json::array();
      for (const OsmosisRun& run : r.channel_runs) {
        int solver_iterations = 0;
        for (const SolveReport& s : run.reports) solver_iterations += s.iterations;
        report["channels"].push_back(
            {{"steps_taken", run.steps_taken},
             {"reached_steady_state", run.reached_steady_state},
             {"final_update_norm",
              run.update_norms.empty() ? 0.0 : run.update_norms.back()},
             {"solver_iterations", solver_iterations}});
      }
      outcome.image = std::move(r.image);
      break;
    }
  }
  return outcome;
}

}  // namespace lumen
