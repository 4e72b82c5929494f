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

#include <string>

#include "lumen/error.hpp"
#include "lumen/restore.hpp"

namespace lumen {

namespace {

using nlohmann::json;

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

double GetNumber(const json& j, const char* key, double fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  if (!j[key].is_number()) Invalid(std::string(key) + " must be a number");
  return j[key].get<double>();
}

int GetInt(const json& j, const char* key, int fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  const json& v = j[key];
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == static_cast<double>(static_cast<int>(d))) return static_cast<int>(d);
  }
  Invalid(std::string(key) + " must be an integer");
}

}  // namespace

std::string_view MethodName(RestorationMethod method) {
  switch (method) {
    case RestorationMethod::kHarmonic: return "harmonic";
    case RestorationMethod::kTv: return "tv";
    case RestorationMethod::kExemplar: return "exemplar";
    case RestorationMethod::kOsmosis: return "osmosis";
  }
  return "unknown";
}

std::optional<RestorationMethod> ParseMethod(std::string_view name) {
  for (auto m : {RestorationMethod::kHarmonic, RestorationMethod::kTv,
                 RestorationMethod::kExemplar, RestorationMethod::kOsmosis}) {
    if (MethodName(m) == name) return m;
  }
  return std::nullopt;
}

RestorationParams ParseRestorationParams(const json& j) {
  if (!j.is_object()) Invalid("parameters must be a JSON object");
  if (!j.contains("method") || !j["method"].is_string()) {
    Invalid("method must be one of harmonic, tv, exemplar, osmosis");
  }
  const auto method = ParseMethod(j["method"].get<std::string>());
  if (!method) {
    Invalid("unknown method '" + j["method"].get<std::string>() + "'");
  }
  RestorationParams p;
  p.method = *method;
  switch (p.method) {
    case RestorationMethod::kHarmonic:
    case RestorationMethod::kTv:
      p.diffusion.kind = p.method == RestorationMethod::kTv
                             ? DiffusionKind::kTotalVariation
                             : DiffusionKind::kHarmonic;
      p.diffusion.tv_epsilon = GetNumber(j, "tv_epsilon", p.diffusion.tv_epsilon);
      p.diffusion.tv_outer_iters = GetInt(j, "tv_outer_iters", p.diffusion.tv_outer_iters);
      p.diffusion_solver_tol = GetNumber(j, "solver_tol", p.diffusion_solver_tol);
      p.diffusion.Validate();
      if (!(p.diffusion_solver_tol > 0.0)) Invalid("solver_tol must be > 0");
      break;
    case RestorationMethod::kExemplar:
      p.exemplar.patch_size = GetInt(j, "patch_size", p.exemplar.patch_size);
      p.exemplar.data_term_alpha =
          GetNumber(j, "data_term_alpha", p.exemplar.data_term_alpha);
      if (j.contains("search_window") && !j["search_window"].is_null()) {
        const json& sw = j["search_window"];
        if (sw.is_string()) {
          if (sw.get<std::string>() != "full") {
            Invalid("search_window must be \"full\" or a radius");
          }
        } else {
          p.exemplar.search_window = GetInt(j, "search_window", 0);
        }
      }
      p.exemplar.Validate();
      break;
    case RestorationMethod::kOsmosis:
      p.osmosis.dt = GetNumber(j, "dt", p.osmosis.dt);
      p.osmosis.steps = GetInt(j, "steps", p.osmosis.steps);
      p.osmosis.steady_tol = GetNumber(j, "steady_tol", p.osmosis.steady_tol);
      p.osmosis.offset = GetNumber(j, "offset", p.osmosis.offset);
      p.osmosis.solver_tol = GetNumber(j, "solver_tol", p.osmosis.solver_tol);
      p.osmosis.presmooth_steps = GetInt(j, "presmooth_steps", p.osmosis.presmooth_steps);
      p.osmosis.presmooth_dt = GetNumber(j, "presmooth_dt", p.osmosis.presmooth_dt);
      if (j.contains("region") && !j["region"].is_null()) {
        if (!j["region"].is_string() || j["region"].get<std::string>().empty()) {
          Invalid("region must be \"full\" or a mask id");
        }
        p.region = j["region"].get<std::string>();
      }
      p.osmosis.Validate();
      break;
  }
  return p;
}

json ToJson(const RestorationParams& p) {
  json j;
  j["method"] = std::string(MethodName(p.method));
  switch (p.method) {
    case RestorationMethod::kHarmonic:
      j["solver_tol"] = p.diffusion_solver_tol;
      break;
    case RestorationMethod::kTv:
      j["tv_epsilon"] = p.diffusion.tv_epsilon;
      j["tv_outer_iters"] = p.diffusion.tv_outer_iters;
      j["solver_tol"] = p.diffusion_solver_tol;
      break;
    case RestorationMethod::kExemplar:
      j["patch_size"] = p.exemplar.patch_size;
      if (p.exemplar.search_window) {
        j["search_window"] = *p.exemplar.search_window;
      } else {
        j["search_window"] = "full";
      }
      j["data_term_alpha"] = p.exemplar.data_term_alpha;
      break;
    case RestorationMethod::kOsmosis:
      j["region"] = p.region;
      j["dt"] = p.osmosis.dt;
      j["steps"] = p.osmosis.steps;
      j["steady_tol"] = p.osmosis.steady_tol;
      j["offset"] = p.osmosis.offset;
      j["solver_tol"] = p.osmosis.solver_tol;
      j["presmooth_steps"] = p.osmosis.presmooth_steps;
      j["presmooth_dt"] = p.osmosis.presmooth_dt;
      break;
  }
  return j;
}

json ToJson(const SolveReport& report) {
  return {{"iterations", report.iterations},
          {"final_residual_norm", report.final_residual_norm},
          {"converged", report.converged}};
}

}  // namespace lumen
