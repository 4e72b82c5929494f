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


#include "lumen/cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "lumen/damage_detect.hpp"
#include "lumen/error.hpp"
#include "lumen/image_io.hpp"
#include "lumen/restore.hpp"
#include "lumen/service/http_server.hpp"
#include "lumen/service/restore_service.hpp"
#include "lumen/simd/kernels.hpp"

namespace lumen {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitProcessing = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string input;
  std::string output;
  std::string json_report;
  bool force = false;
  int verbose = 0;
};

void AddCommon(CLI::App* cmd, CommonFlags* f) {
  cmd->add_option("--input", f->input, "Input image (PNG, PGM or PPM)")->required();
  cmd->add_option("--output", f->output, "Output file")->required();
  cmd->add_option("--json-report", f->json_report, "Write a JSON run summary to this path");
  cmd->add_flag("--force", f->force, "Allow the output to overwrite an input file");
  cmd->add_flag("-v,--verbose", f->verbose, "Print progress to standard error");
}

const char* ParamHelp(const std::string& name) {
  static const std::pair<const char*, const char*> kHelp[] = {
      {"tv_epsilon", "TV regularization epsilon (default 1e-3)"},
      {"tv_outer_iters", "TV lagged-diffusivity iterations (default 30)"},
      {"solver_tol", "Relative residual tolerance of the linear solver"},
      {"patch_size", "Exemplar patch size, odd (default 9)"},
      {"search_window", "Exemplar search radius or \"full\" (default full)"},
      {"data_term_alpha", "Exemplar data-term normalizer (default 1)"},
      {"dt", "Osmosis time step (default 1000)"},
      {"steps", "Maximum osmosis steps (default 500)"},
      {"steady_tol", "Relative update norm that stops the evolution (default 1e-8)"},
      {"offset", "Positive offset added before the drift (default 1/255)"},
      {"presmooth_steps", "Diffusion steps applied to the source first (default 0)"},
      {"presmooth_dt", "Time step of source presmoothing (default 0.25)"},
  };
  for (const auto& [key, help] : kHelp) {
    if (name == key) return help;
  }
  return "";
}

// A method parameter flag named exactly like its job-JSON field.
struct ParamFlag {
  std::string name;
  std::string text;
  CLI::Option* option = nullptr;
};

std::vector<ParamFlag> AddParamFlags(CLI::App* cmd, const std::vector<std::string>& names) {
  std::vector<ParamFlag> flags;
  flags.reserve(names.size());
  for (const std::string& n : names) flags.push_back({n, "", nullptr});
  for (ParamFlag& f : flags) {
    f.option = cmd->add_option("--" + f.name, f.text, ParamHelp(f.name));
  }
  return flags;
}

json FlagValue(const ParamFlag& flag) {
  if (flag.name == "region" || (flag.name == "search_window" && flag.text == "full")) {
    return flag.text;
  }
  json v = json::parse(flag.text, nullptr, /*allow_exceptions=*/false);
  if (v.is_discarded() || !v.is_number()) {
    throw UsageError("--" + flag.name + " expects a number, got '" + flag.text + "'");
  }
  return v;
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read parameter file " + path);
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) throw UsageError(path + " is not a JSON object");
  // A previous run's report carries its parameters under "parameters".
  if (j.contains("parameters") && j["parameters"].is_object()) return j["parameters"];
  return j;
}

RestorationParams BuildParams(const std::string& params_file, const std::string& method,
                              const std::vector<ParamFlag>& flags) {
  json j = params_file.empty() ? json::object() : ReadJsonFile(params_file);
  if (!method.empty()) j["method"] = method;
  for (const ParamFlag& f : flags) {
    if (f.option->count() > 0) j[f.name] = FlagValue(f);
  }
  try {
    return ParseRestorationParams(j);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

bool SameFile(const fs::path& a, const fs::path& b) {
  std::error_code ec;
  if (fs::exists(a, ec) && fs::exists(b, ec)) return fs::equivalent(a, b, ec);
  return fs::weakly_canonical(a, ec) == fs::weakly_canonical(b, ec);
}

void GuardOutput(const CommonFlags& f, const std::vector<std::string>& inputs) {
  if (f.force) return;
  for (const std::string& in : inputs) {
    if (!in.empty() && SameFile(f.output, in)) {
      throw UsageError("refusing to overwrite input " + in + " (pass --force)");
    }
  }
}

PixelCoord ParseSeed(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("no comma");
    std::size_t used_x = 0, used_y = 0;
    const std::string xs = text.substr(0, comma), ys = text.substr(comma + 1);
    const int x = std::stoi(xs, &used_x);
    const int y = std::stoi(ys, &used_y);
    if (used_x != xs.size() || used_y != ys.size()) throw std::invalid_argument("trailing");
    return {x, y};
  } catch (const std::logic_error&) {
    throw UsageError("--seed expects X,Y, got '" + text + "'");
  }
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

void WriteReport(const std::string& path, const json& report) {
  if (path.empty()) return;
  const std::string text = report.dump(2) + "\n";
  WriteFileBytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

json SolverSummary(const RestorationOutcome& outcome) { return outcome.report; }

std::atomic<bool> g_stop_requested{false};

extern "C" void HandleStopSignal(int) { g_stop_requested = true; }

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Lumen: digital restoration of damaged artwork images"};
  app.name("lumen");
  app.require_subcommand(1);

  // detect
  CommonFlags detect_flags;
  std::vector<std::string> seed_texts;
  double tolerance = 0.1;
  std::string damage_class = "lacuna";
  int dilate_radius = 0;
  bool fill_holes = false;
  CLI::App* detect = app.add_subcommand("detect", "Grow a damage mask from seed pixels");
  AddCommon(detect, &detect_flags);
  detect->add_option("--seed", seed_texts, "Seed pixel X,Y (repeatable)");
  detect->add_option("--tolerance", tolerance, "Colour distance tolerance in [0,1] units")
      ->check(CLI::NonNegativeNumber);
  detect->add_option("--damage_class", damage_class,
                     "lacuna, degradation, abrasion or overpaint");
  detect->add_option("--dilate_radius", dilate_radius, "Square dilation radius")
      ->check(CLI::NonNegativeNumber);
  detect->add_flag("--close_holes", fill_holes, "Fill enclosed holes in the mask");

  // inpaint
  CommonFlags inpaint_flags;
  std::string inpaint_method, mask_path, inpaint_params;
  CLI::App* inpaint = app.add_subcommand("inpaint", "Fill a masked region");
  AddCommon(inpaint, &inpaint_flags);
  inpaint->add_option("--mask", mask_path, "Mask PNG, white marks pixels to fill")->required();
  inpaint->add_option("--method", inpaint_method, "harmonic, tv or exemplar");
  inpaint->add_option("--params", inpaint_params, "JSON parameters or a previous --json-report");
  const auto inpaint_param_flags =
      AddParamFlags(inpaint, {"tv_epsilon", "tv_outer_iters", "solver_tol", "patch_size",
                              "search_window", "data_term_alpha"});

  // osmosis
  CommonFlags osmosis_flags;
  std::string source_path, region_path, osmosis_params;
  CLI::App* osmosis = app.add_subcommand("osmosis", "Fuse structure from a second band");
  AddCommon(osmosis, &osmosis_flags);
  osmosis->add_option("--source", source_path, "Guidance image, e.g. an infra-red band")
      ->required();
  osmosis->add_option("--mask,--region_mask", region_path,
                      "Region mask PNG; the whole image when omitted");
  osmosis->add_option("--params", osmosis_params, "JSON parameters or a previous --json-report");
  const auto osmosis_param_flags =
      AddParamFlags(osmosis, {"dt", "steps", "steady_tol", "offset", "solver_tol",
                              "presmooth_steps", "presmooth_dt"});

  // serve
  int port = 8080, workers = 2, serve_verbose = 0;
  std::string data_dir = "./lumen-data", host = "0.0.0.0", ui_dir;
  std::size_t max_upload_mb = 64;
  CLI::App* serve = app.add_subcommand("serve", "Run the HTTP restoration service");
  serve->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--data-dir", data_dir, "Directory for images, masks and jobs");
  serve->add_option("--workers", workers, "Concurrent restoration jobs")
      ->check(CLI::PositiveNumber);
  serve->add_option("--ui-dir", ui_dir, "Static browser client to serve at /");
  serve->add_option("--max-upload-mb", max_upload_mb, "Upload size limit")
      ->check(CLI::PositiveNumber);
  serve->add_flag("-v,--verbose", serve_verbose, "Log requests");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    if (detect->parsed()) {
      const auto cls = ParseDamageClass(damage_class);
      if (!cls) throw UsageError("unknown --damage_class '" + damage_class + "'");
      SeedSet seeds{{}, tolerance, *cls};
      for (const std::string& s : seed_texts) seeds.seeds.push_back(ParseSeed(s));
      GuardOutput(detect_flags, {detect_flags.input});

      const RasterImage image = load_image(detect_flags.input);
      BinaryMask mask = grow_region(image, seeds);
      if (dilate_radius > 0) mask = dilate_mask(mask, dilate_radius);
      if (fill_holes) mask = close_holes(mask);
      save_mask(mask, detect_flags.output);

      const MaskStats stats = mask_stats(mask);
      if (detect_flags.verbose > 0) {
        std::cerr << "detect: " << stats.count_true << " pixels (" << stats.fraction * 100.0
                  << "%) marked as " << damage_class << "\n";
      }
      json seeds_json = json::array();
      for (const PixelCoord& p : seeds.seeds) seeds_json.push_back({{"x", p.x}, {"y", p.y}});
      WriteReport(detect_flags.json_report,
                  {{"command", "detect"},
                   {"input", detect_flags.input},
                   {"output", detect_flags.output},
                   {"parameters",
                    {{"seeds", seeds_json},
                     {"tolerance", tolerance},
                     {"damage_class", damage_class},
                     {"dilate_radius", dilate_radius},
                     {"close_holes", fill_holes}}},
                   {"count_true", stats.count_true},
                   {"fraction", stats.fraction},
                   {"wall_time_seconds", Seconds(start)}});
      return kExitOk;
    }

    if (inpaint->parsed() || osmosis->parsed()) {
      const bool is_osmosis = osmosis->parsed();
      const CommonFlags& flags = is_osmosis ? osmosis_flags : inpaint_flags;
      RestorationParams params =
          is_osmosis ? BuildParams(osmosis_params, "osmosis", osmosis_param_flags)
                     : BuildParams(inpaint_params, inpaint_method, inpaint_param_flags);
      if (!is_osmosis && params.method == RestorationMethod::kOsmosis) {
        throw UsageError("use the osmosis command for osmosis runs");
      }
      if (is_osmosis) params.region = region_path.empty() ? "full" : region_path;
      GuardOutput(flags, {flags.input, mask_path, source_path, region_path});

      const RasterImage image = load_image(flags.input);
      std::optional<BinaryMask> mask, region;
      std::optional<RasterImage> source;
      if (!is_osmosis) mask = load_mask(mask_path);
      if (is_osmosis) source = load_image(source_path);
      if (is_osmosis && !region_path.empty()) region = load_mask(region_path);

      if (flags.verbose > 0) {
        std::cerr << MethodName(params.method) << ": " << image.width() << "x"
                  << image.height() << "x" << image.channels() << ", kernels "
                  << simd::BackendName(simd::Active().backend) << "\n";
      }
      const RestorationOutcome outcome =
          RunRestoration(params, image, mask ? &*mask : nullptr, source ? &*source : nullptr,
                         region);
      save_image(outcome.image, flags.output);
      if (flags.verbose > 0) {
        std::cerr << "done in " << Seconds(start) << " s, wrote " << flags.output << "\n";
      }

      json inputs = {{"input", flags.input}};
      if (mask) inputs["mask"] = mask_path;
      if (source) inputs["source"] = source_path;
      if (region) inputs["region"] = region_path;
      WriteReport(flags.json_report, {{"command", is_osmosis ? "osmosis" : "inpaint"},
                                      {"method", std::string(MethodName(params.method))},
                                      {"inputs", inputs},
                                      {"output", flags.output},
                                      {"parameters", ToJson(params)},
                                      {"solver", SolverSummary(outcome)},
                                      {"wall_time_seconds", Seconds(start)}});
      return kExitOk;
    }

    if (serve->parsed()) {
      service::ServiceConfig config;
      config.data_dir = data_dir;
      config.workers = workers;
      config.max_upload_bytes = max_upload_mb << 20;
      service::RestoreService svc(config);
      service::HttpServer server(
          svc, ui_dir.empty() ? std::nullopt : std::optional<fs::path>(ui_dir));

      g_stop_requested = false;
      std::signal(SIGINT, HandleStopSignal);
      std::signal(SIGTERM, HandleStopSignal);
      std::atomic<bool> done{false};
      std::thread watcher([&] {
        while (!done && !g_stop_requested) {
          std::this_thread::sleep_for(std::chrono::milliseconds(100));
        }
        server.Stop();
      });
      std::cerr << "lumen: serving " << fs::absolute(config.data_dir) << " on http://" << host
                << ":" << port << "\n";
      const bool ok = server.Listen(host, port);
      done = true;
      watcher.join();
      if (!ok && !g_stop_requested) {
        std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
        return kExitProcessing;
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitProcessing;
  }
  return kExitUsage;
}

}  // namespace lumen
