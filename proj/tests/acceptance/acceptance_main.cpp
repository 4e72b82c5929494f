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


// Acceptance gate. Every check prints one PASS/FAIL line; the process exits
// nonzero if any check fails. Reference values come from the brute-force and
// dense-solve oracles in tests/support, never from the library under test.

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "lumen/damage_detect.hpp"
#include "lumen/exemplar_inpaint.hpp"
#include "lumen/image_io.hpp"
#include "lumen/osmosis.hpp"
#include "lumen/pde_inpaint.hpp"
#include "lumen/service/http_server.hpp"
#include "lumen/service/restore_service.hpp"
#include "lumen/simd/kernels.hpp"
#include "lumen/sparse.hpp"
#include "support/oracles.hpp"

namespace lumen::acceptance {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

double Mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

const int kDx[4] = {-1, 1, 0, 0};
const int kDy[4] = {0, 0, -1, 1};

// Shared suite for the mean-value and maximum-principle checks.
struct HarmonicCase {
  RasterImage image;
  BinaryMask mask;
  RasterImage result;
};

std::vector<HarmonicCase> HarmonicSuite(double* seconds) {
  std::mt19937_64 rng(1001);
  std::vector<HarmonicCase> cases;
  const auto start = Clock::now();
  for (int i = 0; i < 20; ++i) {
    HarmonicCase c;
    c.image = testing::RandomImage(rng, 64, 64, 3);
    c.mask = testing::RandomMask(rng, 64, 64, 0.2);
    c.result = inpaint_diffusion(c.image, c.mask, {DiffusionKind::kHarmonic}).image;
    cases.push_back(std::move(c));
  }
  *seconds = Seconds(start);
  return cases;
}

Outcome MeanValueProperty(const std::vector<HarmonicCase>& suite, double solve_seconds) {
  const auto start = Clock::now();
  double worst = 0.0;
  for (const HarmonicCase& c : suite) {
    const int w = c.image.width(), h = c.image.height();
    for (int ch = 0; ch < c.image.channels(); ++ch) {
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (!c.mask.at(x, y)) continue;
          double sum = 0.0;
          int n = 0;
          for (int k = 0; k < 4; ++k) {
            const int nx = x + kDx[k], ny = y + kDy[k];
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            sum += c.result.at(nx, ny, ch);
            ++n;
          }
          worst = std::max(worst, std::abs(c.result.at(x, y, ch) - sum / n));
        }
      }
    }
  }
  const double total = solve_seconds + Seconds(start);
  return {worst <= 1e-8 && total < 5.0,
          Fmt("max |u - neighbour mean| = %.3g (limit 1e-8), %.2f s (limit 5 s)", worst, total)};
}

Outcome MaximumPrinciple(const std::vector<HarmonicCase>& suite) {
  double worst = 0.0;  // largest excursion outside [min, max]
  for (const HarmonicCase& c : suite) {
    const int w = c.image.width(), h = c.image.height();
    for (int ch = 0; ch < c.image.channels(); ++ch) {
      // Dirichlet data: known pixels touching the hole.
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (c.mask.at(x, y)) continue;
          bool touches = false;
          for (int k = 0; k < 4; ++k) {
            const PixelCoord q{x + kDx[k], y + kDy[k]};
            touches |= c.mask.contains(q) && c.mask.at(q.x, q.y);
          }
          if (!touches) continue;
          lo = std::min(lo, c.image.at(x, y, ch));
          hi = std::max(hi, c.image.at(x, y, ch));
        }
      }
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (!c.mask.at(x, y)) continue;
          const double v = c.result.at(x, y, ch);
          worst = std::max({worst, lo - v, v - hi});
        }
      }
    }
  }
  return {worst <= 1e-12, Fmt("largest excursion beyond boundary range = %.3g (limit 1e-12)",
                              std::max(worst, 0.0))};
}

// Dense Laplace system over the unknowns of a single-channel image.
std::vector<double> DenseHarmonic(const RasterImage& img, const BinaryMask& mask) {
  const int w = img.width(), h = img.height();
  std::vector<int> row(mask.pixel_count(), -1);
  int n = 0;
  for (std::size_t i = 0; i < mask.pixel_count(); ++i) {
    if (mask.at(i)) row[i] = n++;
  }
  testing::DenseMatrix a(n, std::vector<double>(n, 0.0));
  std::vector<double> b(n, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int r = row[mask.index(x, y)];
      if (r < 0) continue;
      for (int k = 0; k < 4; ++k) {
        const int nx = x + kDx[k], ny = y + kDy[k];
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        a[r][r] += 1.0;
        const int col = row[mask.index(nx, ny)];
        if (col >= 0) {
          a[r][col] -= 1.0;
        } else {
          b[r] += img.at(nx, ny);
        }
      }
    }
  }
  return testing::DenseSolve(std::move(a), std::move(b));
}

Outcome RampRecovery() {
  const int w = 48, h = 40;
  RasterImage ramp(w, h, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) ramp.set(x, y, 0, static_cast<double>(x) / (w - 1));
  }
  BinaryMask mask(w, h, false);
  RasterImage damaged = ramp;
  for (int y = 12; y < 28; ++y) {
    for (int x = 16; x < 32; ++x) {
      mask.set(x, y, true);
      damaged.set(x, y, 0, 0.0);
    }
  }
  const RasterImage out = inpaint_diffusion(damaged, mask, {DiffusionKind::kHarmonic}).image;
  const auto dense = DenseHarmonic(damaged, mask);
  double err_truth = 0.0, err_dense = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < mask.pixel_count(); ++i) {
    if (!mask.at(i)) continue;
    err_truth = std::max(err_truth, std::abs(out.data()[i] - ramp.data()[i]));
    err_dense = std::max(err_dense, std::abs(out.data()[i] - dense[k++]));
  }
  return {err_truth <= 1e-6 && err_dense <= 1e-9,
          Fmt("|u - ramp|_inf = %.3g (limit 1e-6), |u - dense|_inf = %.3g (limit 1e-9)",
              err_truth, err_dense)};
}

Outcome TvHarmonicLimit() {
  std::mt19937_64 rng(1004);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const RasterImage img = testing::RandomImage(rng, 16, 16, 1);
    const BinaryMask mask = testing::RandomMask(rng, 16, 16, 0.3);
    const RasterImage tv =
        inpaint_diffusion(img, mask, {DiffusionKind::kTotalVariation, 1e3, 30}).image;
    const RasterImage harmonic = inpaint_diffusion(img, mask, {DiffusionKind::kHarmonic}).image;
    for (std::size_t p = 0; p < tv.data().size(); ++p) {
      worst = std::max(worst, std::abs(tv.data()[p] - harmonic.data()[p]));
    }
  }
  return {worst <= 1e-4, Fmt("max |TV(eps=1e3) - harmonic| = %.3g (limit 1e-4)", worst)};
}

Outcome ExemplarPeriodicity() {
  const auto start = Clock::now();
  RasterImage truth(64, 64, 1);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) truth.set(x, y, 0, x % 4 < 2 ? 0.25 : 0.75);
  }
  RasterImage damaged = truth;
  BinaryMask mask(64, 64, false);
  for (int y = 28; y < 36; ++y) {
    for (int x = 28; x < 36; ++x) {
      mask.set(x, y, true);
      damaged.set(x, y, 0, 0.0);
    }
  }
  const RasterImage out = inpaint_exemplar(damaged, mask, {9, std::nullopt, 1.0}).image;
  int mismatched = 0;
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) mismatched += out.at(x, y) != truth.at(x, y);
  }
  const double elapsed = Seconds(start);
  return {mismatched == 0 && elapsed < 10.0,
          Fmt("%.0f mismatched pixels (limit 0), %.2f s (limit 10 s)", mismatched, elapsed)};
}

Outcome ExemplarProvenance() {
  std::mt19937_64 rng(1006);
  std::uniform_int_distribution<int> pos(2, 22), extent(2, 9), patch(1, 3);
  int violations = 0, over_budget = 0;
  for (int i = 0; i < 20; ++i) {
    const int channels = i % 2 ? 3 : 1;
    const RasterImage img = testing::RandomQuantizedImage(rng, 32, 32, channels);
    BinaryMask mask = testing::RandomMask(rng, 32, 32, 0.03);
    const int x0 = pos(rng), y0 = pos(rng), rw = extent(rng), rh = extent(rng);
    for (int y = y0; y < y0 + rh; ++y) {
      for (int x = x0; x < x0 + rw; ++x) mask.set(x, y, true);
    }
    const ExemplarResult r = inpaint_exemplar(img, mask, {2 * patch(rng) + 1, std::nullopt, 1.0});

    std::set<std::vector<double>> known;
    for (int y = 0; y < 32; ++y) {
      for (int x = 0; x < 32; ++x) {
        if (mask.at(x, y)) continue;
        std::vector<double> px(channels);
        for (int c = 0; c < channels; ++c) px[c] = img.at(x, y, c);
        known.insert(std::move(px));
      }
    }
    for (int y = 0; y < 32; ++y) {
      for (int x = 0; x < 32; ++x) {
        if (!mask.at(x, y)) continue;
        std::vector<double> px(channels);
        for (int c = 0; c < channels; ++c) px[c] = r.image.at(x, y, c);
        violations += known.count(px) == 0;
      }
    }
    over_budget += static_cast<std::size_t>(r.iterations) > mask_stats(mask).count_true;
  }
  return {violations == 0 && over_budget == 0,
          Fmt("%.0f filled pixels without a known origin, %.0f runs over the iteration bound",
              violations, over_budget)};
}

Outcome OsmosisConservation() {
  std::mt19937_64 rng(1007);
  std::uniform_real_distribution<double> drift(-0.5, 0.5);
  double worst = 0.0;
  int steps = 0;
  for (int i = 0; i < 6; ++i) {
    const RasterImage u0 = testing::RandomImage(rng, 32, 32, 1, 0.05, 1.0);
    DriftField d;
    if (i % 2 == 0) {
      d = compute_drift(testing::RandomImage(rng, 32, 32, 1), 1.0 / 255.0);
    } else {
      d = DriftField::Zero(32, 32);
      for (double& v : d.d1) v = drift(rng);
      for (double& v : d.d2) v = drift(rng);
    }
    OsmosisParams p;
    p.steps = 100;
    p.steady_tol = 0.0;
    p.solver_tol = 1e-12;
    p.dt = i < 3 ? 0.05 * (i + 1) : 0.5 * (i - 2);  // small enough to stay transient
    const OsmosisRun run = evolve_osmosis(u0.data(), assemble_osmosis_operator(d, 32, 32), p);
    for (std::size_t k = 1; k < run.means.size(); ++k) {
      worst = std::max(worst, std::abs(run.means[k] - run.means[k - 1]) / std::abs(run.means[k - 1]));
    }
    steps += run.steps_taken;
  }
  return {worst <= 1e-10 && steps == 600,
          Fmt("max per-step relative mean change = %.3g (limit 1e-10) over %.0f steps", worst,
              steps)};
}

Outcome GuidanceSteadiness() {
  std::mt19937_64 rng(1008);
  std::uniform_int_distribution<int> dim(2, 48);
  const double eps = 1.0 / 255.0;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int w = dim(rng), h = dim(rng);
    const RasterImage v = testing::RandomImage(rng, w, h, 1);
    const CsrMatrix a = assemble_osmosis_operator(compute_drift(v, eps), w, h);
    std::vector<double> shifted(v.data().begin(), v.data().end());
    for (double& x : shifted) x += eps;
    for (double r : spmv(a, shifted)) worst = std::max(worst, std::abs(r));
  }
  return {worst <= 1e-12, Fmt("max |A (v + eps)| = %.3g (limit 1e-12)", worst)};
}

Outcome SteadyStateRecovery() {
  std::mt19937_64 rng(1009);
  const double eps = 1.0 / 255.0;
  double worst_analytic = 0.0, worst_dense = 0.0;
  int max_steps = 0;
  for (int i = 0; i < 5; ++i) {
    // 16x16 against the closed form m (v + eps) / mean(v + eps).
    const RasterImage v = testing::RandomImage(rng, 16, 16, 1);
    const double m = 0.3 + 0.1 * i;
    const std::vector<double> u0(256, m);
    OsmosisParams p;  // dt 1000, at most 500 steps
    const OsmosisRun run =
        evolve_osmosis(u0, assemble_osmosis_operator(compute_drift(v, eps), 16, 16), p);
    std::vector<double> shifted(v.data().begin(), v.data().end());
    for (double& x : shifted) x += eps;
    const double ms = Mean(shifted);
    for (std::size_t k = 0; k < shifted.size(); ++k) {
      worst_analytic = std::max(worst_analytic, std::abs(run.values[k] - m * shifted[k] / ms));
    }
    max_steps = std::max(max_steps, run.steps_taken);

    // 8x8 against the dense null-space solve.
    const RasterImage g = testing::RandomImage(rng, 8, 8, 1);
    const RasterImage start = testing::RandomImage(rng, 8, 8, 1, 0.1, 0.9);
    const OsmosisRun small =
        evolve_osmosis(start.data(), assemble_osmosis_operator(compute_drift(g, eps), 8, 8), p);
    const auto oracle = testing::DenseSteadyState(
        testing::DenseOsmosisOperator(std::vector<double>(g.data().begin(), g.data().end()), 8, 8,
                                      eps),
        Mean(start.data()));
    for (std::size_t k = 0; k < oracle.size(); ++k) {
      worst_dense = std::max(worst_dense, std::abs(small.values[k] - oracle[k]));
    }
    max_steps = std::max(max_steps, small.steps_taken);
  }
  return {worst_analytic <= 1e-4 && worst_dense <= 1e-8 && max_steps <= 500,
          Fmt("16x16 |u - m(v+eps)/mean|_inf = %.3g (limit 1e-4), 8x8 vs dense = %.3g "
              "(limit 1e-8), %.0f steps max",
              worst_analytic, worst_dense, max_steps)};
}

Outcome RegionGrowingOracle() {
  std::mt19937_64 rng(1010);
  std::uniform_int_distribution<int> coord(0, 31), nseeds(0, 5);
  std::uniform_real_distribution<double> tol(0.0, 0.5);
  int mismatched_images = 0;
  for (int i = 0; i < 100; ++i) {
    const int channels = i % 3 == 0 ? 1 : 3;
    // Quantized samples give plateaus and exact ties at the tolerance.
    const RasterImage img = i % 2 ? testing::RandomQuantizedImage(rng, 32, 32, channels)
                                  : testing::RandomImage(rng, 32, 32, channels);
    SeedSet seeds{{}, i % 10 == 0 ? 0.0 : tol(rng), DamageClass::kLacuna};
    const int k = nseeds(rng);
    for (int s = 0; s < k; ++s) seeds.seeds.push_back({coord(rng), coord(rng)});
    mismatched_images += !(grow_region(img, seeds) ==
                           testing::FloodFillOracle(img, seeds.seeds, seeds.tolerance));
  }
  return {mismatched_images == 0,
          Fmt("%.0f of 100 images differ from the flood-fill oracle", mismatched_images)};
}

Outcome SolverCorrectness() {
  std::mt19937_64 rng(1011);
  std::uniform_int_distribution<std::size_t> dim(1, 64);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution keep(0.15);
  double worst_cg = 0.0, worst_bicg = 0.0;
  int unconverged = 0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = i == 0 ? 64 : dim(rng);
    // Symmetric strictly diagonally dominant (SPD) for CG; an independent
    // nonsymmetric dominant matrix for BiCGStab.
    testing::DenseMatrix spd(n, std::vector<double>(n, 0.0)), gen = spd;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = r + 1; c < n; ++c) {
        if (keep(rng)) spd[r][c] = spd[c][r] = u(rng);
      }
      for (std::size_t c = 0; c < n; ++c) {
        if (c != r && keep(rng)) gen[r][c] = u(rng);
      }
    }
    for (std::size_t r = 0; r < n; ++r) {
      double s1 = 0.0, s2 = 0.0;
      for (std::size_t c = 0; c < n; ++c) {
        s1 += std::abs(spd[r][c]);
        s2 += std::abs(gen[r][c]);
      }
      spd[r][r] = s1 + 0.5 + std::abs(u(rng));
      gen[r][r] = (u(rng) < 0 ? -1.0 : 1.0) * (s2 + 0.5 + std::abs(u(rng)));
    }
    std::vector<double> b(n);
    for (double& x : b) x = u(rng);

    const auto to_csr = [n](const testing::DenseMatrix& d) {
      std::vector<Triplet> t;
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
          if (d[r][c] != 0.0) t.push_back({r, c, d[r][c]});
        }
      }
      return assemble_csr(t, n, n);
    };
    const auto rel_err = [](const std::vector<double>& x, const std::vector<double>& ref) {
      double num = 0.0, den = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        num = std::max(num, std::abs(x[k] - ref[k]));
        den = std::max(den, std::abs(ref[k]));
      }
      return den > 0.0 ? num / den : num;
    };
    const SolverOptions opts{1e-10, 10000, i % 2 == 1};
    const SolveResult cg = solve_cg(to_csr(spd), b, opts);
    const SolveResult bicg = solve_bicgstab(to_csr(gen), b, opts);
    unconverged += !cg.report.converged + !bicg.report.converged;
    worst_cg = std::max(worst_cg, rel_err(cg.x, testing::DenseSolve(spd, b)));
    worst_bicg = std::max(worst_bicg, rel_err(bicg.x, testing::DenseSolve(gen, b)));
  }
  return {worst_cg <= 1e-8 && worst_bicg <= 1e-8 && unconverged == 0,
          Fmt("CG rel err %.3g, BiCGStab rel err %.3g (limit 1e-8), %.0f unconverged", worst_cg,
              worst_bicg, unconverged)};
}

// Thin HTTP harness around a service instance on an ephemeral port.
class LiveServer {
 public:
  explicit LiveServer(const fs::path& data_dir)
      : service_(service::ServiceConfig{data_dir, 2, std::size_t{64} << 20}),
        server_(service_, std::nullopt) {
    port_ = server_.BindToAnyPort("127.0.0.1");
    thread_ = std::thread([this] { server_.ListenAfterBind(); });
  }
  ~LiveServer() {
    server_.Stop();
    thread_.join();
  }
  httplib::Client Client() const { return httplib::Client("127.0.0.1", port_); }
  bool ok() const { return port_ > 0; }

 private:
  service::RestoreService service_;
  service::HttpServer server_;
  int port_ = -1;
  std::thread thread_;
};

Outcome ServiceRoundTrip() {
  const fs::path dir =
      fs::temp_directory_path() / ("lumen_accept_" + std::to_string(std::random_device{}()));
  struct Cleanup {
    fs::path p;
    ~Cleanup() { fs::remove_all(p); }
  } cleanup{dir};

  std::mt19937_64 rng(1012);
  RasterImage img = testing::RandomQuantizedImage(rng, 48, 40, 3);
  for (int y = 10; y < 22; ++y) {
    for (int x = 14; x < 30; ++x) {
      for (int c = 0; c < 3; ++c) img.set(x, y, c, 1.0);  // a flat "loss"
    }
  }
  const auto png = encode_png(img);
  std::string job_id, result_id;
  std::vector<std::uint8_t> result_bytes;
  BinaryMask mask;
  {
    LiveServer live(dir);
    if (!live.ok()) return {false, "could not bind a port"};
    auto client = live.Client();
    auto up = client.Post("/api/images", reinterpret_cast<const char*>(png.data()), png.size(),
                          "image/png");
    if (!up || up->status != 201) return {false, "image upload failed"};
    const std::string image_id = json::parse(up->body)["image_id"];

    auto m = client.Post("/api/masks",
                         json{{"image_id", image_id},
                              {"seeds", {{{"x", 20}, {"y", 15}}}},
                              {"tolerance", 0.01}}
                             .dump(),
                         "application/json");
    if (!m || m->status != 201) return {false, "mask creation failed"};
    const json mask_info = json::parse(m->body);
    auto mask_png = client.Get("/api/masks/" + mask_info["mask_id"].get<std::string>());
    if (!mask_png) return {false, "mask fetch failed"};
    mask = decode_mask(std::span(reinterpret_cast<const std::uint8_t*>(mask_png->body.data()),
                                 mask_png->body.size()));

    auto job = client.Post("/api/jobs",
                           json{{"method", "harmonic"},
                                {"input_image_id", image_id},
                                {"mask_id", mask_info["mask_id"]}}
                               .dump(),
                           "application/json");
    if (!job || job->status != 202) return {false, "job submission failed"};
    job_id = json::parse(job->body)["job_id"];
    json record;
    for (int i = 0; i < 600; ++i) {
      auto g = client.Get("/api/jobs/" + job_id);
      if (g && g->status == 200) {
        record = json::parse(g->body);
        if (record["status"] == "done" || record["status"] == "failed") break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    if (record["status"] != "done") return {false, "job did not finish: " + record.dump()};
    result_id = record["result_image_id"];
    auto result = client.Get("/api/images/" + result_id);
    if (!result) return {false, "result fetch failed"};
    result_bytes.assign(result->body.begin(), result->body.end());
    auto fb = client.Post("/api/jobs/" + job_id + "/feedback",
                          json{{"rating", 4}, {"comment", "acceptance"}}.dump(),
                          "application/json");
    if (!fb || fb->status != 200) return {false, "feedback failed"};
  }

  const RasterImage direct = inpaint_diffusion(img, mask, {DiffusionKind::kHarmonic}).image;
  const bool identical = result_bytes == encode_png(direct) &&
                         decode_image(result_bytes) == decode_image(encode_png(direct));

  LiveServer restarted(dir);
  auto client = restarted.Client();
  auto g = client.Get("/api/jobs/" + job_id);
  bool survived = false;
  if (g && g->status == 200) {
    const json record = json::parse(g->body);
    survived = record["status"] == "done" && record["result_image_id"] == result_id &&
               record["feedback"].is_object() && record["feedback"]["rating"] == 4 &&
               record["feedback"]["comment"] == "acceptance";
  }
  auto img_after = client.Get("/api/images/" + result_id);
  survived = survived && img_after && img_after->status == 200;
  return {identical && survived,
          std::string("result ") + (identical ? "bit-identical" : "DIFFERS") +
              " to direct call; job and feedback " + (survived ? "survive" : "LOST on") +
              " restart; mask has " + std::to_string(mask_stats(mask).count_true) + " pixels"};
}

Outcome PngRoundTrip() {
  const fs::path dir =
      fs::temp_directory_path() / ("lumen_png_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  std::mt19937_64 rng(1013);
  std::uniform_int_distribution<int> dim(1, 80);
  int failures = 0;
  for (int i = 0; i < 50; ++i) {
    const RasterImage img = testing::RandomQuantizedImage(rng, dim(rng), dim(rng), i % 2 ? 3 : 1);
    const fs::path path = dir / ("img" + std::to_string(i) + ".png");
    save_image(img, path);
    const RasterImage back = load_image(path);
    failures += !(back == img) || ReadFileBytes(path) != encode_png(back);
  }
  fs::remove_all(dir);
  return {failures == 0, Fmt("%.0f of 50 images not bit-exact", failures)};
}

}  // namespace
}  // namespace lumen::acceptance

int main() {
  using namespace lumen::acceptance;
  std::printf("kernels: %s\n",
              std::string(lumen::simd::BackendName(lumen::simd::Active().backend)).c_str());

  double harmonic_seconds = 0.0;
  std::vector<HarmonicCase> suite;
  const auto harmonic_suite = [&]() -> const std::vector<HarmonicCase>& {
    if (suite.empty()) suite = HarmonicSuite(&harmonic_seconds);
    return suite;
  };

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Harmonic mean-value property",
       [&] {
         const auto& s = harmonic_suite();
         return MeanValueProperty(s, harmonic_seconds);
       }},
      {"Maximum principle", [&] { return MaximumPrinciple(harmonic_suite()); }},
      {"Exact ramp recovery", RampRecovery},
      {"TV to harmonic limit", TvHarmonicLimit},
      {"Exemplar periodicity", ExemplarPeriodicity},
      {"Exemplar provenance and termination", ExemplarProvenance},
      {"Osmosis conservation", OsmosisConservation},
      {"Guidance steadiness", GuidanceSteadiness},
      {"Osmosis steady-state recovery", SteadyStateRecovery},
      {"Region-growing oracle", RegionGrowingOracle},
      {"Solver correctness", SolverCorrectness},
      {"Service round trip", ServiceRoundTrip},
      {"PNG round trip", PngRoundTrip},
  };

  int passed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    passed += outcome.pass;
    std::printf("%s  [%2zu] %s: %s\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", passed, criteria.size());
  return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
