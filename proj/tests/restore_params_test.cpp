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

#include "lumen/restore.hpp"

#include <gtest/gtest.h>

#include <random>

#include "lumen/error.hpp"
#include "support/oracles.hpp"

namespace lumen {
namespace {

using nlohmann::json;

TEST(ParseRestorationParamsTest, DefaultsPerMethod) {
  const RestorationParams tv = ParseRestorationParams({{"method", "tv"}});
  EXPECT_EQ(tv.method, RestorationMethod::kTv);
  EXPECT_EQ(tv.diffusion.kind, DiffusionKind::kTotalVariation);
  EXPECT_EQ(tv.diffusion.tv_epsilon, 1e-3);
  EXPECT_EQ(tv.diffusion.tv_outer_iters, 30);

  const RestorationParams ex = ParseRestorationParams({{"method", "exemplar"}});
  EXPECT_EQ(ex.exemplar.patch_size, 9);
  EXPECT_FALSE(ex.exemplar.search_window.has_value());

  const RestorationParams os = ParseRestorationParams({{"method", "osmosis"}});
  EXPECT_EQ(os.osmosis.dt, 1000.0);
  EXPECT_EQ(os.osmosis.steps, 500);
  EXPECT_EQ(os.region, "full");
  EXPECT_TRUE(os.NeedsSource());
  EXPECT_FALSE(os.NeedsMask());
}

TEST(ParseRestorationParamsTest, ReadsFields) {
  const RestorationParams p = ParseRestorationParams(
      {{"method", "exemplar"}, {"patch_size", 7}, {"search_window", 20}});
  EXPECT_EQ(p.exemplar.patch_size, 7);
  EXPECT_EQ(p.exemplar.search_window, 20);
  const RestorationParams full =
      ParseRestorationParams({{"method", "exemplar"}, {"search_window", "full"}});
  EXPECT_FALSE(full.exemplar.search_window.has_value());
}

TEST(ParseRestorationParamsTest, RejectsBadInput) {
  for (const json& j : {json::array(), json{{"method", "blur"}}, json{{"steps", 3}},
                        json{{"method", "tv"}, {"tv_epsilon", "big"}},
                        json{{"method", "tv"}, {"tv_epsilon", -1.0}},
                        json{{"method", "exemplar"}, {"patch_size", 8}},
                        json{{"method", "exemplar"}, {"patch_size", 2.5}},
                        json{{"method", "exemplar"}, {"search_window", "half"}},
                        json{{"method", "osmosis"}, {"dt", 0}},
                        json{{"method", "osmosis"}, {"region", 5}}}) {
    try {
      ParseRestorationParams(j);
      FAIL() << j.dump();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument) << j.dump();
    }
  }
}

TEST(ParseRestorationParamsTest, CanonicalJsonRoundTrips) {
  for (const json& j : {json{{"method", "harmonic"}, {"solver_tol", 1e-9}},
                        json{{"method", "tv"}, {"tv_epsilon", 0.01}, {"tv_outer_iters", 4}},
                        json{{"method", "exemplar"}, {"patch_size", 5}, {"search_window", 12}},
                        json{{"method", "osmosis"}, {"steps", 20}, {"region", "abc"}}}) {
    const json canonical = ToJson(ParseRestorationParams(j));
    EXPECT_EQ(ToJson(ParseRestorationParams(canonical)), canonical);
    for (const auto& [key, value] : j.items()) EXPECT_EQ(canonical[key], value) << key;
  }
}

TEST(RunRestorationTest, HarmonicMatchesDirectCall) {
  std::mt19937_64 rng(61);
  const RasterImage img = testing::RandomImage(rng, 16, 12, 3);
  const BinaryMask mask = testing::RandomMask(rng, 16, 12, 0.2);
  const RestorationParams p = ParseRestorationParams({{"method", "harmonic"}});
  const RestorationOutcome out = RunRestoration(p, img, &mask, nullptr, std::nullopt);
  EXPECT_EQ(out.image, inpaint_diffusion(img, mask, {}).image);
  EXPECT_EQ(out.report["method"], "harmonic");
  EXPECT_EQ(out.report["solver_reports"].size(), 3u);
}

TEST(RunRestorationTest, MissingInputsRejected) {
  const RasterImage img(4, 4, 1);
  EXPECT_THROW(RunRestoration(ParseRestorationParams({{"method", "tv"}}), img, nullptr,
                              nullptr, std::nullopt),
               Error);
  EXPECT_THROW(RunRestoration(ParseRestorationParams({{"method", "osmosis"}}), img, nullptr,
                              nullptr, std::nullopt),
               Error);
}

}  // namespace
}  // namespace lumen
