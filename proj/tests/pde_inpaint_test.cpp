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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "lumen/error.hpp"
#include "support/oracles.hpp"

namespace lumen {
namespace {

const DiffusionMethod kHarmonic{DiffusionKind::kHarmonic};

// Dense Laplace system over unknowns written from the stencil definition,
// using a pixel-to-row map built independently of the library.
std::vector<double> DenseHarmonicOracle(const RasterImage& img, const BinaryMask& mask) {
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
      const int nx[4] = {x - 1, x + 1, x, x};
      const int ny[4] = {y, y, y - 1, y + 1};
      for (int k = 0; k < 4; ++k) {
        if (nx[k] < 0 || ny[k] < 0 || nx[k] >= w || ny[k] >= h) continue;
        a[r][r] += 1.0;
        const int c = row[mask.index(nx[k], ny[k])];
        if (c >= 0) {
          a[r][c] -= 1.0;
        } else {
          b[r] += img.at(nx[k], ny[k]);
        }
      }
    }
  }
  return testing::DenseSolve(a, b);
}

double NeighbourMean(const RasterImage& img, int x, int y, int c) {
  double sum = 0.0;
  int count = 0;
  const int nx[4] = {x - 1, x + 1, x, x};
  const int ny[4] = {y, y, y - 1, y + 1};
  for (int k = 0; k < 4; ++k) {
    if (nx[k] < 0 || ny[k] < 0 || nx[k] >= img.width() || ny[k] >= img.height()) continue;
    sum += img.at(nx[k], ny[k], c);
    ++count;
  }
  return sum / count;
}

BinaryMask InteriorRandomMask(std::mt19937_64& rng, int w, int h, double density) {
  BinaryMask m = testing::RandomMask(rng, w, h, density);
  for (int x = 0; x < w; ++x) {
    m.set(x, 0, false);
    m.set(x, h - 1, false);
  }
  for (int y = 0; y < h; ++y) {
    m.set(0, y, false);
    m.set(w - 1, y, false);
  }
  return m;
}

TEST(BuildHarmonicSystemTest, SingleInteriorPixel) {
  RasterImage img(3, 3, 1, std::vector<double>{0, 0.1, 0, 0.2, 0.9, 0.3, 0, 0.4, 0});
  BinaryMask mask(3, 3, false);
  mask.set(1, 1, true);
  const DiffusionSystem s = build_harmonic_system(img, mask);
  ASSERT_EQ(s.matrix.rows(), 1u);
  EXPECT_EQ(s.matrix.coeff(0, 0), 4.0);
  EXPECT_DOUBLE_EQ(s.rhs[0], 0.1 + 0.2 + 0.3 + 0.4);
  EXPECT_EQ(s.unknown_pixels, std::vector<std::size_t>{4});
}

TEST(BuildHarmonicSystemTest, CornerPixelHasDiagonalTwo) {
  const RasterImage img(4, 4, 1, 0.5);
  BinaryMask mask(4, 4, false);
  mask.set(0, 0, true);
  const DiffusionSystem s = build_harmonic_system(img, mask);
  EXPECT_EQ(s.matrix.coeff(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(s.rhs[0], 1.0);
}

TEST(BuildHarmonicSystemTest, EmptyMaskGivesEmptySystem) {
  const DiffusionSystem s = build_harmonic_system(RasterImage(4, 3, 1), BinaryMask(4, 3));
  EXPECT_EQ(s.matrix.rows(), 0u);
  EXPECT_TRUE(s.rhs.empty());
}

TEST(BuildHarmonicSystemTest, UnknownNeighboursGiveMinusOneAndSymmetry) {
  std::mt19937_64 rng(21);
  const RasterImage img = testing::RandomImage(rng, 9, 7, 1);
  const BinaryMask mask = testing::RandomMask(rng, 9, 7, 0.5);
  const DiffusionSystem s = build_harmonic_system(img, mask);
  for (std::size_t r = 0; r < s.matrix.rows(); ++r) {
    for (std::size_t c = 0; c < s.matrix.cols(); ++c) {
      EXPECT_EQ(s.matrix.coeff(r, c), s.matrix.coeff(c, r));
      if (r != c) EXPECT_TRUE(s.matrix.coeff(r, c) == 0.0 || s.matrix.coeff(r, c) == -1.0);
    }
  }
}

TEST(BuildHarmonicSystemTest, Errors) {
  try {
    build_harmonic_system(RasterImage(3, 3, 1), BinaryMask(3, 3, true));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAllUnknown);
  }
  try {
    build_harmonic_system(RasterImage(3, 3, 1), BinaryMask(3, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(InpaintDiffusionTest, NeighbourMeanExample) {
  RasterImage img(3, 3, 1, std::vector<double>{0, 0.2, 0, 0.4, 0.0, 0.6, 0, 0.8, 0});
  BinaryMask mask(3, 3, false);
  mask.set(1, 1, true);
  const InpaintResult r = inpaint_diffusion(img, mask, kHarmonic);
  EXPECT_NEAR(r.image.at(1, 1), 0.5, 1e-15);
}

TEST(InpaintDiffusionTest, ConstantImageStaysConstant) {
  std::mt19937_64 rng(22);
  const RasterImage img(20, 15, 3, 0.37);
  const BinaryMask mask = testing::RandomMask(rng, 20, 15, 0.4);
  for (DiffusionKind kind : {DiffusionKind::kHarmonic, DiffusionKind::kTotalVariation}) {
    const InpaintResult r = inpaint_diffusion(img, mask, {kind, 1e-3, 5});
    for (double v : r.image.data()) EXPECT_NEAR(v, 0.37, 1e-9);
  }
}

TEST(InpaintDiffusionTest, LinearRampRecoveredAndMatchesDenseOracle) {
  const int w = 40, h = 30;
  RasterImage img(w, h, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) img.set(x, y, 0, static_cast<double>(x) / (w - 1));
  }
  BinaryMask mask(w, h, false);
  for (int y = 7; y < 23; ++y) {
    for (int x = 12; x < 28; ++x) mask.set(x, y, true);
  }
  const InpaintResult r = inpaint_diffusion(img, mask, kHarmonic);
  const auto oracle = DenseHarmonicOracle(img, mask);
  std::size_t k = 0;
  for (std::size_t i = 0; i < mask.pixel_count(); ++i) {
    if (!mask.at(i)) continue;
    EXPECT_NEAR(r.image.data()[i], img.data()[i], 1e-6);
    EXPECT_NEAR(r.image.data()[i], oracle[k++], 1e-9);
  }
}

TEST(InpaintDiffusionTest, MeanValueAndMaximumPrinciple) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const RasterImage img = testing::RandomImage(rng, 32, 32, 1);
    const BinaryMask mask = testing::RandomMask(rng, 32, 32, 0.2);
    const InpaintResult r = inpaint_diffusion(img, mask, kHarmonic);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < mask.pixel_count(); ++i) {
      if (!mask.at(i)) {
        lo = std::min(lo, img.data()[i]);
        hi = std::max(hi, img.data()[i]);
      }
    }
    EXPECT_LE(r.residual_mean_value, 1e-8);
    for (int y = 0; y < 32; ++y) {
      for (int x = 0; x < 32; ++x) {
        if (!mask.at(x, y)) {
          EXPECT_EQ(r.image.at(x, y), img.at(x, y));
          continue;
        }
        EXPECT_NEAR(r.image.at(x, y), NeighbourMean(r.image, x, y, 0), 1e-8);
        EXPECT_GE(r.image.at(x, y), lo - 1e-12);
        EXPECT_LE(r.image.at(x, y), hi + 1e-12);
      }
    }
  }
}

TEST(InpaintDiffusionTest, ChannelIndependence) {
  std::mt19937_64 rng(24);
  const RasterImage img = testing::RandomImage(rng, 18, 14, 3);
  const BinaryMask mask = testing::RandomMask(rng, 18, 14, 0.3);
  for (DiffusionKind kind : {DiffusionKind::kHarmonic, DiffusionKind::kTotalVariation}) {
    const DiffusionMethod method{kind, 1e-2, 5};
    const InpaintResult joint = inpaint_diffusion(img, mask, method);
    for (int c = 0; c < 3; ++c) {
      const InpaintResult single = inpaint_diffusion(img.channel(c), mask, method);
      EXPECT_EQ(joint.image.channel(c), single.image);
    }
  }
}

TEST(InpaintDiffusionTest, TvWithLargeEpsilonApproachesHarmonic) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 5; ++trial) {
    const RasterImage img = testing::RandomImage(rng, 16, 16, 1);
    const BinaryMask mask = InteriorRandomMask(rng, 16, 16, 0.4);
    const InpaintResult tv = inpaint_diffusion(img, mask, {DiffusionKind::kTotalVariation, 1e3, 30});
    const InpaintResult harmonic = inpaint_diffusion(img, mask, kHarmonic);
    for (std::size_t i = 0; i < mask.pixel_count(); ++i) {
      EXPECT_NEAR(tv.image.data()[i], harmonic.image.data()[i], 1e-4);
    }
  }
}

TEST(InpaintDiffusionTest, TvPreservesStepEdgeBetterThanHarmonic) {
  // A vertical step with a gap straddling it: TV keeps the jump sharper.
  const int w = 24, h = 24;
  RasterImage img(w, h, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) img.set(x, y, 0, x < 12 ? 0.1 : 0.9);
  }
  BinaryMask mask(w, h, false);
  for (int y = 10; y < 14; ++y) {
    for (int x = 4; x < 20; ++x) mask.set(x, y, true);
  }
  const auto error = [&](const RasterImage& out) {
    double e = 0.0;
    for (std::size_t i = 0; i < mask.pixel_count(); ++i) {
      if (mask.at(i)) e += std::abs(out.data()[i] - img.data()[i]);
    }
    return e;
  };
  const InpaintResult tv = inpaint_diffusion(img, mask, {DiffusionKind::kTotalVariation, 1e-3, 30});
  const InpaintResult harmonic = inpaint_diffusion(img, mask, kHarmonic);
  EXPECT_LT(error(tv.image), error(harmonic.image));
}

TEST(InpaintDiffusionTest, EmptyMaskIsIdentity) {
  std::mt19937_64 rng(26);
  const RasterImage img = testing::RandomImage(rng, 7, 5, 3);
  EXPECT_EQ(inpaint_diffusion(img, BinaryMask(7, 5), kHarmonic).image, img);
}

TEST(InpaintDiffusionTest, AllUnknownRejected) {
  EXPECT_THROW(inpaint_diffusion(RasterImage(4, 4, 1), BinaryMask(4, 4, true), kHarmonic),
               Error);
}

TEST(DiffusionMethodTest, Validate) {
  EXPECT_THROW((DiffusionMethod{DiffusionKind::kTotalVariation, 0.0, 3}.Validate()), Error);
  EXPECT_THROW((DiffusionMethod{DiffusionKind::kTotalVariation, 1e-3, 0}.Validate()), Error);
  EXPECT_NO_THROW(DiffusionMethod{}.Validate());
}

}  // namespace
}  // namespace lumen
