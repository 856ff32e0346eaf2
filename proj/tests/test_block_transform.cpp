#include <gtest/gtest.h>

#include <random>

#include "roast/block_transform.hpp"
#include "test_support.hpp"

using namespace roast;

namespace {

SpatialBlock random_spatial(std::mt19937_64& rng, double amplitude) {
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  SpatialBlock s;
  for (double& x : s.values) x = dist(rng);
  return s;
}

DctBlock scalar_block(double x) {
  DctBlock d;
  d.values.fill(x);
  return d;
}

}  // namespace

TEST(Dct, FlatBlockHasOnlyDc) {
  SpatialBlock s;
  s.values.fill(8.0);
  const auto d = dct2(s);
  EXPECT_NEAR(d[0], 64.0, 1e-12);
  for (int k = 1; k < 64; ++k) EXPECT_NEAR(d[k], 0.0, 1e-12);
}

TEST(Dct, ZerosStayZero) {
  const auto d = dct2(SpatialBlock{});
  for (double x : d.values) EXPECT_EQ(x, 0.0);
}

TEST(Dct, DcOnlyInverseIsFlat) {
  DctBlock d;
  d[0] = 64.0;
  for (double x : idct2(d).values) EXPECT_NEAR(x, 8.0, 1e-12);
}

TEST(Dct, SingleCoefficientIsItsBasis) {
  for (int u = 0; u < 8; ++u) {
    for (int v = 0; v < 8; ++v) {
      DctBlock d;
      d(u, v) = 3.0;
      const auto s = idct2(d);
      for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) EXPECT_NEAR(s(i, j), 3.0 * idct_basis(u, v, i, j), 1e-12);
      }
    }
  }
}

TEST(Dct, RoundTripWithinTolerance) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 1000; ++t) {
    const auto s = random_spatial(rng, 300.0);
    const auto back = idct2(dct2(s));
    for (int k = 0; k < 64; ++k) ASSERT_NEAR(back[k], s[k], 1e-9);
  }
}

TEST(Dct, Linear) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const auto x = random_spatial(rng, 100.0), y = random_spatial(rng, 100.0);
    SpatialBlock z;
    for (int k = 0; k < 64; ++k) z[k] = 1.5 * x[k] - 0.25 * y[k];
    const auto dx = dct2(x), dy = dct2(y), dz = dct2(z);
    for (int k = 0; k < 64; ++k) ASSERT_NEAR(dz[k], 1.5 * dx[k] - 0.25 * dy[k], 1e-9);
  }
}

TEST(Dct, Parseval) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto s = random_spatial(rng, 128.0);
    const auto d = dct2(s);
    double es = 0, ed = 0;
    for (int k = 0; k < 64; ++k) {
      es += s[k] * s[k];
      ed += d[k] * d[k];
    }
    ASSERT_NEAR(ed / es, 1.0, 1e-6);
  }
}

TEST(Tru, ClampsToSpatialRange) {
  EXPECT_EQ(tru(130.0), 127.0);
  EXPECT_EQ(tru(-200.0), -128.0);
  EXPECT_EQ(tru(5.0), 5.0);
}

TEST(Quantize, RoundsHalfAwayFromZero) {
  const auto q = QuantTable::uniform(10);
  EXPECT_EQ(quantize_round(scalar_block(34.0), q)[0], 3);
  EXPECT_EQ(quantize_round(scalar_block(35.0), q)[0], 4);
  EXPECT_EQ(quantize_round(scalar_block(-35.0), q)[0], -4);
}

TEST(Quantize, ClampsToCoefficientRange) {
  EXPECT_EQ(quantize_round(scalar_block(5000.0), QuantTable::uniform(1))[7], kCoefMax);
  EXPECT_EQ(quantize_round(scalar_block(-5000.0), QuantTable::uniform(1))[7], kAcCoefMin);
}

TEST(Quantize, FixRoundsTowardZero) {
  const auto q = QuantTable::uniform(1);
  EXPECT_EQ(fix_quantize(scalar_block(3.7), q)[0], 3);
  EXPECT_EQ(fix_quantize(scalar_block(-3.7), q)[0], -3);
  EXPECT_EQ(fix_quantize(scalar_block(4.0), q)[0], 4);
}

TEST(Quantize, FixNeverExceedsQuotient) {
  std::mt19937_64 rng(4);
  const auto q = build_qtable(65);
  for (int t = 0; t < 500; ++t) {
    DctBlock d;
    for (double& x : d.values) x = std::uniform_real_distribution<double>(-900, 900)(rng);
    const auto f = fix_quantize(d, q);
    for (int k = 0; k < 64; ++k) ASSERT_LE(std::abs(f[k]), std::abs(d[k] / q[k]) + 1e-12);
  }
}

TEST(Recompress, SingleCoefficientRequantization) {
  CoefficientImage img(8, 8, QuantTable::uniform(10));
  img.block(0)[1] = 2;
  const auto out = recompress(img, QuantTable::uniform(7), AblationFlags{false, false});
  EXPECT_EQ(out.block(0)[1], 3);  // round(20 / 7)
  EXPECT_EQ(out.qtable(), QuantTable::uniform(7));
}

TEST(Recompress, SameTableWithoutSpatialStagesIsIdentity) {
  const auto img = fixtures::random_image(48, 40, build_qtable(65), 5, 300);
  EXPECT_EQ(recompress(img, img.qtable(), AblationFlags{false, false}), img);
}

TEST(Recompress, DividingTableRestoresExactly) {
  const auto img = fixtures::random_image(32, 32, QuantTable::uniform(12), 6, 80);
  const AblationFlags off{false, false};
  const auto received = recompress(img, QuantTable::uniform(4), off);
  EXPECT_EQ(restore_coefficients(received, img.qtable(), off), img);
}

TEST(Recompress, TruncationDominatesOnOverflowingBlock) {
  CoefficientImage img(8, 8, build_qtable(65));
  img.block(0)[0] = 90;   // bright flat block
  img.block(0)[1] = 12;   // strong horizontal ramp
  img.block(0)[9] = 6;
  const auto full = restore_coefficients(recompress(img, 85), img.qtable());
  const auto no_trunc = restore_coefficients(recompress(img, 85, AblationFlags{false, true}), img.qtable(),
                                             AblationFlags{false, true});
  int full_changes = 0, ablated_changes = 0;
  for (int k = 1; k < 64; ++k) {
    full_changes += std::abs(full.block(0)[k] - img.block(0)[k]);
    ablated_changes += std::abs(no_trunc.block(0)[k] - img.block(0)[k]);
  }
  EXPECT_GT(full_changes, ablated_changes);
}

TEST(Restore, MidGrayIsZero) {
  const auto img = restore_coefficients(PixelImage(16, 16, 128), build_qtable(65));
  for (const auto& b : img.blocks()) {
    for (int c : b) EXPECT_EQ(c, 0);
  }
}

TEST(Restore, RecoversNonOverflowingBlocks) {
  const auto q = QuantTable::uniform(4);
  const auto img = fixtures::random_image(64, 64, q, 7, 12);
  const auto back = restore_coefficients(decode_to_pixels(img), q);
  for (int b = 0; b < img.block_count(); ++b) EXPECT_EQ(back.block(b), img.block(b));
}

TEST(Restore, ReplicatePadsPartialBlocks) {
  PixelImage px(10, 9, 200);
  const auto img = restore_coefficients(px, QuantTable::uniform(1));
  EXPECT_EQ(img.blocks_wide(), 2);
  EXPECT_EQ(img.blocks_high(), 2);
  for (const auto& b : img.blocks()) {
    EXPECT_EQ(b[0], 576);  // (200 - 128) * 8
    for (int k = 1; k < 64; ++k) EXPECT_EQ(b[k], 0);
  }
}

TEST(RoundingModel, MatchesGaussianApproximation) {
  EXPECT_NEAR(rounding_survival_probability(1, 100000, 11).probability, 0.9160, 0.005);
  EXPECT_NEAR(rounding_survival_probability(2, 100000, 12).probability, 0.9995, 0.001);
  EXPECT_GE(rounding_survival_probability(3, 100000, 13).probability, 0.9999);
}

TEST(RoundingModel, DeterministicPerSeed) {
  EXPECT_EQ(rounding_survival_probability(1, 1000, 5).probability,
            rounding_survival_probability(1, 1000, 5).probability);
  EXPECT_THROW(rounding_survival_probability(0, 10, 1), ParameterError);
}
