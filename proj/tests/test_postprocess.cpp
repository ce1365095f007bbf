#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dtvar/postprocess.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace dtvar;

namespace {

// Gaussian profile around the outline of the square [lo, hi]^2 (pixel centres).
ScalarGrid blurred_square(int size, int lo, int hi, double sigma) {
  ScalarGrid e(size, size);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) {
      const double dx = std::max({lo - c, c - hi, 0});
      const double dy = std::max({lo - r, r - hi, 0});
      double d;
      if (dx > 0 || dy > 0) {
        d = std::hypot(dx, dy);
      } else {
        d = std::min({r - lo, hi - r, c - lo, hi - c});
      }
      e(r, c) = std::exp(-d * d / (2.0 * sigma * sigma));
    }
  return e;
}

}  // namespace

TEST(Hysteresis, DefaultsFromTrainingSetup) {
  const PostprocessParams p;
  EXPECT_EQ(p.low, 80.0);
  EXPECT_EQ(p.high, 100.0);
}

TEST(Hysteresis, Examples) {
  ScalarGrid all(3, 3, 150.0);
  for (std::uint8_t v : hysteresis(all, 80, 100).values()) EXPECT_EQ(v, 1);

  ScalarGrid e(3, 7, 0.0);
  e(1, 0) = 90;
  e(1, 1) = 90;
  e(1, 2) = 120;
  e(1, 5) = 90;
  const BinaryMask m = hysteresis(e, 80, 100);
  EXPECT_EQ(m(1, 0), 1);
  EXPECT_EQ(m(1, 1), 1);
  EXPECT_EQ(m(1, 2), 1);
  EXPECT_EQ(m(1, 5), 0);
}

TEST(Hysteresis, MatchesFloodFill) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  for (int t = 0; t < 50; ++t) {
    ScalarGrid e(23, 29);
    for (double& v : e.values()) v = u(rng);
    ASSERT_EQ(hysteresis(e, 150, 230), oracle::flood_hysteresis(e, 150, 230));
  }
}

TEST(Hysteresis, BadThresholds) {
  EXPECT_ERRC(hysteresis(ScalarGrid(2, 2), 100, 100), Errc::bad_thresholds);
  EXPECT_ERRC(hysteresis(ScalarGrid(2, 2), 120, 100), Errc::bad_thresholds);
}

TEST(Nms, TriangularRidgeGivesOneCrest) {
  ScalarGrid e(9, 11);
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 11; ++c) e(r, c) = 1.0 - 0.15 * std::abs(c - 5);
  const BinaryMask m = nms_gradient(e);
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 11; ++c) EXPECT_EQ(m(r, c), c == 5 ? 1 : 0) << r << "," << c;
}

TEST(Nms, ConstantAndImpulse) {
  for (std::uint8_t v : nms_gradient(ScalarGrid(5, 5, 0.4)).values()) EXPECT_EQ(v, 0);
  ScalarGrid e(5, 5, 0.0);
  e(2, 2) = 1.0;
  const BinaryMask m = nms_gradient(e);
  EXPECT_EQ(m(2, 2), 1);
  EXPECT_EQ(count_set(m), 1u);
}

TEST(EdgeBinary, Examples) {
  BinaryMask full(3, 4, 1);
  EXPECT_EQ(edge_binary(full, full), full);
  BinaryMask a(3, 4, 0), b(3, 4, 0);
  a(0, 0) = 1;
  b(1, 1) = 1;
  EXPECT_EQ(count_set(edge_binary(a, b)), 0u);
  EXPECT_ERRC(edge_binary(a, BinaryMask(4, 3)), Errc::dimension_mismatch);
}

TEST(EdgeBinary, ProductOracle) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 30; ++t) {
    const BinaryMask a = oracle::random_mask(rng, 17, 19, 0.5);
    const BinaryMask b = oracle::random_mask(rng, 17, 19, 0.5);
    const BinaryMask e = edge_binary(a, b);
    for (std::size_t i = 0; i < e.size(); ++i) ASSERT_EQ(e.values()[i], (a.values()[i] * b.values()[i]) > 0 ? 1 : 0);
  }
}

TEST(Components, Labelling) {
  BinaryMask m(4, 4, 0);
  m(0, 0) = m(1, 1) = 1;
  m(3, 3) = 1;
  EXPECT_EQ(label_components(m, Connectivity::eight).count(), 2);
  EXPECT_EQ(label_components(m, Connectivity::four).count(), 3);
  const Components c = label_components(m);
  EXPECT_EQ(c.labels(0, 0), c.labels(1, 1));
  EXPECT_EQ(c.labels(0, 1), -1);
  EXPECT_EQ(c.sizes[c.labels(3, 3)], 1);
}

TEST(Refine, RemovesSmallComponents) {
  BinaryMask m(20, 40, 0);
  for (int c = 2; c < 37; ++c) m(5, c) = 1;
  for (int c = 2; c < 7; ++c) m(15, c) = 1;
  const BinaryMask out = refine(m, RefineParams{20, 3});
  EXPECT_EQ(out(5, 10), 1);
  for (int c = 2; c < 7; ++c) EXPECT_EQ(out(15, c), 0);
}

TEST(Refine, BridgesOnePixelGap) {
  BinaryMask m(9, 40, 0);
  for (int c = 2; c < 38; ++c)
    if (c != 20) m(4, c) = 1;
  const BinaryMask out = refine(m, RefineParams{5, 3});
  EXPECT_EQ(out(4, 20), 1);
  EXPECT_EQ(oracle::count_regions(out, 1, true), 1);
}

TEST(Refine, ClosedLoopUnchanged) {
  BinaryMask m(20, 20, 0);
  for (int i = 4; i <= 15; ++i) m(4, i) = m(15, i) = m(i, 4) = m(i, 15) = 1;
  EXPECT_EQ(refine(m), m);
}

TEST(Postprocess, BlurredSquareGivesThinClosedLoop) {
  const ScalarGrid e = blurred_square(48, 10, 37, 1.5);
  const BinaryMask m = postprocess(e);
  EXPECT_TRUE(oracle::is_thin_closed_loop(m));
  // Every kept pixel lies on or next to the drawn outline.
  for (int r = 0; r < 48; ++r)
    for (int c = 0; c < 48; ++c)
      if (m(r, c)) EXPECT_GE(e(r, c), std::exp(-1.0 / 4.5) - 1e-12);
}

TEST(Postprocess, ZeroMapIsEmptyResult) {
  EXPECT_ERRC(postprocess(ScalarGrid(16, 16, 0.0)), Errc::empty_result);
}
