#include <gtest/gtest.h>

#include <cstring>
#include <fstream>
#include <random>

#include "dtvar/grid.hpp"
#include "dtvar/image_io.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace dtvar;

TEST(ForwardDiff, ConstantGridIsZero) {
  ScalarGrid g(4, 5, 3.25);
  for (Axis a : {Axis::x, Axis::y})
    for (double v : forward_diff(g, a).values()) EXPECT_EQ(v, 0.0);
}

TEST(ForwardDiff, RampAlongColumns) {
  ScalarGrid g(3, 4);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c) g(r, c) = c;
  const ScalarGrid d = forward_diff(g, Axis::x);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c) EXPECT_EQ(d(r, c), c == 3 ? 0.0 : 1.0);
}

TEST(ForwardDiff, CentreImpulse) {
  ScalarGrid g(3, 3, 0.0);
  g(1, 1) = 1.0;
  const ScalarGrid d = forward_diff(g, Axis::x);
  EXPECT_EQ(d(1, 0), 1.0);
  EXPECT_EQ(d(1, 1), -1.0);
  EXPECT_EQ(d(1, 2), 0.0);
  EXPECT_EQ(d(0, 0), 0.0);
  const ScalarGrid dy = forward_diff(g, Axis::y);
  EXPECT_EQ(dy(0, 1), 1.0);
  EXPECT_EQ(dy(1, 1), -1.0);
}

TEST(Laplacian, ConstantAndRampAreHarmonic) {
  ScalarGrid k(5, 6, 2.0);
  ScalarGrid ramp(5, 6);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 6; ++c) ramp(r, c) = 3.0 * r - 2.0 * c;
  for (double v : laplacian(k).values()) EXPECT_EQ(v, 0.0);
  for (double v : laplacian(ramp).values()) EXPECT_EQ(v, 0.0);
}

TEST(Laplacian, ImpulseStencil) {
  ScalarGrid g(5, 5, 0.0);
  g(2, 2) = 1.0;
  const ScalarGrid l = laplacian(g);
  EXPECT_EQ(l(2, 2), -4.0);
  EXPECT_EQ(l(1, 2), 1.0);
  EXPECT_EQ(l(3, 2), 1.0);
  EXPECT_EQ(l(2, 1), 1.0);
  EXPECT_EQ(l(2, 3), 1.0);
  EXPECT_EQ(l(1, 1), 0.0);
}

TEST(Laplacian, TooSmall) {
  EXPECT_ERRC(laplacian(ScalarGrid(2, 5)), Errc::dimension_too_small);
  EXPECT_ERRC(laplacian(ScalarGrid(5, 2)), Errc::dimension_too_small);
}

TEST(Dilate, Examples) {
  BinaryMask empty(5, 5, 0);
  EXPECT_EQ(dilate3x3(empty), empty);
  BinaryMask full(5, 5, 1);
  EXPECT_EQ(dilate3x3(full), full);
  EXPECT_EQ(erode3x3(full), full);
  BinaryMask dot(5, 5, 0);
  dot(2, 2) = 1;
  const BinaryMask d = dilate3x3(dot);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) EXPECT_EQ(d(r, c), (std::abs(r - 2) <= 1 && std::abs(c - 2) <= 1) ? 1 : 0);
}

TEST(Dilate, MatchesWindowOracleOnRandomMasks) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const BinaryMask m = oracle::random_mask(rng, 9, 11, 0.2);
    const BinaryMask d = dilate3x3(m);
    const BinaryMask e = erode3x3(m);
    for (int r = 0; r < 9; ++r)
      for (int c = 0; c < 11; ++c) {
        bool any = false;
        bool all = true;
        for (int dr = -1; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc) {
            if (!m.in_bounds(r + dr, c + dc)) continue;
            any |= m(r + dr, c + dc) != 0;
            all &= m(r + dr, c + dc) != 0;
          }
        ASSERT_EQ(d(r, c) != 0, any);
        ASSERT_EQ(e(r, c) != 0, all);
      }
  }
}

TEST(Grid, RejectsEmptyDimensions) {
  EXPECT_ERRC(ScalarGrid(0, 3), Errc::invalid_argument);
  EXPECT_ERRC(MultiChannelImage(2, 2, 0), Errc::invalid_argument);
}

TEST(Grid, ConcatStacksChannels) {
  MultiChannelImage a(2, 3, 2, 0.25);
  MultiChannelImage b(2, 3, 1, 0.75);
  const MultiChannelImage c = concat(a, b);
  EXPECT_EQ(c.channels(), 3);
  EXPECT_EQ(c(1, 1, 2), 0.25);
  EXPECT_EQ(c(2, 1, 2), 0.75);
  EXPECT_ERRC(concat(a, MultiChannelImage(3, 3, 1)), Errc::dimension_mismatch);
}

TEST(Io, DtvgRoundTripIsBitExact) {
  const auto dir = scratch_dir();
  MultiChannelImage img(3, 4, 2);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  for (double& v : img.values()) v = n(rng) * 1e3;
  img(0, 0, 0) = -0.0;
  io::write_dtvg(dir / "a.dtvg", img);
  const MultiChannelImage back = io::read_dtvg(dir / "a.dtvg");
  ASSERT_TRUE(back.same_shape(img));
  EXPECT_EQ(std::memcmp(back.values().data(), img.values().data(), img.values().size() * 8), 0);
}

TEST(Io, DtvgHeaderLayout) {
  const auto dir = scratch_dir();
  ScalarGrid g(2, 3, 1.5);
  io::write_dtvg(dir / "g.dtvg", g);
  std::ifstream f(dir / "g.dtvg", std::ios::binary);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)), {});
  ASSERT_EQ(bytes.size(), 16u + 6u * 8u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "DTVG");
  EXPECT_EQ(bytes[4], 2);
  EXPECT_EQ(bytes[8], 3);
  EXPECT_EQ(bytes[12], 1);
}

TEST(Io, DtvgRejectsGarbage) {
  const auto dir = scratch_dir();
  std::ofstream(dir / "bad.dtvg") << "nope";
  EXPECT_ERRC(io::read_dtvg(dir / "bad.dtvg"), Errc::bad_format);
  EXPECT_ERRC(io::read_dtvg(dir / "missing.dtvg"), Errc::io_error);
}

TEST(Io, PgmRoundTrip8And16Bit) {
  const auto dir = scratch_dir();
  ScalarGrid g(3, 5);
  for (int i = 0; i < 15; ++i) g.values()[i] = i * 17;
  io::write_pgm(dir / "a.pgm", g);
  EXPECT_EQ(io::read_pgm(dir / "a.pgm").samples, g);
  for (int i = 0; i < 15; ++i) g.values()[i] = i * 4000;
  io::write_pgm(dir / "b.pgm", g, 65535);
  const auto back = io::read_pgm(dir / "b.pgm");
  EXPECT_EQ(back.maxval, 65535);
  EXPECT_EQ(back.samples, g);
}

TEST(Io, PlainPgmWithComments) {
  const auto dir = scratch_dir();
  std::ofstream(dir / "p2.pgm") << "P2\n# comment\n3 2\n# another\n10\n0 5 10\n1 2 3\n";
  const auto img = io::read_pgm(dir / "p2.pgm");
  EXPECT_EQ(img.maxval, 10);
  EXPECT_EQ(img.samples(0, 2), 10.0);
  EXPECT_EQ(img.samples(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(io::read_scalar(dir / "p2.pgm")(0, 1), 0.5);
}

TEST(Io, PbmRoundTripAndPlainReader) {
  const auto dir = scratch_dir();
  std::mt19937_64 rng(3);
  const BinaryMask m = oracle::random_mask(rng, 7, 13, 0.4);
  io::write_pbm(dir / "m.pbm", m);
  EXPECT_EQ(io::read_mask(dir / "m.pbm"), m);
  std::ofstream(dir / "p1.pbm") << "P1\n3 2\n1 0 1\n0 1 0\n";
  const BinaryMask p = io::read_mask(dir / "p1.pbm");
  EXPECT_EQ(p(0, 0), 1);
  EXPECT_EQ(p(0, 1), 0);
  EXPECT_EQ(p(1, 1), 1);
}

TEST(Io, PpmRoundTrip) {
  const auto dir = scratch_dir();
  MultiChannelImage img(2, 2, 3);
  for (std::size_t i = 0; i < img.values().size(); ++i) img.values()[i] = static_cast<double>(i * 20) / 255.0;
  io::write_ppm(dir / "a.ppm", img);
  const MultiChannelImage back = io::read_ppm(dir / "a.ppm");
  EXPECT_LT(oracle::max_abs_diff(back.values(), img.values()), 1e-12);
}

TEST(Io, VectorFieldConversion) {
  VectorField f(2, 2, 3);
  f.at(1, 0)[2] = -1.0;
  f.at(0, 1)[0] = 0.5;
  const VectorField back = io::to_vector_field(io::to_image(f));
  EXPECT_EQ(back.dim(), 3);
  EXPECT_EQ(back.at(1, 0)[2], -1.0);
  EXPECT_EQ(back.at(0, 1)[0], 0.5);
}
