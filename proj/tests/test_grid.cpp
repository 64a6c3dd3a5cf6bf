#include <gtest/gtest.h>

#include <sstream>

#include "oslab/grid.hpp"

using namespace oslab;

TEST(Grid, CoordinatesAndIntegrate) {
  GridSpec s{1, 8, 1024};
  EXPECT_DOUBLE_EQ(s.spacing(), 1.0 / 64);
  EXPECT_DOUBLE_EQ(s.coord(0), -8.0);
  auto one = GridFunction::sample(s, [](const Point&) { return 1.0; });
  EXPECT_NEAR(integrate(one), 16.0, 1e-12);
  // Points -1 <= x < 1: 128 of them.
  EXPECT_NEAR(integrate(one, Cube{{0, 0}, 2}), 2.0, 1e-12);
  // Open ball |x| < 1 excludes both endpoints: 127 points.
  EXPECT_NEAR(integrate(one, Ball{{0, 0}, 1}), 127.0 / 64, 1e-12);
}

TEST(Grid, ValidateRejectsBadShapes) {
  EXPECT_THROW((GridSpec{3, 1, 64}.validate()), Error);
  EXPECT_THROW((GridSpec{1, 1, 100}.validate()), Error);
  EXPECT_THROW(GridFunction(GridSpec{1, 1, 64}, std::vector<double>(10)), Error);
}

TEST(Grid, DyadicCubes) {
  GridSpec s{1, 1, 64};
  auto q = dyadic_cubes(s, 1);
  ASSERT_EQ(q.size(), 2u);
  EXPECT_DOUBLE_EQ(q[0].center[0], -0.5);
  EXPECT_DOUBLE_EQ(q[1].center[0], 0.5);
  EXPECT_DOUBLE_EQ(q[0].side, 1.0);
  EXPECT_THROW(dyadic_cubes(s, 7), Error);
  GridSpec s2{2, 1, 16};
  auto q2 = dyadic_cubes(s2, 1);
  ASSERT_EQ(q2.size(), 4u);
  // Morton order: (0,0), (0,1), (1,0), (1,1)
  EXPECT_DOUBLE_EQ(q2[1].center[0], -0.5);
  EXPECT_DOUBLE_EQ(q2[1].center[1], 0.5);
}

TEST(Grid, AmalgamTiles) {
  GridSpec s{1, 1, 64};
  auto tiles = amalgam_tiles(s, 0.5);
  ASSERT_EQ(tiles.size(), 4u);
  EXPECT_DOUBLE_EQ(tiles[0].center[0], -0.75);
  EXPECT_DOUBLE_EQ(tiles[3].center[0], 0.75);
  EXPECT_THROW(amalgam_tiles(s, 0.3), Error);
}

TEST(Grid, AnnulusRings) {
  GridSpec s{1, 8, 256};
  Cube q{{0, 0}, 2};
  auto rings = annulus_rings(s, q, 2);
  const double h = s.spacing();
  // S_0 = 2Q = [-2,2), S_1 = [-4,4) \ [-2,2), S_2 = [-8,8) \ [-4,4).
  EXPECT_EQ(rings[0].size(), std::size_t(4 / h));
  EXPECT_EQ(rings[1].size(), std::size_t(4 / h));
  EXPECT_EQ(rings[2].size(), std::size_t(8 / h));
  for (auto i : rings[1]) {
    double x = s.coord(std::ptrdiff_t(i));
    EXPECT_TRUE((x >= -4 && x < -2) || (x >= 2 && x < 4));
  }
}

TEST(Grid, BallStencilArea) {
  auto s1 = ball_stencil(1, 10.3);
  EXPECT_NEAR(s1.total, 20.6, 1e-12);
  auto s2 = ball_stencil(2, 8.0);
  EXPECT_NEAR(s2.total / (std::numbers::pi * 64), 1.0, 2e-3);
}

TEST(Grid, GridfnRoundTrip) {
  GridSpec s{2, 4, 16};
  auto f = GridFunction::sample(s, [](const Point& x) { return x[0] * 3 - x[1]; });
  std::stringstream ss;
  write_gridfn(ss, f);
  auto back = std::get<GridFunction>(read_gridfn(ss));
  EXPECT_EQ(back.spec(), s);
  EXPECT_EQ(back.values(), f.values());

  auto c = ComplexGridFunction::sample(GridSpec{1, 2, 32}, [](const Point& x) { return complex(x[0], 1); });
  std::stringstream cs;
  write_gridfn(cs, c);
  EXPECT_EQ(std::get<ComplexGridFunction>(read_gridfn(cs)).values(), c.values());

  std::stringstream bad("GRIDFN2 1 16 1 f64\n");
  EXPECT_THROW(read_gridfn(bad), Error);
}

TEST(Grid, CsvImport) {
  std::stringstream ss;
  ss << "x,value\n";
  for (int i = 0; i < 16; ++i) ss << -1 + i / 8.0 << "," << i << "\n";
  auto f = read_csv_1d(ss, 1);
  EXPECT_EQ(f.size(), 16u);
  EXPECT_EQ(f[5], 5.0);
}
