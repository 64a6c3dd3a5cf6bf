#include <gtest/gtest.h>

#include <random>

#include "oslab/lpaley.hpp"

using namespace oslab;

namespace {

ComplexGridFunction mode(const GridSpec& s, long k) {
  const double xi = std::numbers::pi * double(k) / s.half_width;
  return ComplexGridFunction::sample(s, [&](const Point& x) { return std::polar(1.0, xi * x[0]); });
}

GridFunction random_field(const GridSpec& s, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  return GridFunction::sample(s, [&](const Point& x) {
    return std::hypot(x[0], x[1]) < s.half_width / 2 ? g(rng) : 0.0;
  });
}

}  // namespace

TEST(LPaley, BumpValues) {
  EXPECT_EQ(BandBump::profile(3), 1.0);
  EXPECT_EQ(BandBump::profile(0.5), 0.0);
  EXPECT_EQ(BandBump::profile(9), 0.0);
  double prev = 0;
  for (int k = 0; k <= 64; ++k) {
    double v = BandBump::profile(1 + k / 64.0);
    EXPECT_GE(v, prev);
    prev = v;
  }
  for (int k = 0; k <= 64; ++k) {
    double v = BandBump::profile(4 + 4 * k / 64.0);
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(LPaley, BumpSandwichOnLattice) {
  for (GridSpec s : {GridSpec{1, 16, 1024}, GridSpec{2, 8, 64}}) {
    auto bump = make_band_bump(s);
    auto f = random_field(s, 1);
    Spectrum sp(f);
    for (std::size_t i = 0; i < f.size(); ++i) {
      double r = sp.frequency(i).norm(s.dim), v = bump(r);
      double lo = (r >= 2 && r < 4) ? 1 : 0, hi = (r >= 1 && r < 8) ? 1 : 0;
      EXPECT_LE(lo, v);
      EXPECT_LE(v, hi);
    }
  }
  EXPECT_THROW(make_band_bump(GridSpec{1, 2, 1024}), Error);
  EXPECT_THROW(make_band_bump(GridSpec{1, 64, 64}), Error);
}

TEST(LPaley, SingleModeProjection) {
  GridSpec s{1, 16, 512};
  auto bump = make_band_bump(s);
  const long k = 15;
  const double xi = std::numbers::pi * k / s.half_width;
  auto f = mode(s, k);
  for (double tau : {0.4, 1.0, 1.3, 2.0, 5.0}) {
    auto u = band_project(f, bump, tau);
    const double m = BandBump::profile(tau * xi);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(std::abs(u[i] - m * f[i]), 0.0, 1e-12);
  }
}

TEST(LPaley, ProjectionContracts) {
  GridSpec s{2, 8, 64};
  auto bump = make_band_bump(s);
  auto f = random_field(s, 4);
  double nf = 0;
  for (double v : f.values()) nf += v * v;
  for (double tau : {0.1, 0.5, 2.0}) {
    auto u = band_project(f, bump, tau);
    double nu = 0;
    for (double v : u.values()) nu += v * v;
    EXPECT_LE(nu, nf * (1 + 1e-12));
  }
}

TEST(LPaley, GOfSingleModeMatchesScalarOracle) {
  GridSpec s{1, 16, 512};
  auto bump = make_band_bump(s);
  auto cfg = LPConfig::defaults(s, 2, 2);
  const long k = 9;
  const double xi = std::numbers::pi * k / s.half_width;
  double want = 0;
  for (std::size_t j = 0; j < cfg.tau_grid.size(); ++j)
    want += cfg.log_weights[j] * std::pow(BandBump::profile(cfg.tau_grid[j] * xi), 2);
  want = std::sqrt(want);
  auto g = g_function(mode(s, k), bump, cfg);
  for (double v : g.values()) EXPECT_NEAR(v, want, 1e-12);
  // continuous value: int phi(u)^2 du/u over log scale, at least log 2 from the plateau
  EXPECT_GT(want * want, std::log(2.0));
}

TEST(LPaley, ZeroInputGivesZero) {
  GridSpec s{1, 16, 256};
  auto bump = make_band_bump(s);
  auto cfg = LPConfig::defaults(s, 2, 2);
  GridFunction z(s, std::vector<double>(s.size(), 0.0));
  for (const auto& r : {g_function(z, bump, cfg), lusin_S(z, bump, cfg), g_lambda_star(z, bump, cfg)})
    for (double v : r.values()) EXPECT_EQ(v, 0.0);
}

TEST(LPaley, AreaFunctionAgainstGStar) {
  // The cone weight is bounded by 2^{lambda n} times the g*-weight, so S <= 2^{lambda n/2} g* holds pointwise.
  for (GridSpec s : {GridSpec{1, 16, 512}, GridSpec{2, 8, 64}}) {
    auto bump = make_band_bump(s);
    auto cfg = LPConfig::defaults(s, 0.8, 1.5);
    auto f = random_field(s, 7);
    auto S = lusin_S(f, bump, cfg), G = g_lambda_star(f, bump, cfg);
    const double c = std::pow(2.0, cfg.lambda * s.dim / 2);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_LE(S[i], c * G[i] * (1 + 1e-9) + 1e-12);
  }
}

TEST(LPaley, PoissonMaximal) {
  GridSpec s{1, 16, 256};
  std::vector<double> sg;
  for (int j = -6; j <= 4; ++j) sg.push_back(std::ldexp(1.0, j));
  GridFunction one(s, std::vector<double>(s.size(), 1.0));
  auto p1 = poisson_maximal(one, sg);
  for (double v : p1.values()) EXPECT_NEAR(v, 1.0, 1e-12);
  const long k = 5;
  const double xi = std::numbers::pi * k / s.half_width;
  auto pm = poisson_maximal(mode(s, k), sg);
  for (double v : pm.values()) EXPECT_NEAR(v, std::exp(-sg.front() * xi), 1e-12);
}
