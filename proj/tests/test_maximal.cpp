#include <gtest/gtest.h>

#include <random>

#include "oslab/maximal.hpp"

using namespace oslab;

namespace {

GridFunction random_field(const GridSpec& s, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  return GridFunction::sample(s, [&](const Point& x) {
    double r = std::hypot(x[0], x[1]);
    return r < s.half_width / 2 ? g(rng) : 0.0;
  });
}

}  // namespace

TEST(Maximal, CenteredOfIndicator) {
  GridSpec s{1, 8, 1024};
  auto f = GridFunction::sample(s, [](const Point& x) { return std::abs(x[0]) <= 1 ? 1.0 : 0.0; });
  auto cfg = MaximalConfig::defaults(s, 2, 2);
  auto m = hl_centered(f, cfg);
  // At x = 2 the best centered ball is B(2, 3), average 2/6.
  std::size_t i = std::size_t((2 + 8) / s.spacing());
  EXPECT_NEAR(m[i], 1.0 / 3, 2 * s.spacing());
  EXPECT_DOUBLE_EQ(m[std::size_t(8 / s.spacing())], 1.0);
}

TEST(Maximal, UncenteredOfIndicator) {
  GridSpec s{1, 8, 1024};
  auto f = GridFunction::sample(s, [](const Point& x) { return x[0] >= 0 && x[0] <= 1 ? 1.0 : 0.0; });
  auto m = hl_uncentered(f, MaximalConfig::defaults(s, 2, 2));
  // x = 1.5: the ball (0, 1.5+) contains x and the whole support, average 1/1.5
  std::size_t i = std::size_t((1.5 + 8) / s.spacing());
  EXPECT_NEAR(m[i], 2.0 / 3, 2 * s.spacing());
}

TEST(Maximal, ConstantAwayFromBoundary) {
  GridSpec s{1, 8, 512};
  auto f = GridFunction::sample(s, [](const Point&) { return 2.5; });
  auto cfg = MaximalConfig::defaults(s, 2, 2);
  cfg.radii = {s.spacing(), 4 * s.spacing(), 0.5, 1};
  auto c = hl_centered(f, cfg), u = hl_uncentered(f, cfg);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(f.point(i)[0]) > 5) continue;
    EXPECT_NEAR(c[i], 2.5, 1e-12);
    EXPECT_NEAR(u[i], 2.5, 1e-12);
  }
}

TEST(Maximal, Sublinear) {
  for (GridSpec s : {GridSpec{1, 8, 512}, GridSpec{2, 4, 32}}) {
    auto f = random_field(s, 11), g = random_field(s, 12);
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i] + g[i];
    GridFunction fg(s, v);
    auto cfg = MaximalConfig::defaults(s, 2, 2);
    auto mf = hl_centered(f, cfg), mg = hl_centered(g, cfg), mfg = hl_centered(fg, cfg);
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_LE(mfg[i], (mf[i] + mg[i]) * (1 + 1e-12) + 1e-14);
  }
}

TEST(Maximal, CenteredBelowUncentered) {
  for (GridSpec s : {GridSpec{1, 8, 512}, GridSpec{2, 4, 32}}) {
    auto f = random_field(s, 3);
    auto cfg = MaximalConfig::defaults(s, 2, 2);
    auto c = hl_centered(f, cfg), u = hl_uncentered(f, cfg);
    for (std::size_t i = 0; i < f.size(); ++i) {
      EXPECT_LE(c[i], u[i] * (1 + 1e-12) + 1e-14);
      EXPECT_GE(c[i] * (1 + 1e-12) + 1e-12, std::abs(f[i]));
    }
  }
}

TEST(Maximal, WindowMaxMatchesBruteForce2D) {
  GridSpec s{2, 1, 32};
  auto f = random_field(s, 5);
  std::vector<double> v(f.values());
  for (double radius : {0.05, 0.0625, 0.19, 0.5}) {
    auto w = window_max(v, s, radius);
    for (std::size_t i = 0; i < v.size(); i += 7) {
      double best = -1e300;
      for (std::size_t j = 0; j < v.size(); ++j)
        if (distance(f.point(i), f.point(j), 2) < radius - 1e-12) best = std::max(best, v[j]);
      EXPECT_DOUBLE_EQ(w[i], best) << "radius " << radius;
    }
  }
}

TEST(Maximal, PointwiseChains) {
  GridSpec s{1, 8, 512};
  auto f = random_field(s, 11);
  auto cfg = MaximalConfig::defaults(s, 0.8, 0.8);
  auto phi = TestFunction::gaussian(1);
  const double a = 1, b = cfg.peetre_b;
  auto rad = radial_maximal(f, phi, cfg.scales);
  auto nt = nontangential_maximal(f, phi, a, cfg.scales);
  auto pe = peetre_maximal(f, phi, b, cfg.scales);
  auto g0 = grand_maximal(f, cfg, GrandKind::radial);
  auto gn = grand_maximal(f, cfg, GrandKind::nontangential);
  auto gp = grand_maximal(f, cfg, GrandKind::peetre);
  const double k = std::pow(1 + a, b);
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_LE(rad[i], nt[i]);
    EXPECT_LE(nt[i], k * pe[i] * (1 + 1e-12));
    EXPECT_LE(rad[i], pe[i]);
    EXPECT_LE(g0[i], gn[i]);
    EXPECT_LE(gn[i], std::pow(2.0, b) * gp[i] * (1 + 1e-12));
  }
}

TEST(Maximal, ApertureLimitIsRadial) {
  GridSpec s{2, 2, 32};
  auto f = random_field(s, 13);
  auto cfg = MaximalConfig::defaults(s, 2, 2);
  auto phi = TestFunction::gaussian(2);
  const double a = s.spacing() / cfg.scales.back();
  auto nt = nontangential_maximal(f, phi, a, cfg.scales);
  auto rad = radial_maximal(f, phi, cfg.scales);
  EXPECT_EQ(nt.values(), rad.values());
}

TEST(Maximal, ZeroIntegralRejected) {
  GridSpec s{1, 8, 256};
  auto f = random_field(s, 1);
  TestFunction odd{1, {1, 0}, 1.0};
  EXPECT_THROW(radial_maximal(f, odd, {0.5}), Error);
}

TEST(Maximal, DictionaryNormalization) {
  for (int dim : {1, 2}) {
    const int order = 3;
    for (const auto& phi : grand_dictionary(dim, order)) {
      EXPECT_NEAR(schwartz_seminorm(phi, order), 1.0, 1e-12);
      // analytic derivatives against centered differences
      const double eps = 1e-5;
      for (double x : {-1.3, 0.2, 2.1}) {
        Point p{x, dim == 2 ? 0.7 : 0.0};
        Point pp = p, pm = p;
        pp[0] += eps;
        pm[0] -= eps;
        double fd = (phi(pp) - phi(pm)) / (2 * eps);
        EXPECT_NEAR(fd, phi.derivative(p, {1, 0}), 1e-7);
      }
    }
  }
}

TEST(Maximal, GaussianRadialOfSmoothFunction) {
  // M(f, phi) >= |phi_s * f| at the finest scale, which tends to f for smooth f.
  GridSpec s{1, 8, 1024};
  auto f = GridFunction::sample(s, [](const Point& x) { return std::exp(-x[0] * x[0]); });
  auto cfg = MaximalConfig::defaults(s, 2, 2);
  auto m = radial_maximal(f, TestFunction::gaussian(1), cfg.scales);
  std::size_t mid = s.points_per_axis / 2;
  EXPECT_NEAR(m[mid], 1.0, 1e-3);
}

TEST(Maximal, FeffermanSteinRatioAtLeastOne) {
  GridSpec s{1, 8, 512};
  std::vector<GridFunction> fam;
  for (unsigned k = 0; k < 4; ++k) fam.push_back(random_field(s, 20 + k));
  auto cfg = MaximalConfig::defaults(s, 2, 2);
  auto res = fefferman_stein_check(fam, 2, {0.5, 2, OrliczFunction::power(2)}, cfg);
  EXPECT_GE(res.ratio, 1.0);
  EXPECT_LT(res.ratio, 10.0);
  EXPECT_THROW(fefferman_stein_check(fam, 2, {0.5, 0.8, OrliczFunction::power(0.8)}, cfg), Error);
}
