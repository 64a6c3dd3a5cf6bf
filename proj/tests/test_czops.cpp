#include <gtest/gtest.h>

#include "oslab/czops.hpp"

using namespace oslab;

namespace {

const GridSpec kLine{1, 8, 512};
const GridSpec kPlane{2, 4, 64};

double l2(const GridFunction& f) {
  double s = 0;
  for (double v : f.values()) s += v * v;
  return std::sqrt(s);
}

}  // namespace

TEST(CZ, HilbertOfCosineIsSine) {
  for (long k : {1L, 7L, 100L}) {
    const double xi = std::numbers::pi * double(k) / kLine.half_width;
    auto f = GridFunction::sample(kLine, [&](const Point& x) { return std::cos(xi * x[0]); });
    auto h = apply_cz(CZKernel{}, f);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(h[i], std::sin(xi * f.point(i)[0]), 1e-12);
  }
}

TEST(CZ, ContractionAndZero) {
  auto f = GridFunction::sample(kLine, [](const Point& x) { return std::exp(-x[0] * x[0]) * (1 + x[0]); });
  EXPECT_LE(l2(apply_cz(CZKernel{}, f)), l2(f) * (1 + 1e-12));
  GridFunction z(kLine, std::vector<double>(kLine.size(), 0.0));
  for (double v : apply_cz(CZKernel{}, z).values()) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(apply_cz(CZKernel{CZKind::riesz1}, f), Error);
  EXPECT_THROW(apply_cz(CZKernel{CZKind::truncated_power_sign}, f), Error);
}

TEST(CZ, HilbertOfEvenIsOdd) {
  // reflection x -> -x maps index i to N - i on the lattice
  auto f = GridFunction::sample(kLine, [](const Point& x) { return std::exp(-x[0] * x[0]); });
  auto h = apply_cz(CZKernel{}, f);
  const std::size_t n = kLine.points_per_axis;
  for (std::size_t i = 1; i < n; ++i) EXPECT_NEAR(h[i], -h[n - i], 1e-12);
}

TEST(CZ, TranslationCovariance) {
  auto f = GridFunction::sample(kLine, [](const Point& x) { return std::exp(-x[0] * x[0]) * x[0] * x[0]; });
  const std::size_t n = kLine.points_per_axis, s = 17;
  std::vector<double> shifted(n);
  for (std::size_t i = 0; i < n; ++i) shifted[(i + s) % n] = f[i];
  auto a = apply_cz(CZKernel{}, GridFunction(kLine, shifted));
  auto b = apply_cz(CZKernel{}, f);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(a[(i + s) % n], b[i], 1e-12);
}

TEST(CZ, RieszIsometryOnMeanZero) {
  auto f = GridFunction::sample(kPlane, [](const Point& x) {
    return std::exp(-x[0] * x[0] - 2 * x[1] * x[1]) * x[0] * (1 + x[1]);
  });
  // remove the mean and the Nyquist content, which the symbols annihilate
  auto clean = apply_symbol(f, [](const Frequency& fr) { return complex(fr.nyquist || (fr.bin[0] == 0 && fr.bin[1] == 0) ? 0 : 1); });
  auto r1 = apply_cz(CZKernel{CZKind::riesz1}, clean), r2 = apply_cz(CZKernel{CZKind::riesz2}, clean);
  EXPECT_NEAR(std::pow(l2(r1), 2) + std::pow(l2(r2), 2), std::pow(l2(clean), 2), 1e-10 * std::pow(l2(clean), 2));
}

TEST(CZ, DirectSumApproachesMultiplier) {
  auto f = GridFunction::sample(kLine, [](const Point& x) { return std::exp(-x[0] * x[0]) * x[0]; });
  auto m = apply_cz(CZKernel{}, f);
  CZKernel d{CZKind::hilbert, 1, 0, Realization::direct};
  auto g = apply_cz(d, f);
  // compare away from the box edge, where the periodic images differ
  double gap = 0, scale = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::abs(f.point(i)[0]) < 3) {
      gap = std::max(gap, std::abs(g[i] - m[i]));
      scale = std::max(scale, std::abs(m[i]));
    }
  EXPECT_LT(gap / scale, 0.1);
}

TEST(CZ, HilbertRegularityConstant) {
  CZKernel k;
  double prev = 0;
  for (int level = 0; level < 4; ++level) {
    double c = kernel_regularity_check(k, regularity_samples(1, level), 1);
    EXPECT_GE(c, prev);
    prev = c;
  }
  EXPECT_NEAR(prev, 2 / std::numbers::pi, 1e-9);
  double c0 = kernel_regularity_check(k, regularity_samples(1, 2), 1);
  double c1 = kernel_regularity_check(k, regularity_samples(1, 3), 1);
  EXPECT_NEAR(c1 / c0, 1.0, 0.05);
  EXPECT_EQ(kernel_regularity_check(k, {{Point{1, 0}, Point{0, 0}}}, 1), 0.0);
  CZKernel r{CZKind::riesz1};
  double cr = kernel_regularity_check(r, regularity_samples(2, 1), 2);
  EXPECT_TRUE(std::isfinite(cr));
  EXPECT_GT(cr, 0);
}

TEST(CZ, WindowAndFarField) {
  SliceSpaceParams p{0.5, 0.8, OrliczFunction::power(0.8), false};
  auto cfg = MaximalConfig::defaults(kLine, 0.8, 0.8);
  auto a = synthesize_atom(kLine, Cube{{0.25, 0}, 0.5}, INFINITY, 1, p, 5);
  auto ff = far_field_check(CZKernel{}, a, p, cfg.scales, cfg.radii);
  EXPECT_EQ(ff.probes, 32u);
  EXPECT_TRUE(std::isfinite(ff.c_maximal));
  EXPECT_GT(ff.c_decay, 0);
  auto rep = cz_boundedness_report(CZKernel{}, {a.payload}, p, {0.25, 0.5}, cfg.scales);
  ASSERT_EQ(rep.size(), 2u);
  EXPECT_GT(rep[0].slice_over_hardy.at(0), 0);
  SliceSpaceParams bad{0.5, 2, OrliczFunction::power(2), false};
  EXPECT_THROW(cz_boundedness_report(CZKernel{}, {a.payload}, bad, {0.5}, cfg.scales), Error);
}
