#include <gtest/gtest.h>

#include <cmath>

#include "oslab/orlicz.hpp"

using namespace oslab;

TEST(Orlicz, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(OrliczFunction::power(2)(3.0), 9.0);
  // 1 / log(e + 1), frozen from an independent evaluation.
  EXPECT_NEAR(OrliczFunction::log_quotient()(1.0), 0.76146285961466, 1e-15);
  EXPECT_NEAR(OrliczFunction::power_log(2)(2.0), 4.0 * std::log(std::exp(1.0) + 2.0), 1e-14);
  EXPECT_EQ(OrliczFunction::power(0.8)(0.0), 0.0);
}

TEST(Orlicz, InverseRoundTrip) {
  for (auto phi : {OrliczFunction::power(0.8), OrliczFunction::power(2), OrliczFunction::log_quotient(),
                   OrliczFunction::power_log(1.5)}) {
    for (double y : log_grid(1e-6, 1e6, 61)) {
      double tau = phi.inverse(y);
      EXPECT_LE(std::abs(phi(tau) - y) / y, 1e-10) << phi.name() << " y=" << y;
    }
  }
}

TEST(Orlicz, InverseOutOfRange) {
  auto tab = OrliczFunction::tabulated({1e-3, 1, 10}, {1e-6, 1, 100});
  EXPECT_THROW(tab.inverse(1e3), Error);
  EXPECT_THROW(tab(11.0), Error);
}

TEST(Orlicz, TabulatedLogLogInterpolationIsExactForPowers) {
  auto grid = log_grid(1e-3, 1e3, 25);
  std::vector<double> vals;
  for (double x : grid) vals.push_back(std::pow(x, 1.5));
  auto tab = OrliczFunction::tabulated(grid, vals);
  for (double x : log_grid(2e-3, 9e2, 37)) EXPECT_NEAR(tab(x) / std::pow(x, 1.5), 1.0, 1e-12);
  auto est = estimate_types(tab, log_grid(1e-2, 1e2, 21), log_grid(1e-2, 1e1, 13));
  EXPECT_NEAR(est.p_lo, 1.5, 1e-9);
  EXPECT_NEAR(est.p_hi, 1.5, 1e-9);
}

TEST(Orlicz, TypesOfLogQuotient) {
  // Elasticity 1 - tau/((e+tau)log(e+tau)) stays in (0.68, 1); upper type 1 is approached, not attained.
  auto est = estimate_types(OrliczFunction::log_quotient(), log_grid(1e-3, 1e3, 31), log_grid(1e-4, 1e4, 41));
  EXPECT_LT(est.p_lo, 1.0);
  EXPECT_GT(est.p_lo, 0.68);
  EXPECT_LE(est.p_hi, 1.0);
  EXPECT_GE(est.p_hi, 1.0 - 0.05);
}

TEST(Orlicz, QuasiTriangle) {
  EXPECT_NEAR(check_quasi_triangle(OrliczFunction::power(2), 1, 1), 2.0, 1e-15);
  EXPECT_NEAR(check_quasi_triangle(OrliczFunction::power(0.5), 1, 1), std::sqrt(2.0) / 2, 1e-15);
}

TEST(Orlicz, RecordRoundTrip) {
  for (auto phi : {OrliczFunction::power(0.8), OrliczFunction::log_quotient(),
                   OrliczFunction::tabulated({0.1, 1, 2}, {0.01, 1, 4.5})}) {
    auto back = OrliczFunction::from_record(phi.to_record());
    EXPECT_TRUE(back == phi) << phi.name();
  }
  EXPECT_EQ(parse_orlicz("Power(0.8)").name(), "power(0.8)");
  EXPECT_EQ(parse_orlicz("LogQuotient").kind(), OrliczKind::log_quotient);
}

TEST(Conjugate, PowerClosedForms) {
  // Psi(y) = y (1 - 1/p) (y/p)^{1/(p-1)}: p=1.5 gives 4/27 at y=1, p=2 gives y^2/4.
  auto c15 = conjugate(OrliczFunction::power(1.5));
  EXPECT_NEAR(c15(1.0), 4.0 / 27.0, 1e-12);
  auto c2 = conjugate(OrliczFunction::power(2));
  for (double y : {0.01, 0.5, 1.0, 3.0, 100.0}) EXPECT_NEAR(c2(y) / (y * y / 4), 1.0, 1e-10);
  EXPECT_TRUE(c2.has_psi());
  EXPECT_NEAR(c2.psi()(2.0), 1.0, 1e-6);
}

TEST(Conjugate, YoungInequalityAndBracket) {
  for (auto phi : {OrliczFunction::power(1.5), OrliczFunction::power(3), OrliczFunction::power_log(2)}) {
    auto c = conjugate(phi);
    for (double x : log_grid(1e-2, 1e2, 17))
      for (double y : log_grid(1e-2, 1e2, 17)) EXPECT_LE(x * y, phi(x) + c(y) + 1e-9 * (1 + x * y));
    for (double t : log_grid(1e-3, 1e3, 100)) {
      double prod = phi.inverse(t) * c.inverse(t);
      EXPECT_GE(prod, t * (1 - 1e-9));
      EXPECT_LE(prod, 2 * t * (1 + 1e-9));
    }
  }
}

TEST(Conjugate, NonConvexInput) {
  EXPECT_THROW(conjugate(OrliczFunction::power(0.8)), Error);
  // sup_{tau<s} Phi(tau)/tau is attained as tau -> 0 for log_quotient, so the convex minorant is linear
  // and the conjugate vanishes below the slope 1/log(e + x_min) ~ 1.
  auto c = conjugate(OrliczFunction::log_quotient(), {}, true);
  EXPECT_NEAR(c.primal()(5.0) / c.primal()(1.0), 5.0, 1e-6);
  EXPECT_EQ(c(0.5), 0.0);
  EXPECT_THROW(c(2.0), Error);
}

TEST(Convexify, ConvexAndComparable) {
  // For Phi = tau^2: Phi~(t) = int_0^t s ds = t^2/2.
  auto cv = convexify(OrliczFunction::power(2));
  for (double t : {1e-3, 0.1, 1.0, 10.0}) EXPECT_NEAR(cv(t) / (t * t / 2), 1.0, 1e-5);
  auto lq = convexify(OrliczFunction::power_log(1));
  EXPECT_TRUE(is_convex_on(lq, log_grid(1e-6, 1e6, 200)));
}
