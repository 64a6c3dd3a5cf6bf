#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <vector>

#include "oslab/grid.hpp"

namespace oslab {

inline std::vector<std::array<int, 2>> multi_indices(int dim, int degree) {
  std::vector<std::array<int, 2>> out;
  for (int total = 0; total <= degree; ++total)
    for (int a = total; a >= 0; --a) {
      int b = total - a;
      if (dim == 1 && b != 0) continue;
      out.push_back({a, b});
    }
  return out;
}

inline double monomial(const Point& x, const std::array<int, 2>& alpha, int dim) {
  double v = std::pow(x[0], alpha[0]);
  if (dim == 2) v *= std::pow(x[1], alpha[1]);
  return v;
}

// Polynomial of degree <= d in the scaled variable (x - center) / scale.
struct Polynomial {
  int dim = 1;
  int degree = 0;
  Point center{0, 0};
  double scale = 1;
  std::vector<double> coef;

  double operator()(const Point& x) const {
    Point u{(x[0] - center[0]) / scale, (x[1] - center[1]) / scale};
    auto idx = multi_indices(dim, degree);
    double s = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) s += coef[k] * monomial(u, idx[k], dim);
    return s;
  }
};

// Weighted least squares fit over the listed grid points.
template <class T>
Polynomial fit_polynomial(const BasicGridFunction<T>& f, const std::vector<std::size_t>& pts, int degree,
                          const Point& center, double scale, const std::vector<double>* weights = nullptr) {
  const int dim = f.dim();
  auto idx = multi_indices(dim, degree);
  Polynomial p{dim, degree, center, scale, std::vector<double>(idx.size(), 0.0)};
  if (pts.empty()) return p;
  Eigen::MatrixXd a(pts.size(), idx.size());
  Eigen::VectorXd b(pts.size());
  for (std::size_t r = 0; r < pts.size(); ++r) {
    Point x = f.point(pts[r]);
    Point u{(x[0] - center[0]) / scale, (x[1] - center[1]) / scale};
    double w = weights ? std::sqrt((*weights)[r]) : 1.0;
    for (std::size_t c = 0; c < idx.size(); ++c) a(Eigen::Index(r), Eigen::Index(c)) = w * monomial(u, idx[c], dim);
    b(Eigen::Index(r)) = w * double(std::real(f[pts[r]]));
  }
  Eigen::VectorXd sol = a.colPivHouseholderQr().solve(b);
  for (std::size_t c = 0; c < idx.size(); ++c) p.coef[c] = sol(Eigen::Index(c));
  return p;
}

// Near-best L^r fit by iteratively reweighted least squares; gap is the relative objective change
// over the final sweep.
struct LrFit {
  Polynomial poly;
  double objective = 0;
  double gap = 0;
};

template <class T>
LrFit fit_polynomial_lr(const BasicGridFunction<T>& f, const std::vector<std::size_t>& pts, int degree,
                        const Point& center, double scale, double r, int sweeps = 30) {
  LrFit out;
  out.poly = fit_polynomial(f, pts, degree, center, scale);
  auto objective = [&](const Polynomial& p) {
    double s = 0;
    for (auto i : pts) s += std::pow(std::abs(double(std::real(f[i])) - p(f.point(i))), r);
    return s;
  };
  out.objective = objective(out.poly);
  if (r == 2 || pts.empty()) return out;
  std::vector<double> w(pts.size());
  double prev = out.objective;
  for (int it = 0; it < sweeps; ++it) {
    double scale_res = 0;
    for (std::size_t k = 0; k < pts.size(); ++k)
      scale_res = std::max(scale_res, std::abs(double(std::real(f[pts[k]])) - out.poly(f.point(pts[k]))));
    const double floor = std::max(1e-12, 1e-8 * scale_res);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      double res = std::abs(double(std::real(f[pts[k]])) - out.poly(f.point(pts[k])));
      w[k] = std::pow(std::max(res, floor), r - 2);
    }
    Polynomial next = fit_polynomial(f, pts, degree, center, scale, &w);
    double obj = objective(next);
    if (obj <= prev) {
      out.gap = (prev - obj) / std::max(prev, 1e-300);
      out.poly = next;
      out.objective = obj;
      prev = obj;
    } else {
      out.gap = 0;
      break;
    }
  }
  return out;
}

}  // namespace oslab
