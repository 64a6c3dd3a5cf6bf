#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "oslab/atoms.hpp"
#include "oslab/fft.hpp"
#include "oslab/grid.hpp"
#include "oslab/maximal.hpp"
#include "oslab/norms.hpp"

namespace oslab {

enum class CZKind { hilbert, riesz1, riesz2, truncated_power_sign };
enum class Realization { multiplier, direct };

inline std::string to_string(CZKind k) {
  switch (k) {
    case CZKind::hilbert: return "hilbert";
    case CZKind::riesz1: return "riesz1";
    case CZKind::riesz2: return "riesz2";
    case CZKind::truncated_power_sign: return "truncated_power_sign";
  }
  return "?";
}

inline CZKind parse_cz_kind(const std::string& s) {
  if (s == "hilbert") return CZKind::hilbert;
  if (s == "riesz1") return CZKind::riesz1;
  if (s == "riesz2") return CZKind::riesz2;
  if (s == "truncated_power_sign" || s == "tps") return CZKind::truncated_power_sign;
  throw Error(ErrorKind::invalid_argument, "unknown kernel: " + s);
}

inline Realization parse_realization(const std::string& s) {
  if (s == "mult" || s == "multiplier") return Realization::multiplier;
  if (s == "direct") return Realization::direct;
  throw Error(ErrorKind::unsupported_realization, "unknown realization: " + s);
}

struct CZKernel {
  CZKind kind = CZKind::hilbert;
  double delta = 1;
  double eps = 0;  // truncation radius for the direct sum; 0 means 2h
  Realization realization = Realization::multiplier;

  int dim() const { return kind == CZKind::hilbert ? 1 : kind == CZKind::truncated_power_sign ? 0 : 2; }

  // k(x); the power-sign kernel is sign(x_1)|x|^{-n}.
  double operator()(const Point& x, int n) const {
    switch (kind) {
      case CZKind::hilbert: return 1 / (std::numbers::pi * x[0]);
      case CZKind::riesz1:
      case CZKind::riesz2: {
        const double r = std::hypot(x[0], x[1]);
        return (kind == CZKind::riesz1 ? x[0] : x[1]) / (2 * std::numbers::pi * r * r * r);
      }
      case CZKind::truncated_power_sign: {
        const double r = n == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
        return (x[0] > 0 ? 1.0 : x[0] < 0 ? -1.0 : 0.0) / std::pow(r, n);
      }
    }
    return 0;
  }

  // Fourier symbol; zero frequency and the unpaired Nyquist bins get 0.
  complex symbol(const Frequency& fr, int n) const {
    if (fr.nyquist) return 0;
    const double r = fr.norm(n);
    if (r == 0) return 0;
    switch (kind) {
      case CZKind::hilbert: return complex(0, fr.xi[0] > 0 ? -1.0 : 1.0);
      case CZKind::riesz1: return complex(0, -fr.xi[0] / r);
      case CZKind::riesz2: return complex(0, -fr.xi[1] / r);
      case CZKind::truncated_power_sign: break;
    }
    throw Error(ErrorKind::unsupported_realization, "no closed-form symbol for this kernel");
  }
};

inline void check_kernel_dim(const CZKernel& k, int n) {
  require(k.dim() == 0 || k.dim() == n, ErrorKind::dimension_mismatch,
          to_string(k.kind) + " is defined in dimension " + std::to_string(k.dim()));
  require(k.delta > 0 && k.delta <= 1, ErrorKind::invalid_argument, "delta must lie in (0, 1]");
}

inline GridFunction apply_cz(const CZKernel& k, const GridFunction& f) {
  const GridSpec& spec = f.spec();
  const int n = spec.dim;
  check_kernel_dim(k, n);
  if (k.realization == Realization::multiplier) {
    auto u = Spectrum(f).apply([&](const Frequency& fr) { return k.symbol(fr, n); });
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i].real();
    return GridFunction(spec, std::move(out));
  }
  const double h = spec.spacing(), vol = spec.cell_volume();
  const double eps = k.eps > 0 ? k.eps : 2 * h;
  const int reach = int(spec.points_per_axis) - 1;
  LinearConvolver conv(spec, reach, 0);
  auto kh = conv.kernel_spectrum([&](int a, int b) {
    Point z{a * h, b * h};
    const double r = n == 1 ? std::abs(z[0]) : std::hypot(z[0], z[1]);
    return r >= eps - 1e-12 * h ? k(z, n) * vol : 0.0;
  });
  auto full = conv.apply(conv.spectrum(f.values()), kh);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = full[i].real();
  return GridFunction(spec, std::move(out));
}

// Nested sample pairs (x, y) with |x| >= 2|y|: |x| on a log grid in [1e-2, 1e2], y/|x| on a polar grid
// of radius up to 1/2. Level l+1 contains level l.
inline std::vector<std::pair<Point, Point>> regularity_samples(int dim, int level) {
  std::vector<std::pair<Point, Point>> out;
  const int m = 4 << level;
  for (int a = 0; a <= m; ++a) {
    const double rx = std::pow(10.0, -2 + 4.0 * a / m);
    const int dirs_x = dim == 1 ? 1 : m;
    for (int dx = 0; dx < dirs_x; ++dx) {
      const double th = 2 * std::numbers::pi * dx / dirs_x;
      Point x{rx * std::cos(th), dim == 2 ? rx * std::sin(th) : 0.0};
      for (int b = 0; b <= m; ++b) {
        const double ry = 0.5 * rx * b / m;
        const int dirs_y = dim == 1 ? 2 : m;
        for (int dy = 0; dy < dirs_y; ++dy) {
          double ph = dim == 1 ? (dy == 0 ? 0 : std::numbers::pi) : 2 * std::numbers::pi * dy / dirs_y;
          Point y{ry * std::cos(ph), dim == 2 ? ry * std::sin(ph) : 0.0};
          if (dim == 1) y[0] = dy == 0 ? ry : -ry;
          out.push_back({x, y});
        }
      }
    }
  }
  return out;
}

// max |k(x - y) - k(x)| |x|^{n+delta} / |y|^delta over the pairs; pairs with y = 0 contribute 0.
inline double kernel_regularity_check(const CZKernel& k, const std::vector<std::pair<Point, Point>>& pairs, int n) {
  double c = 0;
  for (const auto& [x, y] : pairs) {
    const double ny = n == 1 ? std::abs(y[0]) : std::hypot(y[0], y[1]);
    const double nx = n == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
    if (ny == 0) continue;
    require(nx >= 2 * ny * (1 - 1e-12), ErrorKind::invalid_argument, "regularity samples need |x| >= 2|y|");
    const double diff = std::abs(k({x[0] - y[0], x[1] - y[1]}, n) - k(x, n));
    c = std::max(c, diff * std::pow(nx, n + k.delta) / std::pow(ny, k.delta));
  }
  return c;
}

inline void check_cz_window(const SliceSpaceParams& p, int n, double delta) {
  const double m = std::min(p.phi.p_minus(), p.q);
  require(m > n / (n + delta) && m <= 1, ErrorKind::parameter_window_violation,
          "min(p-, q) must lie in (n/(n+delta), 1]");
}

struct CZRatios {
  double t = 1;
  std::vector<double> slice_over_hardy;  // ||Tf||_(E) / ||f||_(HE)
  std::vector<double> hardy_over_hardy;  // ||Tf||_(HE) / ||f||_(HE)
};

// ||Ta|| / hardy_norm(a) in the slice and Hardy norms at each t; zero inputs are skipped.
inline std::vector<CZRatios> cz_boundedness_report(const CZKernel& k, const std::vector<GridFunction>& corpus,
                                                   const SliceSpaceParams& params, const std::vector<double>& t_sweep,
                                                   const std::vector<double>& scales) {
  std::vector<CZRatios> out;
  if (corpus.empty()) {
    for (double t : t_sweep) out.push_back({t, {}, {}});
    return out;
  }
  const int n = corpus.front().dim();
  check_kernel_dim(k, n);
  check_cz_window(params, n, k.delta);
  const auto phi = TestFunction::gaussian(n);
  std::vector<GridFunction> tf, mf, mtf;
  for (const auto& f : corpus) {
    tf.push_back(apply_cz(k, f));
    mf.push_back(radial_maximal(f, phi, scales));
    mtf.push_back(radial_maximal(tf.back(), phi, scales));
  }
  for (double t : t_sweep) {
    SliceSpaceParams p = params;
    p.t = t;
    p.enforce_margin = false;
    CZRatios r{t, {}, {}};
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const double hf = slice_norm(mf[i], p);
      if (hf == 0) continue;
      r.slice_over_hardy.push_back(slice_norm(tf[i], p) / hf);
      r.hardy_over_hardy.push_back(slice_norm(mtf[i], p) / hf);
    }
    out.push_back(std::move(r));
  }
  return out;
}

struct FarFieldResult {
  double c_maximal = 0;  // max of M(Ta)(x) slice(chi_Q) / [M chi_Q(x)]^{(n+delta)/n}
  double c_decay = 0;    // max of |Ta(x)| slice(chi_Q) |x - x_Q|^{n+delta} / r_Q^{n+delta}
  std::size_t probes = 0;
};

// Probe points outside 4 sqrt(n) Q, spread over directions and distances inside the box.
inline std::vector<std::size_t> far_field_probes(const GridSpec& spec, const Cube& q, std::size_t count) {
  const int n = spec.dim;
  const double inner = 2 * std::sqrt(double(n)) * q.side;
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    Point x = GridFunction::point_of(spec, i);
    // keep Q as the nearest periodic image so the multiplier realization sees no wrap-around
    bool nearest = true;
    for (int a = 0; a < n; ++a) nearest = nearest && std::abs(x[a] - q.center[a]) <= spec.half_width;
    if (nearest && norm_inf(x, q.center, n) > inner) cand.push_back(i);
  }
  std::vector<std::size_t> out;
  if (cand.empty()) return out;
  for (std::size_t k = 0; k < std::min(count, cand.size()); ++k)
    out.push_back(cand[std::min(cand.size() - 1, (k * cand.size()) / count + (cand.size() / count) / 2)]);
  return out;
}

inline FarFieldResult far_field_check(const CZKernel& k, const AtomSpec& a, const SliceSpaceParams& params,
                                      const std::vector<double>& scales, const std::vector<double>& radii,
                                      std::size_t probes = 32) {
  const GridSpec& spec = a.payload.spec();
  const int n = spec.dim;
  check_kernel_dim(k, n);
  auto ta = apply_cz(k, a.payload);
  auto mta = radial_maximal(ta, TestFunction::gaussian(n), scales);
  const double chi = cube_slice_norm(spec, a.Q.side, params);
  auto qpts = cube_points(spec, a.Q);
  const double vol = spec.cell_volume(), rq = a.Q.side / 2;
  FarFieldResult res;
  for (auto i : far_field_probes(spec, a.Q, probes)) {
    Point x = GridFunction::point_of(spec, i);
    // centered maximal function of chi_Q at x over the radius set
    std::vector<double> dq;
    for (auto j : qpts) dq.push_back(distance(x, GridFunction::point_of(spec, j), n));
    std::sort(dq.begin(), dq.end());
    double mchi = 0;
    for (double r : radii) {
      const auto inside = std::lower_bound(dq.begin(), dq.end(), r) - dq.begin();
      mchi = std::max(mchi, double(inside) * vol / (unit_ball_volume(n) * std::pow(r, n)));
    }
    if (mchi > 0) res.c_maximal = std::max(res.c_maximal, mta[i] * chi / std::pow(mchi, (n + k.delta) / n));
    const double dist = distance(x, a.Q.center, n);
    res.c_decay = std::max(res.c_decay, std::abs(ta[i]) * chi * std::pow(dist / rq, n + k.delta));
    ++res.probes;
  }
  return res;
}

}  // namespace oslab
