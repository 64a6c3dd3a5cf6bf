#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "oslab/fft.hpp"
#include "oslab/grid.hpp"
#include "oslab/maximal.hpp"

namespace oslab {

namespace detail {

inline double smooth_step(double x) {
  auto e = [](double u) { return u > 0 ? std::exp(-1 / u) : 0.0; };
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  return e(x) / (e(x) + e(1 - x));
}

}  // namespace detail

// Radial band profile: 1 on [2,4], 0 off (1,8), exp(-1/u) bridges on [1,2] and [4,8].
struct BandBump {
  GridSpec spec;

  static double profile(double u) {
    if (u <= 1 || u >= 8) return 0;
    if (u < 2) return detail::smooth_step(u - 1);
    if (u <= 4) return 1;
    return detail::smooth_step((8 - u) / 4);
  }

  double operator()(double xi_norm) const { return profile(xi_norm); }
};

inline BandBump make_band_bump(const GridSpec& spec) {
  spec.validate();
  const double step = std::numbers::pi / spec.half_width, nyquist = std::numbers::pi / spec.spacing();
  require(step <= 1 && nyquist >= 8, ErrorKind::insufficient_resolution,
          "frequency lattice must resolve 1 <= |xi| <= 8 (need L >= pi and h <= pi/8)");
  return {spec};
}

struct LPConfig {
  std::vector<double> tau_grid;
  std::vector<double> log_weights;  // trapezoid weights in log tau
  double lambda = 2;

  // tau from h/8 to 16L with M points per octave; lambda = 1 + 2/min(p-, q) + 1/2.
  static LPConfig defaults(const GridSpec& spec, double p_minus, double q, int per_octave = 4) {
    LPConfig c;
    const double lo = spec.spacing() / 8, hi = 16 * spec.half_width;
    const int steps = int(std::ceil(per_octave * std::log2(hi / lo) - 1e-9));
    const double dlog = std::log(2.0) / per_octave;
    for (int k = 0; k <= steps; ++k) c.tau_grid.push_back(lo * std::exp(dlog * k));
    c.log_weights.assign(c.tau_grid.size(), dlog);
    c.log_weights.front() *= 0.5;
    c.log_weights.back() *= 0.5;
    c.lambda = 1 + 2 / std::min(p_minus, q) + 0.5;
    return c;
  }
};

// phi(tau D) f = F^{-1}[phi(tau xi) F f]
template <class T>
BasicGridFunction<T> band_project(const BasicGridFunction<T>& f, const BandBump& bump, double tau) {
  const int dim = f.dim();
  return apply_symbol(f, [&](const Frequency& fr) { return complex(bump(tau * fr.norm(dim))); });
}

namespace detail {

template <class T>
std::vector<std::vector<double>> band_energies(const BasicGridFunction<T>& f, const BandBump& bump,
                                               const LPConfig& cfg) {
  std::vector<std::vector<double>> out;
  const Spectrum sp(f);
  const int dim = f.dim();
  for (double tau : cfg.tau_grid) {
    auto u = sp.apply([&](const Frequency& fr) { return bump(tau * fr.norm(dim)); });
    std::vector<double> e(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) e[i] = std::norm(u[i]);
    out.push_back(std::move(e));
  }
  return out;
}

// Periodic-free convolution of box data against a radial weight w(|z|/tau) on the lattice (zero extension).
inline std::vector<double> radial_smooth(const std::vector<double>& v, const GridSpec& spec, int reach,
                                         const std::function<double(double)>& weight) {
  const std::size_t n = spec.points_per_axis;
  std::vector<double> out(v.size(), 0.0);
  if (spec.dim == 1 && reach <= 96) {
    std::vector<double> w(std::size_t(2 * reach + 1));
    for (int k = -reach; k <= reach; ++k) w[std::size_t(k + reach)] = weight(std::abs(k));
    for (long i = 0; i < long(n); ++i) {
      double s = 0;
      for (long k = std::max(-long(reach), -i); k <= std::min(long(reach), long(n) - 1 - i); ++k)
        s += w[std::size_t(k + reach)] * v[std::size_t(i + k)];
      out[std::size_t(i)] = s;
    }
    return out;
  }
  LinearConvolver conv(spec, reach, 0);
  auto kh = conv.kernel_spectrum([&](int a, int b) { return weight(std::hypot(double(a), double(b))); });
  auto full = conv.apply(conv.spectrum(v), kh);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(0.0, full[i].real());
  return out;
}

}  // namespace detail

// g(f) = (sum_tau |phi(tau D) f|^2 dlog tau)^{1/2}
template <class T>
GridFunction g_function(const BasicGridFunction<T>& f, const BandBump& bump, const LPConfig& cfg) {
  auto e = detail::band_energies(f, bump, cfg);
  std::vector<double> s(f.size(), 0.0);
  for (std::size_t k = 0; k < e.size(); ++k)
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += cfg.log_weights[k] * e[k][i];
  for (auto& v : s) v = std::sqrt(v);
  return GridFunction(f.spec(), std::move(s));
}

// S(f)^2 = sum_tau dlog tau tau^{-n} sum_{|y - x| < tau} |phi(tau D) f(y)|^2 h^n
template <class T>
GridFunction lusin_S(const BasicGridFunction<T>& f, const BandBump& bump, const LPConfig& cfg) {
  const GridSpec& spec = f.spec();
  const double h = spec.spacing(), vol = spec.cell_volume();
  auto e = detail::band_energies(f, bump, cfg);
  std::vector<double> s(f.size(), 0.0);
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double tau = cfg.tau_grid[k], rho = tau / h;
    const int reach = int(std::min<long>(std::max(0L, detail::strict_floor(rho)), long(spec.points_per_axis)));
    auto cone = detail::radial_smooth(e[k], spec, reach, [&](double d) { return d < rho - 1e-9 ? 1.0 : 0.0; });
    const double c = cfg.log_weights[k] * vol / std::pow(tau, spec.dim);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += c * cone[i];
  }
  for (auto& v : s) v = std::sqrt(v);
  return GridFunction(spec, std::move(s));
}

// g*_lambda(f)^2 = sum_tau dlog tau tau^{-n} sum_y (tau/(tau + |x-y|))^{lambda n} |phi(tau D) f(y)|^2 h^n,
// weights below 1e-12 of the center value dropped.
template <class T>
GridFunction g_lambda_star(const BasicGridFunction<T>& f, const BandBump& bump, const LPConfig& cfg) {
  require(cfg.lambda > 1, ErrorKind::invalid_argument, "lambda must exceed 1");
  const GridSpec& spec = f.spec();
  const double h = spec.spacing(), vol = spec.cell_volume();
  const double expo = cfg.lambda * spec.dim;
  auto e = detail::band_energies(f, bump, cfg);
  std::vector<double> s(f.size(), 0.0);
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double tau = cfg.tau_grid[k], rho = tau / h;
    const double cutoff = rho * (std::pow(1e12, 1 / expo) - 1);
    const int reach = int(std::min<double>(std::ceil(cutoff), double(spec.points_per_axis - 1)));
    auto sm = detail::radial_smooth(e[k], spec, reach, [&](double d) {
      return d <= cutoff ? std::pow(rho / (rho + d), expo) : 0.0;
    });
    const double c = cfg.log_weights[k] * vol / std::pow(tau, spec.dim);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += c * sm[i];
  }
  for (auto& v : s) v = std::sqrt(v);
  return GridFunction(spec, std::move(s));
}

// max over s of |F^{-1}(e^{-s|xi|} F f)|
template <class T>
GridFunction poisson_maximal(const BasicGridFunction<T>& f, const std::vector<double>& s_grid) {
  std::vector<double> m(f.size(), 0.0);
  const int dim = f.dim();
  const Spectrum sp(f);
  for (double s : s_grid) {
    auto u = sp.apply([&](const Frequency& fr) { return std::exp(-s * fr.norm(dim)); });
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::max(m[i], std::abs(u[i]));
  }
  return GridFunction(f.spec(), std::move(m));
}

}  // namespace oslab
