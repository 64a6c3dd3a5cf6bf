#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "oslab/fft.hpp"
#include "oslab/grid.hpp"
#include "oslab/norms.hpp"

namespace oslab {

inline double hermite(int m, double x) {
  double h0 = 1, h1 = 2 * x;
  if (m == 0) return h0;
  for (int k = 1; k < m; ++k) {
    double h2 = 2 * x * h1 - 2 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

// amplitude * prod_i H_{m_i}(x_i) * exp(-|x|^2)
struct TestFunction {
  int dim = 1;
  std::array<int, 2> order{0, 0};
  double amplitude = 1;

  static TestFunction gaussian(int dim) {
    return {dim, {0, 0}, std::pow(std::numbers::pi, -0.5 * dim)};
  }

  double operator()(const Point& x) const { return derivative(x, {0, 0}); }

  // d^alpha [H_m e^{-x^2}] = (-1)^{|alpha|} H_{m+alpha} e^{-x^2} per axis.
  double derivative(const Point& x, std::array<int, 2> alpha) const {
    double v = amplitude * hermite(order[0] + alpha[0], x[0]) * std::exp(-x[0] * x[0]);
    if (dim == 2) v *= hermite(order[1] + alpha[1], x[1]) * std::exp(-x[1] * x[1]);
    return ((alpha[0] + alpha[1]) % 2 ? -v : v);
  }

  double integral() const {
    if (order[0] != 0 || order[1] != 0) return 0;
    return amplitude * std::pow(std::numbers::pi, 0.5 * dim);
  }

  std::string name() const {
    std::string s = "H" + std::to_string(order[0]);
    if (dim == 2) s += "," + std::to_string(order[1]);
    return s + "*" + format_double(amplitude);
  }
};

// p_N(phi) = sum_{|alpha| <= N} sup_x (1 + |x|)^{N+n} |d^alpha phi(x)|, sup sampled on a uniform grid.
inline double schwartz_seminorm(const TestFunction& phi, int order_n, double step = 0) {
  const int n = phi.dim;
  if (step == 0) step = n == 1 ? 1e-3 : 0.02;
  const long k = long(std::ceil(10 / step));
  const std::size_t len = std::size_t(2 * k + 1);
  std::vector<double> xs(len);
  for (std::size_t i = 0; i < len; ++i) xs[i] = double(long(i) - k) * step;
  std::vector<double> weight(n == 1 ? len : len * len);
  for (std::size_t i = 0; i < len; ++i) {
    if (n == 1) {
      weight[i] = std::pow(1 + std::abs(xs[i]), order_n + n);
      continue;
    }
    for (std::size_t j = 0; j < len; ++j) weight[i * len + j] = std::pow(1 + std::hypot(xs[i], xs[j]), order_n + n);
  }
  auto axis = [&](int m) {
    std::vector<double> v(len);
    for (std::size_t i = 0; i < len; ++i) v[i] = std::abs(hermite(m, xs[i])) * std::exp(-xs[i] * xs[i]);
    return v;
  };
  double total = 0;
  for (const auto& alpha : multi_indices(n, order_n)) {
    auto f0 = axis(phi.order[0] + alpha[0]);
    double sup = 0;
    if (n == 1) {
      for (std::size_t i = 0; i < len; ++i) sup = std::max(sup, weight[i] * f0[i]);
    } else {
      auto f1 = axis(phi.order[1] + alpha[1]);
      for (std::size_t i = 0; i < len; ++i)
        for (std::size_t j = 0; j < len; ++j) sup = std::max(sup, weight[i * len + j] * f0[i] * f1[j]);
    }
    total += std::abs(phi.amplitude) * sup;
  }
  return total;
}

// Hermite-Gaussian family of total order <= N, each normalized to p_N = 1.
inline const std::vector<TestFunction>& grand_dictionary(int dim, int order_n) {
  static std::map<std::pair<int, int>, std::vector<TestFunction>> cache;
  auto key = std::pair{dim, order_n};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<TestFunction> out;
  for (const auto& m : multi_indices(dim, order_n)) {
    TestFunction phi{dim, m, 1.0};
    phi.amplitude = 1.0 / schwartz_seminorm(phi, order_n);
    out.push_back(phi);
  }
  return cache.emplace(key, std::move(out)).first->second;
}

struct MaximalConfig {
  std::vector<double> scales;
  std::vector<double> radii;
  double aperture = 1;
  double peetre_b = 1;
  int order_n = 2;

  // N = floor(n/min(p-,q) + 1) + 1, b = n/min(p-,q) + 1/2.
  static MaximalConfig defaults(const GridSpec& spec, double p_minus, double q) {
    MaximalConfig c;
    const double m = std::min(p_minus, q), n = spec.dim;
    c.order_n = int(std::floor(n / m + 1)) + 1;
    c.peetre_b = n / m + 0.5;
    c.scales = dyadic_scales(spec);
    c.radii = default_radii(spec);
    return c;
  }

  static std::vector<double> dyadic_scales(const GridSpec& spec) {
    std::vector<double> s;
    for (double v = spec.spacing(); v <= 2 * spec.half_width * (1 + 1e-12); v *= 2) s.push_back(v);
    return s;
  }

  // 1-D: every multiple of h up to 2L. 2-D: multiples of h up to 8h, then ratio 2^{1/4}.
  static std::vector<double> default_radii(const GridSpec& spec) {
    const double h = spec.spacing(), top = 2 * spec.half_width * (1 + 1e-12);
    std::vector<double> r;
    if (spec.dim == 1) {
      for (std::size_t k = 1; double(k) * h <= top; ++k) r.push_back(double(k) * h);
      return r;
    }
    for (int k = 1; k <= 8; ++k) r.push_back(k * h);
    for (double v = 8 * h * std::pow(2.0, 0.25); v <= top; v *= std::pow(2.0, 0.25)) r.push_back(v);
    return r;
  }
};

namespace detail {

// Largest integer k >= 0 with k < x, robust to x landing on an integer.
inline long strict_floor(double x) { return long(std::ceil(x - 1e-9)) - 1; }

inline std::vector<double> sliding_max_1d(const std::vector<double>& v, long half) {
  const long n = long(v.size());
  std::vector<double> out(v.size());
  if (half <= 0) return v;
  std::deque<long> dq;
  long next = 0;
  for (long i = 0; i < n; ++i) {
    while (next < n && next <= i + half) {
      while (!dq.empty() && v[std::size_t(dq.back())] <= v[std::size_t(next)]) dq.pop_back();
      dq.push_back(next++);
    }
    while (dq.front() < i - half) dq.pop_front();
    out[std::size_t(i)] = v[std::size_t(dq.front())];
  }
  return out;
}

}  // namespace detail

// max over lattice points y with |y - x| < radius.
inline std::vector<double> window_max(const std::vector<double>& v, const GridSpec& spec, double radius) {
  const double rho = radius / spec.spacing();
  const long k = detail::strict_floor(rho);
  if (k <= 0) return v;
  if (spec.dim == 1) return detail::sliding_max_1d(v, k);
  const std::size_t n = spec.points_per_axis;
  std::map<long, std::vector<double>> rows;  // half-width -> row-wise sliding max
  std::vector<long> width(std::size_t(2 * k + 1));
  for (long dy = -k; dy <= k; ++dy) {
    long w = long(std::floor(std::sqrt(std::max(0.0, rho * rho - double(dy * dy)))));
    while (double(dy * dy) + double((w + 1) * (w + 1)) < rho * rho - 1e-9) ++w;
    while (w >= 0 && double(dy * dy) + double(w * w) >= rho * rho - 1e-9) --w;
    width[std::size_t(dy + k)] = w;
    if (w >= 0 && !rows.count(w)) {
      std::vector<double> out(v.size());
      std::vector<double> row(n);
      for (std::size_t a = 0; a < n; ++a) {
        std::copy(v.begin() + long(a * n), v.begin() + long((a + 1) * n), row.begin());
        auto m = detail::sliding_max_1d(row, w);
        std::copy(m.begin(), m.end(), out.begin() + long(a * n));
      }
      rows.emplace(w, std::move(out));
    }
  }
  std::vector<double> out(v.size(), 0.0);
  for (long dy = -k; dy <= k; ++dy) {
    long w = width[std::size_t(dy + k)];
    if (w < 0) continue;
    const auto& rm = rows.at(w);
    for (std::size_t a = 0; a < n; ++a) {
      long src = long(a) + dy;
      if (src < 0 || src >= long(n)) continue;
      for (std::size_t b = 0; b < n; ++b)
        out[a * n + b] = std::max(out[a * n + b], rm[std::size_t(src) * n + b]);
    }
  }
  return out;
}

// sup_y u(y) / (1 + |x - y|/s)^b, offsets visited by increasing distance and pruned by max u.
inline std::vector<double> peetre_transform(const std::vector<double>& u, const GridSpec& spec, double s, double b) {
  const std::size_t n = spec.points_per_axis;
  const double h = spec.spacing();
  const double umax = *std::max_element(u.begin(), u.end());
  std::vector<double> out(u);
  if (umax <= 0) return out;
  struct Off { int a, c; double d; };
  std::vector<Off> offs;
  const int span = int(n) - 1;
  if (spec.dim == 1) {
    for (int a = -span; a <= span; ++a) offs.push_back({a, 0, std::abs(a) * h});
  } else {
    for (int a = -span; a <= span; ++a)
      for (int c = -span; c <= span; ++c) offs.push_back({a, c, std::hypot(a, c) * h});
  }
  std::sort(offs.begin(), offs.end(), [](const Off& x, const Off& y) { return x.d < y.d; });
  std::vector<double> decay(offs.size());
  for (std::size_t k = 0; k < offs.size(); ++k) decay[k] = std::pow(1 + offs[k].d / s, -b);
  for (std::size_t i = 0; i < u.size(); ++i) {
    long x0 = spec.dim == 1 ? long(i) : long(i / n), x1 = spec.dim == 1 ? 0 : long(i % n);
    double best = u[i];
    for (std::size_t k = 1; k < offs.size(); ++k) {
      if (umax * decay[k] <= best) break;
      long y0 = x0 + offs[k].a, y1 = x1 + offs[k].c;
      if (y0 < 0 || y0 >= long(n) || y1 < 0 || (spec.dim == 2 && y1 >= long(n))) continue;
      double v = u[spec.dim == 1 ? std::size_t(y0) : std::size_t(y0) * n + std::size_t(y1)] * decay[k];
      best = std::max(best, v);
    }
    out[i] = best;
  }
  return out;
}

namespace detail {

class KernelSpectrumCache {
 public:
  static KernelSpectrumCache& instance() {
    static KernelSpectrumCache c;
    return c;
  }
  template <class Make>
  const std::vector<complex>& get(const std::string& key, Make&& make) {
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
    auto v = make();
    bytes_ += v.size() * sizeof(complex);
    if (bytes_ > (std::size_t(256) << 20)) {
      map_.clear();
      bytes_ = v.size() * sizeof(complex);
    }
    return map_.emplace(key, std::move(v)).first->second;
  }

 private:
  std::map<std::string, std::vector<complex>> map_;
  std::size_t bytes_ = 0;
};

}  // namespace detail

// |phi_s * f| on the box for each scale, zero extension outside the box.
template <class T>
std::vector<std::vector<double>> convolve_scales(const BasicGridFunction<T>& f, const TestFunction& phi,
                                                 const std::vector<double>& scales) {
  const GridSpec& spec = f.spec();
  require(phi.dim == spec.dim, ErrorKind::dimension_mismatch, "test function dimension differs from grid");
  const int reach = int(spec.points_per_axis) - 1;
  LinearConvolver conv(spec, reach, 0);
  auto fh = conv.spectrum(f.values());
  const double h = spec.spacing(), vol = spec.cell_volume();
  std::vector<std::vector<double>> out;
  for (double s : scales) {
    std::string key = std::to_string(spec.dim) + "/" + std::to_string(spec.points_per_axis) + "/" +
                      format_double(spec.half_width) + "/" + phi.name() + "/" + format_double(s);
    const auto& kh = detail::KernelSpectrumCache::instance().get(key, [&] {
      const double scale = vol / std::pow(s, spec.dim);
      return conv.kernel_spectrum([&](int a, int b) { return scale * phi(Point{a * h / s, b * h / s}); });
    });
    auto full = conv.apply(fh, kh);
    std::vector<double> u(full.size());
    for (std::size_t i = 0; i < full.size(); ++i) u[i] = std::abs(full[i]);
    out.push_back(std::move(u));
  }
  return out;
}

inline void require_nonzero_integral(const TestFunction& phi) {
  require(std::abs(phi.integral()) > 1e-14, ErrorKind::zero_integral_test_function,
          "test function " + phi.name() + " has vanishing integral");
}

// M(f, phi)(x) = sup_s |phi_s * f(x)|
template <class T>
GridFunction radial_maximal(const BasicGridFunction<T>& f, const TestFunction& phi, const std::vector<double>& scales) {
  require_nonzero_integral(phi);
  std::vector<double> m(f.size(), 0.0);
  for (auto& u : convolve_scales(f, phi, scales))
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::max(m[i], u[i]);
  return GridFunction(f.spec(), std::move(m));
}

// M_a^*(f, phi)(x) = sup_s sup_{|y-x| < a s} |phi_s * f(y)|
template <class T>
GridFunction nontangential_maximal(const BasicGridFunction<T>& f, const TestFunction& phi, double a,
                                   const std::vector<double>& scales) {
  require_nonzero_integral(phi);
  std::vector<double> m(f.size(), 0.0);
  auto us = convolve_scales(f, phi, scales);
  for (std::size_t k = 0; k < scales.size(); ++k) {
    auto w = window_max(us[k], f.spec(), a * scales[k]);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::max(m[i], w[i]);
  }
  return GridFunction(f.spec(), std::move(m));
}

// M_b^{**}(f, phi)(x) = sup_s sup_y |phi_s * f(x - y)| (1 + |y|/s)^{-b}
template <class T>
GridFunction peetre_maximal(const BasicGridFunction<T>& f, const TestFunction& phi, double b,
                            const std::vector<double>& scales) {
  require_nonzero_integral(phi);
  std::vector<double> m(f.size(), 0.0);
  auto us = convolve_scales(f, phi, scales);
  for (std::size_t k = 0; k < scales.size(); ++k) {
    auto w = peetre_transform(us[k], f.spec(), scales[k], b);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::max(m[i], w[i]);
  }
  return GridFunction(f.spec(), std::move(m));
}

enum class GrandKind { nontangential, radial, peetre };

// Grand maximal functions over the finite normalized dictionary: M_N, M_N^0, M_{b,N}^{**}.
template <class T>
GridFunction grand_maximal(const BasicGridFunction<T>& f, const MaximalConfig& cfg,
                           GrandKind kind = GrandKind::nontangential) {
  std::vector<double> m(f.size(), 0.0);
  for (const auto& phi : grand_dictionary(f.dim(), cfg.order_n)) {
    auto us = convolve_scales(f, phi, cfg.scales);
    for (std::size_t k = 0; k < cfg.scales.size(); ++k) {
      std::vector<double> w;
      switch (kind) {
        case GrandKind::radial: w = std::move(us[k]); break;
        case GrandKind::nontangential: w = window_max(us[k], f.spec(), cfg.aperture * cfg.scales[k]); break;
        case GrandKind::peetre: w = peetre_transform(us[k], f.spec(), cfg.scales[k], cfg.peetre_b); break;
      }
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::max(m[i], w[i]);
    }
  }
  return GridFunction(f.spec(), std::move(m));
}

namespace detail {

// Number of infinite-lattice points in the open ball of radius rho (cells) and its offsets.
inline std::vector<std::array<int, 2>> disc_offsets(int dim, double rho) {
  std::vector<std::array<int, 2>> out;
  const int k = int(strict_floor(rho));
  for (int a = -k; a <= k; ++a) {
    if (dim == 1) {
      out.push_back({a, 0});
      continue;
    }
    for (int b = -k; b <= k; ++b)
      if (double(a * a + b * b) < rho * rho - 1e-9) out.push_back({a, b});
  }
  if (out.empty()) out.push_back({0, 0});
  return out;
}

// Ball averages of |f| over B(x, r) for x on the box, zero extension. 1-D uses prefix sums of |f|;
// 2-D convolves the spectrum of |f| (taken with conv) against the disc mask.
template <class T>
std::vector<double> ball_averages(const BasicGridFunction<T>& f, double r, const std::vector<double>& prefix,
                                  const LinearConvolver* conv, const std::vector<complex>* fh) {
  const GridSpec& spec = f.spec();
  const double rho = r / spec.spacing();
  auto offs = disc_offsets(spec.dim, rho);
  const double count = double(offs.size());
  std::vector<double> avg(f.size());
  if (spec.dim == 1) {
    const long k = std::max(0L, strict_floor(rho));
    const long n = long(f.size());
    for (long i = 0; i < n; ++i) {
      long lo = std::max(0L, i - k), hi = std::min(n - 1, i + k);
      avg[std::size_t(i)] = (prefix[std::size_t(hi + 1)] - prefix[std::size_t(lo)]) / count;
    }
    return avg;
  }
  const int reach = conv->reach();
  const std::size_t side = std::size_t(2 * reach + 1);
  std::vector<char> mask(side * side, 0);
  for (auto& o : offs) mask[std::size_t(o[0] + reach) * side + std::size_t(o[1] + reach)] = 1;
  auto kh = conv->kernel_spectrum(
      [&](int a, int b) { return double(mask[std::size_t(a + reach) * side + std::size_t(b + reach)]); });
  auto full = conv->apply(*fh, kh);
  for (std::size_t i = 0; i < f.size(); ++i) avg[i] = std::max(0.0, full[i].real()) / count;
  return avg;
}

}  // namespace detail

namespace detail {

template <class T, class Visit>
void for_each_ball_average(const BasicGridFunction<T>& f, const std::vector<double>& radii, Visit&& visit) {
  std::vector<double> mag(f.size()), prefix(f.size() + 1, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    mag[i] = std::abs(f[i]);
    prefix[i + 1] = prefix[i] + mag[i];
  }
  std::optional<LinearConvolver> conv;
  std::vector<complex> fh;
  if (f.dim() == 2) {
    double rmax = radii.empty() ? 0 : *std::max_element(radii.begin(), radii.end());
    int reach = int(std::max(0L, strict_floor(rmax / f.spec().spacing())));
    conv.emplace(f.spec(), reach, 0);
    fh = conv->spectrum(mag);
  }
  for (double r : radii) visit(r, ball_averages(f, r, prefix, conv ? &*conv : nullptr, &fh));
}

}  // namespace detail

// Centered Hardy-Littlewood maximal function over the configured radius set.
template <class T>
GridFunction hl_centered(const BasicGridFunction<T>& f, const MaximalConfig& cfg) {
  std::vector<double> m(f.size(), 0.0);
  detail::for_each_ball_average(f, cfg.radii, [&](double, const std::vector<double>& a) {
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::max(m[i], a[i]);
  });
  return GridFunction(f.spec(), std::move(m));
}

// Uncentered: sup over balls B(y, r) containing x, centers on the lattice.
template <class T>
GridFunction hl_uncentered(const BasicGridFunction<T>& f, const MaximalConfig& cfg) {
  std::vector<double> m(f.size(), 0.0);
  detail::for_each_ball_average(f, cfg.radii, [&](double r, const std::vector<double>& a) {
    auto w = window_max(a, f.spec(), r);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::max(m[i], w[i]);
  });
  return GridFunction(f.spec(), std::move(m));
}

struct FeffermanSteinResult {
  double lhs = 0;  // ||(sum (M f_j)^r)^{1/r}||
  double rhs = 0;  // ||(sum |f_j|^r)^{1/r}||
  double ratio = 0;
};

inline GridFunction lr_combine(const std::vector<GridFunction>& fs, double r) {
  std::vector<double> v(fs.front().size(), 0.0);
  for (const auto& f : fs)
    for (std::size_t i = 0; i < v.size(); ++i) {
      double a = std::abs(f[i]);
      v[i] = std::isinf(r) ? std::max(v[i], a) : v[i] + std::pow(a, r);
    }
  if (!std::isinf(r))
    for (auto& x : v) x = std::pow(x, 1 / r);
  return GridFunction(fs.front().spec(), std::move(v));
}

inline FeffermanSteinResult fefferman_stein_check(const std::vector<GridFunction>& fs, double r,
                                                  const SliceSpaceParams& p, const MaximalConfig& cfg) {
  require(!fs.empty(), ErrorKind::invalid_argument, "empty family");
  require(p.phi.p_minus() > 1 && p.q > 1 && std::isfinite(p.q) && r > 1, ErrorKind::exponent_out_of_range,
          "vector-valued maximal inequality needs 1 < p-, 1 < q < inf, 1 < r <= inf");
  std::vector<GridFunction> mf;
  for (const auto& f : fs) mf.push_back(hl_centered(f, cfg));
  SliceSpaceParams loose = p;
  loose.enforce_margin = false;
  FeffermanSteinResult out;
  out.lhs = slice_norm(lr_combine(mf, r), loose);
  out.rhs = slice_norm(lr_combine(fs, r), p);
  out.ratio = out.rhs > 0 ? out.lhs / out.rhs : 0;
  return out;
}

}  // namespace oslab
