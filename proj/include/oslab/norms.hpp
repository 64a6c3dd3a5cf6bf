#pragma once

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "oslab/fft.hpp"
#include "oslab/grid.hpp"
#include "oslab/orlicz.hpp"
#include "oslab/polynomial.hpp"

namespace oslab {

// inf{lambda > 0 : sum_i w_i Phi(v_i / lambda) <= 1} for v_i > 0.
inline double luxemburg_gauge(std::span<const double> v, std::span<const double> w, const OrliczFunction& phi,
                              double hint = 0) {
  if (v.empty()) return 0;
  if (phi.is_power()) {
    const double r = phi.param();
    double s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * std::pow(v[i], r);
    return std::pow(s, 1.0 / r);
  }
  auto big_f = [&](double lam) {
    double s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * phi(v[i] / lam);
    return s;
  };
  auto g = [&](double mu) { return std::log(big_f(std::exp(mu))); };
  double a = 0, b = 0, ga = 0, gb = 0;
  bool bracketed = false;
  if (hint > 0) {
    a = std::log(hint) - 0.02;
    b = std::log(hint) + 0.02;
    try {
      ga = g(a);
      gb = g(b);
      bracketed = ga >= 0 && gb <= 0;
    } catch (const Error&) {
      bracketed = false;  // stale hint pushed v/lambda past a tabulated domain
    }
  }
  if (!bracketed) {
    double vmax = 0, wstar = 0, total = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      total += w[i];
      if (v[i] > vmax) { vmax = v[i]; wstar = w[i]; }
      else if (v[i] == vmax) wstar = std::max(wstar, w[i]);
    }
    double lam_hi = vmax / phi.inverse(1.0 / total);
    double lam_lo;
    try {
      lam_lo = vmax / phi.inverse(1.0 / wstar);
    } catch (const Error&) {
      lam_lo = lam_hi;
      while (big_f(lam_lo) < 1) lam_lo *= 0.5;
    }
    a = std::log(lam_lo) - 1e-12;
    b = std::log(lam_hi) + 1e-12;
    ga = g(a);
    gb = g(b);
  }
  if (ga <= 0) return std::exp(a);
  if (gb >= 0) return std::exp(b);
  std::uintmax_t iters = 100;
  auto tol = [](double x, double y) { return std::abs(x - y) <= 1e-13; };
  auto root = boost::math::tools::toms748_solve(g, a, b, ga, gb, tol, iters);
  return std::exp(0.5 * (root.first + root.second));
}

template <class T>
double lebesgue_norm(const BasicGridFunction<T>& f, double r) {
  if (std::isinf(r)) {
    double m = 0;
    for (const auto& v : f.values()) m = std::max(m, double(std::abs(v)));
    return m;
  }
  require(r > 0, ErrorKind::invalid_argument, "Lebesgue exponent must be positive");
  double s = 0;
  for (const auto& v : f.values()) s += std::pow(double(std::abs(v)), r);
  return std::pow(s * f.spec().cell_volume(), 1.0 / r);
}

// Cells meeting a ball, with the fraction of each cell inside it.
inline std::vector<std::pair<std::size_t, double>> ball_cell_weights(const GridSpec& spec, const Ball& ball,
                                                                     int subsamples = 32) {
  const double h = spec.spacing();
  const std::ptrdiff_t n = std::ptrdiff_t(spec.points_per_axis);
  std::vector<std::pair<std::size_t, double>> out;
  auto index_range = [&](double c) {
    std::ptrdiff_t lo = std::ptrdiff_t(std::floor((c - ball.radius + spec.half_width) / h)) - 1;
    std::ptrdiff_t hi = std::ptrdiff_t(std::ceil((c + ball.radius + spec.half_width) / h)) + 1;
    return std::pair{std::max<std::ptrdiff_t>(lo, 0), std::min<std::ptrdiff_t>(hi, n - 1)};
  };
  auto [a0, a1] = index_range(ball.center[0]);
  if (spec.dim == 1) {
    for (std::ptrdiff_t i = a0; i <= a1; ++i) {
      double x = spec.coord(i);
      double lo = std::max(x - h / 2, ball.center[0] - ball.radius);
      double hi = std::min(x + h / 2, ball.center[0] + ball.radius);
      if (hi > lo) out.push_back({std::size_t(i), (hi - lo) / h});
    }
    return out;
  }
  auto [b0, b1] = index_range(ball.center[1]);
  const double rr = ball.radius / h;
  for (std::ptrdiff_t i = a0; i <= a1; ++i)
    for (std::ptrdiff_t j = b0; j <= b1; ++j) {
      double dx = (spec.coord(i) - ball.center[0]) / h, dy = (spec.coord(j) - ball.center[1]) / h;
      double near = std::hypot(std::max(0.0, std::abs(dx) - 0.5), std::max(0.0, std::abs(dy) - 0.5));
      double far = std::hypot(std::abs(dx) + 0.5, std::abs(dy) + 0.5);
      double w;
      if (far <= rr) {
        w = 1;
      } else if (near >= rr) {
        continue;
      } else {
        int inside = 0;
        for (int p = 0; p < subsamples; ++p)
          for (int q = 0; q < subsamples; ++q) {
            double x = dx - 0.5 + (p + 0.5) / subsamples, y = dy - 0.5 + (q + 0.5) / subsamples;
            if (x * x + y * y < rr * rr) ++inside;
          }
        w = double(inside) / double(subsamples * subsamples);
      }
      if (w > 0) out.push_back({std::size_t(i) * spec.points_per_axis + std::size_t(j), w});
    }
  return out;
}

// Ball regions use fractional cell weights; cube and whole-grid regions use point membership.
template <class T>
double luxemburg_norm(const BasicGridFunction<T>& f, const OrliczFunction& phi, const Region& region = WholeGrid{}) {
  const double vol = f.spec().cell_volume();
  std::vector<double> v, w;
  auto push = [&](std::size_t i, double weight) {
    double a = std::abs(f[i]);
    if (a > 0) {
      v.push_back(a);
      w.push_back(weight * vol);
    }
  };
  if (auto b = std::get_if<Ball>(&region)) {
    for (auto [i, weight] : ball_cell_weights(f.spec(), *b)) push(i, weight);
  } else {
    for (std::size_t i = 0; i < f.size(); ++i)
      if (in_region(f.point(i), region, f.spec())) push(i, 1.0);
  }
  return luxemburg_gauge(v, w, phi);
}

// ||chi_B(x,t)||_Phi = 1 / Phi^{-1}(1 / |B(x,t)|).
inline double ball_indicator_norm(const OrliczFunction& phi, double t, int dim) {
  return 1.0 / phi.inverse(1.0 / (unit_ball_volume(dim) * std::pow(t, dim)));
}

inline double cube_indicator_norm(const OrliczFunction& phi, double side, int dim) {
  return 1.0 / phi.inverse(1.0 / std::pow(side, dim));
}

struct SliceSpaceParams {
  double t = 1;
  double q = 1;
  OrliczFunction phi = OrliczFunction::power(1);
  bool enforce_margin = true;
};

// Local gauges ||f chi_B(x,t)||_Phi on the lattice window [lo_i - R, hi_i + R] around supp f.
struct LocalNorms {
  int dim = 1;
  std::ptrdiff_t origin0 = 0, origin1 = 0;  // grid index of the first entry per axis
  std::size_t len0 = 0, len1 = 1;
  std::vector<double> values;
};

template <class T>
LocalNorms local_orlicz_norms(const BasicGridFunction<T>& f, const OrliczFunction& phi, double t) {
  const GridSpec& spec = f.spec();
  const double h = spec.spacing(), vol = spec.cell_volume();
  const int dim = spec.dim;
  LocalNorms out;
  out.dim = dim;
  auto box = support_box(f);
  if (!box) return out;
  const BallStencil st = ball_stencil(dim, t / h);
  const std::ptrdiff_t reach = st.reach, n = std::ptrdiff_t(spec.points_per_axis);
  out.origin0 = (*box)[0] - reach;
  out.len0 = std::size_t((*box)[1] - (*box)[0] + 2 * reach + 1);
  if (dim == 2) {
    out.origin1 = (*box)[2] - reach;
    out.len1 = std::size_t((*box)[3] - (*box)[2] + 2 * reach + 1);
  }
  out.values.assign(out.len0 * out.len1, 0.0);
  std::vector<double> mag(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) mag[i] = std::abs(f[i]);
  auto at = [&](std::ptrdiff_t a, std::ptrdiff_t b) -> double {
    if (a < 0 || a >= n || b < 0 || (dim == 2 && b >= n)) return 0.0;
    return dim == 1 ? mag[std::size_t(a)] : mag[std::size_t(a) * std::size_t(n) + std::size_t(b)];
  };

  const std::size_t work = out.values.size() * st.weights.size();
  if (phi.is_power() && dim == 2 && work > 20'000'000) {
    const double r = phi.param();
    LinearConvolver conv(spec, int(reach), int(reach));
    std::vector<double> pw(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) pw[i] = std::pow(mag[i], r);
    std::vector<double> kern(std::size_t((2 * reach + 1) * (2 * reach + 1)), 0.0);
    for (std::size_t k = 0; k < st.offsets.size(); ++k)
      kern[std::size_t(st.offsets[k][0] + reach) * std::size_t(2 * reach + 1) + std::size_t(st.offsets[k][1] + reach)] =
          st.weights[k];
    auto kh = conv.kernel_spectrum([&](int a, int b) {
      return kern[std::size_t(a + reach) * std::size_t(2 * reach + 1) + std::size_t(b + reach)];
    });
    auto full = conv.apply(conv.spectrum(pw), kh);
    const std::size_t no = conv.out_axis();
    for (std::size_t a = 0; a < out.len0; ++a)
      for (std::size_t b = 0; b < out.len1; ++b) {
        std::size_t ea = std::size_t(out.origin0 + std::ptrdiff_t(a) + reach);
        std::size_t eb = std::size_t(out.origin1 + std::ptrdiff_t(b) + reach);
        double s = std::max(0.0, full[ea * no + eb].real()) * vol;
        out.values[a * out.len1 + b] = std::pow(s, 1.0 / r);
      }
    return out;
  }

  std::vector<double> v, w;
  double hint = 0;
  for (std::size_t a = 0; a < out.len0; ++a)
    for (std::size_t b = 0; b < out.len1; ++b) {
      std::ptrdiff_t x0 = out.origin0 + std::ptrdiff_t(a), x1 = out.origin1 + std::ptrdiff_t(b);
      v.clear();
      w.clear();
      for (std::size_t k = 0; k < st.offsets.size(); ++k) {
        double m = at(x0 + st.offsets[k][0], dim == 2 ? x1 + st.offsets[k][1] : 0);
        if (m > 0) {
          v.push_back(m);
          w.push_back(st.weights[k] * vol);
        }
      }
      double g = luxemburg_gauge(v, w, phi, hint);
      out.values[a * out.len1 + b] = g;
      hint = g;
    }
  return out;
}

inline void check_slice_params(const SliceSpaceParams& p) {
  require(p.t > 0 && std::isfinite(p.t), ErrorKind::invalid_argument, "slice radius t must be positive");
  require(p.q > 0 && std::isfinite(p.q), ErrorKind::exponent_out_of_range, "slice exponent q must be positive");
}

template <class T>
void check_margin(const BasicGridFunction<T>& f, double t) {
  auto box = support_box(f);
  if (!box) return;
  const GridSpec& s = f.spec();
  const double eps = 1e-9 * s.spacing();
  for (int axis = 0; axis < s.dim; ++axis) {
    double lo = s.coord((*box)[std::size_t(2 * axis)]), hi = s.coord((*box)[std::size_t(2 * axis + 1)]);
    if (lo - t < -s.half_width - eps || hi + t > s.half_width + eps)
      throw Error(ErrorKind::support_too_close_to_boundary,
                  "support is within t=" + format_double(t) + " of the box boundary");
  }
}

// Slice norm from precomputed local gauges, so several q share one pass.
inline double slice_from_local(const LocalNorms& loc, const SliceSpaceParams& p, const GridSpec& spec) {
  check_slice_params(p);
  const double denom = ball_indicator_norm(p.phi, p.t, spec.dim);
  double s = 0;
  for (double g : loc.values)
    if (g > 0) s += std::pow(g / denom, p.q);
  return std::pow(s * spec.cell_volume(), 1.0 / p.q);
}

// {int [||f chi_B(x,t)||_Phi / ||chi_B(x,t)||_Phi]^q dx}^{1/q}
template <class T>
double slice_norm(const BasicGridFunction<T>& f, const SliceSpaceParams& p) {
  check_slice_params(p);
  if (p.enforce_margin) check_margin(f, p.t);
  return slice_from_local(local_orlicz_norms(f, p.phi, p.t), p, f.spec());
}

// (sum_k ||f chi_{Q_tk}||_Phi^q)^{1/q} over tiles Q_tk = t[k + [0,1)^n].
template <class T>
double amalgam_norm(const BasicGridFunction<T>& f, double t, double q, const OrliczFunction& phi) {
  require(q > 0, ErrorKind::exponent_out_of_range, "amalgam exponent q must be positive");
  const GridSpec& spec = f.spec();
  auto tiles = amalgam_tiles(spec, t);
  const std::size_t cells = std::size_t(std::lround(t / spec.spacing()));
  const std::size_t per_axis = spec.points_per_axis / cells;
  const std::size_t n = spec.points_per_axis;
  std::vector<std::vector<double>> vals(tiles.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    double a = std::abs(f[i]);
    if (a == 0) continue;
    std::size_t tile = spec.dim == 1 ? i / cells : ((i / n) / cells) * per_axis + (i % n) / cells;
    vals[tile].push_back(a);
  }
  double s = 0;
  for (auto& v : vals) {
    if (v.empty()) continue;
    std::vector<double> w(v.size(), spec.cell_volume());
    s += std::pow(luxemburg_gauge(v, w, phi), q);
  }
  return std::pow(s, 1.0 / q);
}

// t^{n/q} amalgam / (||chi_{Q_t}||_Phi slice): bounded above and below uniformly in t.
template <class T>
double amalgam_equivalence_ratio(const BasicGridFunction<T>& f, const SliceSpaceParams& p) {
  const int n = f.dim();
  double a = amalgam_norm(f, p.t, p.q, p.phi);
  double s = slice_norm(f, p);
  return std::pow(p.t, double(n) / p.q) * a / (cube_indicator_norm(p.phi, p.t, n) * s);
}

template <class T>
T pairing(const BasicGridFunction<T>& f, const BasicGridFunction<T>& g) {
  f.check_same(g);
  T s{};
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
  return s * f.spec().cell_volume();
}

struct HolderResult {
  double integral;  // int |f g|
  double bound;     // 2 ||f||_Phi ||g||_Psi
  double ratio;
};

inline HolderResult holder_check(const GridFunction& f, const GridFunction& g, const OrliczFunction& phi,
                                 const YoungConjugate& psi) {
  f.check_same(g);
  double s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::abs(f[i] * g[i]);
  s *= f.spec().cell_volume();
  double bound = 2 * luxemburg_norm(f, phi) * luxemburg_norm(g, psi.psi());
  return {s, bound, bound > 0 ? s / bound : 0};
}

// |int f g| / (||f||_{(E_Phi^q)_t} ||g||_{(E_Psi^{q'})_t}).
inline double slice_duality_check(const GridFunction& f, const GridFunction& g, const SliceSpaceParams& p,
                                  const YoungConjugate& psi) {
  require(p.q > 1, ErrorKind::exponent_out_of_range, "duality needs q > 1");
  SliceSpaceParams dual = p;
  dual.phi = psi.psi();
  dual.q = p.q / (p.q - 1);
  double num = std::abs(pairing(f, g));
  double den = slice_norm(f, p) * slice_norm(g, dual);
  return den > 0 ? num / den : 0;
}

struct CampanatoParams {
  double q = 1;
  double r_prime = 2;
  int d = 0;
  std::vector<Ball> balls;
};

struct CampanatoResult {
  double value = 0;
  Ball worst{};
  double max_gap = 0;
};

// sup_B |B| / ||chi_B||_E (avg_B |g - P_B g|^{r'})^{1/r'} over the listed balls.
inline CampanatoResult campanato_norm(const GridFunction& g, const CampanatoParams& cp, const SliceSpaceParams& sp) {
  const GridSpec& spec = g.spec();
  std::map<double, double> chi_cache;
  CampanatoResult out;
  for (const Ball& b : cp.balls) {
    auto pts = points_in(g, b);
    if (pts.empty()) continue;
    LrFit fit = fit_polynomial_lr(g, pts, cp.d, b.center, b.radius, cp.r_prime);
    double avg = fit.objective / double(pts.size());
    double osc = std::pow(avg, 1.0 / cp.r_prime);
    auto it = chi_cache.find(b.radius);
    if (it == chi_cache.end()) {
      SliceSpaceParams chi = sp;
      chi.enforce_margin = false;
      Ball centered{{0, 0}, b.radius};
      it = chi_cache.emplace(b.radius, slice_norm(indicator(spec, centered), chi)).first;
    }
    double vol = unit_ball_volume(spec.dim) * std::pow(b.radius, spec.dim);
    double v = vol / it->second * osc;
    out.max_gap = std::max(out.max_gap, fit.gap);
    if (v > out.value) {
      out.value = v;
      out.worst = b;
    }
  }
  return out;
}

}  // namespace oslab
