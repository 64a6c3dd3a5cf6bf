#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <tuple>
#include <vector>

#include "oslab/grid.hpp"
#include "oslab/maximal.hpp"
#include "oslab/norms.hpp"
#include "oslab/polynomial.hpp"

namespace oslab {

// ||f||_{HE} = slice norm of the radial maximal function.
template <class T>
double hardy_norm(const BasicGridFunction<T>& f, SliceSpaceParams params, const TestFunction& phi_test,
                  const std::vector<double>& scales) {
  params.enforce_margin = false;
  auto m = radial_maximal(f, phi_test, scales);
  return slice_norm(m, params);
}

// Aligned dyadic cube in index form: cells [a0, a0 + k) x [a1, a1 + k).
struct CellCube {
  std::size_t a0 = 0, a1 = 0, k = 1;

  Cube cube(const GridSpec& s) const {
    const double h = s.spacing();
    Cube q;
    q.side = double(k) * h;
    q.center = {s.coord(a0) + double(k) * h / 2, s.dim == 2 ? s.coord(a1) + double(k) * h / 2 : 0.0};
    return q;
  }

  std::vector<std::size_t> points(const GridSpec& s) const {
    std::vector<std::size_t> out;
    const std::size_t n = s.points_per_axis;
    if (s.dim == 1) {
      for (std::size_t i = a0; i < a0 + k; ++i) out.push_back(i);
    } else {
      for (std::size_t i = a0; i < a0 + k; ++i)
        for (std::size_t j = a1; j < a1 + k; ++j) out.push_back(i * n + j);
    }
    return out;
  }
};

// Grid points of Q, half-open membership.
inline std::vector<std::size_t> cube_points(const GridSpec& spec, const Cube& q) {
  std::vector<std::size_t> out;
  const double h = spec.spacing();
  for (std::size_t i = 0; i < spec.size(); ++i)
    if (in_cube(GridFunction::point_of(spec, i), q, spec.dim, h)) out.push_back(i);
  return out;
}

// ||chi_Q||_{(E)} for a cube of the given side, cached; the slice norm is translation invariant on the lattice.
inline double cube_slice_norm(const GridSpec& spec, double side, const SliceSpaceParams& params) {
  static std::map<std::string, double> cache;
  const double h = spec.spacing();
  const std::size_t k = std::max<std::size_t>(1, std::size_t(std::llround(side / h)));
  require(k <= spec.points_per_axis, ErrorKind::out_of_range, "cube larger than the box");
  std::ostringstream key;
  key << spec.dim << ' ' << format_double(spec.half_width) << ' ' << spec.points_per_axis << ' ' << k << ' '
      << format_double(params.t) << ' ' << format_double(params.q) << ' ' << params.phi.to_record();
  auto it = cache.find(key.str());
  if (it != cache.end()) return it->second;
  CellCube c{0, 0, k};
  GridFunction chi(spec, std::vector<double>(spec.size(), 0.0));
  for (auto i : c.points(spec)) chi[i] = 1;
  SliceSpaceParams p = params;
  p.enforce_margin = false;
  double v = slice_norm(chi, p);
  cache.emplace(key.str(), v);
  return v;
}

struct AtomSpec {
  Cube Q;
  double r = INFINITY;
  int d = 0;
  GridFunction payload;
};

struct MoleculeSpec {
  Cube Q;
  double r = INFINITY;
  int d = 0;
  double tau = 1;
  GridFunction payload;
};

struct ValidationResult {
  bool support = true;
  bool size = true;
  bool moments = true;
  double size_ratio = 0;     // measured size / bound, worst ring for molecules
  double moment_max = 0;     // largest |moment|
  double moment_tol = 0;
  bool ok() const { return support && size && moments; }
};

namespace detail {

// max_|alpha|<=d |int a (x - c)^alpha|, moments about the cube center.
inline double max_moment(const GridFunction& a, const Point& c, int d) {
  const GridSpec& s = a.spec();
  const double vol = s.cell_volume();
  double worst = 0;
  for (const auto& alpha : multi_indices(s.dim, d)) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      Point x = a.point(i);
      m += a[i] * monomial({x[0] - c[0], x[1] - c[1]}, alpha, s.dim) * vol;
    }
    worst = std::max(worst, std::abs(m));
  }
  return worst;
}

inline double moment_tolerance(const GridFunction& a, const Cube& q, int d) {
  return 1e-10 * lebesgue_norm(a, 1) * std::pow(q.diameter(a.dim()), d);
}

// Size bound |Q|^{1/r} / ||chi_Q||_{(E)}.
inline double atom_bound(const GridSpec& spec, const Cube& q, double r, const SliceSpaceParams& params) {
  const double vol = std::pow(q.side, spec.dim);
  return (std::isinf(r) ? 1.0 : std::pow(vol, 1 / r)) / cube_slice_norm(spec, q.side, params);
}

inline double restricted_norm(const GridFunction& a, const std::vector<std::size_t>& pts, double r) {
  GridFunction part(a.spec(), std::vector<double>(a.size(), 0.0));
  for (auto i : pts) part[i] = a[i];
  return lebesgue_norm(part, r);
}

// Subtract the L^2 projection onto polynomials of degree <= d over pts, in place.
inline void remove_moments(GridFunction& a, const std::vector<std::size_t>& pts, const Cube& q, int d) {
  auto p = fit_polynomial(a, pts, d, q.center, std::max(q.side / 2, a.spec().spacing()));
  for (auto i : pts) a[i] -= p(a.point(i));
}

inline std::size_t monomial_count(int dim, int d) { return multi_indices(dim, d).size(); }

// Rings S_j, j <= jmax, where 2^{jmax+1} Q covers the box.
inline int ring_count(const GridSpec& spec, const Cube& q) {
  int j = 0;
  for (;; ++j) {
    Cube big = q.dilate(std::ldexp(1.0, j + 1));
    bool covers = true;
    for (int a = 0; a < spec.dim; ++a)
      covers = covers && big.center[a] - big.side / 2 <= -spec.half_width &&
               big.center[a] + big.side / 2 >= spec.half_width;
    if (covers || j > 60) return j;
  }
}

}  // namespace detail

inline ValidationResult validate_atom(const AtomSpec& a, const SliceSpaceParams& params) {
  ValidationResult res;
  const GridSpec& s = a.payload.spec();
  const double h = s.spacing();
  for (std::size_t i = 0; i < a.payload.size(); ++i)
    if (a.payload[i] != 0 && !in_cube(a.payload.point(i), a.Q, s.dim, h)) res.support = false;
  const double bound = detail::atom_bound(s, a.Q, a.r, params);
  res.size_ratio = lebesgue_norm(a.payload, a.r) / bound;
  res.size = res.size_ratio <= 1 + 1e-9;
  res.moment_max = detail::max_moment(a.payload, a.Q.center, a.d);
  res.moment_tol = detail::moment_tolerance(a.payload, a.Q, a.d);
  res.moments = res.moment_max <= res.moment_tol;
  return res;
}

inline ValidationResult validate_molecule(const MoleculeSpec& m, const SliceSpaceParams& params) {
  ValidationResult res;
  const GridSpec& s = m.payload.spec();
  const int jmax = detail::ring_count(s, m.Q);
  auto rings = annulus_rings(s, m.Q, jmax);
  const double bound = detail::atom_bound(s, m.Q, m.r, params);
  for (int j = 0; j <= jmax; ++j) {
    double v = detail::restricted_norm(m.payload, rings[std::size_t(j)], m.r);
    double ratio = v / (std::pow(2.0, -m.tau * j) * bound);
    res.size_ratio = std::max(res.size_ratio, ratio);
  }
  res.size = res.size_ratio <= 1 + 1e-9;
  res.moment_max = detail::max_moment(m.payload, m.Q.center, m.d);
  res.moment_tol = detail::moment_tolerance(m.payload, m.Q, m.d);
  res.moments = res.moment_max <= res.moment_tol;
  return res;
}

// Random atom on Q: Gaussian samples, polynomial moments removed, size saturated at 0.9 of the bound.
inline AtomSpec synthesize_atom(const GridSpec& spec, const Cube& q, double r, int d, const SliceSpaceParams& params,
                                std::uint64_t seed) {
  require(r > 1, ErrorKind::exponent_out_of_range, "atom exponent r must exceed 1");
  require(d >= 0, ErrorKind::invalid_argument, "moment order d must be nonnegative");
  for (int a = 0; a < spec.dim; ++a)
    require(q.center[a] - q.side / 2 >= -spec.half_width - 1e-12 && q.center[a] + q.side / 2 <= spec.half_width + 1e-12,
            ErrorKind::out_of_range, "cube must lie inside the box");
  auto pts = cube_points(spec, q);
  require(pts.size() > detail::monomial_count(spec.dim, d), ErrorKind::degenerate_cube,
          "cube has too few grid points for the moment constraints");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  GridFunction a(spec, std::vector<double>(spec.size(), 0.0));
  for (auto i : pts) a[i] = g(rng);
  detail::remove_moments(a, pts, q, d);
  const double norm = lebesgue_norm(a, r);
  require(norm > 0, ErrorKind::degenerate_cube, "moment removal annihilated the sample");
  const double c = 0.9 * detail::atom_bound(spec, q, r, params) / norm;
  for (auto i : pts) a[i] *= c;
  return {q, r, d, std::move(a)};
}

// Molecule: an independent moment-free piece on each ring S_j, j <= last_ring, sized at 0.9 * 2^{-tau j} of the bound.
inline MoleculeSpec synthesize_molecule(const GridSpec& spec, const Cube& q, double r, int d, double tau,
                                        const SliceSpaceParams& params, std::uint64_t seed, int last_ring = -1) {
  require(r > 1, ErrorKind::exponent_out_of_range, "molecule exponent r must exceed 1");
  require(tau > 0, ErrorKind::invalid_argument, "decay tau must be positive");
  const int jmax = last_ring >= 0 ? std::min(last_ring, detail::ring_count(spec, q)) : detail::ring_count(spec, q);
  auto rings = annulus_rings(spec, q, jmax);
  const double bound = detail::atom_bound(spec, q, r, params);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  GridFunction m(spec, std::vector<double>(spec.size(), 0.0));
  const std::size_t need = detail::monomial_count(spec.dim, d);
  require(rings[0].size() > need, ErrorKind::degenerate_cube, "cube has too few grid points for the moment constraints");
  for (int j = 0; j <= jmax; ++j) {
    const auto& pts = rings[std::size_t(j)];
    if (pts.size() <= need) continue;
    GridFunction piece(spec, std::vector<double>(spec.size(), 0.0));
    for (auto i : pts) piece[i] = g(rng);
    detail::remove_moments(piece, pts, q.dilate(std::ldexp(1.0, j + 1)), d);
    const double norm = lebesgue_norm(piece, r);
    if (norm == 0) continue;
    const double c = 0.9 * std::pow(2.0, -tau * j) * bound / norm;
    for (auto i : pts) m[i] += c * piece[i];
  }
  return {q, r, d, tau, std::move(m)};
}

struct AtomTerm {
  int level = 0;
  double lambda = 0;
  AtomSpec atom;
};

struct AtomicDecomposition {
  std::vector<AtomTerm> terms;
  double s = 0.5;
  GridFunction residual;
  int level_lo = 0, level_hi = 0;

  // sum_j lambda_j a_j, optionally with the residual
  GridFunction reconstruct(bool with_residual = true) const {
    GridFunction out(residual.spec(), std::vector<double>(residual.size(), 0.0));
    for (const auto& t : terms)
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += t.lambda * t.atom.payload[i];
    if (with_residual)
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += residual[i];
    return out;
  }

  // sum over levels > J
  GridFunction tail(int level) const {
    GridFunction out(residual.spec(), std::vector<double>(residual.size(), 0.0));
    for (const auto& t : terms)
      if (t.level > level)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += t.lambda * t.atom.payload[i];
    return out;
  }
};

// ||{sum_j [lambda_j / ||chi_Qj||]^s chi_Qj}^{1/s}||_{(E)}
inline double s_functional(const std::vector<AtomTerm>& terms, const GridSpec& spec, const SliceSpaceParams& params,
                           double s) {
  require(s > 0, ErrorKind::invalid_argument, "s must be positive");
  GridFunction acc(spec, std::vector<double>(spec.size(), 0.0));
  for (const auto& t : terms) {
    if (t.lambda <= 0) continue;
    const double c = std::pow(t.lambda / cube_slice_norm(spec, t.atom.Q.side, params), s);
    for (auto i : cube_points(spec, t.atom.Q)) acc[i] += c;
  }
  for (auto& v : acc.values()) v = std::pow(v, 1 / s);
  SliceSpaceParams p = params;
  p.enforce_margin = false;
  return slice_norm(acc, p);
}

inline double finite_atomic_norm(const AtomicDecomposition& dec, const SliceSpaceParams& params, double s) {
  return s_functional(dec.terms, dec.residual.spec(), params, s);
}

namespace detail {

// Maximal dyadic cubes whose triple stays inside the set {mask == 1}; the triple must lie in the box.
inline std::vector<CellCube> whitney_cover(const GridSpec& spec, const std::vector<char>& mask) {
  const std::size_t n = spec.points_per_axis;
  const int dim = spec.dim;
  // prefix counts of points outside the set
  const std::size_t w = n + 1;
  std::vector<std::size_t> pre(dim == 1 ? w : w * w, 0);
  if (dim == 1) {
    for (std::size_t i = 0; i < n; ++i) pre[i + 1] = pre[i] + (mask[i] ? 0 : 1);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        pre[(i + 1) * w + j + 1] = pre[i * w + j + 1] + pre[(i + 1) * w + j] - pre[i * w + j] + (mask[i * n + j] ? 0 : 1);
  }
  auto bad = [&](std::size_t lo0, std::size_t hi0, std::size_t lo1, std::size_t hi1) {
    if (dim == 1) return pre[hi0] - pre[lo0];
    return pre[hi0 * w + hi1] - pre[lo0 * w + hi1] - pre[hi0 * w + lo1] + pre[lo0 * w + lo1];
  };
  auto passes = [&](const CellCube& c) {
    if (c.a0 < c.k || c.a0 + 2 * c.k > n) return false;
    if (dim == 2 && (c.a1 < c.k || c.a1 + 2 * c.k > n)) return false;
    return dim == 1 ? bad(c.a0 - c.k, c.a0 + 2 * c.k, 0, 0) == 0
                    : bad(c.a0 - c.k, c.a0 + 2 * c.k, c.a1 - c.k, c.a1 + 2 * c.k) == 0;
  };
  auto touches = [&](const CellCube& c) {
    return dim == 1 ? bad(c.a0, c.a0 + c.k, 0, 0) < c.k : bad(c.a0, c.a0 + c.k, c.a1, c.a1 + c.k) < c.k * c.k;
  };
  std::vector<CellCube> out;
  std::vector<CellCube> stack{{0, 0, n}};
  while (!stack.empty()) {
    CellCube c = stack.back();
    stack.pop_back();
    if (!touches(c)) continue;
    if (passes(c)) {
      out.push_back(c);
      continue;
    }
    if (c.k == 1) continue;
    const std::size_t k = c.k / 2;
    for (std::size_t u = 0; u < 2; ++u)
      for (std::size_t v = 0; v < (dim == 2 ? 2u : 1u); ++v) stack.push_back({c.a0 + u * k, c.a1 + v * k, k});
  }
  std::sort(out.begin(), out.end(), [](const CellCube& x, const CellCube& y) {
    return morton_key(std::uint32_t(x.a0), std::uint32_t(x.a1)) < morton_key(std::uint32_t(y.a0), std::uint32_t(y.a1));
  });
  return out;
}

}  // namespace detail

// Level-set decomposition: O_j = {M_N f > 2^j}, Whitney cubes W_j, b_Q = (f - P_Q f) chi_Q,
// A_Q = b_Q - sum of b_Q' over Q' in W_{j+1} inside Q, f = g_{j_lo} + sum_j sum_Q A_Q.
inline AtomicDecomposition atomic_decompose(const GridFunction& f, const SliceSpaceParams& params,
                                            const MaximalConfig& cfg, double s, int d) {
  const GridSpec& spec = f.spec();
  require(spec.dim == 1 || spec.dim == 2, ErrorKind::unsupported_dimension, "only n = 1, 2 are supported");
  require(s > 0 && s <= 1, ErrorKind::parameter_window_violation, "s must lie in (0, 1]");
  require(d >= int(std::floor(spec.dim * (1 / s - 1) + 1e-12)), ErrorKind::parameter_window_violation,
          "moment order d must be at least floor(n(1/s - 1))");
  auto mn = grand_maximal(f, cfg, GrandKind::nontangential);
  double lo = INFINITY, hi = 0;
  for (double v : mn.values())
    if (v > 0) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  require(hi > 0, ErrorKind::empty_level_range, "grand maximal function vanishes");
  int j_hi = int(std::ceil(std::log2(hi))), j_lo = int(std::ceil(std::log2(lo)));
  j_lo = std::max(j_lo, j_hi - 39);
  require(j_lo < j_hi, ErrorKind::empty_level_range, "no level set between min and max of M_N f");

  AtomicDecomposition dec;
  dec.s = s;
  dec.level_lo = j_lo;
  dec.level_hi = j_hi;

  struct Piece {
    CellCube c;
    std::vector<std::size_t> pts;
    std::vector<double> b;
  };
  auto make_pieces = [&](int j) {
    std::vector<char> mask(f.size());
    const double thr = std::ldexp(1.0, j);
    for (std::size_t i = 0; i < f.size(); ++i) mask[i] = mn[i] > thr;
    std::vector<Piece> out;
    for (const auto& c : detail::whitney_cover(spec, mask)) {
      Piece p{c, c.points(spec), {}};
      p.b.resize(p.pts.size(), 0.0);
      if (p.pts.size() > detail::monomial_count(spec.dim, d)) {
        Cube q = c.cube(spec);
        auto poly = fit_polynomial(f, p.pts, d, q.center, q.side / 2);
        for (std::size_t k = 0; k < p.pts.size(); ++k) p.b[k] = f[p.pts[k]] - poly(f.point(p.pts[k]));
      }
      out.push_back(std::move(p));
    }
    return out;
  };

  std::vector<Piece> cur = make_pieces(j_lo);
  dec.residual = f;
  for (const auto& p : cur)
    for (std::size_t k = 0; k < p.pts.size(); ++k) dec.residual[p.pts[k]] -= p.b[k];
  // pieces at rounding level (f locally polynomial) stay in the residual
  const double noise = 1e-12 * lebesgue_norm(f, INFINITY);

  for (int j = j_lo; j <= j_hi; ++j) {
    std::vector<Piece> next = j < j_hi ? make_pieces(j + 1) : std::vector<Piece>{};
    GridFunction fine(spec, std::vector<double>(f.size(), 0.0));
    for (const auto& p : next)
      for (std::size_t k = 0; k < p.pts.size(); ++k) fine[p.pts[k]] = p.b[k];
    for (const auto& p : cur) {
      GridFunction a(spec, std::vector<double>(f.size(), 0.0));
      double amax = 0;
      for (std::size_t k = 0; k < p.pts.size(); ++k) {
        double v = p.b[k] - fine[p.pts[k]];
        a[p.pts[k]] = v;
        amax = std::max(amax, std::abs(v));
      }
      if (amax <= noise) {
        for (auto i : p.pts) dec.residual[i] += a[i];
        continue;
      }
      Cube q = p.c.cube(spec);
      if (p.pts.size() > detail::monomial_count(spec.dim, d)) {
        // moments vanish exactly in theory; strip the rounding and keep it in the residual
        GridFunction before = a;
        detail::remove_moments(a, p.pts, q, d);
        amax = 0;
        for (auto i : p.pts) {
          dec.residual[i] += before[i] - a[i];
          amax = std::max(amax, std::abs(a[i]));
        }
      }
      const double chi = cube_slice_norm(spec, q.side, params);
      const double lambda = std::max(std::ldexp(1.0, j + 1), amax) * chi;
      for (auto i : p.pts) a[i] /= lambda;
      dec.terms.push_back({j, lambda, AtomSpec{q, INFINITY, d, std::move(a)}});
    }
    cur = std::move(next);
  }
  return dec;
}

}  // namespace oslab
