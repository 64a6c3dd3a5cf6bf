#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "oslab/atoms.hpp"
#include "oslab/grid.hpp"
#include "oslab/harness/config.hpp"

namespace oslab {

struct CorpusItem {
  std::string family;
  std::string name;
  GridFunction f;
};

using Corpus = std::vector<CorpusItem>;

namespace detail {

inline std::mt19937_64 family_rng(std::uint64_t seed, std::uint64_t family, std::uint64_t k) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(family), std::uint32_t(k)};
  return std::mt19937_64(seq);
}

inline double radius_of(const Point& x, int dim) { return dim == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]); }

// Dyadic cube of side 2L / 2^level, chosen uniformly among those inside [-R, R]^n.
inline Cube random_dyadic_cube(const GridSpec& spec, int level, double reach, std::mt19937_64& rng) {
  const double side = 2 * spec.half_width / double(1 << level);
  const long per_axis = 1L << level;
  std::vector<long> ok;
  for (long a = 0; a < per_axis; ++a) {
    double lo = -spec.half_width + double(a) * side;
    if (lo >= -reach - 1e-12 && lo + side <= reach + 1e-12) ok.push_back(a);
  }
  require(!ok.empty(), ErrorKind::out_of_range, "no dyadic cube of this level fits the margin");
  std::uniform_int_distribution<std::size_t> pick(0, ok.size() - 1);
  Cube q;
  q.side = side;
  q.center[0] = -spec.half_width + (double(ok[pick(rng)]) + 0.5) * side;
  q.center[1] = spec.dim == 2 ? -spec.half_width + (double(ok[pick(rng)]) + 0.5) * side : 0.0;
  return q;
}

inline int level_for_side(const GridSpec& spec, double side) {
  return int(std::lround(std::log2(2 * spec.half_width / side)));
}

}  // namespace detail

// Atoms normalized with the reference space (t = 1, q = 0.8, Phi = tau^0.8).
inline SliceSpaceParams corpus_atom_params() { return {1, 0.8, OrliczFunction::power(0.8), false}; }

// Deterministic corpus; supports stay within L - margin of the center so every t <= margin is admissible.
inline Corpus generate_corpus(std::uint64_t seed, const GridSpec& spec, const CorpusCounts& counts,
                              double margin = 2) {
  spec.validate();
  Corpus out;
  const int n = spec.dim;
  const double reach = spec.half_width - margin, h = spec.spacing();
  require(reach > 4 * h, ErrorKind::out_of_range, "margin leaves no room for the corpus");
  const auto ap = corpus_atom_params();

  for (int k = 0; k < counts.indicators; ++k) {
    auto rng = detail::family_rng(seed, 1, std::uint64_t(k));
    std::uniform_real_distribution<double> u(0, 1);
    const double rad = reach * (0.1 + 0.4 * u(rng));
    Point c{(reach - rad) * (2 * u(rng) - 1), n == 2 ? (reach - rad) * (2 * u(rng) - 1) : 0.0};
    const bool ball = k % 2 == 0;
    auto f = GridFunction::sample(spec, [&](const Point& x) {
      Point d{x[0] - c[0], x[1] - c[1]};
      return (ball ? detail::radius_of(d, n) < rad : norm_inf(x, c, n) < rad) ? 1.0 : 0.0;
    });
    out.push_back({"indicators", std::string(ball ? "ball" : "cube") + std::to_string(k), std::move(f)});
  }

  for (int k = 0; k < counts.gaussians; ++k) {
    auto rng = detail::family_rng(seed, 2, std::uint64_t(k));
    std::uniform_real_distribution<double> u(0, 1);
    const double theta = std::ldexp(1.0, k % 3);  // dilates f(theta x) of exp(-|x|^2)
    const double cut = 5.5 / theta;
    const double room = std::max(0.0, reach - cut);
    Point c{room * (2 * u(rng) - 1), n == 2 ? room * (2 * u(rng) - 1) : 0.0};
    const double amp = 0.5 + u(rng);
    const double scale = std::min(1.0, reach / 5.5);
    auto f = GridFunction::sample(spec, [&](const Point& x) {
      const double r = detail::radius_of({x[0] - c[0], x[1] - c[1]}, n) / scale;
      return r < cut ? amp * std::exp(-theta * theta * r * r) : 0.0;
    });
    out.push_back({"gaussians", "gauss" + std::to_string(k) + "_theta" + std::to_string(int(theta)), std::move(f)});
  }

  for (int k = 0; k < counts.atoms; ++k) {
    auto rng = detail::family_rng(seed, 3, std::uint64_t(k));
    const int lvl = detail::level_for_side(spec, 1.0) + int(rng() % 3);
    Cube q = detail::random_dyadic_cube(spec, lvl, reach, rng);
    auto a = synthesize_atom(spec, q, k % 2 ? INFINITY : 2.0, 1, ap, rng());
    out.push_back({"atoms", "atom" + std::to_string(k), std::move(a.payload)});
  }

  for (int k = 0; k < counts.molecules; ++k) {
    auto rng = detail::family_rng(seed, 4, std::uint64_t(k));
    const int lvl = detail::level_for_side(spec, 0.5) + int(rng() % 2);
    Cube q = detail::random_dyadic_cube(spec, lvl, reach / 2, rng);
    int last = 0;
    while (true) {
      const double half = std::ldexp(q.side, last + 1) / 2;
      if (norm_inf(q.center, Point{0, 0}, n) + half > reach) break;
      ++last;
    }
    auto m = synthesize_molecule(spec, q, 2.0, 1, 2.0, ap, rng(), std::max(0, last - 1));
    out.push_back({"molecules", "molecule" + std::to_string(k), std::move(m.payload)});
  }

  for (int k = 0; k < counts.trig; ++k) {
    auto rng = detail::family_rng(seed, 5, std::uint64_t(k));
    std::uniform_real_distribution<double> u(0, 1);
    struct Mode {
      double a, w0, w1, ph;
    };
    std::vector<Mode> modes;
    for (int m = 0; m < 4; ++m)
      modes.push_back({2 * u(rng) - 1, 8 * (2 * u(rng) - 1), n == 2 ? 8 * (2 * u(rng) - 1) : 0.0, 6.283185307179586 * u(rng)});
    auto f = GridFunction::sample(spec, [&](const Point& x) {
      const double r = detail::radius_of(x, n) / reach;
      if (r >= 1) return 0.0;
      double s = 0;
      for (const auto& md : modes) s += md.a * std::cos(md.w0 * x[0] + md.w1 * x[1] + md.ph);
      return s * std::exp(1 - 1 / (1 - r * r));
    });
    out.push_back({"trig", "trig" + std::to_string(k), std::move(f)});
  }

  for (int k = 0; k < counts.whitney; ++k) {
    auto rng = detail::family_rng(seed, 6, std::uint64_t(k));
    std::uniform_real_distribution<double> u(0, 1);
    GridFunction f(spec, std::vector<double>(spec.size(), 0.0));
    const int pieces = 3 + int(rng() % 3);
    const int base = detail::level_for_side(spec, 1.0);
    for (int p = 0; p < pieces; ++p) {
      Cube q = detail::random_dyadic_cube(spec, base + int(rng() % 3), reach, rng);
      auto a = synthesize_atom(spec, q, INFINITY, 1, ap, rng());
      const double lam = 0.5 + 1.5 * u(rng);
      for (std::size_t i = 0; i < f.size(); ++i) f[i] += lam * a.payload[i];
    }
    out.push_back({"whitney", "whitney" + std::to_string(k), std::move(f)});
  }
  return out;
}

// Atoms on random dyadic cubes of side 2^-s for s in {0, .., 3}, exponents alternating 2 and infinity.
inline std::vector<AtomSpec> atom_family(std::uint64_t seed, const GridSpec& spec, int count, int d,
                                         const SliceSpaceParams& params, double margin = 2) {
  std::vector<AtomSpec> out;
  const double reach = spec.half_width - margin;
  for (int k = 0; k < count; ++k) {
    auto rng = detail::family_rng(seed, 7, std::uint64_t(k));
    int lvl = detail::level_for_side(spec, 1.0) + int(rng() % 4);
    while (std::size_t(1) << lvl > spec.points_per_axis / 4) --lvl;
    Cube q = detail::random_dyadic_cube(spec, lvl, reach, rng);
    out.push_back(synthesize_atom(spec, q, k % 2 ? INFINITY : 2.0, d, params, rng()));
  }
  return out;
}

}  // namespace oslab
