#include <gtest/gtest.h>

#include "oslab/atoms.hpp"

using namespace oslab;

namespace {

const GridSpec kLine{1, 8, 1024};

SliceSpaceParams params(double phi_r, double q, double t = 0.5) {
  return {t, q, OrliczFunction::power(phi_r), false};
}

}  // namespace

TEST(Atoms, HaarAtomIsValid) {
  const double q = 2;
  auto a = GridFunction::sample(kLine, [&](const Point& x) {
    if (x[0] >= 0 && x[0] < 1) return std::pow(2.0, -1 / q);
    if (x[0] >= 1 && x[0] < 2) return -std::pow(2.0, -1 / q);
    return 0.0;
  });
  AtomSpec atom{Cube{{1, 0}, 2}, INFINITY, 0, a};
  auto p = params(q, q);
  EXPECT_NEAR(cube_slice_norm(kLine, 2, p), std::pow(2.0, 1 / q), 1e-12);
  auto v = validate_atom(atom, p);
  EXPECT_TRUE(v.ok());
  EXPECT_NEAR(v.size_ratio, 1.0, 1e-9);
  // same payload read as a molecule of any decay
  MoleculeSpec mol{atom.Q, INFINITY, 0, 5.0, a};
  EXPECT_TRUE(validate_molecule(mol, p).ok());

  auto bad = GridFunction::sample(kLine, [](const Point& x) { return x[0] >= 0 && x[0] < 2 ? 0.1 : 0.0; });
  AtomSpec biased{atom.Q, INFINITY, 0, bad};
  auto vb = validate_atom(biased, p);
  EXPECT_TRUE(vb.support);
  EXPECT_FALSE(vb.moments);
  AtomSpec shifted{Cube{{3, 0}, 2}, INFINITY, 0, a};
  EXPECT_FALSE(validate_atom(shifted, p).support);
}

TEST(Atoms, SynthesizedAtomsValidate) {
  auto p = params(0.8, 0.8);
  for (int d : {0, 1, 2})
    for (double r : {2.0, double(INFINITY)})
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Cube q{{-1 + 0.25 * double(seed), 0}, 0.5};
        auto a = synthesize_atom(kLine, q, r, d, p, seed);
        auto v = validate_atom(a, p);
        EXPECT_TRUE(v.ok()) << d << " " << r << " " << v.moment_max << " " << v.moment_tol;
        EXPECT_NEAR(v.size_ratio, 0.9, 1e-9);
        if (d == 0) {
          double mean = 0;
          for (double x : a.payload.values()) mean += x;
          EXPECT_NEAR(mean * kLine.spacing(), 0.0, 1e-12);
        }
      }
  EXPECT_THROW(synthesize_atom(kLine, Cube{{0.5 * kLine.spacing(), 0}, kLine.spacing()}, 2, 1, p, 1), Error);
}

TEST(Atoms, SynthesizedAtoms2D) {
  GridSpec s{2, 4, 64};
  SliceSpaceParams p{0.5, 0.8, OrliczFunction::power(0.8), false};
  auto a = synthesize_atom(s, Cube{{0.5, -0.5}, 1}, 2, 1, p, 3);
  EXPECT_TRUE(validate_atom(a, p).ok());
}

TEST(Atoms, SynthesizedMoleculeValidates) {
  auto p = params(0.8, 0.8);
  auto m = synthesize_molecule(kLine, Cube{{0.25, 0}, 0.5}, 2, 1, 2.0, p, 9);
  auto v = validate_molecule(m, p);
  EXPECT_TRUE(v.ok()) << v.size_ratio << " " << v.moment_max << " " << v.moment_tol;
}

TEST(Atoms, HardyNormOfZeroAndOfAtom) {
  auto p = params(0.8, 0.8);
  auto cfg = MaximalConfig::defaults(kLine, 0.8, 0.8);
  GridFunction z(kLine, std::vector<double>(kLine.size(), 0.0));
  EXPECT_EQ(hardy_norm(z, p, TestFunction::gaussian(1), cfg.scales), 0.0);
  auto a = synthesize_atom(kLine, Cube{{0, 0}, 1}, 2, 1, p, 4);
  double hn = hardy_norm(a.payload, p, TestFunction::gaussian(1), cfg.scales);
  EXPECT_GT(hn, 0);
  EXPECT_LT(hn, 50);
}

TEST(Atoms, FiniteAtomicNormFormulas) {
  auto p = params(0.8, 0.8);
  auto a = synthesize_atom(kLine, Cube{{0, 0}, 1}, 2, 1, p, 4);
  AtomicDecomposition one{{{0, 1.0, a}}, 0.8, GridFunction(kLine, std::vector<double>(kLine.size(), 0.0))};
  EXPECT_NEAR(finite_atomic_norm(one, p, 0.8), 1.0, 1e-9);

  std::vector<AtomTerm> terms;
  const double lambdas[] = {0.5, 2.0, 1.25};
  double want = 0;
  for (int k = 0; k < 3; ++k) {
    Cube q{{-3 + 2.5 * k, 0}, std::ldexp(1.0, -k)};
    terms.push_back({0, lambdas[k], synthesize_atom(kLine, q, 2, 1, p, std::uint64_t(k))});
    want += std::pow(lambdas[k], 0.8);
  }
  EXPECT_NEAR(s_functional(terms, kLine, p, 0.8), std::pow(want, 1 / 0.8), 1e-8);
}

TEST(Atoms, DecompositionReconstructs) {
  auto p = params(0.8, 0.8);
  auto cfg = MaximalConfig::defaults(kLine, 0.8, 0.8);
  auto f = GridFunction::sample(kLine, [](const Point& x) {
    return std::exp(-4 * x[0] * x[0]) * std::sin(3 * x[0]) + 0.3 * std::exp(-(x[0] - 1) * (x[0] - 1));
  });
  auto dec = atomic_decompose(f, p, cfg, 0.5, 1);
  ASSERT_FALSE(dec.terms.empty());
  auto g = dec.reconstruct();
  double err = 0, nf = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    err += std::pow(g[i] - f[i], 2);
    nf += f[i] * f[i];
  }
  EXPECT_LE(std::sqrt(err / nf), 1e-12);
  int prev = dec.level_lo;
  for (const auto& t : dec.terms) {
    EXPECT_GE(t.level, prev);
    prev = t.level;
    EXPECT_GT(t.lambda, 0);
    auto v = validate_atom(t.atom, p);
    EXPECT_TRUE(v.ok()) << v.moment_max << " " << v.moment_tol << " " << v.size_ratio;
  }
  EXPECT_GT(s_functional(dec.terms, kLine, p, 0.5), 0);
  EXPECT_THROW(atomic_decompose(f, p, cfg, 0.5, 0), Error);
  GridFunction z(kLine, std::vector<double>(kLine.size(), 0.0));
  EXPECT_THROW(atomic_decompose(z, p, cfg, 0.5, 1), Error);
}

TEST(Atoms, DecompositionOfAnAtomLeavesNoResidual) {
  auto p = params(0.8, 0.8);
  auto cfg = MaximalConfig::defaults(kLine, 0.8, 0.8);
  auto a = synthesize_atom(kLine, Cube{{0.5, 0}, 1}, INFINITY, 1, p, 2);
  auto dec = atomic_decompose(a.payload, p, cfg, 0.5, 1);
  auto g = dec.reconstruct(false);
  double err = 0, na = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    err += std::pow(g[i] - a.payload[i], 2);
    na += a.payload[i] * a.payload[i];
  }
  EXPECT_LE(std::sqrt(err / na), 1e-2);
}
