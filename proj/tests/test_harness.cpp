#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "oslab/harness/suites.hpp"

using namespace oslab;

namespace {

RunConfig small_config() {
  RunConfig c;
  c.op1d = {1, 8, 256};
  c.op2d = {2, 4, 64};
  c.norm1d = {1, 8, 512};
  c.norm2d = {2, 4, 64};
  c.corpus1d = {1, 1, 1, 1, 1, 1};
  c.corpus2d = {1, 0, 0, 0, 0, 0};
  c.atom_count = 4;
  c.fs_families = 2;
  c.fs_family_size = 3;
  c.holder_pairs = 4;
  return c;
}

std::string corpus_bytes(const Corpus& c) {
  std::ostringstream os;
  for (const auto& it : c) {
    os << it.family << ' ' << it.name << '\n';
    write_gridfn(os, it.f);
  }
  return os.str();
}

}  // namespace

TEST(Corpus, SameSeedIsByteIdentical) {
  GridSpec s{1, 8, 1024};
  CorpusCounts k;
  auto a = generate_corpus(7, s, k), b = generate_corpus(7, s, k);
  EXPECT_EQ(corpus_bytes(a), corpus_bytes(b));
  auto c = generate_corpus(8, s, k);
  EXPECT_NE(corpus_bytes(a), corpus_bytes(c));
  EXPECT_EQ(a.size(), std::size_t(k.total()));
}

TEST(Corpus, ZeroCountFamilyOmitted) {
  GridSpec s{1, 8, 1024};
  CorpusCounts k{2, 0, 1, 0, 0, 0};
  auto c = generate_corpus(1, s, k);
  ASSERT_EQ(c.size(), 3u);
  for (const auto& it : c) EXPECT_TRUE(it.family == "indicators" || it.family == "atoms");
}

TEST(Corpus, RespectsMargin) {
  for (GridSpec s : {GridSpec{1, 8, 1024}, GridSpec{2, 4, 128}}) {
    auto c = generate_corpus(3, s, CorpusCounts{}, 2);
    for (const auto& it : c) EXPECT_NO_THROW(check_margin(it.f, 2.0)) << it.name;
  }
}

TEST(Corpus, AtomFamilyValidates) {
  GridSpec s{1, 8, 1024};
  const auto p = atom_params();
  auto atoms = atom_family(5, s, 20, 1, p);
  ASSERT_EQ(atoms.size(), 20u);
  for (const auto& a : atoms) EXPECT_TRUE(validate_atom(a, p).ok());
}

TEST(Report, SummaryAndDigest) {
  VerificationReport r("demo");
  r.check("a", 1, "x in [0,1]", "d", 0.5, 0, 1);
  r.check("b", 1, "x in [0,1]", "d", 1.5, 0, 1, 0.1);
  EXPECT_EQ(r.failures(), 1u);
  EXPECT_EQ(r.summary(), "SUITE demo FAIL cases=2 failures=1");
  VerificationReport s("demo");
  s.check("a", 1, "x in [0,1]", "d", 0.5, 0, 1);
  s.check("b", 1, "x in [0,1]", "d", 1.5, 0, 1, 0.1);
  EXPECT_EQ(r.digest(), s.digest());
}

TEST(Brackets, CalibrateSaveLoadVerify) {
  BracketBook cal(BracketBook::Mode::calibrate, 1.5);
  cal.observe("k", 2.0);
  cal.observe("k", 4.0);
  const std::string path = ::testing::TempDir() + "brackets_test.json";
  cal.save(path, 1);
  auto v = BracketBook::load(path, 1.5);
  EXPECT_TRUE(v.observe("k", 1.5).pass);
  EXPECT_TRUE(v.observe("k", 5.9).pass);
  EXPECT_FALSE(v.observe("k", 6.1).pass);
  EXPECT_FALSE(v.observe("k", 1.2).pass);
  EXPECT_TRUE(v.observe("k", 1e-9, true).pass);
  EXPECT_FALSE(v.observe("missing", 1.0).pass);
  std::remove(path.c_str());
}

TEST(Config, ParsesIni) {
  const std::string path = ::testing::TempDir() + "oslab_test.ini";
  {
    std::ofstream o(path);
    o << "[run]\nseed=9\n[grids]\nop1d=1,8,512\n[sweep]\nt=0.5,1\n[corpus1d]\natoms=5\n[sizes]\natoms=12\n";
  }
  auto c = RunConfig::load(path);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.op1d.points_per_axis, 512u);
  EXPECT_EQ(c.t_sweep, (std::vector<double>{0.5, 1}));
  EXPECT_EQ(c.corpus1d.atoms, 5);
  EXPECT_EQ(c.atom_count, 12);
  EXPECT_THROW(RunConfig::load(::testing::TempDir() + "does_not_exist.ini"), Error);
  std::remove(path.c_str());
}

TEST(Suites, UnknownSuiteThrows) {
  auto ctx = SuiteContext::from_config(small_config());
  try {
    run_suite("no-such-suite", ctx);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unknown_suite);
  }
}

TEST(Suites, EmptyCorpusGivesEmptyPassingReport) {
  RunConfig c = small_config();
  c.corpus1d = {0, 0, 0, 0, 0, 0};
  c.corpus2d = {0, 0, 0, 0, 0, 0};
  auto ctx = SuiteContext::from_config(c);
  for (const auto& name : registered_suites()) {
    auto r = run_suite(name, ctx);
    EXPECT_TRUE(r.cases().empty()) << name;
    EXPECT_TRUE(r.passed());
  }
}

TEST(Suites, EveryCaseCarriesAProperty) {
  RunConfig c = small_config();
  c.calibrate = true;
  auto ctx = SuiteContext::from_config(c);
  for (const auto& name : {"orlicz-basics", "norm-identities", "embeddings", "poisson", "duality", "campanato"}) {
    auto r = run_suite(name, ctx);
    EXPECT_FALSE(r.cases().empty()) << name;
    for (const auto& k : r.cases()) EXPECT_FALSE(k.property.empty()) << name << ' ' << k.id;
  }
}

TEST(Suites, NormIdentitiesIncludeIndicatorIdentity) {
  auto ctx = SuiteContext::from_config(small_config());
  auto r = run_suite("norm-identities", ctx);
  bool found = false;
  for (const auto& k : r.cases())
    if (k.id.rfind("indicator/", 0) == 0) found = true;
  EXPECT_TRUE(found);
}

TEST(Suites, ReportDigestReproducible) {
  RunConfig c = small_config();
  auto a = SuiteContext::from_config(c), b = SuiteContext::from_config(c);
  EXPECT_EQ(run_suite("embeddings", a).digest(), run_suite("embeddings", b).digest());
  EXPECT_EQ(run_suite("orlicz-basics", a).digest(), run_suite("orlicz-basics", b).digest());
}
