#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "oslab/harness/suites.hpp"

using namespace oslab;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out = ".";
};

RunConfig load_config(const Common& c) {
  RunConfig cfg = c.config.empty() ? RunConfig{} : RunConfig::load(c.config);
  if (c.seed_set) cfg.seed = c.seed;
  return cfg;
}

GridFunction load_input(const std::string& path, double csv_half_width) {
  if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
    std::ifstream is(path);
    require(bool(is), ErrorKind::io_error, "cannot open " + path);
    return read_csv_1d(is, csv_half_width);
  }
  auto any = load_gridfn(path);
  require(std::holds_alternative<GridFunction>(any), ErrorKind::invalid_argument, "expected a real grid function");
  return std::get<GridFunction>(std::move(any));
}

std::string out_path(const Common& c, const std::string& name) {
  fs::create_directories(c.out);
  return (fs::path(c.out) / name).string();
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orlicz-slice Hardy space toolkit"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "INI file with [run] [grids] [sweep] [corpus1d] [corpus2d] [sizes]");
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& s) { common.seed = s; common.seed_set = true; }, "corpus seed");
    sub->add_option("--out", common.out, "output directory");
  };

  std::string input;
  double csv_L = 8;
  std::string phi_text = "power(1)";
  double t = 1, q = 1;
  auto add_input = [&](CLI::App* sub) {
    sub->add_option("input", input, "GRIDFN1 file, or 1-D CSV")->required();
    sub->add_option("--csv-half-width", csv_L, "half width L for CSV input");
  };
  auto add_space = [&](CLI::App* sub) {
    sub->add_option("--phi", phi_text, "power(r) | power_log(p) | log_quotient");
    sub->add_option("-t,--t", t, "slice radius");
    sub->add_option("-q,--q", q, "outer exponent");
  };

  // norm
  auto* norm = app.add_subcommand("norm", "Lebesgue, Orlicz, slice and amalgam norms");
  std::string space = "slice";
  norm->add_option("--space", space, "lebesgue | orlicz | slice | amalgam")
      ->check(CLI::IsMember({"lebesgue", "orlicz", "slice", "amalgam"}));
  add_input(norm);
  add_space(norm);
  add_common(norm);

  // maximal
  auto* maximal = app.add_subcommand("maximal", "maximal functions, written as GRIDFN1");
  std::string mop = "radial";
  double aperture = 1, peetre_b = 0;
  int order_n = 0;
  maximal->add_option("--op", mop, "centered | uncentered | radial | nontan | peetre | grand | grand-radial | grand-peetre")
      ->check(CLI::IsMember({"centered", "uncentered", "radial", "nontan", "peetre", "grand", "grand-radial", "grand-peetre"}));
  maximal->add_option("--a,--aperture", aperture, "nontangential aperture a");
  maximal->add_option("--b", peetre_b, "Peetre exponent b; default n/min(p-, q) + 1/2");
  maximal->add_option("--N", order_n, "dictionary order N; default floor(n/min(p-, q) + 1) + 1");
  add_input(maximal);
  add_space(maximal);
  add_common(maximal);

  // lpaley
  auto* lp = app.add_subcommand("lpaley", "g, S, g*_lambda and Poisson maximal functions");
  std::string lop = "g";
  double lambda = 0;
  lp->add_option("--op", lop, "g | S | gstar | poisson")->check(CLI::IsMember({"g", "S", "gstar", "poisson"}));
  lp->add_option("--lambda", lambda, "g*_lambda exponent; default 1 + 2/min(p-, q) + 1/2");
  add_input(lp);
  add_space(lp);
  add_common(lp);

  // hardy
  auto* hardy = app.add_subcommand("hardy", "Hardy slice norm");
  std::string hnorm = "radial";
  hardy->add_option("--norm", hnorm, "radial | nontangential | grand | poisson | g | S | gstar")
      ->check(CLI::IsMember({"radial", "nontangential", "grand", "poisson", "g", "S", "gstar"}));
  add_input(hardy);
  add_space(hardy);
  add_common(hardy);

  // decompose
  auto* dec = app.add_subcommand("decompose", "atomic decomposition; writes manifest.csv and atom payloads");
  double s_exp = 0.8;
  int d_order = 1;
  dec->add_option("--s", s_exp, "s in (0, 1]");
  dec->add_option("--d", d_order, "vanishing moment order");
  add_input(dec);
  add_space(dec);
  add_common(dec);

  // czop
  auto* cz = app.add_subcommand("czop", "apply a Calderon-Zygmund operator");
  std::string kernel = "hilbert", realization = "mult";
  double eps = 0;
  cz->add_option("--kernel", kernel, "hilbert | riesz1 | riesz2 | truncated_power_sign");
  cz->add_option("--realization", realization, "mult | direct");
  cz->add_option("--eps", eps, "truncation radius of the direct sum (default 2h)");
  add_input(cz);
  add_common(cz);

  // verify
  auto* verify = app.add_subcommand("verify", "run property suites");
  std::vector<std::string> suites;
  bool calibrate = false;
  std::string golden;
  verify->add_option("--suite", suites, "suite name, repeatable; default all");
  verify->add_flag("--calibrate", calibrate,
                   "measure brackets over the calibration seeds (or --seed) and freeze them into <golden>/brackets.json");
  verify->add_option("--golden", golden, "golden directory (default: the source tree's tests/golden)");
  add_common(verify);

  // corpus
  auto* corpus = app.add_subcommand("corpus", "write the seeded corpus as GRIDFN1 files");
  std::string grid_name = "op1d";
  corpus->add_option("--grid", grid_name, "norm1d | norm2d | op1d | op2d")
      ->check(CLI::IsMember({"norm1d", "norm2d", "op1d", "op2d"}));
  add_common(corpus);

  CLI11_PARSE(app, argc, argv);

  try {
    if (norm->parsed() || maximal->parsed() || lp->parsed() || hardy->parsed() || dec->parsed()) {
      const auto f = load_input(input, csv_L);
      const auto phi = parse_orlicz(phi_text);
      const SliceSpaceParams p{t, q, phi, false};
      const auto gauss = TestFunction::gaussian(f.dim());
      const auto scales = MaximalConfig::dyadic_scales(f.spec());
      auto mcfg = MaximalConfig::defaults(f.spec(), phi.p_minus(), q);
      if (maximal->parsed()) {
        mcfg.aperture = aperture;
        if (peetre_b > 0) mcfg.peetre_b = peetre_b;
        if (order_n > 0) mcfg.order_n = order_n;
      }

      if (norm->parsed()) {
        double v = 0;
        if (space == "lebesgue") v = lebesgue_norm(f, q);
        if (space == "orlicz") v = luxemburg_norm(f, phi);
        if (space == "slice") v = slice_norm(f, {t, q, phi, true});
        if (space == "amalgam") v = amalgam_norm(f, t, q, phi);
        std::cout << "function_id,space,t,q,phi_kind,value,tolerance\n"
                  << stem(input) << ',' << space << ',' << format_double(t) << ',' << format_double(q) << ','
                  << phi.name() << ',' << format_double(v) << ",0\n";
        return 0;
      }

      if (maximal->parsed()) {
        GridFunction m;
        if (mop == "radial") m = radial_maximal(f, gauss, scales);
        if (mop == "nontan") m = nontangential_maximal(f, gauss, aperture, scales);
        if (mop == "grand") m = grand_maximal(f, mcfg, GrandKind::nontangential);
        if (mop == "grand-radial") m = grand_maximal(f, mcfg, GrandKind::radial);
        if (mop == "peetre") m = peetre_maximal(f, gauss, mcfg.peetre_b, scales);
        if (mop == "grand-peetre") m = grand_maximal(f, mcfg, GrandKind::peetre);
        if (mop == "centered") m = hl_centered(f, mcfg);
        if (mop == "uncentered") m = hl_uncentered(f, mcfg);
        const auto path = out_path(common, stem(input) + "." + mop + ".gridfn");
        save_gridfn(path, m);
        std::cout << path << '\n';
        return 0;
      }

      if (lp->parsed()) {
        GridFunction m;
        if (lop == "poisson") {
          m = poisson_maximal(f, scales);
        } else {
          auto cfg = LPConfig::defaults(f.spec(), phi.p_minus(), q);
          if (lambda > 0) cfg.lambda = lambda;
          const auto bump = make_band_bump(f.spec());
          if (lop == "g") m = g_function(f, bump, cfg);
          if (lop == "S") m = lusin_S(f, bump, cfg);
          if (lop == "gstar") m = g_lambda_star(f, bump, cfg);
        }
        const auto path = out_path(common, stem(input) + "." + lop + ".gridfn");
        save_gridfn(path, m);
        std::cout << path << '\n';
        return 0;
      }

      if (hardy->parsed()) {
        GridFunction m;
        if (hnorm == "radial") m = radial_maximal(f, gauss, scales);
        if (hnorm == "nontangential") m = nontangential_maximal(f, gauss, 1.0, scales);
        if (hnorm == "grand") m = grand_maximal(f, mcfg, GrandKind::nontangential);
        if (hnorm == "poisson") m = poisson_maximal(f, scales);
        if (hnorm == "g" || hnorm == "S" || hnorm == "gstar") {
          const auto cfg = LPConfig::defaults(f.spec(), phi.p_minus(), q);
          const auto bump = make_band_bump(f.spec());
          m = hnorm == "g" ? g_function(f, bump, cfg) : hnorm == "S" ? lusin_S(f, bump, cfg) : g_lambda_star(f, bump, cfg);
        }
        std::cout << "function_id,norm,t,q,phi_kind,value\n"
                  << stem(input) << ',' << hnorm << ',' << format_double(t) << ',' << format_double(q) << ','
                  << phi.name() << ',' << format_double(slice_norm(m, p)) << '\n';
        return 0;
      }

      // decompose
      const auto d = atomic_decompose(f, p, mcfg, s_exp, d_order);
      std::ofstream man(out_path(common, "manifest.csv"));
      man << "index,level,lambda,center0,center1,side,r,d,size_ratio,moment_max,moment_tol,payload\n";
      for (std::size_t k = 0; k < d.terms.size(); ++k) {
        const auto& term = d.terms[k];
        const std::string name = "atom_" + std::to_string(k) + ".gridfn";
        save_gridfn(out_path(common, name), term.atom.payload);
        man << k << ',' << term.level << ',' << format_double(term.lambda) << ','
            << format_double(term.atom.Q.center[0]) << ',' << format_double(term.atom.Q.center[1]) << ','
            << format_double(term.atom.Q.side) << ",inf," << term.atom.d << ',';
        const auto v = validate_atom(term.atom, p);
        man << format_double(v.size_ratio) << ',' << format_double(v.moment_max) << ','
            << format_double(v.moment_tol) << ',' << name << '\n';
      }
      save_gridfn(out_path(common, "residual.gridfn"), d.residual);
      auto rec = d.reconstruct();
      double err = 0, nf = 0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        err += (f[i] - rec[i]) * (f[i] - rec[i]);
        nf += f[i] * f[i];
      }
      std::cout << "terms=" << d.terms.size() << " levels=" << d.level_lo << ".." << d.level_hi
                << " s_functional=" << format_double(finite_atomic_norm(d, p, s_exp))
                << " reconstruction_rel_l2=" << format_double(nf > 0 ? std::sqrt(err / nf) : 0) << '\n';
      return 0;
    }

    if (cz->parsed()) {
      const auto f = load_input(input, csv_L);
      CZKernel k{parse_cz_kind(kernel), 1, eps, parse_realization(realization)};
      const auto path = out_path(common, stem(input) + "." + kernel + ".gridfn");
      save_gridfn(path, apply_cz(k, f));
      std::cout << path << '\n';
      return 0;
    }

    if (corpus->parsed()) {
      RunConfig cfg = load_config(common);
      SuiteContext ctx(cfg, BracketBook{});
      for (const auto& it : ctx.corpus(grid_name)) {
        const auto path = out_path(common, it.name + ".gridfn");
        save_gridfn(path, it.f);
        std::cout << it.family << ',' << path << '\n';
      }
      return 0;
    }

    // verify
    RunConfig cfg = load_config(common);
    if (calibrate) cfg.calibrate = true;
    if (!golden.empty()) cfg.golden_dir = golden;
    if (suites.empty()) suites = registered_suites();
    auto ctx = SuiteContext::from_config(cfg);
    bool ok = true;
    if (cfg.calibrate) {
      // the calibration corpus is the union over the calibration seeds
      std::vector<std::uint64_t> seeds = common.seed_set ? std::vector<std::uint64_t>{cfg.seed} : cfg.calibration_seeds;
      for (auto s : seeds) {
        ctx.reseed(s);
        for (const auto& name : suites) {
          auto rep = run_suite(name, ctx);
          std::ofstream(out_path(common, name + ".seed" + std::to_string(s) + ".csv")) << rep.csv();
          std::cout << "seed=" << s << ' ' << rep.summary() << std::endl;
        }
      }
    } else {
      for (const auto& name : suites) {
        auto rep = run_suite(name, ctx);
        std::ofstream(out_path(common, name + ".csv")) << rep.csv();
        std::cout << rep.summary() << std::endl;
        ok = ok && rep.passed();
      }
    }
    if (cfg.calibrate) {
      const std::string dir = cfg.golden_dir.empty() ? std::string(OSLAB_GOLDEN_DIR) : cfg.golden_dir;
      fs::create_directories(dir);
      ctx.book.save(dir + "/brackets.json", cfg.seed);
      std::cout << "brackets=" << ctx.book.size() << " written to " << dir << "/brackets.json\n";
    }
    return ok ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
