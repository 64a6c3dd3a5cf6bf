#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "oslab/error.hpp"
#include "oslab/grid.hpp"

namespace oslab {

struct CorpusCounts {
  int indicators = 3;
  int gaussians = 3;
  int atoms = 3;
  int molecules = 2;
  int trig = 3;
  int whitney = 2;
  int total() const { return indicators + gaussians + atoms + molecules + trig + whitney; }
};

// Run settings, read from an INI file with sections [run], [grids], [sweep], [corpus1d], [corpus2d], [sizes].
struct RunConfig {
  std::uint64_t seed = 2;
  bool calibrate = false;
  std::string golden_dir;
  double bracket_slack = 1.5;
  std::vector<std::uint64_t> calibration_seeds{1, 3, 4, 5};

  GridSpec norm1d{1, 8, 4096};
  GridSpec norm2d{2, 4, 256};
  GridSpec op1d{1, 8, 1024};
  GridSpec op2d{2, 4, 128};

  std::vector<double> t_sweep{0.25, 0.5, 1, 2};
  CorpusCounts corpus1d{};
  CorpusCounts corpus2d{1, 1, 1, 0, 1, 0};

  int atom_count = 100;
  int fs_families = 10;
  int fs_family_size = 8;
  int holder_pairs = 50;

  static std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) out.push_back(std::stod(item));
    return out;
  }

  static GridSpec parse_grid(const std::string& s, const GridSpec& fallback) {
    auto v = parse_list(s);
    if (v.empty()) return fallback;
    require(v.size() == 3, ErrorKind::invalid_argument, "grid must be dim,half_width,points: " + s);
    GridSpec g{int(v[0]), v[1], std::size_t(v[2])};
    g.validate();
    return g;
  }

  static RunConfig from_ptree(const boost::property_tree::ptree& pt) {
    RunConfig c;
    c.seed = pt.get<std::uint64_t>("run.seed", c.seed);
    c.calibrate = pt.get<bool>("run.calibrate", c.calibrate);
    c.golden_dir = pt.get<std::string>("run.golden_dir", c.golden_dir);
    c.bracket_slack = pt.get<double>("run.bracket_slack", c.bracket_slack);
    if (auto s = pt.get_optional<std::string>("run.calibration_seeds")) {
      c.calibration_seeds.clear();
      for (double v : parse_list(*s)) c.calibration_seeds.push_back(std::uint64_t(v));
    }
    c.norm1d = parse_grid(pt.get<std::string>("grids.norm1d", ""), c.norm1d);
    c.norm2d = parse_grid(pt.get<std::string>("grids.norm2d", ""), c.norm2d);
    c.op1d = parse_grid(pt.get<std::string>("grids.op1d", ""), c.op1d);
    c.op2d = parse_grid(pt.get<std::string>("grids.op2d", ""), c.op2d);
    if (auto t = pt.get_optional<std::string>("sweep.t")) c.t_sweep = parse_list(*t);
    auto counts = [&](const std::string& sec, CorpusCounts& k) {
      k.indicators = pt.get<int>(sec + ".indicators", k.indicators);
      k.gaussians = pt.get<int>(sec + ".gaussians", k.gaussians);
      k.atoms = pt.get<int>(sec + ".atoms", k.atoms);
      k.molecules = pt.get<int>(sec + ".molecules", k.molecules);
      k.trig = pt.get<int>(sec + ".trig", k.trig);
      k.whitney = pt.get<int>(sec + ".whitney", k.whitney);
    };
    counts("corpus1d", c.corpus1d);
    counts("corpus2d", c.corpus2d);
    c.atom_count = pt.get<int>("sizes.atoms", c.atom_count);
    c.fs_families = pt.get<int>("sizes.fs_families", c.fs_families);
    c.fs_family_size = pt.get<int>("sizes.fs_family_size", c.fs_family_size);
    c.holder_pairs = pt.get<int>("sizes.holder_pairs", c.holder_pairs);
    return c;
  }

  static RunConfig load(const std::string& path) {
    boost::property_tree::ptree pt;
    try {
      boost::property_tree::read_ini(path, pt);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw Error(ErrorKind::io_error, e.what());
    }
    return from_ptree(pt);
  }
};

}  // namespace oslab
