#pragma once

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <string>

#include "oslab/error.hpp"

namespace oslab {

// Empirical two-sided constants. Calibration widens [lo, hi] over every observation; verification
// accepts a value inside [lo / slack, hi * slack].
class BracketBook {
 public:
  enum class Mode { calibrate, verify };

  BracketBook(Mode mode = Mode::verify, double slack = 1.5) : mode_(mode), slack_(slack) {}

  static BracketBook load(const std::string& path, double slack = 1.5) {
    BracketBook b(Mode::verify, slack);
    std::ifstream in(path);
    require(bool(in), ErrorKind::io_error, "cannot open bracket file " + path);
    nlohmann::json j;
    in >> j;
    for (auto& [key, v] : j.at("brackets").items())
      b.frozen_[key] = {v.at("lo").get<double>(), v.at("hi").get<double>(), v.value("count", std::size_t(0))};
    return b;
  }

  Mode mode() const { return mode_; }
  double slack() const { return slack_; }

  struct Verdict {
    bool pass;
    double lo, hi;
    std::string note;
  };

  // Two-sided bracket; upper_only drops the lower side.
  Verdict observe(const std::string& key, double v, bool upper_only = false) {
    if (mode_ == Mode::calibrate) {
      if (!std::isfinite(v)) return {false, NAN, NAN, "non-finite value"};
      auto& e = frozen_[key];
      if (e.count == 0) {
        e.lo = v;
        e.hi = v;
      } else {
        e.lo = std::min(e.lo, v);
        e.hi = std::max(e.hi, v);
      }
      ++e.count;
      return {std::isfinite(v), upper_only ? -INFINITY : e.lo, e.hi, "calibrating"};
    }
    auto it = frozen_.find(key);
    if (it == frozen_.end()) return {false, NAN, NAN, "no frozen bracket for " + key};
    const double lo = upper_only ? -INFINITY : it->second.lo / slack_, hi = it->second.hi * slack_;
    return {std::isfinite(v) && v >= lo && v <= hi, lo, hi, ""};
  }

  // Keys already in the file but not observed here are kept.
  void save(const std::string& path, std::uint64_t seed) const {
    nlohmann::json j;
    if (std::ifstream in(path); in) {
      try {
        in >> j;
      } catch (const nlohmann::json::exception&) {
        j = nlohmann::json::object();
      }
    }
    j["seed"] = seed;
    j["slack"] = slack_;
    auto& br = j["brackets"];
    if (!br.is_object()) br = nlohmann::json::object();
    for (const auto& [key, e] : frozen_) br[key] = {{"lo", e.lo}, {"hi", e.hi}, {"count", e.count}};
    std::ofstream out(path);
    require(bool(out), ErrorKind::io_error, "cannot write bracket file " + path);
    out << j.dump(2) << '\n';
  }

  std::size_t size() const { return frozen_.size(); }

 private:
  struct Entry {
    double lo = 0, hi = 0;
    std::size_t count = 0;
  };
  Mode mode_;
  double slack_;
  std::map<std::string, Entry> frozen_;
};

}  // namespace oslab
