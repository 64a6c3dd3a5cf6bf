#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "oslab/error.hpp"

namespace oslab {

enum class OrliczKind { power, power_log, log_quotient, tabulated };

inline std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  require(lo > 0 && hi > lo && points >= 2, ErrorKind::invalid_argument, "log_grid needs 0 < lo < hi");
  std::vector<double> out(points);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < points; ++i) out[i] = std::exp(a + (b - a) * double(i) / double(points - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Orlicz function Phi: (0,inf) -> (0,inf), increasing, with declared lower/upper types.
class OrliczFunction {
 public:
  static OrliczFunction power(double r) {
    require(r > 0 && std::isfinite(r), ErrorKind::invalid_argument, "power exponent must be positive");
    OrliczFunction f;
    f.kind_ = OrliczKind::power;
    f.param_ = r;
    f.p_minus_ = f.p_plus_ = r;
    f.tau_min_ = 0;
    f.tau_max_ = std::numeric_limits<double>::infinity();
    return f;
  }

  // tau^p log(e + tau)
  static OrliczFunction power_log(double p) {
    require(p > 0 && std::isfinite(p), ErrorKind::invalid_argument, "power_log exponent must be positive");
    OrliczFunction f;
    f.kind_ = OrliczKind::power_log;
    f.param_ = p;
    f.p_minus_ = p;
    f.p_plus_ = p + 0.32;
    return f;
  }

  // tau / log(e + tau)
  static OrliczFunction log_quotient() {
    OrliczFunction f;
    f.kind_ = OrliczKind::log_quotient;
    f.param_ = 0;
    f.p_minus_ = 0.68;
    f.p_plus_ = 1;
    return f;
  }

  static OrliczFunction tabulated(std::vector<double> tau, std::vector<double> phi,
                                  std::optional<double> p_minus = {}, std::optional<double> p_plus = {}) {
    require(tau.size() == phi.size() && tau.size() >= 2, ErrorKind::invalid_argument,
            "tabulated Orlicz function needs matching arrays of length >= 2");
    OrliczFunction f;
    f.kind_ = OrliczKind::tabulated;
    f.log_tau_.resize(tau.size());
    f.log_phi_.resize(tau.size());
    double smin = std::numeric_limits<double>::infinity(), smax = -smin;
    for (std::size_t i = 0; i < tau.size(); ++i) {
      require(tau[i] > 0 && phi[i] > 0, ErrorKind::invalid_argument, "tabulated samples must be positive");
      if (i > 0)
        require(tau[i] > tau[i - 1] && phi[i] > phi[i - 1], ErrorKind::invalid_argument,
                "tabulated samples must be strictly increasing");
      f.log_tau_[i] = std::log(tau[i]);
      f.log_phi_[i] = std::log(phi[i]);
      if (i > 0) {
        double s = (f.log_phi_[i] - f.log_phi_[i - 1]) / (f.log_tau_[i] - f.log_tau_[i - 1]);
        smin = std::min(smin, s);
        smax = std::max(smax, s);
      }
    }
    f.tau_min_ = tau.front();
    f.tau_max_ = tau.back();
    f.p_minus_ = p_minus.value_or(smin);
    f.p_plus_ = p_plus.value_or(smax);
    f.tau_ = std::move(tau);
    f.phi_ = std::move(phi);
    return f;
  }

  OrliczKind kind() const { return kind_; }
  double param() const { return param_; }
  double p_minus() const { return p_minus_; }
  double p_plus() const { return p_plus_; }
  std::pair<double, double> eval_domain() const { return {tau_min_, tau_max_}; }
  const std::vector<double>& tau_samples() const { return tau_; }
  const std::vector<double>& phi_samples() const { return phi_; }
  bool is_power() const { return kind_ == OrliczKind::power; }

  std::string name() const {
    switch (kind_) {
      case OrliczKind::power: return "power(" + short_double(param_) + ")";
      case OrliczKind::power_log: return "power_log(" + short_double(param_) + ")";
      case OrliczKind::log_quotient: return "log_quotient";
      case OrliczKind::tabulated: return "tabulated(" + std::to_string(tau_.size()) + ")";
    }
    return "?";
  }

  double operator()(double tau) const {
    require(tau >= 0, ErrorKind::invalid_argument, "Orlicz function evaluated at negative argument");
    if (tau == 0) return 0;
    switch (kind_) {
      case OrliczKind::power: return std::pow(tau, param_);
      case OrliczKind::power_log: return std::pow(tau, param_) * std::log(std::numbers::e + tau);
      case OrliczKind::log_quotient: return tau / std::log(std::numbers::e + tau);
      case OrliczKind::tabulated: return eval_table(tau);
    }
    return 0;
  }

  double inverse(double y) const {
    require(y >= 0, ErrorKind::invalid_argument, "Orlicz inverse of negative value");
    if (y == 0) return 0;
    if (kind_ == OrliczKind::power) return std::pow(y, 1.0 / param_);
    if (y > (*this)(tau_max_))
      throw Error(ErrorKind::out_of_range, "value " + format_double(y) + " exceeds Phi(tau_max) for " + name());
    double lo = tau_min_, hi = tau_max_;
    for (int k = 0; k < 4000 && (*this)(lo) > y; ++k) lo *= 0.5;
    for (int it = 0; it < 200; ++it) {
      if (hi <= lo * (1 + 1e-12)) break;
      double mid = std::sqrt(lo * hi);
      if ((*this)(mid) < y) lo = mid; else hi = mid;
    }
    return std::sqrt(lo * hi);
  }

  std::string to_record() const {
    std::ostringstream os;
    os << "kind=" << kind_name(kind_) << "\n";
    os << "params=" << format_double(param_) << "\n";
    os << "p_minus=" << format_double(p_minus_) << "\n";
    os << "p_plus=" << format_double(p_plus_) << "\n";
    os << "eval_domain=" << format_double(tau_min_) << " " << format_double(tau_max_) << "\n";
    if (kind_ == OrliczKind::tabulated) {
      os << "tau=";
      for (std::size_t i = 0; i < tau_.size(); ++i) os << (i ? " " : "") << format_double(tau_[i]);
      os << "\nphi=";
      for (std::size_t i = 0; i < phi_.size(); ++i) os << (i ? " " : "") << format_double(phi_[i]);
      os << "\n";
    }
    return os.str();
  }

  static OrliczFunction from_record(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    require(kv.count("kind") > 0, ErrorKind::invalid_argument, "Orlicz record without kind");
    const std::string kind = kv["kind"];
    OrliczFunction f;
    if (kind == "power") {
      f = power(std::stod(kv.at("params")));
    } else if (kind == "power_log") {
      f = power_log(std::stod(kv.at("params")));
    } else if (kind == "log_quotient") {
      f = log_quotient();
    } else if (kind == "tabulated") {
      f = tabulated(parse_list(kv.at("tau")), parse_list(kv.at("phi")));
    } else {
      throw Error(ErrorKind::invalid_argument, "unknown Orlicz kind " + kind);
    }
    if (kv.count("p_minus")) f.p_minus_ = std::stod(kv["p_minus"]);
    if (kv.count("p_plus")) f.p_plus_ = std::stod(kv["p_plus"]);
    if (kv.count("eval_domain") && kind != "tabulated") {
      auto d = parse_list(kv["eval_domain"]);
      require(d.size() == 2, ErrorKind::invalid_argument, "eval_domain needs two values");
      f.tau_min_ = d[0];
      f.tau_max_ = d[1];
    }
    return f;
  }

  friend bool operator==(const OrliczFunction& a, const OrliczFunction& b) {
    return a.kind_ == b.kind_ && a.param_ == b.param_ && a.p_minus_ == b.p_minus_ && a.p_plus_ == b.p_plus_ &&
           a.tau_min_ == b.tau_min_ && a.tau_max_ == b.tau_max_ && a.tau_ == b.tau_ && a.phi_ == b.phi_;
  }

 private:
  OrliczFunction() = default;

  static const char* kind_name(OrliczKind k) {
    switch (k) {
      case OrliczKind::power: return "power";
      case OrliczKind::power_log: return "power_log";
      case OrliczKind::log_quotient: return "log_quotient";
      case OrliczKind::tabulated: return "tabulated";
    }
    return "?";
  }

  static std::string short_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
  }

  static std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }

  static std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(std::strtod(tok.c_str(), nullptr));
    return out;
  }

  double eval_table(double tau) const {
    if (tau > tau_max_)
      throw Error(ErrorKind::domain_exceeded, "tau=" + format_double(tau) + " above tabulated range");
    const double lt = std::log(tau);
    std::size_t k;
    if (lt <= log_tau_.front()) {
      k = 0;
    } else {
      auto it = std::upper_bound(log_tau_.begin(), log_tau_.end(), lt);
      k = std::min<std::size_t>(std::size_t(it - log_tau_.begin()) - 1, log_tau_.size() - 2);
    }
    const double s = (log_phi_[k + 1] - log_phi_[k]) / (log_tau_[k + 1] - log_tau_[k]);
    return std::exp(log_phi_[k] + s * (lt - log_tau_[k]));
  }

  OrliczKind kind_ = OrliczKind::power;
  double param_ = 1;
  double p_minus_ = 1, p_plus_ = 1;
  double tau_min_ = 1e-15, tau_max_ = 1e15;
  std::vector<double> tau_, phi_, log_tau_, log_phi_;
};

inline double eval(const OrliczFunction& phi, double tau) { return phi(tau); }
inline double inverse(const OrliczFunction& phi, double y) { return phi.inverse(y); }

// Accepts power(r), power_log(p), log_quotient.
inline OrliczFunction parse_orlicz(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += char(std::tolower(static_cast<unsigned char>(c)));
  auto arg = [&](const std::string& prefix) -> std::optional<double> {
    if (s.rfind(prefix + "(", 0) != 0 || s.back() != ')') return std::nullopt;
    return std::stod(s.substr(prefix.size() + 1, s.size() - prefix.size() - 2));
  };
  if (auto r = arg("power")) return OrliczFunction::power(*r);
  if (auto p = arg("power_log")) return OrliczFunction::power_log(*p);
  if (auto p = arg("powerlog")) return OrliczFunction::power_log(*p);
  if (s == "log_quotient" || s == "logquotient") return OrliczFunction::log_quotient();
  throw Error(ErrorKind::invalid_argument, "cannot parse Orlicz function '" + text + "'");
}

struct TypeEstimate {
  double p_lo, p_hi;
  double c_lo, c_hi;
};

// Phi(s tau) <= C s^p Phi(tau): p_lo from s<1, p_hi from s>1.
inline TypeEstimate estimate_types(const OrliczFunction& phi, const std::vector<double>& s_grid,
                                   const std::vector<double>& tau_grid) {
  double p_lo = std::numeric_limits<double>::infinity();
  double p_hi = -p_lo;
  for (double s : s_grid) {
    if (std::abs(std::log(s)) < 1e-9) continue;
    for (double tau : tau_grid) {
      double e = std::log(phi(s * tau) / phi(tau)) / std::log(s);
      if (s < 1) p_lo = std::min(p_lo, e); else p_hi = std::max(p_hi, e);
    }
  }
  double c_lo = 0, c_hi = 0;
  for (double s : s_grid) {
    if (std::abs(std::log(s)) < 1e-9) continue;
    for (double tau : tau_grid) {
      double r = phi(s * tau) / phi(tau);
      if (s < 1) c_lo = std::max(c_lo, r / std::pow(s, p_lo));
      if (s > 1) c_hi = std::max(c_hi, r / std::pow(s, p_hi));
    }
  }
  return {p_lo, p_hi, c_lo, c_hi};
}

inline double check_quasi_triangle(const OrliczFunction& phi, double t1, double t2) {
  return phi(t1 + t2) / (phi(t1) + phi(t2));
}

inline bool is_convex_on(const OrliczFunction& phi, const std::vector<double>& xs, double rel_tol = 1e-9) {
  double prev = 0;
  double prev_val = 0, prev_x = 0;
  for (double x : xs) {
    double v = phi(x);
    double slope = (v - prev_val) / (x - prev_x);
    if (slope < prev * (1 - rel_tol)) return false;
    prev = slope;
    prev_val = v;
    prev_x = x;
  }
  return true;
}

// Phi~(t) = int_0^t sup_{tau<s} Phi(tau)/tau ds.
inline OrliczFunction convexify(const OrliczFunction& phi, const std::vector<double>& grid) {
  std::vector<double> out(grid.size());
  double g = phi(grid[0]) / grid[0];
  out[0] = grid[0] * g / std::max(1.0, phi.p_minus());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    double gi = std::max(g, phi(grid[i]) / grid[i]);
    out[i] = out[i - 1] + 0.5 * (grid[i] - grid[i - 1]) * (g + gi);
    g = gi;
  }
  return OrliczFunction::tabulated(grid, std::move(out));
}

inline OrliczFunction convexify(const OrliczFunction& phi) {
  return convexify(phi, log_grid(1e-9, 1e9, 4096));
}

struct LegendreGrid {
  double x_min = 1e-9;
  double x_max = 1e9;
  std::size_t points = 4096;
};

// Psi(y) = sup_x (x y - Phi(x)).
class YoungConjugate {
 public:
  YoungConjugate(const OrliczFunction& phi, LegendreGrid grid = {}, bool convexify_input = false)
      : primal_(phi) {
    xs_ = log_grid(grid.x_min, grid.x_max, grid.points);
    if (!is_convex_on(primal_, xs_)) {
      if (!convexify_input)
        throw Error(ErrorKind::non_convex_input, phi.name() + " is not convex; request convexification");
      primal_ = convexify(phi, xs_);
    }
    vals_.resize(xs_.size());
    for (std::size_t i = 0; i < xs_.size(); ++i) vals_[i] = primal_(xs_[i]);
    slopes_.resize(xs_.size() - 1);
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i)
      slopes_[i] = (vals_[i + 1] - vals_[i]) / (xs_[i + 1] - xs_[i]);
    build_table();
  }

  const OrliczFunction& primal() const { return primal_; }
  bool has_psi() const { return psi_.has_value(); }
  const OrliczFunction& psi() const {
    require(psi_.has_value(), ErrorKind::domain_exceeded, "conjugate is not a finite positive Orlicz function");
    return *psi_;
  }

  double operator()(double y) const {
    require(y >= 0, ErrorKind::invalid_argument, "conjugate evaluated at negative argument");
    if (y == 0) return 0;
    const std::size_t n = xs_.size();
    std::size_t k = std::size_t(std::lower_bound(slopes_.begin(), slopes_.end(), y) - slopes_.begin());
    if (k >= n - 1)
      throw Error(ErrorKind::domain_exceeded, "conjugate argument " + format_double(y) + " beyond Legendre grid");
    double best = 0;
    std::size_t arg = k;
    const std::size_t lo = k >= 3 ? k - 3 : 0, hi = std::min(n - 1, k + 3);
    for (std::size_t i = lo; i <= hi; ++i) {
      double v = xs_[i] * y - vals_[i];
      if (v > best) { best = v; arg = i; }
    }
    if (best <= 0) return std::max(0.0, best);
    double a = xs_[arg > 0 ? arg - 1 : 0], b = xs_[std::min(n - 1, arg + 1)];
    auto obj = [&](double x) { return x * y - primal_(x); };
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = obj(c), fd = obj(d);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * b; ++it) {
      if (fc > fd) { b = d; d = c; fd = fc; c = b - gr * (b - a); fc = obj(c); }
      else { a = c; c = d; fc = fd; d = a + gr * (b - a); fd = obj(d); }
    }
    return std::max(best, std::max(fc, fd));
  }

  double inverse(double t) const {
    require(t >= 0, ErrorKind::invalid_argument, "conjugate inverse of negative value");
    if (t == 0) return 0;
    double hi = 1;
    while ((*this)(hi) < t) hi *= 2;
    double lo = hi;
    while (lo > 1e-300 && (*this)(lo) >= t) lo *= 0.5;
    for (int it = 0; it < 200 && hi > lo * (1 + 1e-13); ++it) {
      double mid = std::sqrt(lo * hi);
      if ((*this)(mid) < t) lo = mid; else hi = mid;
    }
    return std::sqrt(lo * hi);
  }

 private:
  void build_table() {
    const std::size_t n = xs_.size();
    double y0 = std::max(slopes_[1], 1e-300), y1 = slopes_[n - 4];
    if (!(y1 > y0)) return;
    std::vector<double> ys, ps;
    for (double y : log_grid(y0, y1, n)) {
      double v = (*this)(y);
      if (v <= 0 || (!ps.empty() && v <= ps.back())) continue;
      ys.push_back(y);
      ps.push_back(v);
    }
    if (ys.size() >= 2) psi_ = OrliczFunction::tabulated(std::move(ys), std::move(ps));
  }

  OrliczFunction primal_;
  std::vector<double> xs_, vals_, slopes_;
  std::optional<OrliczFunction> psi_;
};

inline YoungConjugate conjugate(const OrliczFunction& phi, LegendreGrid grid = {}, bool convexify_input = false) {
  return YoungConjugate(phi, grid, convexify_input);
}

}  // namespace oslab
