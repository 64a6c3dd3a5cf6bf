#pragma once

#include <openssl/evp.h>

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "oslab/grid.hpp"
#include "oslab/orlicz.hpp"

namespace oslab {

inline std::string sha256_hex(const void* data, std::size_t len) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int n = 0;
  EVP_Digest(data, len, md, &n, EVP_sha256(), nullptr);
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

inline std::string sha256_hex(const std::string& s) { return sha256_hex(s.data(), s.size()); }

// Short content digest of a grid function plus a parameter string.
inline std::string input_digest(const GridFunction& f, const std::string& extra = "") {
  std::ostringstream os;
  write_gridfn(os, f);
  os << extra;
  return sha256_hex(os.str()).substr(0, 16);
}

struct Case {
  std::string id;
  int criterion = 0;  // acceptance criterion covered, 0 for supporting checks
  std::string property;
  std::string digest;
  double measured = 0;
  double lo = -INFINITY;
  double hi = INFINITY;
  double tol = 0;
  bool pass = true;
  std::string note;
};

struct Environment {
  std::string grid;
  std::string t_sweep;
  std::string phi;
  std::string q;
  std::uint64_t seed = 0;
};

class VerificationReport {
 public:
  explicit VerificationReport(std::string suite = "") : suite_(std::move(suite)) {}

  const std::string& suite() const { return suite_; }
  Environment& env() { return env_; }
  const Environment& env() const { return env_; }
  const std::vector<Case>& cases() const { return cases_; }

  void add(Case c) { cases_.push_back(std::move(c)); }

  // measured within [lo - tol, hi + tol]
  Case& check(std::string id, int criterion, std::string property, std::string digest, double measured, double lo,
              double hi, double tol = 0, std::string note = "") {
    Case c{std::move(id), criterion, std::move(property), std::move(digest), measured, lo, hi, tol, true, std::move(note)};
    c.pass = std::isfinite(measured) && measured >= lo - tol && measured <= hi + tol;
    cases_.push_back(std::move(c));
    return cases_.back();
  }

  std::size_t failures() const {
    std::size_t k = 0;
    for (const auto& c : cases_) k += c.pass ? 0 : 1;
    return k;
  }
  bool passed() const { return failures() == 0; }

  std::string csv() const {
    std::ostringstream os;
    os << "suite,case,criterion,property,inputs_digest,measured,lo,hi,tol,pass,note\n";
    for (const auto& c : cases_)
      os << suite_ << ',' << c.id << ',' << c.criterion << ",\"" << c.property << "\"," << c.digest << ','
         << format_double(c.measured) << ',' << format_double(c.lo) << ',' << format_double(c.hi) << ','
         << format_double(c.tol) << ',' << (c.pass ? "PASS" : "FAIL") << ",\"" << c.note << "\"\n";
    os << "# env grid=" << env_.grid << " t=" << env_.t_sweep << " phi=" << env_.phi << " q=" << env_.q
       << " seed=" << env_.seed << '\n';
    return os.str();
  }

  std::string digest() const { return sha256_hex(csv()); }

  std::string summary() const {
    return "SUITE " + suite_ + ' ' + (passed() ? "PASS" : "FAIL") + " cases=" + std::to_string(cases_.size()) +
           " failures=" + std::to_string(failures());
  }

 private:
  std::string suite_;
  Environment env_;
  std::vector<Case> cases_;
};

}  // namespace oslab
