#pragma once

#include <fftw3.h>

#include <array>
#include <cmath>
#include <complex>
#include <cstring>
#include <map>
#include <numbers>
#include <type_traits>
#include <vector>

#include "oslab/grid.hpp"

namespace oslab {

namespace detail {

// Plans are made once per shape on scratch storage and then executed on caller arrays.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int dim, int n0, int n1, int sign) {
    auto key = std::array<int, 4>{dim, n0, n1, sign};
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::size_t total = std::size_t(n0) * std::size_t(dim == 2 ? n1 : 1);
    auto* scratch = fftw_alloc_complex(total);
    fftw_plan p = dim == 1 ? fftw_plan_dft_1d(n0, scratch, scratch, sign, FFTW_ESTIMATE)
                           : fftw_plan_dft_2d(n0, n1, scratch, scratch, sign, FFTW_ESTIMATE);
    fftw_free(scratch);
    plans_[key] = p;
    return p;
  }

  ~PlanCache() {
    for (auto& [k, p] : plans_) fftw_destroy_plan(p);
  }

 private:
  std::map<std::array<int, 4>, fftw_plan> plans_;
};

struct AlignedComplex {
  explicit AlignedComplex(std::size_t n) : size(n), data(fftw_alloc_complex(n)) {
    std::memset(static_cast<void*>(data), 0, n * sizeof(fftw_complex));
  }
  AlignedComplex(const AlignedComplex&) = delete;
  AlignedComplex& operator=(const AlignedComplex&) = delete;
  ~AlignedComplex() { fftw_free(data); }
  complex* begin() { return reinterpret_cast<complex*>(data); }
  complex& operator[](std::size_t i) { return begin()[i]; }
  std::size_t size;
  fftw_complex* data;
};

inline void execute(AlignedComplex& buf, int dim, int n, int sign) {
  fftw_plan p = PlanCache::instance().get(dim, n, n, sign);
  fftw_execute_dft(p, buf.data, buf.data);
}

inline std::size_t next_smooth(std::size_t n) {
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

}  // namespace detail

// Signed frequency index of FFT bin k on an axis of n points.
inline long signed_bin(std::size_t k, std::size_t n) {
  return k < n / 2 ? long(k) : long(k) - long(n);
}

struct Frequency {
  std::array<double, 2> xi{0, 0};
  std::array<long, 2> bin{0, 0};
  bool nyquist = false;  // some axis sits at the unpaired bin -N/2
  double norm(int dim) const { return dim == 1 ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]); }
};

// Forward transform of a grid function, reusable for several periodic-regime multipliers.
class Spectrum {
 public:
  template <class T>
  explicit Spectrum(const BasicGridFunction<T>& f) : spec_(f.spec()), coef_(f.size()) {
    detail::AlignedComplex buf(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) buf[i] = complex(f[i]);
    detail::execute(buf, spec_.dim, int(spec_.points_per_axis), FFTW_FORWARD);
    std::copy(buf.begin(), buf.begin() + f.size(), coef_.begin());
  }

  const GridSpec& spec() const { return spec_; }

  Frequency frequency(std::size_t i) const {
    const std::size_t n = spec_.points_per_axis;
    const double w = std::numbers::pi / spec_.half_width;
    Frequency fr;
    std::size_t k0 = spec_.dim == 1 ? i : i / n, k1 = spec_.dim == 1 ? 0 : i % n;
    fr.bin = {signed_bin(k0, n), spec_.dim == 2 ? signed_bin(k1, n) : 0};
    fr.xi = {w * double(fr.bin[0]), w * double(fr.bin[1])};
    fr.nyquist = k0 == n / 2 || (spec_.dim == 2 && k1 == n / 2);
    return fr;
  }

  // F^{-1}(m(xi) F f) on the grid.
  template <class Symbol>
  std::vector<complex> apply(Symbol&& symbol) const {
    detail::AlignedComplex buf(coef_.size());
    for (std::size_t i = 0; i < coef_.size(); ++i) buf[i] = coef_[i] * complex(symbol(frequency(i)));
    detail::execute(buf, spec_.dim, int(spec_.points_per_axis), FFTW_BACKWARD);
    const double scale = 1.0 / double(coef_.size());
    std::vector<complex> out(coef_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf[i] * scale;
    return out;
  }

 private:
  GridSpec spec_;
  std::vector<complex> coef_;
};

// Periodic-regime Fourier multiplier: F^{-1}(m(xi) F f). For real input the real part is returned.
template <class T, class Symbol>
BasicGridFunction<T> apply_symbol(const BasicGridFunction<T>& f, Symbol&& symbol) {
  auto u = Spectrum(f).apply(symbol);
  std::vector<T> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if constexpr (std::is_same_v<T, complex>) out[i] = u[i];
    else out[i] = u[i].real();
  }
  return BasicGridFunction<T>(f.spec(), std::move(out));
}

// Zero-extension convolution: box samples against a kernel supported on offsets |k_i| <= reach,
// evaluated on the extended lattice [-extend, N + extend)^dim.
class LinearConvolver {
 public:
  LinearConvolver(const GridSpec& spec, int reach, int extend) : spec_(spec), reach_(reach), extend_(extend) {
    const std::size_t n = spec.points_per_axis;
    std::size_t need = std::max(n + 2 * std::size_t(extend), n + std::size_t(extend) + std::size_t(reach) + 1);
    m_ = detail::next_smooth(need);
    total_ = spec.dim == 1 ? m_ : m_ * m_;
  }

  int reach() const { return reach_; }
  int extend() const { return extend_; }
  std::size_t out_axis() const { return spec_.points_per_axis + 2 * std::size_t(extend_); }
  std::size_t out_size() const { return spec_.dim == 1 ? out_axis() : out_axis() * out_axis(); }

  template <class T>
  std::vector<complex> spectrum(const std::vector<T>& box) const {
    detail::AlignedComplex buf(total_);
    const std::size_t n = spec_.points_per_axis;
    if (spec_.dim == 1) {
      for (std::size_t i = 0; i < n; ++i) buf[i] = complex(box[i]);
    } else {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) buf[a * m_ + b] = complex(box[a * n + b]);
    }
    detail::execute(buf, spec_.dim, int(m_), FFTW_FORWARD);
    return std::vector<complex>(buf.begin(), buf.begin() + total_);
  }

  // kernel(a, b) with integer offsets; b == 0 in 1-D.
  template <class K>
  std::vector<complex> kernel_spectrum(K&& kernel) const {
    detail::AlignedComplex buf(total_);
    auto wrap = [&](int a) { return std::size_t((a % long(m_) + long(m_)) % long(m_)); };
    if (spec_.dim == 1) {
      for (int a = -reach_; a <= reach_; ++a) buf[wrap(a)] = kernel(a, 0);
    } else {
      for (int a = -reach_; a <= reach_; ++a)
        for (int b = -reach_; b <= reach_; ++b) buf[wrap(a) * m_ + wrap(b)] = kernel(a, b);
    }
    detail::execute(buf, spec_.dim, int(m_), FFTW_FORWARD);
    return std::vector<complex>(buf.begin(), buf.begin() + total_);
  }

  // Values on the extended lattice, row-major over out_axis()^dim.
  std::vector<complex> apply(const std::vector<complex>& f_hat, const std::vector<complex>& k_hat) const {
    detail::AlignedComplex buf(total_);
    for (std::size_t i = 0; i < total_; ++i) buf[i] = f_hat[i] * k_hat[i];
    detail::execute(buf, spec_.dim, int(m_), FFTW_BACKWARD);
    const double scale = 1.0 / double(total_);
    const std::size_t no = out_axis();
    std::vector<complex> out(out_size());
    auto wrap = [&](long a) { return std::size_t((a % long(m_) + long(m_)) % long(m_)); };
    if (spec_.dim == 1) {
      for (std::size_t i = 0; i < no; ++i) out[i] = buf[wrap(long(i) - extend_)] * scale;
    } else {
      for (std::size_t a = 0; a < no; ++a)
        for (std::size_t b = 0; b < no; ++b)
          out[a * no + b] = buf[wrap(long(a) - extend_) * m_ + wrap(long(b) - extend_)] * scale;
    }
    return out;
  }

 private:
  GridSpec spec_;
  int reach_, extend_;
  std::size_t m_, total_;
};

}  // namespace oslab
