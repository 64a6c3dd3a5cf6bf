#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "oslab/error.hpp"
#include "oslab/orlicz.hpp"

namespace oslab {

using Point = std::array<double, 2>;
using complex = std::complex<double>;

// Points x_i = -L + i h, h = 2L/N, in each of dim axes.
struct GridSpec {
  int dim = 1;
  double half_width = 8;
  std::size_t points_per_axis = 1024;

  double spacing() const { return 2 * half_width / double(points_per_axis); }
  double cell_volume() const { return std::pow(spacing(), dim); }
  std::size_t size() const { return dim == 1 ? points_per_axis : points_per_axis * points_per_axis; }
  double coord(std::ptrdiff_t i) const { return -half_width + double(i) * spacing(); }

  void validate() const {
    require(dim == 1 || dim == 2, ErrorKind::unsupported_dimension, "dim must be 1 or 2");
    require(half_width > 0, ErrorKind::invalid_argument, "half width must be positive");
    require(points_per_axis >= 16 && std::has_single_bit(points_per_axis), ErrorKind::invalid_argument,
            "points per axis must be a power of two >= 16");
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct Cube {
  Point center{0, 0};
  double side = 1;
  double diameter(int dim) const { return side * std::sqrt(double(dim)); }
  Point corner() const { return {center[0] - side / 2, center[1] - side / 2}; }
  Cube dilate(double k) const { return {center, side * k}; }
};

struct Ball {
  Point center{0, 0};
  double radius = 1;
};

struct WholeGrid {};
using Region = std::variant<WholeGrid, Ball, Cube>;

inline double distance(const Point& a, const Point& b, int dim) {
  double s = 0;
  for (int k = 0; k < dim; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

inline double norm_inf(const Point& a, const Point& b, int dim) {
  double s = 0;
  for (int k = 0; k < dim; ++k) s = std::max(s, std::abs(a[k] - b[k]));
  return s;
}

// Half-open cube [c - l/2, c + l/2)^n; tolerance in cell units absorbs rounding of lattice-aligned corners.
inline bool in_cube(const Point& x, const Cube& q, int dim, double h) {
  const double eps = 1e-7 * h;
  for (int k = 0; k < dim; ++k) {
    double lo = q.center[k] - q.side / 2, hi = q.center[k] + q.side / 2;
    if (x[k] < lo - eps || x[k] >= hi - eps) return false;
  }
  return true;
}

inline bool in_ball(const Point& x, const Ball& b, int dim) {
  return distance(x, b.center, dim) < b.radius;
}

template <class T>
class BasicGridFunction {
 public:
  using value_type = T;

  BasicGridFunction() = default;
  explicit BasicGridFunction(const GridSpec& spec) : spec_(spec), values_(spec.size(), T{}) { spec.validate(); }
  BasicGridFunction(const GridSpec& spec, std::vector<T> values) : spec_(spec), values_(std::move(values)) {
    spec.validate();
    require(values_.size() == spec.size(), ErrorKind::dimension_mismatch, "value count does not match grid");
  }

  template <class F>
  static BasicGridFunction sample(const GridSpec& spec, F&& fn) {
    spec.validate();
    std::vector<T> v(spec.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<T>(fn(point_of(spec, i)));
    return BasicGridFunction(spec, std::move(v));
  }

  static Point point_of(const GridSpec& spec, std::size_t idx) {
    if (spec.dim == 1) return {spec.coord(std::ptrdiff_t(idx)), 0};
    const std::size_t n = spec.points_per_axis;
    return {spec.coord(std::ptrdiff_t(idx / n)), spec.coord(std::ptrdiff_t(idx % n))};
  }

  const GridSpec& spec() const { return spec_; }
  int dim() const { return spec_.dim; }
  std::size_t size() const { return values_.size(); }
  const std::vector<T>& values() const& { return values_; }
  const T& operator[](std::size_t i) const { return values_[i]; }
  std::vector<T>& values() & { return values_; }
  std::vector<T> values() && { return std::move(values_); }
  T& operator[](std::size_t i) { return values_[i]; }
  Point point(std::size_t idx) const { return point_of(spec_, idx); }

  const std::optional<Cube>& support_hint() const { return support_hint_; }
  BasicGridFunction with_support_hint(const Cube& q) const {
    BasicGridFunction out = *this;
    out.support_hint_ = q;
    return out;
  }

  template <class F>
  auto map(F&& fn) const {
    using U = decltype(fn(values_[0]));
    std::vector<U> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), fn);
    return BasicGridFunction<U>(spec_, std::move(v));
  }

  BasicGridFunction<double> abs() const {
    return map([](const T& v) { return double(std::abs(v)); });
  }

  BasicGridFunction operator+(const BasicGridFunction& o) const {
    check_same(o);
    std::vector<T> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.values_[i];
    return BasicGridFunction(spec_, std::move(v));
  }
  BasicGridFunction operator-(const BasicGridFunction& o) const {
    check_same(o);
    std::vector<T> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.values_[i];
    return BasicGridFunction(spec_, std::move(v));
  }
  BasicGridFunction operator*(T c) const {
    std::vector<T> v(values_);
    for (auto& x : v) x *= c;
    return BasicGridFunction(spec_, std::move(v));
  }

  void check_same(const BasicGridFunction& o) const {
    require(spec_ == o.spec_, ErrorKind::dimension_mismatch, "grid functions live on different grids");
  }

 private:
  GridSpec spec_;
  std::vector<T> values_;
  std::optional<Cube> support_hint_;
};

using GridFunction = BasicGridFunction<double>;
using ComplexGridFunction = BasicGridFunction<complex>;

inline bool in_region(const Point& x, const Region& r, const GridSpec& spec) {
  if (std::holds_alternative<WholeGrid>(r)) return true;
  if (auto b = std::get_if<Ball>(&r)) return in_ball(x, *b, spec.dim);
  return in_cube(x, std::get<Cube>(r), spec.dim, spec.spacing());
}

template <class T>
T integrate(const BasicGridFunction<T>& f, const Region& region = WholeGrid{}) {
  T sum{};
  for (std::size_t i = 0; i < f.size(); ++i)
    if (in_region(f.point(i), region, f.spec())) sum += f[i];
  return sum * f.spec().cell_volume();
}

template <class T>
std::vector<std::size_t> points_in(const BasicGridFunction<T>& f, const Region& region) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (in_region(f.point(i), region, f.spec())) out.push_back(i);
  return out;
}

inline GridFunction indicator(const GridSpec& spec, const Region& region) {
  return GridFunction::sample(spec, [&](const Point& x) { return in_region(x, region, spec) ? 1.0 : 0.0; });
}

// Bounding index box of nonzero samples: lo/hi per axis, inclusive. Empty when f == 0.
template <class T>
std::optional<std::array<std::ptrdiff_t, 4>> support_box(const BasicGridFunction<T>& f) {
  const std::size_t n = f.spec().points_per_axis;
  std::array<std::ptrdiff_t, 4> box{std::ptrdiff_t(n), -1, std::ptrdiff_t(n), -1};
  bool any = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == T{}) continue;
    any = true;
    std::ptrdiff_t a = f.dim() == 1 ? std::ptrdiff_t(i) : std::ptrdiff_t(i / n);
    std::ptrdiff_t b = f.dim() == 1 ? 0 : std::ptrdiff_t(i % n);
    box[0] = std::min(box[0], a);
    box[1] = std::max(box[1], a);
    box[2] = std::min(box[2], b);
    box[3] = std::max(box[3], b);
  }
  if (!any) return std::nullopt;
  return box;
}

// S_0 = 2Q, S_j = 2^{j+1}Q \ 2^jQ.
inline std::vector<std::vector<std::size_t>> annulus_rings(const GridSpec& spec, const Cube& q, int jmax) {
  require(q.side > 0, ErrorKind::degenerate_cube, "cube side must be positive");
  std::vector<std::vector<std::size_t>> rings(std::size_t(jmax) + 1);
  const double h = spec.spacing();
  for (std::size_t i = 0; i < spec.size(); ++i) {
    Point x = GridFunction::point_of(spec, i);
    for (int j = 0; j <= jmax; ++j) {
      if (!in_cube(x, q.dilate(std::ldexp(1.0, j + 1)), spec.dim, h)) continue;
      if (j == 0 || !in_cube(x, q.dilate(std::ldexp(1.0, j)), spec.dim, h)) {
        rings[std::size_t(j)].push_back(i);
        break;
      }
    }
  }
  return rings;
}

// Morton (Z-order) key of an integer cell index.
inline std::uint64_t morton_key(std::uint32_t a, std::uint32_t b) {
  std::uint64_t key = 0;
  for (int bit = 0; bit < 32; ++bit) {
    key |= std::uint64_t((a >> bit) & 1u) << (2 * bit + 1);
    key |= std::uint64_t((b >> bit) & 1u) << (2 * bit);
  }
  return key;
}

// Level-l dyadic cubes of the box: side 2L / 2^l, listed in Morton order.
inline std::vector<Cube> dyadic_cubes(const GridSpec& spec, int level) {
  require(level >= 0 && level < 30, ErrorKind::indivisible_level, "level out of range");
  const std::size_t k = std::size_t(1) << level;
  require(spec.points_per_axis % k == 0, ErrorKind::indivisible_level, "2^level does not divide N");
  const double side = 2 * spec.half_width / double(k);
  std::vector<std::pair<std::uint64_t, Cube>> keyed;
  const std::size_t k2 = spec.dim == 2 ? k : 1;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k2; ++b) {
      Cube q;
      q.side = side;
      q.center = {-spec.half_width + (double(a) + 0.5) * side,
                  spec.dim == 2 ? -spec.half_width + (double(b) + 0.5) * side : 0.0};
      keyed.push_back({morton_key(std::uint32_t(a), std::uint32_t(b)), q});
    }
  std::sort(keyed.begin(), keyed.end(), [](auto& x, auto& y) { return x.first < y.first; });
  std::vector<Cube> out;
  for (auto& [key, q] : keyed) out.push_back(q);
  return out;
}

// Tiles t[k + [0,1)^n] covering the box.
inline std::vector<Cube> amalgam_tiles(const GridSpec& spec, double t) {
  const double h = spec.spacing();
  const double cells = t / h, per_box = 2 * spec.half_width / t;
  require(t > 0 && std::abs(cells - std::round(cells)) < 1e-9 && cells >= 1 &&
              std::abs(per_box - std::round(per_box)) < 1e-9,
          ErrorKind::incompatible_tiling, "tile side must be a multiple of h dividing the box");
  const long count = std::lround(per_box);
  const long k0 = std::lround(-spec.half_width / t);
  std::vector<Cube> out;
  for (long a = 0; a < count; ++a)
    for (long b = 0; b < (spec.dim == 2 ? count : 1); ++b)
      out.push_back({{t * (double(k0 + a) + 0.5), spec.dim == 2 ? t * (double(k0 + b) + 0.5) : 0.0}, t});
  return out;
}

// Fraction of each lattice cell (offset in cell units) inside the open ball of radius rho cells.
struct BallStencil {
  int reach = 0;  // offsets with |k_i| <= reach
  std::vector<std::array<int, 2>> offsets;
  std::vector<double> weights;
  double total = 0;  // sum of weights, in cells
};

inline BallStencil ball_stencil(int dim, double rho, int subsamples = 32) {
  BallStencil st;
  st.reach = int(std::ceil(rho + 0.5));
  if (dim == 1) {
    for (int k = -st.reach; k <= st.reach; ++k) {
      double w = std::max(0.0, std::min(double(k) + 0.5, rho) - std::max(double(k) - 0.5, -rho));
      if (w > 0) {
        st.offsets.push_back({k, 0});
        st.weights.push_back(w);
        st.total += w;
      }
    }
    return st;
  }
  for (int a = -st.reach; a <= st.reach; ++a)
    for (int b = -st.reach; b <= st.reach; ++b) {
      double ax = std::abs(double(a)), bx = std::abs(double(b));
      double near = std::hypot(std::max(0.0, ax - 0.5), std::max(0.0, bx - 0.5));
      double far = std::hypot(ax + 0.5, bx + 0.5);
      double w;
      if (far <= rho) {
        w = 1;
      } else if (near >= rho) {
        continue;
      } else {
        int inside = 0;
        for (int i = 0; i < subsamples; ++i)
          for (int j = 0; j < subsamples; ++j) {
            double x = a - 0.5 + (i + 0.5) / subsamples, y = b - 0.5 + (j + 0.5) / subsamples;
            if (x * x + y * y < rho * rho) ++inside;
          }
        w = double(inside) / double(subsamples * subsamples);
        if (w == 0) continue;
      }
      st.offsets.push_back({a, b});
      st.weights.push_back(w);
      st.total += w;
    }
  return st;
}

// Volume of the unit ball: 2 in 1-D, pi in 2-D.
inline double unit_ball_volume(int dim) { return dim == 1 ? 2.0 : std::numbers::pi; }

// GRIDFN1 dim N L dtype, then N^dim little-endian float64 values (re,im pairs for c128).
template <class T>
void write_gridfn(std::ostream& os, const BasicGridFunction<T>& f) {
  static_assert(std::endian::native == std::endian::little, "GRIDFN1 writer assumes little-endian host");
  const bool cplx = std::is_same_v<T, complex>;
  os << "GRIDFN1 " << f.dim() << " " << f.spec().points_per_axis << " " << format_double(f.spec().half_width)
     << " " << (cplx ? "c128" : "f64") << "\n";
  os.write(reinterpret_cast<const char*>(f.values().data()), std::streamsize(f.size() * sizeof(T)));
}

using AnyGridFunction = std::variant<GridFunction, ComplexGridFunction>;

inline AnyGridFunction read_gridfn(std::istream& is) {
  std::string line;
  require(bool(std::getline(is, line)), ErrorKind::io_error, "missing GRIDFN1 header");
  std::istringstream hs(line);
  std::string magic, dtype;
  GridSpec spec;
  hs >> magic >> spec.dim >> spec.points_per_axis >> spec.half_width >> dtype;
  require(magic == "GRIDFN1" && !hs.fail(), ErrorKind::io_error, "bad GRIDFN1 header: " + line);
  spec.validate();
  if (dtype == "f64") {
    std::vector<double> v(spec.size());
    is.read(reinterpret_cast<char*>(v.data()), std::streamsize(v.size() * sizeof(double)));
    require(is.gcount() == std::streamsize(v.size() * sizeof(double)), ErrorKind::io_error, "truncated payload");
    return GridFunction(spec, std::move(v));
  }
  require(dtype == "c128", ErrorKind::io_error, "unknown dtype " + dtype);
  std::vector<complex> v(spec.size());
  is.read(reinterpret_cast<char*>(v.data()), std::streamsize(v.size() * sizeof(complex)));
  require(is.gcount() == std::streamsize(v.size() * sizeof(complex)), ErrorKind::io_error, "truncated payload");
  return ComplexGridFunction(spec, std::move(v));
}

template <class T>
void save_gridfn(const std::string& path, const BasicGridFunction<T>& f) {
  std::ofstream os(path, std::ios::binary);
  require(bool(os), ErrorKind::io_error, "cannot open " + path);
  write_gridfn(os, f);
}

inline AnyGridFunction load_gridfn(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(bool(is), ErrorKind::io_error, "cannot open " + path);
  return read_gridfn(is);
}

// One sample per line; the last comma-separated column is the value.
inline GridFunction read_csv_1d(std::istream& is, double half_width) {
  std::vector<double> v;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto comma = line.find_last_of(',');
    std::string tok = comma == std::string::npos ? line : line.substr(comma + 1);
    char* end = nullptr;
    double x = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str()) continue;
    v.push_back(x);
  }
  GridSpec spec{1, half_width, v.size()};
  spec.validate();
  return GridFunction(spec, std::move(v));
}

}  // namespace oslab
