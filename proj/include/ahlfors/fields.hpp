#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "ahlfors/errors.hpp"

namespace ahlfors {

using Eigen::ArrayXd;
using Eigen::Index;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Packed index of the unordered pair (i,j), i <= j, in lexicographic upper-triangular
// order: 00, 01, ..., 0(n-1), 11, 12, ..., (n-1)(n-1).
constexpr int sym_count(int n) { return n * (n + 1) / 2; }
constexpr int sym_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i - 1) / 2 + (j - i);
}

// Packed index of the ordered pair (i,j), i < j, strictly-upper lexicographic.
constexpr int asym_count(int n) { return n * (n - 1) / 2; }
constexpr int asym_index(int n, int i, int j) {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

// Uniform periodic grid on [0,2pi)^n with row-major node ordering
// (last axis fastest). Unused axes are padded with extent 1 so 2D and 3D
// share the same indexing arithmetic.
struct GridShape {
  int n = 0;
  std::array<Index, 3> dims{1, 1, 1};
  Index total = 0;

  static GridShape make(int n, const std::vector<Index>& axes) {
    if (n != 2 && n != 3) throw BadShape("grid dimension must be 2 or 3");
    if (Index(axes.size()) != n) throw BadShape("axis count does not match dimension");
    GridShape s;
    s.n = n;
    s.total = 1;
    for (int a = 0; a < n; ++a) {
      if (axes[size_t(a)] < 1) throw BadShape("axis extent must be positive");
      s.dims[size_t(a)] = axes[size_t(a)];
      s.total *= axes[size_t(a)];
    }
    return s;
  }

  bool operator==(const GridShape&) const = default;

  double spacing(int axis) const { return kTwoPi / double(dims[size_t(axis)]); }

  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < n; ++a) v *= spacing(a);
    return v;
  }

  // Row-major flat index <-> per-axis multi-index.
  Index flat_index(Index i1, Index i2, Index i3 = 0) const {
    return (i1 * dims[1] + i2) * dims[2] + i3;
  }
  std::array<Index, 3> unflatten(Index idx) const {
    std::array<Index, 3> c{};
    c[2] = idx % dims[2];
    idx /= dims[2];
    c[1] = idx % dims[1];
    c[0] = idx / dims[1];
    return c;
  }
};

namespace detail {
inline std::vector<ArrayXd> zero_components(const GridShape& s, int count) {
  std::vector<ArrayXd> c;
  c.reserve(size_t(count));
  for (int k = 0; k < count; ++k) c.emplace_back(ArrayXd::Zero(s.total));
  return c;
}
}  // namespace detail

struct ScalarField {
  GridShape shape;
  std::vector<ArrayXd> comp;  // exactly one entry; kept as a vector for uniform field handling

  ArrayXd& data() { return comp[0]; }
  const ArrayXd& data() const { return comp[0]; }

  static ScalarField zeros(const GridShape& s) { return {s, detail::zero_components(s, 1)}; }
  static ScalarField constant(const GridShape& s, double v) {
    ScalarField f = zeros(s);
    f.data().setConstant(v);
    return f;
  }
};

struct OneFormField {
  GridShape shape;
  std::vector<ArrayXd> comp;  // n covariant components

  ArrayXd& operator[](int i) { return comp[size_t(i)]; }
  const ArrayXd& operator[](int i) const { return comp[size_t(i)]; }

  static OneFormField zeros(const GridShape& s) { return {s, detail::zero_components(s, s.n)}; }
};

struct VectorField {
  GridShape shape;
  std::vector<ArrayXd> comp;  // n contravariant components

  ArrayXd& operator[](int i) { return comp[size_t(i)]; }
  const ArrayXd& operator[](int i) const { return comp[size_t(i)]; }

  static VectorField zeros(const GridShape& s) { return {s, detail::zero_components(s, s.n)}; }
};

// Symmetric 2-tensor, packed upper triangle in the order 11,12,...,1n,22,...,nn.
struct SymTensorField {
  GridShape shape;
  std::vector<ArrayXd> comp;

  ArrayXd& at(int i, int j) { return comp[size_t(sym_index(shape.n, i, j))]; }
  const ArrayXd& at(int i, int j) const { return comp[size_t(sym_index(shape.n, i, j))]; }

  static SymTensorField zeros(const GridShape& s) {
    return {s, detail::zero_components(s, sym_count(s.n))};
  }
};

// Antisymmetric 2-tensor (2-form), packed strictly-upper entries (i<j).
// omega_ij for i>j is the negated packed entry; the diagonal is zero.
struct TwoFormField {
  GridShape shape;
  std::vector<ArrayXd> comp;

  ArrayXd& upper(int i, int j) { return comp[size_t(asym_index(shape.n, i, j))]; }
  const ArrayXd& upper(int i, int j) const { return comp[size_t(asym_index(shape.n, i, j))]; }

  static TwoFormField zeros(const GridShape& s) {
    return {s, detail::zero_components(s, asym_count(s.n))};
  }
};

template <class F>
concept GridField = requires(F f) {
  { f.shape } -> std::convertible_to<GridShape>;
  { f.comp } -> std::convertible_to<std::vector<ArrayXd>>;
};

namespace detail {
template <GridField F>
void require_same_shape(const F& a, const F& b) {
  if (!(a.shape == b.shape)) throw ShapeMismatch("fields live on different grids");
}
}  // namespace detail

// Componentwise arithmetic. Only same-type combinations are meaningful.
template <GridField F>
F zeros_like(const F& f) {
  F out = f;
  for (auto& c : out.comp) c.setZero();
  return out;
}

template <GridField F>
F& operator+=(F& a, const F& b) {
  detail::require_same_shape(a, b);
  for (size_t k = 0; k < a.comp.size(); ++k) a.comp[k] += b.comp[k];
  return a;
}

template <GridField F>
F& operator-=(F& a, const F& b) {
  detail::require_same_shape(a, b);
  for (size_t k = 0; k < a.comp.size(); ++k) a.comp[k] -= b.comp[k];
  return a;
}

template <GridField F>
F operator+(F a, const F& b) {
  a += b;
  return a;
}

template <GridField F>
F operator-(F a, const F& b) {
  a -= b;
  return a;
}

template <GridField F>
F operator*(double c, F a) {
  for (auto& k : a.comp) k *= c;
  return a;
}

// a += c*b without a temporary per component.
template <GridField F>
void axpy(F& a, double c, const F& b) {
  detail::require_same_shape(a, b);
  for (size_t k = 0; k < a.comp.size(); ++k) a.comp[k] += c * b.comp[k];
}

template <GridField F>
double max_abs(const F& a) {
  double m = 0.0;
  for (const auto& c : a.comp)
    if (c.size() > 0) m = std::max(m, c.abs().maxCoeff());
  return m;
}

template <GridField F>
double max_abs_diff(const F& a, const F& b) {
  detail::require_same_shape(a, b);
  double m = 0.0;
  for (size_t k = 0; k < a.comp.size(); ++k)
    m = std::max(m, (a.comp[k] - b.comp[k]).abs().maxCoeff());
  return m;
}

// Node coordinates along one axis: x_i = 2*pi*i/N.
inline ArrayXd axis_coordinates(const GridShape& s, int axis) {
  const Index N = s.dims[size_t(axis)];
  ArrayXd x(N);
  for (Index i = 0; i < N; ++i) x[i] = kTwoPi * double(i) / double(N);
  return x;
}

namespace detail {
// Visit every node in storage order; fn(flat, x) with x the coordinate triple
// (third entry 0 in 2D).
template <class Fn>
void for_each_node(const GridShape& s, Fn&& fn) {
  const ArrayXd x1 = axis_coordinates(s, 0);
  const ArrayXd x2 = axis_coordinates(s, 1);
  const ArrayXd x3 = s.n == 3 ? axis_coordinates(s, 2) : ArrayXd::Zero(1);
  Index flat = 0;
  for (Index i1 = 0; i1 < s.dims[0]; ++i1)
    for (Index i2 = 0; i2 < s.dims[1]; ++i2)
      for (Index i3 = 0; i3 < s.dims[2]; ++i3, ++flat)
        fn(flat, std::array<double, 3>{x1[i1], x2[i2], x3[i3]});
}
}  // namespace detail

// Sample closed-form expressions on the grid (test and generator helper).
template <class Fn>
ScalarField sample_scalar(const GridShape& s, Fn&& f) {
  ScalarField out = ScalarField::zeros(s);
  detail::for_each_node(s, [&](Index idx, const std::array<double, 3>& x) {
    out.data()[idx] = f(x);
  });
  return out;
}

template <class Fn>
OneFormField sample_one_form(const GridShape& s, Fn&& f) {  // f(x, i)
  OneFormField out = OneFormField::zeros(s);
  detail::for_each_node(s, [&](Index idx, const std::array<double, 3>& x) {
    for (int i = 0; i < s.n; ++i) out[i][idx] = f(x, i);
  });
  return out;
}

template <class Fn>
SymTensorField sample_sym2(const GridShape& s, Fn&& f) {  // f(x, i, j) for i <= j
  SymTensorField out = SymTensorField::zeros(s);
  detail::for_each_node(s, [&](Index idx, const std::array<double, 3>& x) {
    for (int i = 0; i < s.n; ++i)
      for (int j = i; j < s.n; ++j) out.at(i, j)[idx] = f(x, i, j);
  });
  return out;
}

// cos(k.x) or sin(k.x) for an integer wave vector.
inline ScalarField mode_field(const GridShape& s, bool cosine, const std::array<int, 3>& k) {
  return sample_scalar(s, [&](const std::array<double, 3>& x) {
    const double phase = k[0] * x[0] + k[1] * x[1] + k[2] * x[2];
    return cosine ? std::cos(phase) : std::sin(phase);
  });
}

}  // namespace ahlfors
