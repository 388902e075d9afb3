#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

#include "ahlfors/fields.hpp"

namespace ahlfors {

using Eigen::MatrixXd;

enum class MetricKind { Flat, Conformal, Explicit };

// Gamma^k_{ij}: one symmetric (i,j) tensor per upper index k.
struct ChristoffelField {
  GridShape shape;
  std::vector<SymTensorField> upper;

  const ArrayXd& at(int k, int i, int j) const { return upper[size_t(k)].at(i, j); }
};

struct MetricSpec {
  MetricKind kind = MetricKind::Flat;
  ScalarField u;     // conformal factor exponent: g = e^{2u} delta
  SymTensorField g;  // explicit metric components

  static MetricSpec flat() { return {}; }
  static MetricSpec conformal(ScalarField u_) {
    MetricSpec s;
    s.kind = MetricKind::Conformal;
    s.u = std::move(u_);
    return s;
  }
  static MetricSpec explicit_metric(SymTensorField g_) {
    MetricSpec s;
    s.kind = MetricKind::Explicit;
    s.g = std::move(g_);
    return s;
  }
};

// Periodic grid plus metric with every derived geometric quantity cached at
// construction: inverse metric, Christoffel symbols, Ricci tensor, scalar
// curvature, volume density, and the per-axis spectral differentiation matrices.
class GridManifold {
 public:
  static GridManifold flat(int n, const std::vector<Index>& axes) {
    return build(n, axes, MetricSpec::flat());
  }
  static GridManifold conformal(int n, const std::vector<Index>& axes, const ScalarField& u) {
    return build(n, axes, MetricSpec::conformal(u));
  }
  static GridManifold with_metric(int n, const std::vector<Index>& axes, const SymTensorField& g) {
    return build(n, axes, MetricSpec::explicit_metric(g));
  }
  static GridManifold build(int n, const std::vector<Index>& axes, const MetricSpec& spec);

  int dim() const { return shape_.n; }
  const GridShape& shape() const { return shape_; }
  MetricKind metric_kind() const { return kind_; }

  // True only for the analytically flat construction; an explicit identity
  // metric takes the general code paths (and still comes out exactly flat).
  bool is_flat() const { return kind_ == MetricKind::Flat; }

  const SymTensorField& metric() const { return g_; }
  const SymTensorField& inverse_metric() const { return ginv_; }
  const ChristoffelField& christoffel_symbols() const { return gamma_; }
  const SymTensorField& ricci() const { return ric_; }
  const ScalarField& scalar_curvature() const { return s_; }
  const ScalarField& volume_density() const { return sqrt_det_g_; }  // sqrt(det g)

  // Spectral partial derivative of one component array along an axis.
  ArrayXd deriv(const ArrayXd& f, int axis) const;

  const MatrixXd& diff_matrix(int axis) const { return diff_[size_t(axis)]; }

 private:
  GridManifold() = default;
  void compute_caches();

  GridShape shape_;
  MetricKind kind_ = MetricKind::Flat;
  SymTensorField g_, ginv_, ric_;
  ChristoffelField gamma_;
  ScalarField s_, sqrt_det_g_;
  std::array<MatrixXd, 3> diff_;
};

// Fourier differentiation matrix for an even-N periodic grid on [0,2pi):
// exact for every resolvable mode, antisymmetric stencil, Nyquist derivative
// zeroed, and row sums exactly zero so constants differentiate to exact 0.
MatrixXd fourier_diff_matrix(Index N);

// Projector onto modes |k| <= max_mode along one axis (Dirichlet kernel).
MatrixXd band_limit_matrix(Index N, int max_mode);

// Apply an N_axis x N_axis matrix along one axis of a flattened row-major field.
ArrayXd apply_along_axis(const MatrixXd& A, const ArrayXd& f, const GridShape& s, int axis);

template <GridField F>
F partial_derivative(const GridManifold& m, const F& f, int axis) {
  if (!(f.shape == m.shape())) throw ShapeMismatch("field does not live on this grid");
  if (axis < 0 || axis >= m.dim()) throw std::out_of_range("derivative axis out of range");
  F out = f;
  for (auto& c : out.comp) c = m.deriv(c, axis);
  return out;
}

inline const ChristoffelField& christoffel(const GridManifold& m) {
  return m.christoffel_symbols();
}

struct Curvature {
  const SymTensorField& ricci;
  const ScalarField& scalar;
};
inline Curvature curvature(const GridManifold& m) {
  return {m.ricci(), m.scalar_curvature()};
}

// Trapezoid-exact periodic quadrature: sum f*sqrt(det g) over nodes in storage
// order, times the cell volume.
double integrate(const ScalarField& f, const GridManifold& m);

}  // namespace ahlfors
