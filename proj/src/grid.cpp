#include "ahlfors/grid.hpp"

#include <cmath>

namespace ahlfors {

namespace {
using RowMajorMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Shared worker for applying a per-axis matrix. With Shift set, the first
// element of every 1D line along the axis is subtracted before the product:
// a line that is constant becomes exactly zero input, so its derivative is
// exactly zero output no matter how the gemm orders its sums. (A zero-row-sum
// stencil alone does not survive the gemm's reassociation.)
template <bool Shift>
ArrayXd apply_axis_impl(const MatrixXd& A, const ArrayXd& f, const GridShape& s, int axis) {
  const Index N1 = s.dims[0], N2 = s.dims[1], N3 = s.dims[2];
  ArrayXd out(s.total);

  auto row_lines = [&](auto F, auto O) {  // differentiated axis indexes rows
    if constexpr (Shift) {
      RowMajorMat tmp = F.rowwise() - F.row(0);
      O.noalias() = A * tmp;
    } else {
      O.noalias() = A * F;
    }
  };
  auto col_lines = [&](auto F, auto O) {  // differentiated axis indexes columns
    if constexpr (Shift) {
      RowMajorMat tmp = F.colwise() - F.col(0);
      O.noalias() = tmp * A.transpose();
    } else {
      O.noalias() = F * A.transpose();
    }
  };

  if (s.n == 2) {
    Eigen::Map<const RowMajorMat> F(f.data(), N1, N2);
    Eigen::Map<RowMajorMat> O(out.data(), N1, N2);
    if (axis == 0)
      row_lines(F, O);
    else
      col_lines(F, O);
    return out;
  }

  if (axis == 0) {
    Eigen::Map<const RowMajorMat> F(f.data(), N1, N2 * N3);
    Eigen::Map<RowMajorMat> O(out.data(), N1, N2 * N3);
    row_lines(F, O);
  } else if (axis == 2) {
    Eigen::Map<const RowMajorMat> F(f.data(), N1 * N2, N3);
    Eigen::Map<RowMajorMat> O(out.data(), N1 * N2, N3);
    col_lines(F, O);
  } else {
    for (Index i = 0; i < N1; ++i) {
      Eigen::Map<const RowMajorMat> F(f.data() + i * N2 * N3, N2, N3);
      Eigen::Map<RowMajorMat> O(out.data() + i * N2 * N3, N2, N3);
      row_lines(F, O);
    }
  }
  return out;
}
}  // namespace

MatrixXd fourier_diff_matrix(Index N) {
  if (N < 2 || N % 2 != 0) throw BadShape("spectral differentiation needs an even axis");
  const double h = kTwoPi / double(N);

  // Circulant stencil d_m = (1/2)(-1)^m cot(m h / 2). Enforce d_{N-m} = -d_m
  // exactly instead of re-evaluating cot, and zero the Nyquist entry.
  Eigen::VectorXd d = Eigen::VectorXd::Zero(N);
  for (Index m = 1; m < N / 2; ++m) {
    const double v = (m % 2 ? -0.5 : 0.5) / std::tan(0.5 * double(m) * h);
    d[m] = v;
    d[N - m] = -v;
  }

  MatrixXd D(N, N);
  for (Index j = 0; j < N; ++j)
    for (Index l = 0; l < N; ++l) D(j, l) = d[(j - l + N) % N];

  // Negative-sum diagonal: each row sums to exactly zero, so constant lines
  // differentiate to exact 0 (the analytic diagonal is 0; the correction is
  // one rounding unit of the off-diagonal sum).
  for (Index j = 0; j < N; ++j) {
    double off = 0.0;
    for (Index l = 0; l < N; ++l)
      if (l != j) off += D(j, l);
    D(j, j) = -off;
  }
  return D;
}

MatrixXd band_limit_matrix(Index N, int max_mode) {
  const double h = kTwoPi / double(N);
  MatrixXd B(N, N);
  for (Index j = 0; j < N; ++j)
    for (Index l = 0; l < N; ++l) {
      double acc = 1.0;
      for (int k = 1; k <= max_mode; ++k) acc += 2.0 * std::cos(k * double(j - l) * h);
      B(j, l) = acc / double(N);
    }
  return B;
}

ArrayXd apply_along_axis(const MatrixXd& A, const ArrayXd& f, const GridShape& s, int axis) {
  if (axis < 0 || axis >= s.n) throw std::out_of_range("axis out of range");
  if (A.rows() != s.dims[size_t(axis)] || A.cols() != A.rows())
    throw ShapeMismatch("matrix extent does not match axis");
  if (f.size() != s.total) throw ShapeMismatch("field size does not match grid");
  return apply_axis_impl<false>(A, f, s, axis);
}

ArrayXd GridManifold::deriv(const ArrayXd& f, int axis) const {
  if (f.size() != shape_.total) throw ShapeMismatch("field size does not match grid");
  if (axis < 0 || axis >= shape_.n) throw std::out_of_range("axis out of range");
  // Line-offset subtraction: fields constant along the axis (metric components
  // off their active axis, trace fields, plain constants) differentiate to
  // exactly zero, and the 1 + small structure of metric components stays out
  // of the rounding.
  return apply_axis_impl<true>(diff_[size_t(axis)], f, shape_, axis);
}

GridManifold GridManifold::build(int n, const std::vector<Index>& axes, const MetricSpec& spec) {
  GridShape s = GridShape::make(n, axes);
  for (int a = 0; a < n; ++a) {
    if (s.dims[size_t(a)] < 8) throw BadShape("axis extent below 8 cannot resolve the operators");
    if (s.dims[size_t(a)] % 2 != 0) throw BadShape("axis extents must be even");
  }

  GridManifold m;
  m.shape_ = s;
  m.kind_ = spec.kind;
  for (int a = 0; a < n; ++a) m.diff_[size_t(a)] = fourier_diff_matrix(s.dims[size_t(a)]);

  switch (spec.kind) {
    case MetricKind::Flat: {
      m.g_ = SymTensorField::zeros(s);
      for (int i = 0; i < n; ++i) m.g_.at(i, i).setOnes();
      break;
    }
    case MetricKind::Conformal: {
      if (!(spec.u.shape == s)) throw ShapeMismatch("conformal factor grid mismatch");
      const ArrayXd scale = (2.0 * spec.u.data()).exp();
      m.g_ = SymTensorField::zeros(s);
      for (int i = 0; i < n; ++i) m.g_.at(i, i) = scale;
      break;
    }
    case MetricKind::Explicit: {
      if (!(spec.g.shape == s)) throw ShapeMismatch("explicit metric grid mismatch");
      m.g_ = spec.g;
      break;
    }
  }

  m.compute_caches();
  return m;
}

void GridManifold::compute_caches() {
  const GridShape& s = shape_;
  const int n = s.n;
  const SymTensorField& g = g_;

  // Pointwise determinant and Sylvester SPD test on the leading minors.
  ArrayXd det;
  if (n == 2) {
    det = g.at(0, 0) * g.at(1, 1) - g.at(0, 1).square();
    if ((g.at(0, 0).minCoeff() <= 0.0) || (det.minCoeff() <= 0.0))
      throw NonSPDMetric("metric is not positive definite at some node");
  } else {
    const ArrayXd minor2 = g.at(0, 0) * g.at(1, 1) - g.at(0, 1).square();
    det = g.at(0, 0) * (g.at(1, 1) * g.at(2, 2) - g.at(1, 2).square()) -
          g.at(0, 1) * (g.at(0, 1) * g.at(2, 2) - g.at(0, 2) * g.at(1, 2)) +
          g.at(0, 2) * (g.at(0, 1) * g.at(1, 2) - g.at(1, 1) * g.at(0, 2));
    if ((g.at(0, 0).minCoeff() <= 0.0) || (minor2.minCoeff() <= 0.0) || (det.minCoeff() <= 0.0))
      throw NonSPDMetric("metric is not positive definite at some node");
  }

  sqrt_det_g_ = ScalarField::zeros(s);
  sqrt_det_g_.data() = det.sqrt();

  ginv_ = SymTensorField::zeros(s);
  if (n == 2) {
    ginv_.at(0, 0) = g.at(1, 1) / det;
    ginv_.at(1, 1) = g.at(0, 0) / det;
    ginv_.at(0, 1) = -g.at(0, 1) / det;
  } else {
    ginv_.at(0, 0) = (g.at(1, 1) * g.at(2, 2) - g.at(1, 2).square()) / det;
    ginv_.at(0, 1) = (g.at(0, 2) * g.at(1, 2) - g.at(0, 1) * g.at(2, 2)) / det;
    ginv_.at(0, 2) = (g.at(0, 1) * g.at(1, 2) - g.at(0, 2) * g.at(1, 1)) / det;
    ginv_.at(1, 1) = (g.at(0, 0) * g.at(2, 2) - g.at(0, 2).square()) / det;
    ginv_.at(1, 2) = (g.at(0, 1) * g.at(0, 2) - g.at(0, 0) * g.at(1, 2)) / det;
    ginv_.at(2, 2) = (g.at(0, 0) * g.at(1, 1) - g.at(0, 1).square()) / det;
  }

  gamma_.shape = s;
  gamma_.upper.assign(size_t(n), SymTensorField::zeros(s));
  ric_ = SymTensorField::zeros(s);
  s_ = ScalarField::zeros(s);

  // Analytically flat: every derivative below is of a constant, hence exactly
  // zero. Short-circuit; the general path would produce the same bits.
  if (kind_ == MetricKind::Flat) return;

  // dg[a].at(i,j) = partial_a g_ij
  std::array<SymTensorField, 3> dg;
  for (int a = 0; a < n; ++a) {
    dg[size_t(a)] = g;
    for (auto& c : dg[size_t(a)].comp) c = deriv(c, a);
  }

  // Gamma^k_ij = (1/2) g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        ArrayXd acc = ArrayXd::Zero(s.total);
        for (int l = 0; l < n; ++l)
          acc += ginv_.at(k, l) *
                 (dg[size_t(i)].at(j, l) + dg[size_t(j)].at(i, l) - dg[size_t(l)].at(i, j));
        gamma_.upper[size_t(k)].at(i, j) = 0.5 * acc;
      }

  // Contracted symbol c_j = Gamma^k_kj, then
  // Ric_ij = d_k Gamma^k_ij - d_i c_j + c_l Gamma^l_ij - Gamma^k_il Gamma^l_kj.
  std::vector<ArrayXd> contracted(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    ArrayXd acc = ArrayXd::Zero(s.total);
    for (int k = 0; k < n; ++k) acc += gamma_.at(k, k, j);
    contracted[size_t(j)] = acc;
  }

  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      ArrayXd acc = ArrayXd::Zero(s.total);
      for (int k = 0; k < n; ++k) acc += deriv(gamma_.at(k, i, j), k);
      acc -= deriv(contracted[size_t(j)], i);
      for (int l = 0; l < n; ++l) acc += contracted[size_t(l)] * gamma_.at(l, i, j);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) acc -= gamma_.at(k, i, l) * gamma_.at(l, k, j);
      ric_.at(i, j) = acc;
    }

  ArrayXd scal = ArrayXd::Zero(s.total);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scal += ginv_.at(i, j) * ric_.at(i, j);
  s_.data() = scal;
}

double integrate(const ScalarField& f, const GridManifold& m) {
  if (!(f.shape == m.shape())) throw ShapeMismatch("field does not live on this grid");
  const ArrayXd& v = f.data();
  const ArrayXd& w = m.volume_density().data();
  // Fixed storage-order accumulation keeps results bit-reproducible.
  double acc = 0.0;
  for (Index i = 0; i < v.size(); ++i) acc += v[i] * w[i];
  return acc * m.shape().cell_volume();
}

}  // namespace ahlfors
