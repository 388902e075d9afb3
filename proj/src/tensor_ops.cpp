#include "ahlfors/tensor_ops.hpp"

namespace ahlfors {

namespace {

void require_on_grid(const GridManifold& m, const GridShape& s) {
  if (!(s == m.shape())) throw ShapeMismatch("field does not live on this grid");
}

// w^k = g^{ij} Gamma^k_ij (contracted Christoffel, vanishes on flat).
std::vector<ArrayXd> contracted_christoffel(const GridManifold& m) {
  const int n = m.dim();
  const SymTensorField& gi = m.inverse_metric();
  const ChristoffelField& ga = m.christoffel_symbols();
  std::vector<ArrayXd> w(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    ArrayXd acc = ArrayXd::Zero(m.shape().total);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) acc += gi.at(i, j) * ga.at(k, i, j);
    w[size_t(k)] = acc;
  }
  return w;
}

// Signed accumulation of a 2-form entry: acc += coeff * omega_ij.
void add_two_form_entry(ArrayXd& acc, const ArrayXd& coeff, const TwoFormField& om, int i, int j) {
  if (i == j) return;
  if (i < j)
    acc += coeff * om.upper(i, j);
  else
    acc -= coeff * om.upper(j, i);
}

}  // namespace

VectorField sharp(const GridManifold& m, const OneFormField& theta) {
  require_on_grid(m, theta.shape);
  const int n = m.dim();
  const SymTensorField& gi = m.inverse_metric();
  VectorField out = VectorField::zeros(theta.shape);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i] += gi.at(i, j) * theta[j];
  return out;
}

OneFormField flat(const GridManifold& m, const VectorField& xi) {
  require_on_grid(m, xi.shape);
  const int n = m.dim();
  const SymTensorField& g = m.metric();
  OneFormField out = OneFormField::zeros(xi.shape);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i] += g.at(i, j) * xi[j];
  return out;
}

SymTensorField killing_op(const GridManifold& m, const OneFormField& theta) {
  require_on_grid(m, theta.shape);
  const int n = m.dim();

  std::array<std::array<ArrayXd, 3>, 3> dth;  // dth[a][j] = d_a theta_j
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j) dth[size_t(a)][size_t(j)] = m.deriv(theta[j], a);

  SymTensorField out = SymTensorField::zeros(theta.shape);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      out.at(i, j) = 0.5 * (dth[size_t(i)][size_t(j)] + dth[size_t(j)][size_t(i)]);
      if (!m.is_flat())
        for (int k = 0; k < n; ++k)
          out.at(i, j) -= m.christoffel_symbols().at(k, i, j) * theta[k];
    }
  return out;
}

SymTensorField lie_metric(const GridManifold& m, const VectorField& xi) {
  // L_xi g = 2 delta*(xi flat), bit for bit (scaling by 2 is exact).
  return 2.0 * killing_op(m, flat(m, xi));
}

OneFormField div_sym2(const GridManifold& m, const SymTensorField& phi) {
  require_on_grid(m, phi.shape);
  const int n = m.dim();
  const SymTensorField& gi = m.inverse_metric();
  const ChristoffelField& ga = m.christoffel_symbols();

  std::array<SymTensorField, 3> dphi;
  for (int a = 0; a < n; ++a) dphi[size_t(a)] = partial_derivative(m, phi, a);

  OneFormField out = OneFormField::zeros(phi.shape);
  for (int j = 0; j < n; ++j) {
    ArrayXd acc = ArrayXd::Zero(phi.shape.total);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) acc += gi.at(i, k) * dphi[size_t(i)].at(k, j);
    out[j] = -acc;
  }
  if (m.is_flat()) return out;

  // Connection terms: g^{ik}(Gamma^l_ik phi_lj + Gamma^l_ij phi_kl)
  const std::vector<ArrayXd> w = contracted_christoffel(m);
  for (int j = 0; j < n; ++j) {
    ArrayXd acc = ArrayXd::Zero(phi.shape.total);
    for (int l = 0; l < n; ++l) acc += w[size_t(l)] * phi.at(l, j);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) acc += gi.at(i, k) * ga.at(l, i, j) * phi.at(k, l);
    out[j] += acc;
  }
  return out;
}

ScalarField trace_g(const GridManifold& m, const SymTensorField& phi) {
  require_on_grid(m, phi.shape);
  const int n = m.dim();
  const SymTensorField& gi = m.inverse_metric();
  ScalarField out = ScalarField::zeros(phi.shape);
  for (int i = 0; i < n; ++i) {
    out.data() += gi.at(i, i) * phi.at(i, i);
    for (int j = i + 1; j < n; ++j) out.data() += 2.0 * gi.at(i, j) * phi.at(i, j);
  }
  return out;
}

OneFormField ext_d(const GridManifold& m, const ScalarField& f) {
  require_on_grid(m, f.shape);
  OneFormField out = OneFormField::zeros(f.shape);
  for (int i = 0; i < m.dim(); ++i) out[i] = m.deriv(f.data(), i);
  return out;
}

TwoFormField ext_d(const GridManifold& m, const OneFormField& theta) {
  require_on_grid(m, theta.shape);
  TwoFormField out = TwoFormField::zeros(theta.shape);
  for (int i = 0; i < m.dim(); ++i)
    for (int j = i + 1; j < m.dim(); ++j)
      out.upper(i, j) = m.deriv(theta[j], i) - m.deriv(theta[i], j);
  return out;
}

ScalarField codiff(const GridManifold& m, const OneFormField& theta) {
  require_on_grid(m, theta.shape);
  const int n = m.dim();
  const SymTensorField& gi = m.inverse_metric();

  ArrayXd acc = ArrayXd::Zero(theta.shape.total);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) acc += gi.at(i, j) * m.deriv(theta[j], i);
  if (!m.is_flat()) {
    const std::vector<ArrayXd> w = contracted_christoffel(m);
    for (int k = 0; k < n; ++k) acc -= w[size_t(k)] * theta[k];
  }

  ScalarField out = ScalarField::zeros(theta.shape);
  out.data() = -acc;
  return out;
}

OneFormField codiff(const GridManifold& m, const TwoFormField& omega) {
  require_on_grid(m, omega.shape);
  const int n = m.dim();
  const SymTensorField& gi = m.inverse_metric();
  const ChristoffelField& ga = m.christoffel_symbols();

  std::array<TwoFormField, 3> dom;
  for (int a = 0; a < n; ++a) dom[size_t(a)] = partial_derivative(m, omega, a);

  OneFormField out = OneFormField::zeros(omega.shape);
  for (int j = 0; j < n; ++j) {
    ArrayXd acc = ArrayXd::Zero(omega.shape.total);
    // g^{ik} d_i omega_kj
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) add_two_form_entry(acc, gi.at(i, k), dom[size_t(i)], k, j);
    out[j] = -acc;
  }
  if (m.is_flat()) return out;

  const std::vector<ArrayXd> w = contracted_christoffel(m);
  for (int j = 0; j < n; ++j) {
    ArrayXd acc = ArrayXd::Zero(omega.shape.total);
    for (int l = 0; l < n; ++l) add_two_form_entry(acc, w[size_t(l)], omega, l, j);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (k == l) continue;
          ArrayXd coeff = gi.at(i, k) * ga.at(l, i, j);
          add_two_form_entry(acc, coeff, omega, k, l);
        }
    out[j] += acc;
  }
  return out;
}

SymTensorField cauchy_ahlfors(const GridManifold& m, const OneFormField& theta) {
  const int n = m.dim();
  const SymTensorField& g = m.metric();

  SymTensorField out = killing_op(m, theta);
  const ScalarField dv = codiff(m, theta);
  const double inv_n = 1.0 / double(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out.at(i, j) += inv_n * dv.data() * g.at(i, j);

  // The trace vanishes analytically; re-project the numerical remainder so the
  // output is trace-free to rounding.
  const ScalarField tr = trace_g(m, out);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out.at(i, j) -= inv_n * tr.data() * g.at(i, j);
  return out;
}

OneFormField ahlfors_adjoint(const GridManifold& m, const SymTensorField& omega,
                             bool require_tracefree, double tracefree_tol) {
  require_on_grid(m, omega.shape);
  if (require_tracefree) {
    const double tr = max_abs(trace_g(m, omega));
    if (tr > tracefree_tol * std::max(1.0, max_abs(omega)))
      throw NotTraceFree("adjoint Ahlfors operator: input trace exceeds tolerance");
  }
  return div_sym2(m, omega);
}

ScalarField pointwise_inner(const GridManifold& m, const ScalarField& a, const ScalarField& b) {
  require_on_grid(m, a.shape);
  detail::require_same_shape(a, b);
  ScalarField out = ScalarField::zeros(a.shape);
  out.data() = a.data() * b.data();
  return out;
}

ScalarField pointwise_inner(const GridManifold& m, const OneFormField& a, const OneFormField& b) {
  require_on_grid(m, a.shape);
  detail::require_same_shape(a, b);
  const int n = m.dim();
  const SymTensorField& gi = m.inverse_metric();
  ScalarField out = ScalarField::zeros(a.shape);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.data() += gi.at(i, j) * a[i] * b[j];
  return out;
}

ScalarField pointwise_inner(const GridManifold& m, const VectorField& a, const VectorField& b) {
  require_on_grid(m, a.shape);
  detail::require_same_shape(a, b);
  const int n = m.dim();
  const SymTensorField& g = m.metric();
  ScalarField out = ScalarField::zeros(a.shape);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.data() += g.at(i, j) * a[i] * b[j];
  return out;
}

ScalarField pointwise_inner(const GridManifold& m, const SymTensorField& a,
                            const SymTensorField& b) {
  require_on_grid(m, a.shape);
  detail::require_same_shape(a, b);
  const int n = m.dim();
  ScalarField out = ScalarField::zeros(a.shape);

  if (m.is_flat()) {
    for (int i = 0; i < n; ++i) {
      out.data() += a.at(i, i) * b.at(i, i);
      for (int j = i + 1; j < n; ++j) out.data() += 2.0 * a.at(i, j) * b.at(i, j);
    }
    return out;
  }

  // Raise both indices of b, then contract against a over the packed triangle.
  const SymTensorField& gi = m.inverse_metric();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      ArrayXd raised = ArrayXd::Zero(a.shape.total);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) raised += gi.at(i, k) * gi.at(j, l) * b.at(k, l);
      out.data() += (i == j ? 1.0 : 2.0) * a.at(i, j) * raised;
    }
  return out;
}

ScalarField pointwise_inner(const GridManifold& m, const TwoFormField& a, const TwoFormField& b) {
  require_on_grid(m, a.shape);
  detail::require_same_shape(a, b);
  const int n = m.dim();
  ScalarField out = ScalarField::zeros(a.shape);

  if (m.is_flat()) {
    for (size_t c = 0; c < a.comp.size(); ++c) out.data() += 2.0 * a.comp[c] * b.comp[c];
    return out;
  }

  const SymTensorField& gi = m.inverse_metric();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      ArrayXd raised = ArrayXd::Zero(a.shape.total);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (k == l) continue;
          ArrayXd coeff = gi.at(i, k) * gi.at(j, l);
          add_two_form_entry(raised, coeff, b, k, l);
        }
      out.data() += 2.0 * a.upper(i, j) * raised;
    }
  return out;
}

}  // namespace ahlfors
