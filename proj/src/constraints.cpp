#include "ahlfors/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ahlfors/errors.hpp"

namespace ahlfors {

ScalarField hamiltonian_residual(const GridManifold& m, const SymTensorField& K,
                                 double lambda, double kappa,
                                 const ScalarField* rho) {
  if (K.shape != m.shape())
    throw ShapeMismatch("hamiltonian_residual: K not on this grid");
  if (rho && rho->shape != m.shape())
    throw ShapeMismatch("hamiltonian_residual: rho not on this grid");

  ScalarField kk = pointwise_inner(m, K, K);
  ScalarField H = trace_g(m, K);

  ScalarField out = ScalarField::zeros(m.shape());
  out.data() = m.scalar_curvature().data() - kk.data() + H.data().square();
  if (rho) out.data() -= (2.0 * kappa) * rho->data();
  if (lambda != 0.0) out.data() -= 2.0 * lambda;
  return out;
}

OneFormField momentum_residual(const GridManifold& m, const SymTensorField& K,
                               double kappa, const OneFormField* J) {
  if (K.shape != m.shape())
    throw ShapeMismatch("momentum_residual: K not on this grid");
  if (J && J->shape != m.shape())
    throw ShapeMismatch("momentum_residual: J not on this grid");

  OneFormField delta_K = div_sym2(m, K);
  OneFormField dH = ext_d(m, trace_g(m, K));

  OneFormField out = OneFormField::zeros(m.shape());
  for (int i = 0; i < m.dim(); ++i) {
    out[i] = -delta_K[i] - dH[i];
    if (J) out[i] -= kappa * (*J)[i];
  }
  return out;
}

ConstraintReport evaluate_constraints(const GridManifold& m,
                                      const SymTensorField& K, double lambda,
                                      double kappa, const ScalarField* rho,
                                      const OneFormField* J) {
  ConstraintReport rep;
  rep.hamiltonian = hamiltonian_residual(m, K, lambda, kappa, rho);
  rep.momentum = momentum_residual(m, K, kappa, J);
  rep.hamiltonian_l2 = norm_l2(m, rep.hamiltonian);
  rep.momentum_l2 = norm_l2(m, rep.momentum);
  rep.lambda = lambda;
  rep.kappa = kappa;
  rep.has_rho = rho != nullptr;
  rep.has_current = J != nullptr;
  return rep;
}

MomentumData gen_momentum_data(const GridManifold& m, const ScalarField& f,
                               double c, const SymTensorField& phi_tt) {
  if (!m.is_flat())
    throw NotFlat("gen_momentum_data: the gradient ansatz needs a flat metric");
  if (f.shape != m.shape() || phi_tt.shape != m.shape())
    throw ShapeMismatch("gen_momentum_data: pieces not on this grid");

  const double scale = 1e-8 * (1.0 + norm_l2(m, phi_tt));
  if (norm_l2(m, trace_g(m, phi_tt)) > scale)
    throw NotTT("gen_momentum_data: phi_tt has nonzero trace");
  if (norm_l2(m, div_sym2(m, phi_tt)) > scale)
    throw NotTT("gen_momentum_data: phi_tt has nonzero divergence");

  const int n = m.dim();
  MomentumData out;
  out.K = phi_tt;
  out.H = ScalarField::zeros(m.shape());
  out.H.data().setConstant(c);
  for (int i = 0; i < n; ++i) {
    ArrayXd di = m.deriv(f.data(), i);
    for (int j = i; j < n; ++j) {
      ArrayXd hess_ij = m.deriv(di, j);
      out.K.at(i, j) += hess_ij;
      if (j == i) out.H.data() += hess_ij;
    }
    out.K.at(i, i) += c / double(n);
  }
  return out;
}

Theorem3Report theorem3_check(const GridManifold& m, const SymTensorField& K,
                              const SolveOptions& opts) {
  DecompositionResult r = decompose(m, K, opts);
  const int n = m.dim();

  Theorem3Report rep;
  rep.n = n;
  rep.solver = r.solver;

  SymTensorField kill = killing_op(m, r.theta);
  ScalarField div_theta = codiff(m, r.theta);
  rep.norm2_killing = inner_l2(m, kill, kill);
  rep.norm2_codiff = inner_l2(m, div_theta, div_theta);

  // L_xi H = xi(H) = g(dH, theta) for xi = theta^sharp.
  rep.lie_integral = integrate(pointwise_inner(m, ext_d(m, r.H), r.theta), m);

  rep.lhs = -(double(n - 1) / double(n)) * rep.lie_integral;
  rep.rhs_derived = rep.norm2_killing - rep.norm2_codiff / double(n);
  rep.rhs_paper = 0.5 * rep.norm2_killing +
                  (double(n - 2) / (2.0 * double(n))) * rep.norm2_codiff;
  rep.derived_coefficient = double(n - 1) / double(n);
  rep.paper_coefficient = double(n + 1) / double(n);

  if (std::abs(rep.lie_integral) > 1e-10 * (1.0 + std::abs(rep.rhs_derived))) {
    rep.fitted_coefficient = -rep.rhs_derived / rep.lie_integral;
    rep.fitted_defined = true;
  } else {
    rep.fitted_coefficient = std::numeric_limits<double>::quiet_NaN();
    rep.fitted_defined = false;
  }

  rep.momentum_residual_l2 = norm_l2(m, momentum_residual(m, K));
  return rep;
}

Corollary1Report corollary1_check(const GridManifold& m,
                                  const SymTensorField& K,
                                  const SolveOptions& opts) {
  const double mom_l2 = norm_l2(m, momentum_residual(m, K));
  const double K_l2 = norm_l2(m, K);
  if (mom_l2 > 1e-8 * (1.0 + K_l2))
    throw Inapplicable(
        "corollary1_check: input violates the momentum constraint");

  DecompositionResult r = decompose(m, K, opts);
  const int n = m.dim();

  Corollary1Report rep;
  rep.solver = r.solver;

  ScalarField one = ScalarField::zeros(m.shape());
  one.data().setConstant(1.0);
  const double vol = integrate(one, m);
  rep.mean_H = integrate(r.H, m) / vol;

  ScalarField centered = ScalarField::zeros(m.shape());
  centered.data() = (r.H.data() - rep.mean_H).square();
  rep.sd_H = std::sqrt(std::max(0.0, integrate(centered, m) / vol));

  const double tiny = 1e-300;
  rep.conformal_killing_rel =
      norm_l2(m, cauchy_ahlfors(m, r.theta)) / std::max(norm_l2(m, r.K0), tiny);
  rep.cmc_form_rel = norm_l2(m, r.K0 - r.phi_tt) / std::max(K_l2, tiny);

  ScalarField identity = ScalarField::zeros(m.shape());
  identity.data() = m.scalar_curvature().data() -
                    pointwise_inner(m, r.phi_tt, r.phi_tt).data() +
                    (double(n - 1) / double(n)) * r.H.data().square();
  rep.curvature_identity_l2 = norm_l2(m, identity);

  rep.is_cmc = rep.sd_H <= 1e-8 * (1.0 + std::abs(rep.mean_H));
  return rep;
}

}  // namespace ahlfors
