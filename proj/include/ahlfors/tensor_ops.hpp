#pragma once

#include "ahlfors/grid.hpp"

namespace ahlfors {

// First-order Riemannian tensor calculus on a GridManifold. Index conventions:
//   (nabla theta)_ij = d_i theta_j - Gamma^k_ij theta_k
//   (delta* theta)_ij = (1/2)(nabla_i theta_j + nabla_j theta_i)
//   (delta phi)_j = -g^{ik} nabla_i phi_kj          (divergence, sym 2-tensors)
//   delta theta  = -g^{ij} nabla_i theta_j          (codifferential, 1-forms)
//   (delta omega)_j = -g^{ik} nabla_i omega_kj      (codifferential, 2-forms)
//   (d theta)_ij = d_i theta_j - d_j theta_i
// The conformal-Killing operator and its formal adjoint:
//   (S theta)_ij = (delta* theta)_ij + (1/n)(delta theta) g_ij   (trace-free)
//   S* omega = delta omega                          (omega trace-free)

VectorField sharp(const GridManifold& m, const OneFormField& theta);
OneFormField flat(const GridManifold& m, const VectorField& xi);

SymTensorField killing_op(const GridManifold& m, const OneFormField& theta);  // delta*
SymTensorField lie_metric(const GridManifold& m, const VectorField& xi);      // L_xi g

OneFormField div_sym2(const GridManifold& m, const SymTensorField& phi);
ScalarField trace_g(const GridManifold& m, const SymTensorField& phi);

OneFormField ext_d(const GridManifold& m, const ScalarField& f);
TwoFormField ext_d(const GridManifold& m, const OneFormField& theta);
ScalarField codiff(const GridManifold& m, const OneFormField& theta);
OneFormField codiff(const GridManifold& m, const TwoFormField& omega);

SymTensorField cauchy_ahlfors(const GridManifold& m, const OneFormField& theta);

// Formal adjoint S*. With require_tracefree the input's trace is checked
// against tracefree_tol * max(1, |omega|_inf) and NotTraceFree is thrown.
OneFormField ahlfors_adjoint(const GridManifold& m, const SymTensorField& omega,
                             bool require_tracefree = false, double tracefree_tol = 1e-8);

// Pointwise metric pairings g(a,b) (all indices raised with g^{-1} as needed).
ScalarField pointwise_inner(const GridManifold& m, const ScalarField& a, const ScalarField& b);
ScalarField pointwise_inner(const GridManifold& m, const OneFormField& a, const OneFormField& b);
ScalarField pointwise_inner(const GridManifold& m, const VectorField& a, const VectorField& b);
ScalarField pointwise_inner(const GridManifold& m, const SymTensorField& a,
                            const SymTensorField& b);
ScalarField pointwise_inner(const GridManifold& m, const TwoFormField& a, const TwoFormField& b);

// L^2 pairing <a,b> = integral of g(a,b) dvol, and the induced norm.
template <class F>
double inner_l2(const GridManifold& m, const F& a, const F& b) {
  return integrate(pointwise_inner(m, a, b), m);
}

template <class F>
double norm_l2(const GridManifold& m, const F& a) {
  return std::sqrt(std::max(0.0, inner_l2(m, a, a)));
}

}  // namespace ahlfors
