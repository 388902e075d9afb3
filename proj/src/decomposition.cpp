#include "ahlfors/decomposition.hpp"

#include <algorithm>
#include <cmath>

#include "ahlfors/errors.hpp"

namespace ahlfors {

namespace {

// phi + s * g, used for both the trace projection and reconstruction.
SymTensorField add_scalar_times_metric(const GridManifold& m,
                                       SymTensorField phi,
                                       const Eigen::ArrayXd& s) {
  const auto& g = m.metric();
  const int n = m.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) phi.at(i, j) += s * g.at(i, j);
  return phi;
}

}  // namespace

DecompositionResult decompose(const GridManifold& m, const SymTensorField& K,
                              const SolveOptions& opts) {
  if (K.shape != m.shape()) throw ShapeMismatch("decompose: K not on this grid");
  const int n = m.dim();

  DecompositionResult r;
  r.H = trace_g(m, K);
  r.K0 = add_scalar_times_metric(m, K, -r.H.data() / double(n));

  // By construction tr_g K0 vanishes to rounding; the adjoint's own trace
  // check is kept on as a cheap internal consistency assertion.
  OneFormField b = ahlfors_adjoint(m, r.K0, /*require_tracefree=*/true);

  SolveResult sol = solve_ahlfors(m, b, opts);
  r.theta = std::move(sol.theta);
  r.solver.iterations = sol.iterations;
  r.solver.relative_residual = sol.relative_residual;
  r.solver.converged = sol.converged;
  r.solver.deflated_dimension = sol.deflated_dimension;
  r.solver.tol_used = opts.tol;

  SymTensorField s_theta = cauchy_ahlfors(m, r.theta);
  r.phi_tt = r.K0 - s_theta;

  ScalarField delta_theta = codiff(m, r.theta);
  r.lambda = ScalarField::zeros(m.shape());
  r.lambda.data() = (r.H.data() + delta_theta.data()) / double(n);
  return r;
}

SymTensorField reconstruct(const DecompositionResult& r,
                           const GridManifold& m) {
  if (r.theta.shape != m.shape())
    throw ShapeMismatch("reconstruct: result not on this grid");
  SymTensorField K = killing_op(m, r.theta) + r.phi_tt;
  return add_scalar_times_metric(m, std::move(K), r.lambda.data());
}

CertificateReport certify(const DecompositionResult& r, const GridManifold& m,
                          const SymTensorField& K) {
  const int n = m.dim();
  CertificateReport rep;

  SymTensorField s_theta = cauchy_ahlfors(m, r.theta);
  rep.norm_K = norm_l2(m, K);
  rep.norm_K0 = norm_l2(m, r.K0);
  rep.norm_S_theta = norm_l2(m, s_theta);
  rep.norm_phi_tt = norm_l2(m, r.phi_tt);
  rep.norm_theta = norm_l2(m, r.theta);

  auto push = [&rep](std::string name, double value, double threshold) {
    rep.checks.push_back(
        {std::move(name), value, threshold, value <= threshold});
  };

  push("trace-free", norm_l2(m, trace_g(m, r.phi_tt)), 1e-9 * rep.norm_K);
  push("divergence-free", norm_l2(m, div_sym2(m, r.phi_tt)),
       10.0 * std::max(r.solver.tol_used, 1e-12) * rep.norm_K0);
  // The 1e-28 floor keeps the exactly-umbilical case (K0 = 0 bitwise) from
  // demanding 0 <= 0 of a sum that curved quadrature may round.
  push("orthogonality", std::abs(inner_l2(m, s_theta, r.phi_tt)),
       1e-8 * rep.norm_K0 * rep.norm_K0 + 1e-28 * (1.0 + rep.norm_K * rep.norm_K));

  ScalarField delta_theta = codiff(m, r.theta);
  ScalarField trace_gap = ScalarField::zeros(m.shape());
  trace_gap.data() =
      double(n) * r.lambda.data() - r.H.data() - delta_theta.data();
  push("trace-identity", max_abs(trace_gap),
       1e-9 * (1.0 + max_abs(r.H)));

  push("reconstruction", norm_l2(m, K - reconstruct(r, m)),
       1e-8 * rep.norm_K);

  const double k0sq = rep.norm_K0 * rep.norm_K0;
  rep.pythagoras_rel =
      std::abs(k0sq - rep.norm_S_theta * rep.norm_S_theta -
               rep.norm_phi_tt * rep.norm_phi_tt) /
      std::max(k0sq, 1e-300);

  rep.theta_in_kernel = rep.norm_theta <= 1e-14 * (1.0 + rep.norm_K);
  rep.conformal_killing_ratio =
      rep.theta_in_kernel ? 0.0 : rep.norm_S_theta / rep.norm_theta;
  return rep;
}

SymTensorField make_synthetic(const GridManifold& m, const OneFormField& theta,
                              const ScalarField& lambda,
                              const SymTensorField& phi_tt) {
  if (theta.shape != m.shape() || lambda.shape != m.shape() ||
      phi_tt.shape != m.shape())
    throw ShapeMismatch("make_synthetic: pieces not on this grid");

  const double scale = 1e-8 * (1.0 + norm_l2(m, phi_tt));
  if (norm_l2(m, trace_g(m, phi_tt)) > scale)
    throw NotTT("make_synthetic: phi_tt has nonzero trace");
  if (norm_l2(m, div_sym2(m, phi_tt)) > scale)
    throw NotTT("make_synthetic: phi_tt has nonzero divergence");

  SymTensorField K = killing_op(m, theta) + phi_tt;
  return add_scalar_times_metric(m, std::move(K), lambda.data());
}

}  // namespace ahlfors
