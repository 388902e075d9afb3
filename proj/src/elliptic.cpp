#include "ahlfors/elliptic.hpp"

#include <cmath>

namespace ahlfors {

std::vector<OneFormField> kernel_basis(const GridManifold& m) {
  if (!m.is_flat()) return {};
  const int n = m.dim();
  // dx^i / (2 pi)^{n/2}: exactly orthonormal in the flat L2 pairing
  const double scale = std::pow(kTwoPi, -0.5 * n);
  std::vector<OneFormField> basis;
  basis.reserve(size_t(n));
  for (int i = 0; i < n; ++i) {
    OneFormField k = OneFormField::zeros(m.shape());
    k[i].setConstant(scale);
    basis.push_back(std::move(k));
  }
  return basis;
}

namespace {

void project_inplace(const GridManifold& m, OneFormField& theta,
                     const std::vector<OneFormField>& basis) {
  for (const OneFormField& k : basis) axpy(theta, -inner_l2(m, theta, k), k);
}

// Modified Gram-Schmidt in the L2 pairing; near-dependent vectors are dropped.
std::vector<OneFormField> orthonormalize(const GridManifold& m,
                                         const std::vector<OneFormField>& raw) {
  std::vector<OneFormField> basis;
  for (OneFormField v : raw) {
    if (!(v.shape == m.shape())) throw ShapeMismatch("deflation basis grid mismatch");
    project_inplace(m, v, basis);
    const double nv = norm_l2(m, v);
    if (nv <= 1e-10) continue;
    basis.push_back((1.0 / nv) * v);
  }
  return basis;
}

}  // namespace

OneFormField project_orthogonal(const GridManifold& m, OneFormField theta,
                                const std::vector<OneFormField>& basis) {
  project_inplace(m, theta, basis);
  return theta;
}

SolveResult solve_ahlfors(const GridManifold& m, const OneFormField& b, const SolveOptions& opts,
                          const OneFormField* initial_guess) {
  if (!(b.shape == m.shape())) throw ShapeMismatch("right-hand side does not live on this grid");
  if (!(opts.tol > 0.0) || opts.tol > 1e-2)
    throw Error("solver tolerance must lie in (0, 1e-2]");
  int maxit = opts.max_iterations;
  if (maxit == 0) maxit = int(10.0 * std::sqrt(double(m.shape().total)));
  if (maxit < 1) throw Error("max_iterations must be positive");

  std::vector<OneFormField> basis;
  switch (opts.deflation) {
    case Deflation::AnalyticFlat: basis = kernel_basis(m); break;
    case Deflation::Supplied: basis = orthonormalize(m, opts.supplied_basis); break;
    case Deflation::None: break;
  }

  auto apply = [&](const OneFormField& x) {
    return ahlfors_adjoint(m, cauchy_ahlfors(m, x), /*require_tracefree=*/true);
  };

  SolveResult res;
  res.deflated_dimension = int(basis.size());

  const double bnorm = norm_l2(m, b);
  // Solvability: b must be orthogonal to the kernel.
  for (const OneFormField& k : basis)
    if (std::abs(inner_l2(m, b, k)) > 1e-8 * bnorm)
      throw Inconsistent("right-hand side has a component along the operator kernel");

  if (bnorm == 0.0) {
    res.theta = OneFormField::zeros(b.shape);
    res.converged = true;
    res.residual_history.push_back(0.0);
    return res;
  }

  OneFormField rhs = project_orthogonal(m, b, basis);

  OneFormField x = initial_guess ? project_orthogonal(m, *initial_guess, basis)
                                 : OneFormField::zeros(b.shape);
  OneFormField r = initial_guess ? project_orthogonal(m, rhs - apply(x), basis) : rhs;

  double rnorm = norm_l2(m, r);
  res.residual_history.push_back(rnorm / bnorm);
  if (rnorm <= opts.tol * bnorm) {
    res.theta = std::move(x);
    res.relative_residual = rnorm / bnorm;
    res.converged = true;
    return res;
  }

  // Conjugate residual: minimizes |r| over the Krylov space, one operator
  // application per iteration via the A p recurrence.
  OneFormField p = r;
  OneFormField Ar = apply(r);
  OneFormField Ap = Ar;
  double rho = inner_l2(m, r, Ar);  // <r, A r>

  for (int it = 0; it < maxit; ++it) {
    const double app = inner_l2(m, Ap, Ap);
    if (!(app > 0.0) || !(std::abs(rho) > 0.0)) break;  // stagnation on the PSD operator

    const double alpha = rho / app;
    axpy(x, alpha, p);
    axpy(r, -alpha, Ap);
    // Re-pin the kernel component drift from rounding.
    project_inplace(m, x, basis);
    project_inplace(m, r, basis);

    res.iterations = it + 1;
    rnorm = norm_l2(m, r);
    res.residual_history.push_back(rnorm / bnorm);
    if (rnorm <= opts.tol * bnorm) {
      res.converged = true;
      break;
    }

    Ar = apply(r);
    const double rho_next = inner_l2(m, r, Ar);
    const double beta = rho_next / rho;
    rho = rho_next;

    // p <- r + beta p,  Ap <- Ar + beta Ap
    for (size_t c = 0; c < p.comp.size(); ++c) {
      p.comp[c] = r.comp[c] + beta * p.comp[c];
      Ap.comp[c] = Ar.comp[c] + beta * Ap.comp[c];
    }
  }

  res.theta = std::move(x);
  res.relative_residual = rnorm / bnorm;
  return res;
}

}  // namespace ahlfors
