#pragma once

#include <string>
#include <vector>

#include "ahlfors/elliptic.hpp"
#include "ahlfors/tensor_ops.hpp"

namespace ahlfors {

// L2-orthogonal split of a symmetric 2-tensor K:
//
//   K = delta* theta + lambda g + phi_tt,   K0 = S theta + phi_tt,
//
// where H = tr_g K, K0 = K - (H/n) g is the trace-free part, theta solves
// S*S theta = delta K0, and phi_tt = K0 - S theta is transverse-traceless up
// to solver accuracy. phi_tt is produced by subtraction and never re-projected;
// its trace and divergence residuals are reported honestly by certify() so a
// bad solve cannot hide.

struct SolverDiagnostics {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  int deflated_dimension = 0;
  double tol_used = 0.0;
};

struct DecompositionResult {
  OneFormField theta;       // potential, orthogonal to the deflation basis
  ScalarField lambda;       // pure-trace factor, n lambda = H + delta theta
  SymTensorField phi_tt;    // transverse-traceless remainder K0 - S theta
  ScalarField H;            // tr_g K
  SymTensorField K0;        // K - (H/n) g
  SolverDiagnostics solver;
};

// One certified inequality: measured residual against its acceptance bound.
struct CertificateCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct CertificateReport {
  // L2 norms of the pieces.
  double norm_K = 0.0;
  double norm_K0 = 0.0;
  double norm_S_theta = 0.0;
  double norm_phi_tt = 0.0;
  double norm_theta = 0.0;

  // Checks, in order: trace-free, divergence-free, orthogonality,
  // trace-identity (n lambda = H + delta theta), reconstruction.
  std::vector<CertificateCheck> checks;

  // |  |K0|^2 - |S theta|^2 - |phi_tt|^2  | / max(|K0|^2, eps); informational.
  double pythagoras_rel = 0.0;

  // |S theta| / |theta|: 0 iff theta^sharp is conformal Killing. When theta
  // itself vanishes (K0 already TT) the ratio is reported as 0 with
  // theta_in_kernel = true instead of dividing by zero.
  double conformal_killing_ratio = 0.0;
  bool theta_in_kernel = false;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Run the full pipeline. Solver non-convergence is not an exception here
// either: the flag travels in .solver and shows up as failed certificate
// checks. Deflation gauge makes the output a deterministic function of (m, K).
DecompositionResult decompose(const GridManifold& m, const SymTensorField& K,
                              const SolveOptions& opts = {});

// delta* theta + lambda g + phi_tt.
SymTensorField reconstruct(const DecompositionResult& r, const GridManifold& m);

// Measure every claimed property of the split against K.
CertificateReport certify(const DecompositionResult& r, const GridManifold& m,
                          const SymTensorField& K);

// Assemble K = delta* theta + lambda g + phi_tt from chosen pieces, for
// round-trip tests. Throws NotTT unless phi_tt has trace and divergence below
// 1e-8 (1 + |phi_tt|) in L2.
SymTensorField make_synthetic(const GridManifold& m, const OneFormField& theta,
                              const ScalarField& lambda,
                              const SymTensorField& phi_tt);

}  // namespace ahlfors
