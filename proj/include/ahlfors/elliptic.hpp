#pragma once

#include <cstdint>
#include <vector>

#include "ahlfors/tensor_ops.hpp"

namespace ahlfors {

// Krylov solve of S*S theta = b on one-forms. S*S is symmetric positive
// semi-definite; its kernel (conformal Killing forms) is handled by deflation:
// iterates and residuals are L2-projected off a kernel basis every step.

enum class Deflation {
  AnalyticFlat,  // the n constant one-forms on a flat metric, none otherwise
  Supplied,      // orthonormalize SolveOptions::supplied_basis and use that
  None,
};

struct SolveOptions {
  double tol = 1e-10;       // relative residual target |r| <= tol |b|
  int max_iterations = 0;   // 0: 10 * sqrt(#nodes)
  Deflation deflation = Deflation::AnalyticFlat;
  std::vector<OneFormField> supplied_basis;
};

struct SolveResult {
  OneFormField theta;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  int deflated_dimension = 0;
  std::vector<double> residual_history;  // relative residual after each pass
};

// L2-orthonormal basis of the analytic kernel: on a flat metric the n constant
// one-forms scaled to unit norm; empty for any other metric.
std::vector<OneFormField> kernel_basis(const GridManifold& m);

// theta minus its L2 projection onto span(basis).
OneFormField project_orthogonal(const GridManifold& m, OneFormField theta,
                                const std::vector<OneFormField>& basis);

// Conjugate-residual iteration (residual-norm minimizing, so the recorded
// residual history is monotone nonincreasing). Throws Inconsistent when b has
// a kernel component above 1e-8 |b|. A run that hits max_iterations returns
// converged = false with the best iterate rather than throwing.
SolveResult solve_ahlfors(const GridManifold& m, const OneFormField& b,
                          const SolveOptions& opts = {},
                          const OneFormField* initial_guess = nullptr);

}  // namespace ahlfors
