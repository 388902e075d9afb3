#include <doctest.h>

#include <array>
#include <cmath>

#include "ahlfors/decomposition.hpp"
#include "ahlfors/random_fields.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ahlfors;
using testutil::bitwise_equal;
using testutil::flat2;
using testutil::flat3;

namespace {

// K = diag(1 + cos x, 1) on flat T^2: the hand-worked split
//   H = 2 + cos x, K0 = (1/2) cos x diag(1,-1) = S(sin x dx),
//   theta = sin x dx, lambda = 1, phi_tt = 0.
SymTensorField umbilical_plus_wave(const GridShape& s) {
  SymTensorField K = SymTensorField::zeros(s);
  K.at(0, 0) = 1.0 + mode_field(s, true, {1, 0, 0}).data();
  K.at(1, 1).setConstant(1.0);
  return K;
}

}  // namespace

TEST_CASE("hand-worked split of diag(1+cos x, 1) on flat T^2") {
  GridManifold m = flat2(64);
  SymTensorField K = umbilical_plus_wave(m.shape());

  DecompositionResult r = decompose(m, K);
  CHECK(r.solver.converged);
  CHECK(r.solver.deflated_dimension == 2);

  const ArrayXd sinx = mode_field(m.shape(), false, {1, 0, 0}).data();
  const ArrayXd cosx = mode_field(m.shape(), true, {1, 0, 0}).data();

  CHECK((r.H.data() - 2.0 - cosx).abs().maxCoeff() <= 1e-12);
  CHECK((r.K0.at(0, 0) - 0.5 * cosx).abs().maxCoeff() <= 1e-12);
  CHECK((r.K0.at(1, 1) + 0.5 * cosx).abs().maxCoeff() <= 1e-12);
  CHECK(max_abs(r.K0 - cauchy_ahlfors(m, r.theta)) <= 1e-8);

  CHECK((r.theta[0] - sinx).abs().maxCoeff() <= 1e-8);
  CHECK(r.theta[1].abs().maxCoeff() <= 1e-8);
  CHECK((r.lambda.data() - 1.0).abs().maxCoeff() <= 1e-8);
  CHECK(max_abs(r.phi_tt) <= 1e-8);

  CHECK(max_abs_diff(reconstruct(r, m), K) <= 1e-8 * max_abs(K));

  CertificateReport rep = certify(r, m, K);
  CHECK(rep.all_pass());
  CHECK(!rep.theta_in_kernel);
  // |S theta| / |theta| = pi / (sqrt(2) pi) = 1/sqrt(2).
  CHECK(rep.conformal_killing_ratio ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
  CHECK(rep.norm_theta ==
        doctest::Approx(std::sqrt(2.0) * oracle::kPi).epsilon(1e-8));
  CHECK(rep.pythagoras_rel <= 1e-7);
}

TEST_CASE("umbilical K = g splits into pure trace exactly") {
  GridManifold m = flat2(32);
  SymTensorField K = SymTensorField::zeros(m.shape());
  K.at(0, 0).setConstant(1.0);
  K.at(1, 1).setConstant(1.0);

  DecompositionResult r = decompose(m, K);
  // Every step is exact here: H = 2, K0 = 0 bitwise, b = 0, so the solver
  // returns the zero potential without iterating.
  CHECK(r.solver.iterations == 0);
  CHECK(max_abs(r.K0) == 0.0);
  CHECK(max_abs(r.theta) == 0.0);
  CHECK(max_abs(r.phi_tt) == 0.0);
  CHECK((r.lambda.data() - 1.0).abs().maxCoeff() == 0.0);
  CHECK((r.H.data() - 2.0).abs().maxCoeff() == 0.0);

  CertificateReport rep = certify(r, m, K);
  CHECK(rep.all_pass());
  for (const auto& c : rep.checks) CHECK(c.value <= 1e-12);
  CHECK(rep.theta_in_kernel);
  CHECK(rep.conformal_killing_ratio == 0.0);
}

TEST_CASE("constant trace-free tensors pass through as phi_tt") {
  GridManifold m = flat2(32);
  SymTensorField K = SymTensorField::zeros(m.shape());
  K.at(0, 0).setConstant(0.7);
  K.at(1, 1).setConstant(-0.7);
  K.at(0, 1).setConstant(0.3);

  DecompositionResult r = decompose(m, K);
  // H = 0 and the divergence of a constant field is exactly zero, so the
  // zero-right-hand-side fast path leaves phi_tt = K bitwise.
  CHECK(max_abs(r.theta) == 0.0);
  CHECK(max_abs(r.lambda) == 0.0);
  CHECK(bitwise_equal(r.phi_tt, K));
  CHECK(certify(r, m, K).all_pass());
}

TEST_CASE("synthetic round-trip on flat T^2 recovers every piece") {
  GridManifold m = flat2(64);

  for (std::uint64_t seed : {11u, 12u, 13u}) {
    NormalSampler rng(seed);
    OneFormField theta = project_orthogonal(
        m, random_one_form(m.shape(), 6, rng), kernel_basis(m));
    ScalarField lambda = random_scalar(m.shape(), 6, rng);
    // On flat T^2 the transverse-traceless tensors are exactly the constant
    // trace-free ones (the divergence-free condition is Cauchy-Riemann).
    SymTensorField phi = SymTensorField::zeros(m.shape());
    phi.at(0, 0).setConstant(0.4);
    phi.at(1, 1).setConstant(-0.4);
    phi.at(0, 1).setConstant(-0.9);

    SymTensorField K = make_synthetic(m, theta, lambda, phi);
    DecompositionResult r = decompose(m, K);
    CHECK(r.solver.converged);

    const double scale = 1.0 + max_abs(K);
    CHECK(max_abs_diff(r.theta, theta) <= 1e-6 * scale);
    CHECK(max_abs_diff(r.lambda, lambda) <= 1e-6 * scale);
    CHECK(max_abs_diff(r.phi_tt, phi) <= 1e-6 * scale);
    CHECK(max_abs_diff(reconstruct(r, m), K) <= 1e-8 * scale);

    CertificateReport rep = certify(r, m, K);
    CHECK(rep.all_pass());
    CHECK(rep.pythagoras_rel <= 1e-7);
  }
}

TEST_CASE("cos z wave family on flat T^3 is fixed by the split") {
  GridManifold m = flat3(24);
  SymTensorField phi = SymTensorField::zeros(m.shape());
  const ArrayXd cosz = mode_field(m.shape(), true, {0, 0, 1}).data();
  phi.at(0, 0) = 0.8 * cosz;
  phi.at(1, 1) = -0.8 * cosz;
  phi.at(0, 1) = 0.5 * cosz;

  DecompositionResult r = decompose(m, phi);
  CHECK(r.solver.converged);
  CHECK(max_abs(r.theta) <= 1e-8);
  CHECK(max_abs(r.lambda) <= 1e-10);
  CHECK(max_abs_diff(r.phi_tt, phi) <= 1e-8);
  CHECK(certify(r, m, phi).all_pass());

  // The same family also survives a full synthetic round-trip.
  NormalSampler rng(77);
  OneFormField theta = project_orthogonal(
      m, random_one_form(m.shape(), 5, rng), kernel_basis(m));
  ScalarField lambda = random_scalar(m.shape(), 5, rng);
  SymTensorField K = make_synthetic(m, theta, lambda, phi);
  DecompositionResult rr = decompose(m, K);
  CHECK(rr.solver.converged);
  const double scale = 1.0 + max_abs(K);
  CHECK(max_abs_diff(rr.theta, theta) <= 1e-6 * scale);
  CHECK(max_abs_diff(rr.lambda, lambda) <= 1e-6 * scale);
  CHECK(max_abs_diff(rr.phi_tt, phi) <= 1e-6 * scale);
  CHECK(certify(rr, m, K).all_pass());
}

TEST_CASE("make_synthetic rejects pieces that are not transverse-traceless") {
  GridManifold m = flat2(16);
  OneFormField theta = OneFormField::zeros(m.shape());
  ScalarField lambda = ScalarField::zeros(m.shape());

  SymTensorField traced = SymTensorField::zeros(m.shape());
  traced.at(0, 0) = mode_field(m.shape(), true, {0, 1, 0}).data();
  CHECK_THROWS_AS(make_synthetic(m, theta, lambda, traced), NotTT);

  // Trace-free but with divergence: diag(cos x, -cos x).
  SymTensorField leaky = SymTensorField::zeros(m.shape());
  leaky.at(0, 0) = mode_field(m.shape(), true, {1, 0, 0}).data();
  leaky.at(1, 1) = -leaky.at(0, 0);
  CHECK_THROWS_AS(make_synthetic(m, theta, lambda, leaky), NotTT);
}

TEST_CASE("trace of K0 vanishes to projection accuracy on curved metrics") {
  NormalSampler rng(2024);
  for (int n : {2, 3}) {
    GridManifold m = testutil::conformal_cos_x(n, n == 2 ? 32 : 16);
    SymTensorField K = random_sym2(m.shape(), 4, rng);
    // The assertion is about the trace projection, not the solve, so a
    // short iteration budget keeps this quick.
    SolveOptions o;
    o.max_iterations = 50;
    DecompositionResult r = decompose(m, K, o);
    CHECK(norm_l2(m, trace_g(m, r.K0)) <= 1e-11 * norm_l2(m, K));
  }
}

TEST_CASE("the split is a deterministic function of the input") {
  GridManifold m = flat2(32);
  NormalSampler rng(31);
  SymTensorField K = random_sym2(m.shape(), 6, rng);

  DecompositionResult a = decompose(m, K);
  DecompositionResult b = decompose(m, K);
  CHECK(bitwise_equal(a.theta, b.theta));
  CHECK(bitwise_equal(a.lambda, b.lambda));
  CHECK(bitwise_equal(a.phi_tt, b.phi_tt));
  CHECK(a.solver.iterations == b.solver.iterations);
}
