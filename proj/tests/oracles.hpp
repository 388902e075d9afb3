#pragma once

// Independent oracles for the tests. Everything here evaluates closed forms or
// plain finite differences of analytic metric callables — no spectral
// machinery, no shared code with the library paths under test.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>

namespace oracle {

// Metric as an analytic callable: x (coordinate triple) -> n x n matrix.
using MetricFn = std::function<Eigen::MatrixXd(const std::array<double, 3>&)>;

inline std::array<double, 3> shifted(std::array<double, 3> x, int axis, double dx) {
  x[size_t(axis)] += dx;
  return x;
}

// Fourth-order central first derivative of the metric.
inline Eigen::MatrixXd fd_dg(const MetricFn& g, const std::array<double, 3>& x, int a, double h) {
  return (-g(shifted(x, a, 2 * h)) + 8.0 * g(shifted(x, a, h)) - 8.0 * g(shifted(x, a, -h)) +
          g(shifted(x, a, -2 * h))) /
         (12.0 * h);
}

// Fourth-order second derivative; mixed case nests the first-derivative stencil.
inline Eigen::MatrixXd fd_d2g(const MetricFn& g, const std::array<double, 3>& x, int a, int b,
                              double h) {
  if (a == b) {
    return (-g(shifted(x, a, 2 * h)) + 16.0 * g(shifted(x, a, h)) - 30.0 * g(x) +
            16.0 * g(shifted(x, a, -h)) - g(shifted(x, a, -2 * h))) /
           (12.0 * h * h);
  }
  auto dga = [&](const std::array<double, 3>& y) { return fd_dg(g, y, a, h); };
  return (-dga(shifted(x, b, 2 * h)) + 8.0 * dga(shifted(x, b, h)) - 8.0 * dga(shifted(x, b, -h)) +
          dga(shifted(x, b, -2 * h))) /
         (12.0 * h);
}

struct CurvaturePoint {
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
};

// Ricci tensor and scalar curvature at one point, assembled from finite
// differences of the metric callable with the textbook formulas:
//   Gamma^k_ij = (1/2) g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
//   Ric_ij     = d_k Gamma^k_ij - d_i Gamma^k_kj
//                + Gamma^k_kl Gamma^l_ij - Gamma^k_il Gamma^l_kj
inline CurvaturePoint fd_curvature(const MetricFn& g, const std::array<double, 3>& x, int n,
                                   double h) {
  const Eigen::MatrixXd g0 = g(x);
  const Eigen::MatrixXd ginv = g0.inverse();

  std::array<Eigen::MatrixXd, 3> dg;
  for (int a = 0; a < n; ++a) dg[size_t(a)] = fd_dg(g, x, a, h);

  // d2g[a][b] = d_a d_b g
  std::array<std::array<Eigen::MatrixXd, 3>, 3> d2g;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) d2g[size_t(a)][size_t(b)] = fd_d2g(g, x, a, b, h);

  // dginv[a] = -ginv dg[a] ginv
  std::array<Eigen::MatrixXd, 3> dginv;
  for (int a = 0; a < n; ++a) dginv[size_t(a)] = -ginv * dg[size_t(a)] * ginv;

  auto gamma = [&](int k, int i, int j) {
    double acc = 0.0;
    for (int l = 0; l < n; ++l)
      acc += ginv(k, l) * (dg[size_t(i)](j, l) + dg[size_t(j)](i, l) - dg[size_t(l)](i, j));
    return 0.5 * acc;
  };
  auto dgamma = [&](int a, int k, int i, int j) {
    double acc = 0.0;
    for (int l = 0; l < n; ++l) {
      acc += dginv[size_t(a)](k, l) *
             (dg[size_t(i)](j, l) + dg[size_t(j)](i, l) - dg[size_t(l)](i, j));
      acc += ginv(k, l) * (d2g[size_t(a)][size_t(i)](j, l) + d2g[size_t(a)][size_t(j)](i, l) -
                           d2g[size_t(a)][size_t(l)](i, j));
    }
    return 0.5 * acc;
  };

  CurvaturePoint out;
  out.ricci = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += dgamma(k, k, i, j);
      for (int k = 0; k < n; ++k) acc -= dgamma(i, k, k, j);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) acc += gamma(k, k, l) * gamma(l, i, j);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) acc -= gamma(k, i, l) * gamma(l, k, j);
      out.ricci(i, j) = acc;
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.scalar += ginv(i, j) * out.ricci(i, j);
  return out;
}

// Modified Bessel I_0 by its everywhere-convergent power series.
inline double bessel_i0(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int m = 1; m < 64; ++m) {
    term *= q / (double(m) * double(m));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

// Frozen constants used across the tests.
inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPiSq = 2.0 * kPi * kPi;            // integral of sin^2 over T^2
inline constexpr double kTorusArea = 4.0 * kPi * kPi;          // (2 pi)^2
inline constexpr double kTorusVolume3 = 8.0 * kPi * kPi * kPi; // (2 pi)^3

}  // namespace oracle
