// Acceptance gate: ten quantitative criteria covering the operator
// identities, the worked eigen-computation, synthetic round-trips, the
// hand-worked decomposition, the mean-curvature integral formula, constraint
// exactness, the CMC forward direction, the solver contract, I/O
// bit-exactness with CLI exit codes, and end-to-end runtime.
//
// Usage: acceptance <path-to-cli-binary>
// Prints one [PASS]/[FAIL] line per criterion; exits nonzero on any failure.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ahlfors/constraints.hpp"
#include "ahlfors/decomposition.hpp"
#include "ahlfors/elliptic.hpp"
#include "ahlfors/field_io.hpp"
#include "ahlfors/laplacians.hpp"
#include "ahlfors/random_fields.hpp"

namespace fs = std::filesystem;
using namespace ahlfors;
using clock_type = std::chrono::steady_clock;

namespace {

constexpr double kPi = std::numbers::pi;

int g_failures = 0;

void report(int id, const std::string& label, bool pass,
            const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " " << id << ". " << label;
  if (!detail.empty()) std::cout << " -- " << detail;
  std::cout << "\n" << std::flush;
  if (!pass) ++g_failures;
}

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

template <typename F>
void run(int id, const std::string& label, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, label, false, std::string("exception: ") + e.what());
  }
}

// Constant trace-free family on T^2, cos z wave on T^3 -- both exactly TT.
SymTensorField tt_sample(const GridShape& s, double a, double b) {
  SymTensorField phi = SymTensorField::zeros(s);
  if (s.n == 2) {
    phi.at(0, 0).setConstant(a);
    phi.at(1, 1).setConstant(-a);
    phi.at(0, 1).setConstant(b);
  } else {
    const ArrayXd cosz = mode_field(s, true, {0, 0, 1}).data();
    phi.at(0, 0) = a * cosz;
    phi.at(1, 1) = -a * cosz;
    phi.at(0, 1) = b * cosz;
  }
  return phi;
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

template <typename F>
double rel_diff(const F& got, const F& want) {
  return max_abs_diff(got, want) / (1.0 + max_abs(want));
}

// ---------------------------------------------------------------------------

void criterion1() {
  const auto t0 = clock_type::now();
  double worst_flat = 0.0, worst_conf = 0.0;

  for (int n : {2, 3}) {
    std::vector<Index> axes(size_t(n), 32);
    GridManifold m = GridManifold::flat(n, axes);
    worst_flat = std::max(worst_flat, verify_identities(m, 2026, 5).max_error());
  }
  {
    GridShape s = GridShape::make(2, {64, 64});
    ScalarField u = mode_field(s, true, {1, 0, 0});
    u.data() *= 0.1;
    GridManifold m = GridManifold::conformal(2, {64, 64}, u);
    worst_conf = verify_identities(m, 2026, 5).max_error();
  }

  const double elapsed = seconds_since(t0);
  const bool pass = worst_flat <= 1e-9 && worst_conf <= 1e-8 && elapsed <= 30.0;
  report(1, "operator identity suite", pass,
         "flat max rel err " + fmt(worst_flat) + " (<=1e-9), conformal " +
             fmt(worst_conf) + " (<=1e-8), " + fmt(elapsed) + " s (<=30)");
}

void criterion2() {
  double worst = 0.0;
  for (int n : {2, 3}) {
    std::vector<Index> axes(size_t(n), n == 2 ? 32 : 16);
    GridManifold m = GridManifold::flat(n, axes);
    OneFormField theta = OneFormField::zeros(m.shape());
    theta[0] = mode_field(m.shape(), false, {1, 0, 0}).data();

    OneFormField got = ahlfors_direct(m, theta);
    OneFormField want = theta;
    for (int i = 0; i < n; ++i) want[i] *= double(n - 1) / n;
    worst = std::max(worst, max_abs_diff(got, want));
  }
  report(2, "S*S(sin x dx) = ((n-1)/n) sin x dx", worst <= 1e-10,
         "max-norm error " + fmt(worst) + " (<=1e-10)");
}

void criterion3() {
  const auto t0 = clock_type::now();
  GridManifold m = GridManifold::flat(2, {64, 64});
  const GridShape s = m.shape();
  const std::vector<OneFormField> kern = kernel_basis(m);

  double worst_comp = 0.0, worst_pyth = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    NormalSampler rng(1000 + seed);
    OneFormField theta =
        project_orthogonal(m, random_one_form(s, default_band(s), rng), kern);
    ScalarField lam = random_scalar(s, default_band(s), rng);
    SymTensorField phi = tt_sample(s, rng(), rng());

    SymTensorField K = make_synthetic(m, theta, lam, phi);
    DecompositionResult r = decompose(m, K);
    CertificateReport cert = certify(r, m, K);

    worst_comp = std::max({worst_comp, rel_diff(r.theta, theta),
                           rel_diff(r.lambda, lam), rel_diff(r.phi_tt, phi)});
    worst_pyth = std::max(worst_pyth, cert.pythagoras_rel);
  }

  const double elapsed = seconds_since(t0);
  const bool pass = worst_comp <= 1e-6 && worst_pyth <= 1e-7 && elapsed <= 60.0;
  report(3, "synthetic round-trip, 10 seeds, flat T^2 N=64", pass,
         "component recovery " + fmt(worst_comp) + " (<=1e-6), Pythagoras " +
             fmt(worst_pyth) + " (<=1e-7), " + fmt(elapsed) + " s (<=60)");
}

void criterion4() {
  GridManifold m = GridManifold::flat(2, {64, 64});
  const GridShape s = m.shape();

  SymTensorField K = SymTensorField::zeros(s);
  K.at(0, 0) = 1.0 + mode_field(s, true, {1, 0, 0}).data();
  K.at(1, 1).setConstant(1.0);

  DecompositionResult r = decompose(m, K);
  CertificateReport cert = certify(r, m, K);

  OneFormField theta_want = OneFormField::zeros(s);
  theta_want[0] = mode_field(s, false, {1, 0, 0}).data();

  const double e_theta = max_abs_diff(r.theta, theta_want);
  const double e_lambda = (r.lambda.data() - 1.0).abs().maxCoeff();
  const double e_phi = max_abs(r.phi_tt);
  const double e_ratio =
      std::abs(cert.conformal_killing_ratio - 1.0 / std::sqrt(2.0));

  const bool pass =
      e_theta <= 1e-8 && e_lambda <= 1e-8 && e_phi <= 1e-8 && e_ratio <= 1e-6;
  report(4, "hand-worked K = diag(1+cos x, 1)", pass,
         "theta err " + fmt(e_theta) + ", lambda err " + fmt(e_lambda) +
             ", phi err " + fmt(e_phi) + " (<=1e-8); |S theta|/|theta| off by " +
             fmt(e_ratio) + " (<=1e-6)");
}

void criterion5(const std::string& cli, const fs::path& dir) {
  double worst_fit = 0.0;
  bool all_defined = true;
  for (int n : {2, 3}) {
    std::vector<Index> axes(size_t(n), n == 2 ? 32 : 16);
    GridManifold m = GridManifold::flat(n, axes);
    const GridShape s = m.shape();
    for (std::uint64_t trial = 0; trial < 5; ++trial) {
      NormalSampler rng(500 + 10 * std::uint64_t(n) + trial);
      ScalarField f = random_scalar(s, 3, rng);
      SymTensorField phi = tt_sample(s, 0.3 * rng(), 0.3 * rng());
      MomentumData d = gen_momentum_data(m, f, rng(), phi);
      Theorem3Report rep = theorem3_check(m, d.K);
      if (!rep.fitted_defined) {
        all_defined = false;
        continue;
      }
      worst_fit = std::max(
          worst_fit, std::abs(rep.fitted_coefficient - rep.derived_coefficient));
    }
  }

  // Worked instance f = cos x on T^2: lhs = rhs_derived = pi^2.
  GridManifold m2 = GridManifold::flat(2, {32, 32});
  ScalarField f2 = mode_field(m2.shape(), true, {1, 0, 0});
  MomentumData d2 = gen_momentum_data(m2, f2, 0.0,
                                      SymTensorField::zeros(m2.shape()));
  Theorem3Report w = theorem3_check(m2, d2.K);
  const double pi2 = kPi * kPi;
  const double e_lhs = rel_err(w.lhs, pi2);
  const double e_rhs = rel_err(w.rhs_derived, pi2);

  // The CLI report must print rhs_paper and the source text's -(n+1)/n.
  const fs::path kpath = dir / "t3_worked.gfld";
  const fs::path rpath = dir / "t3_worked.json";
  write_field(kpath.string(), d2.K);
  const std::string cmd = cli + " theorem3 --k " + kpath.string() +
                          " --no-meta --out " + rpath.string();
  const int rc = std::system(cmd.c_str());
  std::ifstream in(rpath);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string rep_text = buf.str();
  const bool report_ok = rc != -1 && WEXITSTATUS(rc) == 0 &&
                         rep_text.find("\"rhs_paper\"") != std::string::npos &&
                         rep_text.find("\"paper_lhs_coefficient\": -1.5") !=
                             std::string::npos;

  const bool pass = all_defined && worst_fit <= 1e-5 && e_lhs <= 1e-6 &&
                    e_rhs <= 1e-6 && report_ok;
  report(5, "integral-formula coefficient, 5 instances per n", pass,
         "|fitted - (n-1)/n| " + fmt(worst_fit) +
             " (<=1e-5); worked lhs rel err " + fmt(e_lhs) + ", rhs " +
             fmt(e_rhs) + " (<=1e-6); report " +
             (report_ok ? "prints rhs_paper and -1.5" : "MISSING paper values"));
}

void criterion6() {
  GridManifold m = GridManifold::flat(3, {16, 16, 16});
  const GridShape s = m.shape();

  ConstraintReport zero = evaluate_constraints(m, SymTensorField::zeros(s));
  SymTensorField g = SymTensorField::zeros(s);
  for (int i = 0; i < 3; ++i) g.at(i, i).setConstant(1.0);
  ConstraintReport kg = evaluate_constraints(m, g);
  const double ham_dev = (kg.hamiltonian.data() - 6.0).abs().maxCoeff();

  const bool pass = zero.hamiltonian_l2 <= 1e-13 && zero.momentum_l2 <= 1e-13 &&
                    ham_dev == 0.0 && kg.momentum_l2 <= 1e-13;
  report(6, "constraint exactness: K = 0 and K = g", pass,
         "vacuum norms " + fmt(zero.hamiltonian_l2) + "/" +
             fmt(zero.momentum_l2) + " (<=1e-13); K=g Hamiltonian dev from 6 " +
             fmt(ham_dev) + " (=0), momentum " + fmt(kg.momentum_l2));
}

void criterion7() {
  GridManifold m = GridManifold::flat(3, {32, 32, 32});
  SymTensorField phi = tt_sample(m.shape(), 0.4, 0.2);
  MomentumData d =
      gen_momentum_data(m, ScalarField::zeros(m.shape()), 3.0, phi);
  Corollary1Report rep = corollary1_check(m, d.K);

  const bool pass = rep.sd_H <= 1e-10 && rep.conformal_killing_rel <= 1e-7;
  report(7, "CMC forward direction on flat T^3 N=32", pass,
         "sd(H) " + fmt(rep.sd_H) + " (<=1e-10), |S theta|/|K0| " +
             fmt(rep.conformal_killing_rel) + " (<=1e-7)");
}

void criterion8() {
  GridManifold m = GridManifold::flat(2, {64, 64});
  const GridShape s = m.shape();

  OneFormField b = OneFormField::zeros(s);
  b[0] = 0.5 * mode_field(s, false, {1, 0, 0}).data();
  SolveResult r = solve_ahlfors(m, b);
  const bool solve_ok =
      r.converged && r.relative_residual <= 1e-10 && r.iterations <= 100;

  bool rejected = false;
  OneFormField dx = OneFormField::zeros(s);
  dx[0].setConstant(1.0);
  try {
    solve_ahlfors(m, dx);
  } catch (const Inconsistent&) {
    rejected = true;
  }

  report(8, "solver contract", solve_ok && rejected,
         "b = (1/2) sin x dx: " + std::to_string(r.iterations) +
             " iters (<=100), rel res " + fmt(r.relative_residual) +
             " (<=1e-10); kernel b = dx " +
             (rejected ? "rejected as Inconsistent" : "NOT rejected"));
}

void criterion9(const std::string& cli, const fs::path& dir) {
  // Bitwise round-trips, 20 random fields per rank over mixed 2D/3D grids.
  bool bitwise = true;
  for (int trial = 0; trial < 20 && bitwise; ++trial) {
    NormalSampler rng(9000 + std::uint64_t(trial));
    const GridShape s = (trial % 2 == 0) ? GridShape::make(2, {24, 16})
                                         : GridShape::make(3, {8, 10, 6});
    const fs::path p = dir / ("rt" + std::to_string(trial) + ".gfld");
    const int band = default_band(s);

    ScalarField sc = random_scalar(s, band, rng);
    write_field(p.string(), sc);
    auto sc2 = std::get<ScalarField>(read_field(p.string()));
    bitwise = bitwise && (sc.data() == sc2.data()).all();

    OneFormField of = random_one_form(s, band, rng);
    write_field(p.string(), of);
    auto of2 = std::get<OneFormField>(read_field(p.string()));
    for (int i = 0; i < s.n; ++i) bitwise = bitwise && (of[i] == of2[i]).all();

    TwoFormField tf = TwoFormField::zeros(s);
    for (auto& c : tf.comp) c = random_scalar(s, band, rng).data();
    write_field(p.string(), tf);
    auto tf2 = std::get<TwoFormField>(read_field(p.string()));
    for (size_t c = 0; c < tf.comp.size(); ++c)
      bitwise = bitwise && (tf.comp[c] == tf2.comp[c]).all();

    SymTensorField st = random_sym2(s, band, rng);
    write_field(p.string(), st);
    auto st2 = std::get<SymTensorField>(read_field(p.string()));
    for (size_t c = 0; c < st.comp.size(); ++c)
      bitwise = bitwise && (st.comp[c] == st2.comp[c]).all();
  }

  // Exit-code contract: 0 on clean verdicts, 2 on a failed verdict, 1 on an
  // operational error.
  GridManifold m = GridManifold::flat(3, {12, 12, 12});
  SymTensorField g = SymTensorField::zeros(m.shape());
  for (int i = 0; i < 3; ++i) g.at(i, i).setConstant(1.0);
  const fs::path gpath = dir / "metric_like_k.gfld";
  write_field(gpath.string(), g);

  const std::string quiet = " > /dev/null 2>&1";
  auto code = [&](const std::string& args) {
    const int rc = std::system((cli + " " + args + quiet).c_str());
    return rc == -1 ? -1 : WEXITSTATUS(rc);
  };
  const int c_pass = code("constraints --k " + gpath.string() + " --no-meta");
  const int c_fail =
      code("constraints --k " + gpath.string() + " --expect-zero --no-meta");
  const int c_oper = code("decompose --k " + (dir / "no_such.gfld").string());

  const bool codes_ok = c_pass == 0 && c_fail == 2 && c_oper == 1;
  report(9, "I/O bit-exactness and CLI exit codes", bitwise && codes_ok,
         std::string("round-trips ") + (bitwise ? "bitwise" : "NOT bitwise") +
             "; exit codes " + std::to_string(c_pass) + "/" +
             std::to_string(c_fail) + "/" + std::to_string(c_oper) +
             " (want 0/2/1)");
}

void criterion10() {
  const auto t0 = clock_type::now();
  GridManifold m = GridManifold::flat(3, {64, 64, 64});
  const GridShape s = m.shape();

  NormalSampler rng(99);
  OneFormField theta =
      project_orthogonal(m, random_one_form(s, 8, rng), kernel_basis(m));
  ScalarField lam = random_scalar(s, 8, rng);
  SymTensorField K = make_synthetic(m, theta, lam, tt_sample(s, 0.5, 0.25));

  DecompositionResult r = decompose(m, K);
  CertificateReport cert = certify(r, m, K);
  const double elapsed = seconds_since(t0);

  const bool pass = elapsed <= 120.0 && cert.all_pass();
  report(10, "full decompose on flat T^3 N=64", pass,
         fmt(elapsed) + " s (<=120), " + std::to_string(r.solver.iterations) +
             " iters, certificate " + (cert.all_pass() ? "clean" : "DIRTY"));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-cli-binary>\n";
    return 2;
  }
  const std::string cli = argv[1];

  const fs::path dir =
      fs::temp_directory_path() / ("ahlfors_accept_" + std::to_string(getpid()));
  fs::create_directories(dir);

  run(1, "operator identity suite", criterion1);
  run(2, "S*S(sin x dx) = ((n-1)/n) sin x dx", criterion2);
  run(3, "synthetic round-trip, 10 seeds, flat T^2 N=64", criterion3);
  run(4, "hand-worked K = diag(1+cos x, 1)", criterion4);
  run(5, "integral-formula coefficient, 5 instances per n",
      [&] { criterion5(cli, dir); });
  run(6, "constraint exactness: K = 0 and K = g", criterion6);
  run(7, "CMC forward direction on flat T^3 N=32", criterion7);
  run(8, "solver contract", criterion8);
  run(9, "I/O bit-exactness and CLI exit codes", [&] { criterion9(cli, dir); });
  run(10, "full decompose on flat T^3 N=64", criterion10);

  std::error_code ec;
  fs::remove_all(dir, ec);

  std::cout << (10 - g_failures) << "/10 criteria passed\n";
  return g_failures == 0 ? 0 : 1;
}
