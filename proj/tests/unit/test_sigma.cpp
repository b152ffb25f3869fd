#include <doctest.h>

#include <cmath>
#include <random>
#include <cstring>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "exospin/errors.hpp"
#include "exospin/sigma.hpp"
#include "random_spinor.hpp"

using namespace exospin;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index n = 0;
  for (double x : v) out[n++] = x;
  return out;
}

SigmaField tx_field(int components, double h, int n) {
  const Grid4 g = Grid4::centred(Vec4::Zero(), h, n, {true, true, false, false});
  SigmaField f(components, g);
  for (std::size_t q = 0; q < g.size(); ++q) {
    const Index4 i = g.unravel(q);
    const Vec4 x = g.point(i);
    for (int c = 0; c < components; ++c)
      f.at(i)[c] = 0.1 * std::sin((c + 1) * x[1] + 0.7 * x[0] + c) + 0.05 * x[0] * x[1];
  }
  return f;
}

}  // namespace

TEST_CASE("deformed basis shift") {
  CHECK(deformed_basis_shift(Vec4(1, 0, 0, 0), Vec4::Zero(), Vec4(0.1, 0, 0, 0)) == Vec4(1, 0, 0, 0));
  const Vec4 s = deformed_basis_shift(Vec4(0, 1, 0, 0), Vec4(1, 2, 0, 0), Vec4(0, 0.01, 0, 0));
  CHECK(s[0] == doctest::Approx(0.02));
  CHECK(s[1] == doctest::Approx(1.04));
  CHECK(deformed_basis_shift(Vec4(0, 1, 0, 0), Vec4(1, 2, 3, 4), Vec4::Zero()) == Vec4(0, 1, 0, 0));
}

TEST_CASE("deformed metric is the first-order pullback of eta") {
  std::mt19937_64 rng(6);
  for (int n = 0; n < 50; ++n) {
    const Vec4 x = test::random_point(rng, 2.0);
    const Vec4 k = 1e-3 * test::random_point(rng, 1.0);
    const Vec4 dx = test::random_point(rng, 1.0);
    const Mat4 m = deformed_metric(x, k);
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
    // Quadratic form: eta(dx, dx) + 4 eta(x, dx) (k.dx).
    const double expected = minkowski_dot(dx, dx) + 4.0 * minkowski_dot(x, dx) * k.dot(dx);
    CHECK(dx.dot(m * dx) == doctest::Approx(expected).epsilon(1e-13));
    // The exact pullback differs only at second order in k.
    const Vec4 sh = deformed_basis_shift(dx, x, k);
    CHECK(std::abs(minkowski_dot(sh, sh) - dx.dot(m * dx)) <= 10.0 * k.squaredNorm() * 16.0 * (1.0 + x.squaredNorm()) * dx.squaredNorm() * dx.squaredNorm());
  }
  Mat4 eta_m = Mat4::Zero();
  for (int mu = 0; mu < 4; ++mu) eta_m(mu, mu) = eta(mu);
  CHECK((deformed_metric(Vec4(1, 2, 3, 4), Vec4::Zero()) - eta_m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("target metric") {
  const auto g = target_metric(vec({0.6}));
  CHECK(g(0, 0) == doctest::Approx(1.5625));
  CHECK((target_metric(vec({0.3, -0.2})) * target_metric_inverse(vec({0.3, -0.2})) - Eigen::MatrixXd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() <= 1e-14);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int n = 0; n < 50; ++n) {
    const Eigen::VectorXd phi = vec({u(rng), u(rng), u(rng)});
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(target_metric(phi));
    CHECK(es.eigenvalues().minCoeff() >= 1.0 - 1e-14);
  }
  CHECK(reconstruct_last(vec({0.6})) == doctest::Approx(0.8));
  CHECK(chart_check(vec({0.3, 0.4})) == doctest::Approx(0.25));
  try {
    chart_check(vec({0.8, 0.6}));
    FAIL("expected ChartViolation");
  } catch (const ChartViolation& e) {
    CHECK(e.step() == -1);
  }
}

TEST_CASE("christoffel symbols against finite differences of the metric") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-0.45, 0.45);
  const double h = 1e-5;
  for (int n = 0; n < 20; ++n) {
    const Eigen::VectorXd phi = vec({u(rng), u(rng), u(rng)});
    const int N = 3;
    std::vector<Eigen::MatrixXd> dg(N);
    for (int q = 0; q < N; ++q) {
      Eigen::VectorXd a = phi, b = phi;
      a[q] += h;
      b[q] -= h;
      dg[q] = (target_metric(a) - target_metric(b)) / (2 * h);
    }
    const Eigen::MatrixXd ginv = target_metric(phi).inverse();
    const auto lib = christoffel(phi);
    const auto closed = christoffel_closed_form(phi);
    const auto dlib = target_metric_derivative(phi);
    for (int q = 0; q < N; ++q) CHECK((dlib[q] - dg[q]).cwiseAbs().maxCoeff() <= 1e-8);
    for (int p = 0; p < N; ++p) {
      CHECK((lib[p] - lib[p].transpose()).cwiseAbs().maxCoeff() <= 1e-14);
      CHECK((lib[p] - closed[p]).cwiseAbs().maxCoeff() <= 1e-12);
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
          double oracle = 0.0;
          for (int q = 0; q < N; ++q) oracle += 0.5 * ginv(p, q) * (dg[i](q, j) + dg[j](q, i) - dg[q](i, j));
          CHECK(lib[p](i, j) == doctest::Approx(oracle).epsilon(1e-7));
        }
    }
  }
}

TEST_CASE("constant field solves the equations of motion") {
  const Grid4 g = Grid4::centred(Vec4::Zero(), 0.1, 5);
  SigmaField f(2, g);
  for (std::size_t q = 0; q < g.size(); ++q) f.at(g.unravel(q)) << 0.3, -0.4;
  CHECK(sigma_eom_residual(f, Vec4(0.001, 0.002, 0.0, 0.0)) == 0.0);
  CHECK(sigma_interior(f, Stencil::second).size() == 81);
  CHECK(sigma_interior(f, Stencil::fourth).size() == 1);
}

TEST_CASE("k = 0 integrand matches a direct 1+1 evaluation") {
  const double h = 0.05;
  const SigmaField f = tx_field(2, h, 9);
  const auto lib = sigma_eom_integrand(f, Vec4::Zero());
  const auto sites = sigma_interior(f, Stencil::second);
  REQUIRE(lib.size() == sites.size());
  for (std::size_t n = 0; n < sites.size(); ++n) {
    const Index4 i = sites[n];
    auto shifted = [&](int mu, int d) {
      Index4 j = i;
      j[static_cast<std::size_t>(mu)] += d;
      return Eigen::VectorXd(f.at(j));
    };
    const Eigen::VectorXd c = f.at(i);
    const Eigen::VectorXd dt = (shifted(0, 1) - shifted(0, -1)) / (2 * h);
    const Eigen::VectorXd dx = (shifted(1, 1) - shifted(1, -1)) / (2 * h);
    const Eigen::VectorXd tt = (shifted(0, 1) - 2 * c + shifted(0, -1)) / (h * h);
    const Eigen::VectorXd xx = (shifted(1, 1) - 2 * c + shifted(1, -1)) / (h * h);
    // Gamma^p_ij = Phi^p g_ij.
    const double gap = 1.0 - c.squaredNorm();
    auto g_form = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.dot(b) + c.dot(a) * c.dot(b) / gap; };
    const Eigen::VectorXd oracle = tt - xx + c * (g_form(dt, dt) - g_form(dx, dx));
    CHECK((lib[n] - oracle).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("operator form equals the integrand") {
  const SigmaField f = tx_field(3, 0.05, 7);
  for (const Vec4& k : {Vec4::Zero().eval(), Vec4(0.004, -0.002, 0.0, 0.0)}) {
    const auto a = sigma_eom_integrand(f, k);
    const auto b = covariant_operator_apply(f, k);
    REQUIRE(a.size() == b.size());
    for (std::size_t n = 0; n < a.size(); ++n) CHECK((a[n] - b[n]).cwiseAbs().maxCoeff() <= 1e-13);
  }
  // The k terms change the integrand.
  const auto a0 = sigma_eom_integrand(f, Vec4::Zero());
  const auto a1 = sigma_eom_integrand(f, Vec4(0.004, -0.002, 0.0, 0.0));
  CHECK((a0[0] - a1[0]).norm() > 1e-5);
}

TEST_CASE("presets") {
  for (SigmaPreset p : {SigmaPreset::standing_wave, SigmaPreset::travelling_wave, SigmaPreset::gaussian_pulse,
                        SigmaPreset::static_field})
    CHECK(parse_sigma_preset(to_string(p)) == p);
  CHECK_THROWS_AS(parse_sigma_preset("vortex"), PreconditionError);
  SigmaLattice lat;
  lat.sites = 64;
  const auto init = sigma_preset(SigmaPreset::standing_wave, 3, lat, 0.05, 2);
  CHECK(init.phi.rows() == 3);
  CHECK(init.phi.cols() == 64);
  CHECK(init.phi.cwiseAbs().maxCoeff() <= 0.05 + 1e-15);
  CHECK(lat.x(0) == doctest::Approx(-lat.length / 2));
}

TEST_CASE("evolution: static field, energy and step limits") {
  SigmaLattice lat;
  lat.sites = 64;
  SigmaEvolveOptions opt;
  opt.dt = 0.5 * lat.h();
  opt.steps = 200;

  const auto still = sigma_preset(SigmaPreset::static_field, 2, lat, 0.1);
  const SigmaRun s = sigma_evolve(still, opt);
  CHECK((s.final_phi - still.phi).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(s.energy_drift() <= 1e-14);

  const auto wave = sigma_preset(SigmaPreset::standing_wave, 2, lat, 0.05);
  const SigmaRun w = sigma_evolve(wave, opt);
  CHECK(w.diagnostics.size() == 201);
  CHECK(w.energy_drift() <= 1e-5);
  for (const auto& d : w.diagnostics) CHECK(d.residual <= 1e-10);
  CHECK(w.history.grid.dims[0] == 201);

  opt.keep_history = false;
  CHECK(sigma_evolve(wave, opt).history.data.empty());

  opt.dt = 0.51 * lat.h();
  CHECK_THROWS_AS(sigma_evolve(wave, opt), PreconditionError);
}

TEST_CASE("deformation breaks energy conservation at first order") {
  SigmaLattice lat;
  lat.sites = 64;
  SigmaEvolveOptions opt;
  opt.dt = 0.5 * lat.h();
  opt.steps = 200;
  opt.keep_history = false;
  const auto wave = sigma_preset(SigmaPreset::travelling_wave, 2, lat, 0.05);
  const double d0 = sigma_evolve(wave, opt).energy_drift();
  opt.k = Vec4(0.002, 0.0, 0.0, 0.0);
  const double d1 = sigma_evolve(wave, opt).energy_drift();
  opt.k = Vec4(0.004, 0.0, 0.0, 0.0);
  const double d2 = sigma_evolve(wave, opt).energy_drift();
  CHECK(d1 > 10.0 * d0);
  CHECK(d2 / d1 == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("leaving the chart is reported with the step") {
  SigmaLattice lat;
  lat.sites = 32;
  SigmaEvolveOptions opt;
  opt.dt = 0.5 * lat.h();
  opt.steps = 2000;
  auto init = sigma_preset(SigmaPreset::static_field, 1, lat, 0.9);
  init.phi_dot.setConstant(0.3);
  try {
    sigma_evolve(init, opt);
    FAIL("expected ChartViolation");
  } catch (const ChartViolation& e) {
    CHECK(e.step() > 0);
  }
  CHECK_THROWS_AS(sigma_evolve(sigma_preset(SigmaPreset::standing_wave, 1, lat, 1.2), opt), ChartViolation);
}

TEST_CASE("binary dump round trip") {
  Eigen::MatrixXd phi(2, 3);
  phi << 0.1, 0.2, 0.3, -0.4, -0.5, -0.6;
  std::stringstream ss;
  write_sigma_dump(ss, phi);
  const std::string bytes = ss.str();
  CHECK(bytes.size() == 16 + 6 * 8);
  CHECK(static_cast<unsigned char>(bytes[0]) == 3);
  double first = 0.0, second = 0.0;
  std::memcpy(&first, bytes.data() + 16, 8);
  std::memcpy(&second, bytes.data() + 24, 8);
  CHECK(first == 0.1);
  CHECK(second == -0.4);
  ss.seekg(0);
  CHECK(read_sigma_dump(ss) == phi);
  std::stringstream truncated(bytes.substr(0, 30));
  CHECK_THROWS_AS(read_sigma_dump(truncated), PreconditionError);
}
