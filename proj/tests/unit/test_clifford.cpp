#include <doctest.h>

#include <random>

#include "exospin/clifford.hpp"
#include "exospin/errors.hpp"
#include "random_spinor.hpp"

using namespace exospin;

namespace {

// Textbook Dirac matrices written out entry by entry.
Mat4c literal_gamma(int mu) {
  const cplx i{0.0, 1.0};
  Mat4c g = Mat4c::Zero();
  switch (mu) {
    case 0:
      g << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1;
      break;
    case 1:
      g << 0, 0, 0, 1, 0, 0, 1, 0, 0, -1, 0, 0, -1, 0, 0, 0;
      break;
    case 2:
      g << 0, 0, 0, -i, 0, 0, i, 0, 0, i, 0, 0, -i, 0, 0, 0;
      break;
    default:
      g << 0, 0, 1, 0, 0, 0, 0, -1, -1, 0, 0, 0, 0, 1, 0, 0;
  }
  return g;
}

}  // namespace

TEST_CASE("dirac representation matches the literal matrices") {
  const GammaSet& g = dirac_gammas();
  for (int mu = 0; mu < 4; ++mu) CHECK((g[mu] - literal_gamma(mu)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("clifford relation, hermiticity and traces") {
  const GammaSet g = build_gammas(GammaRepresentation::dirac);
  CHECK(clifford_defect(g) <= 1e-14);
  CHECK((g[0] - g[0].adjoint()).cwiseAbs().maxCoeff() == 0.0);
  for (int k = 1; k < 4; ++k) CHECK((g[k] + g[k].adjoint()).cwiseAbs().maxCoeff() == 0.0);
  for (int mu = 0; mu < 4; ++mu) {
    CHECK(std::abs(g[mu].trace()) == 0.0);
    for (int nu = 0; nu < 4; ++nu) {
      const cplx tr = (g[mu] * g[nu]).trace();
      CHECK(std::abs(tr - (mu == nu ? 4.0 * eta(mu) : 0.0)) <= 1e-14);
    }
  }
  CHECK((g[0] * g[0] - Mat4c::Identity()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((g[1] * g[1] + Mat4c::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a broken gamma set is detected") {
  GammaSet g = build_gammas();
  g.gamma[2] *= 1.001;
  CHECK(clifford_defect(g) > 1e-4);
}

TEST_CASE("representation names") {
  CHECK(parse_gamma_representation("dirac") == GammaRepresentation::dirac);
  CHECK_THROWS_AS(parse_gamma_representation("weyl"), PreconditionError);
}

TEST_CASE("sigma_munu identities") {
  const GammaSet& g = dirac_gammas();
  const cplx i{0.0, 1.0};
  for (int mu = 0; mu < 4; ++mu) {
    CHECK(sigma_munu(g, mu, mu).cwiseAbs().maxCoeff() == 0.0);
    for (int nu = 0; nu < 4; ++nu) {
      CHECK((sigma_munu(g, mu, nu) + sigma_munu(g, nu, mu)).cwiseAbs().maxCoeff() <= 1e-15);
      const Mat4c id = g[mu] * g[nu] - (mu == nu ? eta(mu) : 0.0) * Mat4c::Identity() + i * sigma_munu(g, mu, nu);
      CHECK(id.cwiseAbs().maxCoeff() <= 1e-14);
    }
  }
  CHECK_THROWS_AS(sigma_munu(g, 0, 4), PreconditionError);
  CHECK_THROWS_AS(sigma_munu(g, -1, 0), PreconditionError);
}

TEST_CASE("slash squares to p^2") {
  const GammaSet& g = dirac_gammas();
  const Vec4 p(1.3, 0.2, -0.5, 0.7);
  const Mat4c s = slash(g, p);
  CHECK((s * s - minkowski_dot(p, p) * Mat4c::Identity()).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("dirac adjoint and scalar bilinear") {
  const GammaSet& g = dirac_gammas();
  const Spinor4 up(1.0, 0.0, 0.0, 0.0);
  CHECK((dirac_adjoint(up, g) - Adjoint4(1.0, 0.0, 0.0, 0.0)).cwiseAbs().maxCoeff() == 0.0);
  const Spinor4 low(0.0, 0.0, 1.0, 0.0);
  CHECK(scalar_bilinear(dirac_adjoint(low, g), low) == cplx(-1.0, 0.0));

  std::mt19937_64 rng(11);
  for (int n = 0; n < 100; ++n) {
    const Spinor4 psi = test::random_spinor(rng);
    const cplx s = scalar_bilinear(dirac_adjoint(psi, g), psi);
    CHECK(std::abs(s.imag()) <= 1e-14);
    const Spinor4 rotated = std::polar(1.0, 0.37 * n) * psi;
    CHECK(std::abs(scalar_bilinear(dirac_adjoint(rotated, g), rotated) - s) <= 1e-13);
  }
}

TEST_CASE("vector current") {
  const GammaSet& g = dirac_gammas();
  const Spinor4 up(1.0, 0.0, 0.0, 0.0);
  const Vec4 j = bilinear_current(dirac_adjoint(up, g), up, g);
  CHECK(j[0] == 1.0);
  CHECK(j.tail<3>().norm() == 0.0);

  std::mt19937_64 rng(12);
  for (int n = 0; n < 100; ++n) {
    const Spinor4 psi = test::random_spinor(rng);
    const Vec4 jv = bilinear_current(dirac_adjoint(psi, g), psi, g);
    CHECK(jv[0] >= 0.0);
    CHECK(std::abs(jv[0] - psi.squaredNorm()) <= 1e-13);
    // The current of a Dirac spinor is causal.
    CHECK(minkowski_dot(jv, jv) >= -1e-12);
    const cplx c(0.4, -1.1);
    const Spinor4 scaled = c * psi;
    const Vec4 js = bilinear_current(dirac_adjoint(scaled, g), scaled, g);
    CHECK((js - std::norm(c) * jv).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("mismatched psi_bar is reported as non-real") {
  const GammaSet& g = dirac_gammas();
  const Spinor4 a(1.0, cplx(0.0, 1.0), 0.5, -0.2);
  const Spinor4 b(0.3, 1.0, cplx(0.0, -0.7), 0.1);
  CHECK_THROWS_AS(bilinear_current(dirac_adjoint(a, g), b, g), NonRealResult);
  const CVec4 jc = bilinear_current_complex(dirac_adjoint(a, g), b, g);
  CHECK(jc.imag().cwiseAbs().maxCoeff() > 1e-3);
}
