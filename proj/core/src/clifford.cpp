#include "exospin/clifford.hpp"

#include <cmath>
#include <string>

#include "exospin/errors.hpp"

namespace exospin {

namespace {

using Mat2c = Eigen::Matrix2cd;

std::array<Mat2c, 3> pauli() {
  const cplx i{0.0, 1.0};
  Mat2c s1, s2, s3;
  s1 << 0.0, 1.0, 1.0, 0.0;
  s2 << 0.0, -i, i, 0.0;
  s3 << 1.0, 0.0, 0.0, -1.0;
  return {s1, s2, s3};
}

void check_index(int mu, const char* name) {
  if (mu < 0 || mu > 3) {
    throw PreconditionError(std::string("spacetime index ") + name + " = " + std::to_string(mu) +
                            " outside 0..3");
  }
}

}  // namespace

GammaRepresentation parse_gamma_representation(std::string_view name) {
  if (name == "dirac") return GammaRepresentation::dirac;
  throw PreconditionError("unsupported gamma representation '" + std::string(name) + "'");
}

GammaSet build_gammas(GammaRepresentation rep) {
  if (rep != GammaRepresentation::dirac) {
    throw PreconditionError("unsupported gamma representation");
  }
  GammaSet g;
  g.representation = rep;
  g.gamma[0].setZero();
  g.gamma[0].diagonal() << 1.0, 1.0, -1.0, -1.0;
  const auto s = pauli();
  for (int k = 0; k < 3; ++k) {
    Mat4c m = Mat4c::Zero();
    m.topRightCorner<2, 2>() = s[static_cast<std::size_t>(k)];
    m.bottomLeftCorner<2, 2>() = -s[static_cast<std::size_t>(k)];
    g.gamma[static_cast<std::size_t>(k + 1)] = m;
  }
  return g;
}

const GammaSet& dirac_gammas() {
  static const GammaSet g = build_gammas(GammaRepresentation::dirac);
  return g;
}

double clifford_defect(const GammaSet& g) {
  double worst = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      Mat4c anti = g[mu] * g[nu] + g[nu] * g[mu];
      if (mu == nu) anti -= 2.0 * eta(mu) * Mat4c::Identity();
      worst = std::max(worst, anti.cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

Mat4c sigma_munu(const GammaSet& g, int mu, int nu) {
  check_index(mu, "mu");
  check_index(nu, "nu");
  const cplx half_i{0.0, 0.5};
  return half_i * (g[mu] * g[nu] - g[nu] * g[mu]);
}

Mat4c slash(const GammaSet& g, const Vec4& p_lower) {
  Mat4c out = Mat4c::Zero();
  for (int mu = 0; mu < 4; ++mu) out += p_lower[mu] * g[mu];
  return out;
}

Adjoint4 dirac_adjoint(const Spinor4& psi, const GammaSet& g) { return psi.adjoint() * g[0]; }

CVec4 bilinear_current_complex(const Adjoint4& psi_bar, const Spinor4& psi, const GammaSet& g) {
  CVec4 j;
  for (int mu = 0; mu < 4; ++mu) j[mu] = (psi_bar * g[mu] * psi)(0, 0);
  return j;
}

Vec4 bilinear_current(const Adjoint4& psi_bar, const Spinor4& psi, const GammaSet& g,
                      double imag_tol) {
  const CVec4 j = bilinear_current_complex(psi_bar, psi, g);
  const double scale = std::max(1.0, j.cwiseAbs().maxCoeff());
  for (int mu = 0; mu < 4; ++mu) {
    if (std::abs(j[mu].imag()) > imag_tol * scale) {
      throw NonRealResult("current component " + std::to_string(mu) +
                          " has imaginary part " + std::to_string(j[mu].imag()) +
                          "; psi_bar is not the adjoint of psi");
    }
  }
  return j.real();
}

cplx scalar_bilinear(const Adjoint4& psi_bar, const Spinor4& psi) { return (psi_bar * psi)(0, 0); }

}  // namespace exospin
