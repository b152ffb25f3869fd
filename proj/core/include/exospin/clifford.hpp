#pragma once

#include <array>
#include <string_view>

#include "exospin/types.hpp"

namespace exospin {

enum class GammaRepresentation { dirac };

/// Parses a representation name ("dirac"); throws PreconditionError otherwise.
GammaRepresentation parse_gamma_representation(std::string_view name);

/// The four Dirac matrices in mostly-minus signature.
///
/// Invariants of a built set: {gamma^mu, gamma^nu} = 2 eta^{mu nu} to 1e-14,
/// gamma^0 Hermitian, gamma^i anti-Hermitian, all traceless.
struct GammaSet {
  std::array<Mat4c, 4> gamma;
  GammaRepresentation representation = GammaRepresentation::dirac;

  const Mat4c& operator[](int mu) const { return gamma.at(static_cast<std::size_t>(mu)); }
  static constexpr double metric(int mu) { return eta(mu); }
};

GammaSet build_gammas(GammaRepresentation rep = GammaRepresentation::dirac);

/// Process-wide Dirac-representation set, built once.
const GammaSet& dirac_gammas();

/// Largest entrywise deviation from the Clifford relation over all (mu, nu).
double clifford_defect(const GammaSet& g);

/// sigma^{mu nu} = (i/2) [gamma^mu, gamma^nu]. Throws on indices outside 0..3.
Mat4c sigma_munu(const GammaSet& g, int mu, int nu);

/// gamma^mu p_mu for a lower-index 4-momentum.
Mat4c slash(const GammaSet& g, const Vec4& p_lower);

/// psi-bar = psi^dagger gamma^0.
Adjoint4 dirac_adjoint(const Spinor4& psi, const GammaSet& g);

/// j^mu = psi_bar gamma^mu psi, upper index.
///
/// Throws NonRealResult when an imaginary part exceeds `imag_tol`, which
/// signals that psi_bar is not the adjoint of psi.
Vec4 bilinear_current(const Adjoint4& psi_bar, const Spinor4& psi, const GammaSet& g,
                      double imag_tol = 1e-12);

/// Complex form of psi_bar gamma^mu psi with no reality check.
CVec4 bilinear_current_complex(const Adjoint4& psi_bar, const Spinor4& psi, const GammaSet& g);

/// psi_bar psi.
cplx scalar_bilinear(const Adjoint4& psi_bar, const Spinor4& psi);

}  // namespace exospin
