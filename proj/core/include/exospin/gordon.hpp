#pragma once

#include <functional>
#include <vector>

#include "exospin/grid.hpp"
#include "exospin/types.hpp"

namespace exospin {

/// Convective and spin parts of the deformed current at one site:
///   phi^2 j1 + j2 = phi^2 psi-bar gamma psi-tilde.
struct GordonSplit {
  Vec4 j1 = Vec4::Zero();
  Vec4 j2 = Vec4::Zero();
  double phi_sq = 1.0;

  Vec4 recombined() const { return phi_sq * j1 + j2; }
};

/// Same split with the imaginary parts kept (psi-bar need not be the adjoint of psi-tilde).
struct GordonSplitComplex {
  CVec4 j1 = CVec4::Zero();
  CVec4 j2 = CVec4::Zero();
  CVec4 current = CVec4::Zero();  ///< phi^2 psi-bar gamma^mu psi-tilde, evaluated directly
  double phi_sq = 1.0;
};

struct GordonSample {
  Index4 site{};
  GordonSplit split;
  Vec4 current = Vec4::Zero();
};

using PhiField = std::function<double(const Vec4&)>;

/// j1^mu = (i/2m)(psi-bar d^mu psi-tilde - d^mu psi-bar psi-tilde),
/// j2^mu = (1/2m) d_alpha(phi^2 psi-bar sigma^{mu alpha} psi-tilde),
/// at every interior site. Both fields must live on the same grid.
std::vector<GordonSplitComplex> gordon_decompose_complex(const GridField<Adjoint4>& psi_bar,
                                                         const GridField<Spinor4>& psi_tilde,
                                                         const PhiField& phi, double m,
                                                         Stencil s = Stencil::second);

/// Real form; throws NonRealResult when an imaginary part exceeds
/// imag_tol * max(1, |j|), i.e. psi_bar is not the adjoint of psi_tilde.
std::vector<GordonSample> gordon_decompose(const GridField<Adjoint4>& psi_bar,
                                           const GridField<Spinor4>& psi_tilde,
                                           const PhiField& phi, double m,
                                           Stencil s = Stencil::second, double imag_tol = 1e-12);

std::vector<GordonSample> gordon_decompose(const GridField<Adjoint4>& psi_bar,
                                           const GridField<Spinor4>& psi_tilde, double phi,
                                           double m, Stencil s = Stencil::second,
                                           double imag_tol = 1e-12);

/// Dirac adjoint taken sitewise.
GridField<Adjoint4> adjoint_field(const GridField<Spinor4>& psi);

/// max over samples of |phi^2 j1 + j2 - j| / max over samples of |j|.
double gordon_identity_gap(const std::vector<GordonSample>& samples);

/// mu = -phi_bar^2 / (2m).
double magnetic_moment(double phi_bar, double m);

/// |e| from the inverse fine-structure constant: e^2/4pi = 1/inv_alpha.
double charge_from_inverse_alpha(double inv_alpha);

/// mu / mu_N = -phi_bar^2 m_p / (|e| m), with m = beta m_p.
double moment_over_nuclear_magneton(double phi_bar, double e_abs, double beta);

struct MomentFitInput {
  double mu_ratio = -1.913;
  double e_abs = charge_from_inverse_alpha(137.0);
  /// m / m_p; used only on the free-beta path.
  double beta = 1.00138;
  /// m_n / m_p.
  double mass_ratio_nm = 1.00138;
};

enum class BetaMode {
  self_consistent,  ///< beta = m_n/m_p
  free,             ///< beta taken from the input
};

struct MomentFit {
  double phi_bar_sq_over_beta;
  double phi_bar;
  double beta;
  /// moment_over_nuclear_magneton(phi_bar, e_abs, beta).
  double mu_over_muN_roundtrip;
};

/// phi-bar^2/beta = |mu_ratio| e_abs; phi-bar = sqrt(phi-bar^2/beta * beta).
/// Throws PreconditionError for e_abs <= 0 or beta <= 0 and
/// DeformationOutOfRange when phi-bar leaves (0, 1].
MomentFit neutron_fit(const MomentFitInput& in, BetaMode mode = BetaMode::self_consistent);

/// phi along a polyline from phi0 e^{k_mu dx^mu} accumulated segment by segment.
/// Throws DeformationOutOfRange (with the vertex index) once phi leaves (0, 1].
std::vector<double> phi_path_reconstruct(const Vec4& k, const std::vector<Vec4>& curve, double phi0);

}  // namespace exospin
