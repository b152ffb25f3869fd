#pragma once

#include <array>
#include <functional>
#include <vector>

#include "exospin/clifford.hpp"
#include "exospin/deformation.hpp"
#include "exospin/grid.hpp"
#include "exospin/types.hpp"

namespace exospin {

enum class Branch { positive = 1, negative = -1 };

constexpr double sign(Branch b) { return b == Branch::positive ? 1.0 : -1.0; }

/// Plane-wave mode of the deformed Dirac equation
///   i gamma^mu (d_mu + k_mu) psi-tilde = m psi-tilde
/// with constant k. The exact solution is
///   psi-tilde(x) = e^{-k.x} u(p) e^{-i p.x},   (gamma^mu p_mu - m) u = 0,
/// since (d_mu + k_mu) acting on it leaves -i p_mu psi-tilde.
struct PlaneWaveMode {
  Vec3 p = Vec3::Zero();  ///< spatial momentum p^i
  double m = 1.0;
  Vec4 k = Vec4::Zero();  ///< deformation covector k_mu
  Branch branch = Branch::positive;
  Eigen::Vector2cd polarization{1.0, 0.0};

  double omega() const { return std::sqrt(p.squaredNorm() + m * m); }
  double energy() const { return sign(branch) * omega(); }
  /// p_mu = (E, -p).
  Vec4 momentum_lower() const;
  /// Unit-norm u solving (gamma^mu p_mu - m) u = 0 on this branch.
  Spinor4 spinor(const GammaSet& g = dirac_gammas()) const;
  /// u e^{-i p.x}: the undeformed plane wave.
  Spinor4 standard_value(const Vec4& x) const;
  /// e^{-k.x} u e^{-i p.x}.
  Spinor4 exotic_value(const Vec4& x) const;
};

/// Throws PreconditionError for m <= 0 or |k_mu| > k_max.
void validate_mode(const PlaneWaveMode& mode, double k_max);

struct WeightedMode {
  cplx amplitude{1.0, 0.0};
  PlaneWaveMode mode;
};
using ModeSum = std::vector<WeightedMode>;

/// Sum of exotic_value over the modes, sampled on the grid.
GridField<Spinor4> sample_exotic(const ModeSum& modes, const Grid4& grid);
/// Same modes as standard waves mapped through a general profile
/// (psi-tilde = phi^{-1} e^{-i theta/2} psi); exact for any smooth profile.
GridField<Spinor4> sample_exotic_via_map(const ModeSum& modes, const DeformationProfile& p,
                                         const Grid4& grid);

/// max over interior sites of || i gamma^mu (d_mu + B_mu) psi - m psi ||_2, where
/// B_mu = connection_B(profile, x) reduces to k_mu on Sigma2.
double dirac_residual(const GridField<Spinor4>& field, const DeformationProfile& p, double m,
                      Stencil s = Stencil::second);

struct SquaredResidual {
  /// max || (box + m^2 + 2 k^mu d_mu + gamma^mu gamma^nu d_mu k_nu + k^2) psi ||.
  double full_residual;
  /// max over sites of || (gamma^mu gamma^nu d_mu k_nu + k^2) psi || / || psi ||:
  /// the part dropped when the squared equation is truncated to second order.
  double truncation_gap;
};

/// Applies the squared operator to the mode's exact solution on `grid`.
/// `k_of_x` defaults to the mode's constant k; d_mu k_nu comes from central
/// differences of it on the grid.
SquaredResidual squared_operator_residual(const PlaneWaveMode& mode, const Grid4& grid,
                                          const std::function<Vec4(const Vec4&)>& k_of_x = {});

/// Both roots of E^2 + 2 i k^0 E - p.(p + 2 i k) - m^2 = 0, ordered {positive, negative}
/// by the sign of their real parts. `k` holds (k^0, k_vec) as they appear in the relation.
std::array<cplx, 2> dispersion_exact(const Vec3& p, const Vec4& k, double m);

/// |E^2 + 2 i k^0 E - p.(p + 2 i k) - m^2|.
double dispersion_polynomial(cplx E, const Vec3& p, const Vec4& k, double m);

/// E = +-sqrt(p^2 + m^2) + i(-k^0 +- p.k / sqrt(p^2 + m^2)), ordered like dispersion_exact.
std::array<cplx, 2> dispersion_approx(const Vec3& p, const Vec4& k, double m);

/// max over branches of |E_approx - E_exact|.
double dispersion_approx_error(const Vec3& p, const Vec4& k, double m);

/// v_j = +-p_j/w -+ (i/w) [ (p.k) p_j / w^2 - k_j ], w = sqrt(p^2 + m^2); {positive, negative}.
std::array<CVec3, 2> group_velocity(const Vec3& p, const Vec4& k, double m);

/// sum_j v_j v_j^*: squared modulus of the complex group velocity.
double group_speed_squared(const CVec3& v);

/// exp(-+ (p.k / w) t) on the given branch. Requires k^0 = 0.
double damping_factor(const Vec3& p, const Vec4& k, double m, double t, Branch branch);

/// j^mu(x) = phi(x)^power  psi-tilde-bar gamma^mu psi-tilde (power 2 is the conserved current).
GridField<Vec4> current_field(const GridField<Spinor4>& psi_tilde, const DeformationProfile& p,
                              int phi_power = 2);

/// max over interior sites of |d_mu j^mu| with central differences.
double divergence_max(const GridField<Vec4>& j, Stencil s = Stencil::second);

/// Discrete d_mu (phi^2 psi-tilde-bar gamma^mu psi-tilde) for the exact family of `modes`.
double current_divergence_check(const ModeSum& modes, const DeformationProfile& p,
                                const Grid4& grid, int phi_power = 2,
                                Stencil s = Stencil::second);

}  // namespace exospin
