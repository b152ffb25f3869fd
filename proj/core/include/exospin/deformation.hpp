#pragma once

#include <functional>
#include <optional>
#include <string>

#include "exospin/clifford.hpp"
#include "exospin/types.hpp"

namespace exospin {

/// Sigma1: multiply connected, theta varying, phi = 1.
/// Sigma2: trivial topology, theta constant, d ln(phi) = k constant.
/// Sigma3: phi and theta both constant (the residual value phi-bar).
enum class Region { sigma1 = 1, sigma2 = 2, sigma3 = 3 };

std::string to_string(Region r);

/// rho-bar = phi e^{i theta} times the identity; only the scalar is stored.
struct DeformationMapValue {
  cplx rho_bar;
  double modulus() const { return std::abs(rho_bar); }
};

/// Canonical layout: three slabs stacked along one coordinate axis,
///   s <= sigma1_end : Sigma1,  sigma1_end < s <= sigma2_end : Sigma2,  s > sigma2_end : Sigma3,
/// with C1 blends of width blend_width on the Sigma2 side of both interfaces.
struct SlabParameters {
  int axis = 1;
  double sigma1_end = -1.0;
  double sigma2_end = 1.0;
  double blend_width = 0.1;
  /// phi where the Sigma2 core begins (after the first blend).
  double phi0 = 0.9;
  /// k component along `axis`; the other components of k are zero.
  double k_axis = -0.001;
  /// Slope of theta deep inside Sigma1 (radians per unit length).
  double theta_slope = 0.5;
};

/// Smooth deformation field phi(x) in (0, 1], phase theta(x), region map
/// and the constant Sigma2 gradient k_mu = d_mu ln(phi) (lower index).
/// Immutable after construction.
class DeformationProfile {
 public:
  using ScalarField = std::function<double(const Vec4&)>;
  using RegionField = std::function<Region(const Vec4&)>;

  DeformationProfile(ScalarField phi, ScalarField theta, RegionField region, Vec4 k,
                     double k_max);

  /// Slab geometry; validates phi in (0, 1] along the axis and |k_mu| <= k_max.
  static DeformationProfile slab(const SlabParameters& p, double k_max);
  /// phi = phi0 e^{k.x}, theta constant, every point labelled Sigma2.
  static DeformationProfile exponential(double phi0, const Vec4& k, double theta = 0.0,
                                        double k_max = 0.01);
  /// phi, theta constant, every point labelled Sigma3.
  static DeformationProfile constant(double phi, double theta = 0.0);

  double phi(const Vec4& x) const { return phi_(x); }
  double theta(const Vec4& x) const { return theta_(x); }
  Region region(const Vec4& x) const { return region_(x); }
  DeformationMapValue rho_bar(const Vec4& x) const;

  const Vec4& k() const { return k_; }
  double k_max() const { return k_max_; }

  /// Central-difference step (domain units).
  double fd_step() const { return fd_step_; }
  /// Largest tolerated jump between one-sided slopes before a point is declared non-smooth.
  double smooth_tol() const { return smooth_tol_; }
  DeformationProfile with_fd_step(double h) const;
  DeformationProfile with_smooth_tol(double tol) const;

  /// Present only for slab profiles.
  const SlabParameters* slab_parameters() const { return slab_ ? &*slab_ : nullptr; }
  /// Constant phi on Sigma3 for slab profiles.
  double sigma3_phi() const;

 private:
  ScalarField phi_;
  ScalarField theta_;
  RegionField region_;
  Vec4 k_;
  double k_max_;
  double fd_step_ = 1e-5;
  double smooth_tol_ = 1e-6;
  std::optional<SlabParameters> slab_;
};

/// phi^{-1} d_mu phi at x (lower index) by central differences.
/// Throws NonSmoothPoint where the one-sided slopes disagree.
Vec4 k_field(const DeformationProfile& p, const Vec4& x);

/// d_mu theta at x (lower index), same smoothness handling as k_field.
Vec4 theta_gradient(const DeformationProfile& p, const Vec4& x);

/// B_mu = phi^{-1} d_mu phi + (i/2) d_mu theta; each component multiplies the identity.
CVec4 connection_B(const DeformationProfile& p, const Vec4& x);

/// psi = phi e^{i theta} psi-tilde.
Spinor4 map_exotic_to_standard(const Spinor4& psi_tilde, const Vec4& x,
                               const DeformationProfile& p);

/// Exotic spinor solving i gamma^mu (d_mu + B_mu) psi-tilde = m psi-tilde,
/// built from a standard solution: psi-tilde = phi^{-1} e^{-i theta/2} psi.
Spinor4 exotic_from_standard(const Spinor4& psi_standard, const Vec4& x,
                             const DeformationProfile& p);

Region region_classify(const DeformationProfile& p, const Vec4& x);

/// max_mu || [rho-bar, gamma^mu] ||_max. Zero for any scalar deformation.
double commutation_check(const DeformationMapValue& rho, const GammaSet& g);
/// Same check for an arbitrary matrix-valued deformation (negative controls).
double commutation_check(const Mat4c& rho, const GammaSet& g);

}  // namespace exospin
