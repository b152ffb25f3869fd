#pragma once

#include <array>
#include <functional>
#include <vector>

#include "exospin/types.hpp"

namespace exospin {

enum class CausalType { spacelike, timelike };

/// Sign multiplying delta(r) (j+ - j-)^mu n_mu: upper (+) for spacelike surfaces.
constexpr double junction_sign(CausalType c) { return c == CausalType::spacelike ? 1.0 : -1.0; }

/// Flat hypersurface r(x) = n_mu (x^mu - x0^mu) = 0 with n normalised so that
/// n.n = +1 (spacelike surface) or -1 (timelike surface).
class Hypersurface {
 public:
  /// General affine surface; `normal` is a lower-index covector, rescaled on entry.
  /// Throws PreconditionError for null or zero normals.
  Hypersurface(const Vec4& normal, const Vec4& base_point);

  /// {x^axis = offset}, r = x^axis - offset; tangent frame = the other coordinate axes.
  static Hypersurface coordinate_plane(int axis, double offset);

  const Vec4& normal() const { return n_; }
  const Vec4& base_point() const { return x0_; }
  CausalType causal_type() const { return causal_; }
  /// Three upper-index vectors spanning the surface: e_m^mu n_mu = 0.
  const std::array<Vec4, 3>& tangent_frame() const { return frame_; }

  double r(const Vec4& x) const;
  /// x0 + z^m e_m.
  Vec4 embed(const Vec3& z) const;
  /// Normal displacement direction n^mu (upper index) with unit |n.n|.
  Vec4 normal_vector() const { return flip_index(n_); }

 private:
  Vec4 n_;
  Vec4 x0_;
  CausalType causal_;
  std::array<Vec4, 3> frame_;
};

/// Upper-index current j^mu(x) defined on one side of the surface (and its closure).
using CurrentField = std::function<Vec4(const Vec4&)>;

struct GlueResult {
  std::vector<Vec3> z;
  /// +-(j+ - j-)^mu n_mu at r = 0: coefficient of delta(r) in d_mu j^mu.
  std::vector<double> singular_coefficient;
  /// d_mu j^mu evaluated a distance `bulk_offset` into each side.
  std::vector<double> bulk_plus_divergence;
  std::vector<double> bulk_minus_divergence;
};

/// Distributional divergence of Theta(r) j+ + Theta(-r) j- sampled at surface points z.
GlueResult glue_currents(const CurrentField& j_plus, const CurrentField& j_minus,
                         const Hypersurface& surf, const std::vector<Vec3>& z,
                         double bulk_offset = 0.05, double fd_step = 1e-4);

/// Tangential mismatch e_m^mu (j+ - j-)_mu at each surface point (index lowered with eta).
std::vector<Vec3> junction_residual(const CurrentField& j_plus, const CurrentField& j_minus,
                                    const Hypersurface& surf, const std::vector<Vec3>& z);

/// Theta(r) j+ + Theta(-r) j-; throws IndeterminateAtInterface at r = 0.
Vec4 heaviside_current(const CurrentField& j_plus, const CurrentField& j_minus,
                       const Hypersurface& surf, const Vec4& x);

/// Regular n^3 lattice of surface coordinates in [-half_extent, half_extent]^3.
std::vector<Vec3> surface_samples(int n, double half_extent);

}  // namespace exospin
