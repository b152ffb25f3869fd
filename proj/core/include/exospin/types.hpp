#pragma once

#include <array>
#include <complex>

#include <Eigen/Core>

namespace exospin {

using cplx = std::complex<double>;

using Vec3 = Eigen::Vector3d;
/// Real 4-vector indexed by mu = 0..3 (t, x, y, z). Whether it carries an
/// upper or lower index is stated at each use site.
using Vec4 = Eigen::Vector4d;
using CVec3 = Eigen::Vector3cd;
using CVec4 = Eigen::Vector4cd;
using Mat4 = Eigen::Matrix4d;
using Mat4c = Eigen::Matrix4cd;

/// Complex 4-component Dirac spinor (column).
using Spinor4 = Eigen::Vector4cd;
/// Row covector, e.g. the Dirac adjoint psi^dagger gamma^0.
using Adjoint4 = Eigen::Matrix<cplx, 1, 4>;

inline constexpr std::array<double, 4> kMetricDiagonal{1.0, -1.0, -1.0, -1.0};

/// Diagonal of the mostly-minus Minkowski metric.
constexpr double eta(int mu) { return kMetricDiagonal[static_cast<std::size_t>(mu)]; }

inline Mat4 minkowski() { return Vec4(1.0, -1.0, -1.0, -1.0).asDiagonal(); }

/// Flips between upper and lower components (the metric is its own inverse).
inline Vec4 flip_index(const Vec4& v) { return Vec4(v[0], -v[1], -v[2], -v[3]); }

/// eta_{mu nu} a^mu b^nu for two vectors with the same index position.
inline double minkowski_dot(const Vec4& a, const Vec4& b) {
  return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

/// Plain contraction a_mu b^mu (one index up, one down).
inline double contract(const Vec4& lower, const Vec4& upper) { return lower.dot(upper); }

inline Vec3 spatial(const Vec4& v) { return v.tail<3>(); }

inline bool all_finite(const Spinor4& s) { return s.allFinite(); }

}  // namespace exospin
