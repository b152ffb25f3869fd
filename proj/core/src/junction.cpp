#include "exospin/junction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "exospin/errors.hpp"

namespace exospin {

Hypersurface::Hypersurface(const Vec4& normal, const Vec4& base_point) : x0_(base_point) {
  const double scale2 = normal.squaredNorm();
  if (!(scale2 > 0.0) || !normal.allFinite()) {
    throw PreconditionError("hypersurface normal must be a nonzero finite covector");
  }
  const double nn = minkowski_dot(normal, normal);
  if (std::abs(nn) < 1e-12 * scale2) throw PreconditionError("null hypersurface normals are not supported");
  n_ = normal / std::sqrt(std::abs(nn));
  causal_ = nn > 0.0 ? CausalType::spacelike : CausalType::timelike;

  // Drop the coordinate direction most aligned with n, project the other three
  // onto the kernel of n_mu and orthonormalise (Euclidean inner product).
  std::array<int, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(),
                   [this](int a, int b) { return std::abs(n_[a]) < std::abs(n_[b]); });
  const double n2 = n_.squaredNorm();
  for (std::size_t m = 0; m < 3; ++m) {
    Vec4 e = Vec4::Unit(order[m]);
    e -= (n_.dot(e) / n2) * n_;
    for (std::size_t q = 0; q < m; ++q) e -= frame_[q].dot(e) * frame_[q];
    frame_[m] = e / e.norm();
  }
  // Keep the frame in increasing-axis order for coordinate planes.
  std::sort(order.begin(), order.begin() + 3);
  if (n_.cwiseAbs().maxCoeff() == n_.norm()) {
    for (std::size_t m = 0; m < 3; ++m) frame_[m] = Vec4::Unit(order[m]);
  }
}

Hypersurface Hypersurface::coordinate_plane(int axis, double offset) {
  if (axis < 0 || axis > 3) throw PreconditionError("hypersurface axis outside 0..3");
  Vec4 x0 = Vec4::Zero();
  x0[axis] = offset;
  return Hypersurface(Vec4::Unit(axis), x0);
}

double Hypersurface::r(const Vec4& x) const { return contract(n_, x - x0_); }

Vec4 Hypersurface::embed(const Vec3& z) const {
  return x0_ + z[0] * frame_[0] + z[1] * frame_[1] + z[2] * frame_[2];
}

namespace {

Vec4 checked(const CurrentField& j, const Vec4& x, const char* side) {
  const Vec4 v = j(x);
  if (!v.allFinite()) {
    throw PreconditionError(std::string("current on the ") + side +
                            " side is not evaluable at the surface");
  }
  return v;
}

double divergence_at(const CurrentField& j, const Vec4& x, double h) {
  double div = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    Vec4 xp = x, xm = x;
    xp[mu] += h;
    xm[mu] -= h;
    div += (j(xp)[mu] - j(xm)[mu]) / (2.0 * h);
  }
  return div;
}

}  // namespace

GlueResult glue_currents(const CurrentField& j_plus, const CurrentField& j_minus,
                         const Hypersurface& surf, const std::vector<Vec3>& z, double bulk_offset,
                         double fd_step) {
  if (!(bulk_offset > 0.0) || !(fd_step > 0.0) || fd_step >= bulk_offset) {
    throw PreconditionError("glue_currents needs 0 < fd_step < bulk_offset");
  }
  const double sgn = junction_sign(surf.causal_type());
  const Vec4& n = surf.normal();
  // Unit step along which r grows: r(x0 + t u) = t.
  const Vec4 u = minkowski_dot(n, n) * surf.normal_vector();
  GlueResult out;
  out.z = z;
  for (const Vec3& zz : z) {
    const Vec4 x = surf.embed(zz);
    const Vec4 jump = checked(j_plus, x, "plus") - checked(j_minus, x, "minus");
    out.singular_coefficient.push_back(sgn * contract(n, jump));
    out.bulk_plus_divergence.push_back(divergence_at(j_plus, x + bulk_offset * u, fd_step));
    out.bulk_minus_divergence.push_back(divergence_at(j_minus, x - bulk_offset * u, fd_step));
  }
  return out;
}

std::vector<Vec3> junction_residual(const CurrentField& j_plus, const CurrentField& j_minus,
                                    const Hypersurface& surf, const std::vector<Vec3>& z) {
  std::vector<Vec3> out;
  out.reserve(z.size());
  const auto& frame = surf.tangent_frame();
  for (const Vec3& zz : z) {
    const Vec4 x = surf.embed(zz);
    const Vec4 jump_lower = flip_index(checked(j_plus, x, "plus") - checked(j_minus, x, "minus"));
    out.emplace_back(contract(jump_lower, frame[0]), contract(jump_lower, frame[1]),
                     contract(jump_lower, frame[2]));
  }
  return out;
}

Vec4 heaviside_current(const CurrentField& j_plus, const CurrentField& j_minus,
                       const Hypersurface& surf, const Vec4& x) {
  const double r = surf.r(x);
  if (r == 0.0) throw IndeterminateAtInterface("Heaviside current is indeterminate at r = 0");
  return r > 0.0 ? j_plus(x) : j_minus(x);
}

std::vector<Vec3> surface_samples(int n, double half_extent) {
  if (n < 1) throw PreconditionError("surface_samples needs n >= 1");
  std::vector<Vec3> out;
  const auto coord = [&](int i) {
    return n == 1 ? 0.0 : -half_extent + 2.0 * half_extent * i / (n - 1);
  };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) out.emplace_back(coord(a), coord(b), coord(c));
  return out;
}

}  // namespace exospin
