#include "exospin/dirac.hpp"

#include <cmath>
#include <sstream>

#include "exospin/errors.hpp"

namespace exospin {

namespace {

Eigen::Matrix2cd sigma_dot(const Vec3& p) {
  const cplx i{0.0, 1.0};
  Eigen::Matrix2cd s;
  s << p[2], cplx(p[0], 0.0) - i * p[1], cplx(p[0], 0.0) + i * p[1], -p[2];
  return s;
}

void check_mass(double m) {
  if (!(m > 0.0)) throw PreconditionError("mass must be positive");
}

}  // namespace

Vec4 PlaneWaveMode::momentum_lower() const { return Vec4(energy(), -p[0], -p[1], -p[2]); }

Spinor4 PlaneWaveMode::spinor(const GammaSet&) const {
  check_mass(m);
  const double E = energy();
  const Eigen::Matrix2cd sp = sigma_dot(p);
  Spinor4 u;
  if (branch == Branch::positive) {
    u.head<2>() = polarization;
    u.tail<2>() = sp * polarization / (E + m);
  } else {
    u.head<2>() = sp * polarization / (E - m);
    u.tail<2>() = polarization;
  }
  return u / u.norm();
}

Spinor4 PlaneWaveMode::standard_value(const Vec4& x) const {
  const double phase = contract(momentum_lower(), x);
  return spinor() * std::polar(1.0, -phase);
}

Spinor4 PlaneWaveMode::exotic_value(const Vec4& x) const {
  return std::exp(-contract(k, x)) * standard_value(x);
}

void validate_mode(const PlaneWaveMode& mode, double k_max) {
  check_mass(mode.m);
  for (int mu = 0; mu < 4; ++mu) {
    if (std::abs(mode.k[mu]) > k_max) {
      std::ostringstream os;
      os << "mode has |k_" << mu << "| = " << std::abs(mode.k[mu]) << " > k_max = " << k_max;
      throw PreconditionError(os.str());
    }
  }
}

GridField<Spinor4> sample_exotic(const ModeSum& modes, const Grid4& grid) {
  return sample<Spinor4>(grid, [&](const Vec4& x) {
    Spinor4 s = Spinor4::Zero();
    for (const auto& w : modes) s += w.amplitude * w.mode.exotic_value(x);
    return s;
  });
}

GridField<Spinor4> sample_exotic_via_map(const ModeSum& modes, const DeformationProfile& p,
                                         const Grid4& grid) {
  return sample<Spinor4>(grid, [&](const Vec4& x) {
    Spinor4 s = Spinor4::Zero();
    for (const auto& w : modes) s += w.amplitude * w.mode.standard_value(x);
    return exotic_from_standard(s, x, p);
  });
}

double dirac_residual(const GridField<Spinor4>& field, const DeformationProfile& p, double m,
                      Stencil s) {
  check_mass(m);
  const int margin = stencil_margin(s);
  field.grid.require_interior(margin, "dirac_residual");
  const GammaSet& g = dirac_gammas();
  const cplx i{0.0, 1.0};
  double worst = 0.0;
  for (const Index4& site : field.grid.interior(margin)) {
    const Vec4 x = field.grid.point(site);
    const CVec4 b = connection_B(p, x);
    const Spinor4& psi = field[site];
    Spinor4 r = -m * psi;
    for (int mu = 0; mu < 4; ++mu) {
      const Spinor4 d = central_derivative(field, site, mu, s);
      r += i * (g[mu] * (d + b[mu] * psi));
    }
    if (!r.allFinite()) throw PreconditionError("dirac_residual: non-finite field value");
    worst = std::max(worst, r.norm());
  }
  return worst;
}

SquaredResidual squared_operator_residual(const PlaneWaveMode& mode, const Grid4& grid,
                                          const std::function<Vec4(const Vec4&)>& k_of_x) {
  check_mass(mode.m);
  grid.require_interior(1, "squared_operator_residual");
  const std::function<Vec4(const Vec4&)> kfun =
      k_of_x ? k_of_x : std::function<Vec4(const Vec4&)>([&mode](const Vec4&) { return mode.k; });
  const GridField<Spinor4> psi = sample<Spinor4>(grid, [&](const Vec4& x) { return mode.exotic_value(x); });
  const GridField<Vec4> kf = sample<Vec4>(grid, kfun);
  const GammaSet& g = dirac_gammas();
  const double m2 = mode.m * mode.m;
  SquaredResidual out{0.0, 0.0};
  for (const Index4& site : grid.interior(1)) {
    const Spinor4& v = psi[site];
    const Vec4& k_lower = kf[site];
    const Vec4 k_upper = flip_index(k_lower);
    const double k2 = contract(k_lower, k_upper);

    Spinor4 kept = m2 * v;
    for (int mu = 0; mu < 4; ++mu) {
      kept += eta(mu) * central_second_derivative(psi, site, mu, mu);
      kept += 2.0 * k_upper[mu] * central_derivative(psi, site, mu);
    }
    // gamma^mu gamma^nu d_mu k_nu
    Mat4c dk = Mat4c::Zero();
    for (int mu = 0; mu < 4; ++mu) {
      const Vec4 dmu_k = central_derivative(kf, site, mu);
      for (int nu = 0; nu < 4; ++nu) dk += dmu_k[nu] * (g[mu] * g[nu]);
    }
    const Spinor4 dropped = dk * v + k2 * v;
    out.full_residual = std::max(out.full_residual, (kept + dropped).norm());
    out.truncation_gap = std::max(out.truncation_gap, dropped.norm() / v.norm());
  }
  return out;
}

std::array<cplx, 2> dispersion_exact(const Vec3& p, const Vec4& k, double m) {
  check_mass(m);
  const cplx i{0.0, 1.0};
  const Vec3 kv = k.tail<3>();
  const cplx b = 2.0 * i * k[0];
  const cplx c = -p.squaredNorm() - 2.0 * i * p.dot(kv) - m * m;
  const cplx root = std::sqrt(b * b - 4.0 * c);
  // Pick the sign that avoids cancellation, then recover the partner from Vieta.
  const cplx q = (std::real(std::conj(b) * root) >= 0.0) ? -0.5 * (b + root) : -0.5 * (b - root);
  const cplx r1 = q;
  const cplx r2 = c / q;
  if (r1.real() >= r2.real()) return {r1, r2};
  return {r2, r1};
}

double dispersion_polynomial(cplx E, const Vec3& p, const Vec4& k, double m) {
  const cplx i{0.0, 1.0};
  const Vec3 kv = k.tail<3>();
  return std::abs(E * E + 2.0 * i * k[0] * E - (p.squaredNorm() + 2.0 * i * p.dot(kv)) - m * m);
}

std::array<cplx, 2> dispersion_approx(const Vec3& p, const Vec4& k, double m) {
  check_mass(m);
  const double w = std::sqrt(p.squaredNorm() + m * m);
  const double pk = p.dot(k.tail<3>());
  return {cplx(w, -k[0] + pk / w), cplx(-w, -k[0] - pk / w)};
}

double dispersion_approx_error(const Vec3& p, const Vec4& k, double m) {
  const auto ex = dispersion_exact(p, k, m);
  const auto ap = dispersion_approx(p, k, m);
  return std::max(std::abs(ex[0] - ap[0]), std::abs(ex[1] - ap[1]));
}

std::array<CVec3, 2> group_velocity(const Vec3& p, const Vec4& k, double m) {
  check_mass(m);
  const double w2 = p.squaredNorm() + m * m;
  const double w = std::sqrt(w2);
  const Vec3 kv = k.tail<3>();
  const double pk = p.dot(kv);
  const cplx i{0.0, 1.0};
  std::array<CVec3, 2> v;
  for (int b = 0; b < 2; ++b) {
    const double s = b == 0 ? 1.0 : -1.0;
    for (int j = 0; j < 3; ++j) {
      v[static_cast<std::size_t>(b)][j] = s * p[j] / w - s * i / w * (pk * p[j] / w2 - kv[j]);
    }
  }
  return v;
}

double group_speed_squared(const CVec3& v) { return v.squaredNorm(); }

double damping_factor(const Vec3& p, const Vec4& k, double m, double t, Branch branch) {
  check_mass(m);
  if (k[0] != 0.0) {
    throw PreconditionError("damping_factor requires k^0 = 0 (got k^0 = " + std::to_string(k[0]) +
                            ")");
  }
  const double w = std::sqrt(p.squaredNorm() + m * m);
  return std::exp(-sign(branch) * p.dot(k.tail<3>()) / w * t);
}

GridField<Vec4> current_field(const GridField<Spinor4>& psi_tilde, const DeformationProfile& p,
                              int phi_power) {
  const GammaSet& g = dirac_gammas();
  GridField<Vec4> j(psi_tilde.grid);
  for (std::size_t n = 0; n < j.values.size(); ++n) {
    const Vec4 x = j.grid.point(j.grid.unravel(n));
    const Spinor4& psi = psi_tilde.values[n];
    const double weight = std::pow(p.phi(x), phi_power);
    j.values[n] = weight * bilinear_current_complex(dirac_adjoint(psi, g), psi, g).real();
  }
  return j;
}

double divergence_max(const GridField<Vec4>& j, Stencil s) {
  const int margin = stencil_margin(s);
  j.grid.require_interior(margin, "divergence");
  double worst = 0.0;
  for (const Index4& site : j.grid.interior(margin)) {
    double div = 0.0;
    for (int mu = 0; mu < 4; ++mu) div += central_derivative(j, site, mu, s)[mu];
    worst = std::max(worst, std::abs(div));
  }
  return worst;
}

double current_divergence_check(const ModeSum& modes, const DeformationProfile& p,
                                const Grid4& grid, int phi_power, Stencil s) {
  return divergence_max(current_field(sample_exotic(modes, grid), p, phi_power), s);
}

}  // namespace exospin
