#include "exospin/gordon.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "exospin/clifford.hpp"
#include "exospin/errors.hpp"

namespace exospin {

namespace {

void check_same_grid(const Grid4& a, const Grid4& b) {
  if (a.dims != b.dims || a.spacing != b.spacing || a.origin != b.origin) {
    throw PreconditionError("gordon_decompose: psi_bar and psi_tilde live on different grids");
  }
}

std::array<Mat4c, 16> sigma_table(const GammaSet& g) {
  std::array<Mat4c, 16> t;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) t[static_cast<std::size_t>(4 * mu + nu)] = sigma_munu(g, mu, nu);
  return t;
}

double max_abs_imag(const CVec4& v) { return v.imag().cwiseAbs().maxCoeff(); }

}  // namespace

GridField<Adjoint4> adjoint_field(const GridField<Spinor4>& psi) {
  const GammaSet& g = dirac_gammas();
  GridField<Adjoint4> out(psi.grid);
  for (std::size_t n = 0; n < psi.values.size(); ++n) out.values[n] = dirac_adjoint(psi.values[n], g);
  return out;
}

std::vector<GordonSplitComplex> gordon_decompose_complex(const GridField<Adjoint4>& psi_bar,
                                                         const GridField<Spinor4>& psi_tilde,
                                                         const PhiField& phi, double m,
                                                         Stencil s) {
  if (!(m > 0.0)) throw PreconditionError("mass must be positive");
  if (!phi) throw PreconditionError("gordon_decompose: phi is empty");
  check_same_grid(psi_bar.grid, psi_tilde.grid);
  const Grid4& grid = psi_tilde.grid;
  const int margin = stencil_margin(s);
  grid.require_interior(margin, "gordon_decompose");

  const GammaSet& g = dirac_gammas();
  const auto sig = sigma_table(g);
  const cplx i{0.0, 1.0};

  // S^{mu alpha} = phi^2 psi-bar sigma^{mu alpha} psi-tilde at every site.
  GridField<Mat4c> spin(grid);
  GridField<double> phi_sq(grid);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const double f = phi(grid.point(grid.unravel(n)));
    phi_sq.values[n] = f * f;
    Mat4c& S = spin.values[n];
    for (int mu = 0; mu < 4; ++mu)
      for (int a = 0; a < 4; ++a)
        S(mu, a) = phi_sq.values[n] *
                   (psi_bar.values[n] * sig[static_cast<std::size_t>(4 * mu + a)] * psi_tilde.values[n])(0, 0);
  }

  std::vector<GordonSplitComplex> out;
  for (const Index4& site : grid.interior(margin)) {
    const Adjoint4& pb = psi_bar[site];
    const Spinor4& pt = psi_tilde[site];
    GordonSplitComplex r;
    r.phi_sq = phi_sq[site];
    for (int a = 0; a < 4; ++a) {
      const Spinor4 d_pt = central_derivative(psi_tilde, site, a, s);
      const Adjoint4 d_pb = central_derivative(psi_bar, site, a, s);
      // d^a = eta^{a a} d_a.
      r.j1[a] = eta(a) * (i / (2.0 * m)) * ((pb * d_pt)(0, 0) - (d_pb * pt)(0, 0));
      const Mat4c dS = central_derivative(spin, site, a, s);
      for (int mu = 0; mu < 4; ++mu) r.j2[mu] += dS(mu, a) / (2.0 * m);
      r.current[a] = r.phi_sq * (pb * g[a] * pt)(0, 0);
    }
    out.push_back(r);
  }
  return out;
}

std::vector<GordonSample> gordon_decompose(const GridField<Adjoint4>& psi_bar,
                                           const GridField<Spinor4>& psi_tilde,
                                           const PhiField& phi, double m, Stencil s,
                                           double imag_tol) {
  const auto cx = gordon_decompose_complex(psi_bar, psi_tilde, phi, m, s);
  const auto sites = psi_tilde.grid.interior(stencil_margin(s));
  std::vector<GordonSample> out;
  out.reserve(cx.size());
  for (std::size_t n = 0; n < cx.size(); ++n) {
    const auto& c = cx[n];
    const double scale = std::max(1.0, c.current.cwiseAbs().maxCoeff());
    const double worst = std::max({max_abs_imag(c.j1), max_abs_imag(c.j2), max_abs_imag(c.current)});
    if (worst > imag_tol * scale) {
      std::ostringstream os;
      os << "Gordon split has imaginary part " << worst << "; psi_bar is not the adjoint of psi_tilde";
      throw NonRealResult(os.str());
    }
    out.push_back({sites[n], {c.j1.real(), c.j2.real(), c.phi_sq}, c.current.real()});
  }
  return out;
}

std::vector<GordonSample> gordon_decompose(const GridField<Adjoint4>& psi_bar,
                                           const GridField<Spinor4>& psi_tilde, double phi,
                                           double m, Stencil s, double imag_tol) {
  if (!(phi > 0.0 && phi <= 1.0)) throw PreconditionError("phi out of (0,1]");
  return gordon_decompose(psi_bar, psi_tilde, [phi](const Vec4&) { return phi; }, m, s, imag_tol);
}

double gordon_identity_gap(const std::vector<GordonSample>& samples) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& smp : samples) {
    num = std::max(num, (smp.split.recombined() - smp.current).norm());
    den = std::max(den, smp.current.norm());
  }
  if (den == 0.0) return num;
  return num / den;
}

double magnetic_moment(double phi_bar, double m) {
  if (!(m > 0.0)) throw PreconditionError("mass must be positive");
  if (!(phi_bar > 0.0 && phi_bar <= 1.0)) throw PreconditionError("phi_bar out of (0,1]");
  return -phi_bar * phi_bar / (2.0 * m);
}

double charge_from_inverse_alpha(double inv_alpha) {
  if (!(inv_alpha > 0.0)) throw PreconditionError("inverse fine-structure constant must be positive");
  return std::sqrt(4.0 * std::numbers::pi / inv_alpha);
}

double moment_over_nuclear_magneton(double phi_bar, double e_abs, double beta) {
  if (!(e_abs > 0.0) || !(beta > 0.0)) throw PreconditionError("e_abs and beta must be positive");
  // mu_N = |e| / (2 m_p) with m_p = 1.
  return magnetic_moment(phi_bar, beta) / (0.5 * e_abs);
}

MomentFit neutron_fit(const MomentFitInput& in, BetaMode mode) {
  if (!(in.e_abs > 0.0)) throw PreconditionError("e_abs must be positive");
  if (!(in.beta > 0.0)) throw PreconditionError("beta must be positive");
  if (!(in.mass_ratio_nm > 0.0)) throw PreconditionError("m_n/m_p must be positive");
  MomentFit fit{};
  fit.beta = mode == BetaMode::self_consistent ? in.mass_ratio_nm : in.beta;
  fit.phi_bar_sq_over_beta = std::abs(in.mu_ratio) * in.e_abs;
  const double phi_sq = fit.phi_bar_sq_over_beta * fit.beta;
  fit.phi_bar = std::sqrt(phi_sq);
  if (!(fit.phi_bar > 0.0 && fit.phi_bar <= 1.0)) {
    std::ostringstream os;
    os << "deformation out of range: fitted phi_bar = " << fit.phi_bar << " is not in (0,1]";
    throw DeformationOutOfRange(os.str(), 0);
  }
  fit.mu_over_muN_roundtrip = moment_over_nuclear_magneton(fit.phi_bar, in.e_abs, fit.beta);
  return fit;
}

std::vector<double> phi_path_reconstruct(const Vec4& k, const std::vector<Vec4>& curve,
                                         double phi0) {
  if (!(phi0 > 0.0 && phi0 <= 1.0)) throw PreconditionError("phi0 out of (0,1]");
  if (curve.empty()) throw PreconditionError("phi_path_reconstruct: empty curve");
  std::vector<double> out{phi0};
  out.reserve(curve.size());
  double log_phi = std::log(phi0);
  for (std::size_t n = 1; n < curve.size(); ++n) {
    log_phi += contract(k, curve[n] - curve[n - 1]);
    const double value = std::exp(log_phi);
    // Small slack for roundoff on closed loops that come back to phi0 = 1.
    if (!(value > 0.0) || log_phi > 1e-14) {
      std::ostringstream os;
      os << "curve leaves the valid deformation regime at vertex " << n << " (phi = " << value << ")";
      throw DeformationOutOfRange(os.str(), n);
    }
    out.push_back(std::min(value, 1.0));
  }
  return out;
}

}  // namespace exospin
