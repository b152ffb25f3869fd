#include "exospin/sigma.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>

#include "exospin/errors.hpp"

namespace exospin {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Vec4 deformed_basis_shift(const Vec4& dx, const Vec4& x, const Vec4& k) {
  return dx + 2.0 * x * contract(k, dx);
}

Mat4 deformed_metric(const Vec4& x, const Vec4& k) {
  // eta_{mu a} x^a is x with its index lowered.
  const Vec4 xl = flip_index(x);
  Mat4 m = minkowski();
  m += 2.0 * xl * k.transpose();
  m += 2.0 * k * xl.transpose();
  return m;
}

double chart_check(const VectorXd& phi, double eps) {
  const double r2 = phi.squaredNorm();
  if (!(r2 < 1.0 - eps)) {
    std::ostringstream os;
    os << "chart violation: |Phi|^2 = " << r2 << " >= 1 - " << eps;
    throw ChartViolation(os.str(), -1);
  }
  return r2;
}

double reconstruct_last(const VectorXd& phi, double eps) {
  return std::sqrt(1.0 - chart_check(phi, eps));
}

MatrixXd target_metric(const VectorXd& phi, double eps) {
  const double r2 = chart_check(phi, eps);
  const auto n = phi.size();
  return MatrixXd::Identity(n, n) + phi * phi.transpose() / (1.0 - r2);
}

MatrixXd target_metric_inverse(const VectorXd& phi, double eps) {
  chart_check(phi, eps);
  const auto n = phi.size();
  return MatrixXd::Identity(n, n) - phi * phi.transpose();
}

std::vector<MatrixXd> target_metric_derivative(const VectorXd& phi, double eps) {
  const double d = 1.0 - chart_check(phi, eps);
  const auto n = phi.size();
  std::vector<MatrixXd> dg(static_cast<std::size_t>(n), MatrixXd::Zero(n, n));
  for (Eigen::Index q = 0; q < n; ++q) {
    MatrixXd& m = dg[static_cast<std::size_t>(q)];
    m = 2.0 * phi[q] / (d * d) * (phi * phi.transpose());
    m.row(q) += phi.transpose() / d;
    m.col(q) += phi / d;
  }
  return dg;
}

std::vector<MatrixXd> christoffel(const VectorXd& phi, double eps) {
  const MatrixXd ginv = target_metric_inverse(phi, eps);
  const auto dg = target_metric_derivative(phi, eps);
  const auto n = phi.size();
  const auto un = static_cast<std::size_t>(n);
  // lower[q](i, j) = 1/2 (d_i g_qj + d_j g_qi - d_q g_ij).
  std::vector<MatrixXd> lower(un, MatrixXd::Zero(n, n));
  for (Eigen::Index q = 0; q < n; ++q)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        lower[static_cast<std::size_t>(q)](i, j) =
            0.5 * (dg[static_cast<std::size_t>(i)](q, j) + dg[static_cast<std::size_t>(j)](q, i) -
                   dg[static_cast<std::size_t>(q)](i, j));
      }
  std::vector<MatrixXd> gamma(un, MatrixXd::Zero(n, n));
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = 0; q < n; ++q) gamma[static_cast<std::size_t>(p)] += ginv(p, q) * lower[static_cast<std::size_t>(q)];
  return gamma;
}

std::vector<MatrixXd> christoffel_closed_form(const VectorXd& phi, double eps) {
  const MatrixXd g = target_metric(phi, eps);
  std::vector<MatrixXd> gamma;
  gamma.reserve(static_cast<std::size_t>(phi.size()));
  for (Eigen::Index p = 0; p < phi.size(); ++p) gamma.push_back(phi[p] * g);
  return gamma;
}

// ---------------------------------------------------------------------------
// Lattice fields

SigmaField::SigmaField(int n, const Grid4& g) : components(n), grid(g) {
  if (n < 1) throw PreconditionError("sigma field needs at least one component");
  data.assign(g.size() * static_cast<std::size_t>(n), 0.0);
}

Eigen::Map<VectorXd> SigmaField::at(const Index4& i) {
  return {data.data() + grid.linear(i) * static_cast<std::size_t>(components), components};
}

Eigen::Map<const VectorXd> SigmaField::at(const Index4& i) const {
  return {data.data() + grid.linear(i) * static_cast<std::size_t>(components), components};
}

namespace {

Index4 offset(const SigmaField& f, Index4 i, int mu, int by) {
  const auto m = static_cast<std::size_t>(mu);
  i[m] += by;
  if (f.periodic[m]) i[m] = ((i[m] % f.grid.dims[m]) + f.grid.dims[m]) % f.grid.dims[m];
  return i;
}

constexpr std::array<int, 4> kOffs{-2, -1, 1, 2};
constexpr std::array<double, 4> kWts4{1.0, -8.0, 8.0, -1.0};

}  // namespace

VectorXd sigma_derivative(const SigmaField& f, const Index4& i, int mu, Stencil s) {
  if (f.grid.frozen(mu)) return VectorXd::Zero(f.components);
  const double h = f.grid.spacing[mu];
  if (s == Stencil::second) return (f.at(offset(f, i, mu, 1)) - f.at(offset(f, i, mu, -1))) / (2.0 * h);
  return (-f.at(offset(f, i, mu, 2)) + 8.0 * f.at(offset(f, i, mu, 1)) -
          8.0 * f.at(offset(f, i, mu, -1)) + f.at(offset(f, i, mu, -2))) /
         (12.0 * h);
}

VectorXd sigma_second_derivative(const SigmaField& f, const Index4& i, int mu, int nu, Stencil s) {
  if (f.grid.frozen(mu) || f.grid.frozen(nu)) return VectorXd::Zero(f.components);
  if (mu == nu) {
    const double h2 = f.grid.spacing[mu] * f.grid.spacing[mu];
    if (s == Stencil::second) {
      return (f.at(offset(f, i, mu, 1)) - 2.0 * f.at(i) + f.at(offset(f, i, mu, -1))) / h2;
    }
    return (-f.at(offset(f, i, mu, 2)) + 16.0 * f.at(offset(f, i, mu, 1)) - 30.0 * f.at(i) +
            16.0 * f.at(offset(f, i, mu, -1)) - f.at(offset(f, i, mu, -2))) /
           (12.0 * h2);
  }
  const double hh = f.grid.spacing[mu] * f.grid.spacing[nu];
  if (s == Stencil::second) {
    return (f.at(offset(f, offset(f, i, mu, 1), nu, 1)) - f.at(offset(f, offset(f, i, mu, 1), nu, -1)) -
            f.at(offset(f, offset(f, i, mu, -1), nu, 1)) + f.at(offset(f, offset(f, i, mu, -1), nu, -1))) /
           (4.0 * hh);
  }
  VectorXd acc = VectorXd::Zero(f.components);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      acc += (kWts4[a] * kWts4[b]) * f.at(offset(f, offset(f, i, mu, kOffs[a]), nu, kOffs[b]));
  return acc / (144.0 * hh);
}

std::vector<Index4> sigma_interior(const SigmaField& f, Stencil s) {
  const int margin = stencil_margin(s);
  std::array<int, 4> lo{}, hi{};
  for (std::size_t mu = 0; mu < 4; ++mu) {
    const int d = f.grid.dims[mu];
    if (d == 1 || f.periodic[mu]) {
      lo[mu] = 0;
      hi[mu] = d;
    } else {
      lo[mu] = margin;
      hi[mu] = d - margin;
    }
    if (f.periodic[mu] && d != 1 && d < 2 * margin + 1) {
      throw PreconditionError("periodic axis too short for the stencil");
    }
    if (hi[mu] <= lo[mu]) throw PreconditionError("sigma field grid has no interior sites");
  }
  std::vector<Index4> out;
  for (int a = lo[0]; a < hi[0]; ++a)
    for (int b = lo[1]; b < hi[1]; ++b)
      for (int c = lo[2]; c < hi[2]; ++c)
        for (int d = lo[3]; d < hi[3]; ++d) out.push_back({a, b, c, d});
  return out;
}

namespace {

void check_field_chart(const SigmaField& f, double eps) {
  const auto n = static_cast<std::size_t>(f.components);
  for (std::size_t s = 0; s < f.grid.size(); ++s) {
    const Eigen::Map<const VectorXd> v(f.data.data() + s * n, f.components);
    chart_check(v, eps);
  }
}

struct SiteDerivatives {
  std::array<VectorXd, 4> up;                 // d^mu Phi
  std::array<std::array<VectorXd, 4>, 4> up2;  // d^mu d^nu Phi
};

SiteDerivatives site_derivatives(const SigmaField& f, const Index4& i, Stencil s) {
  SiteDerivatives d;
  for (int mu = 0; mu < 4; ++mu) {
    d.up[static_cast<std::size_t>(mu)] = eta(mu) * sigma_derivative(f, i, mu, s);
    for (int nu = 0; nu < 4; ++nu) {
      d.up2[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)] =
          (eta(mu) * eta(nu)) * sigma_second_derivative(f, i, mu, nu, s);
    }
  }
  return d;
}

}  // namespace

std::vector<VectorXd> sigma_eom_integrand(const SigmaField& f, const Vec4& k, Stencil s,
                                          double eps) {
  check_field_chart(f, eps);
  std::vector<VectorXd> out;
  const auto sites = sigma_interior(f, s);
  out.reserve(sites.size());
  for (const Index4& site : sites) {
    const VectorXd phi = f.at(site);
    const auto gamma = christoffel_closed_form(phi, eps);
    const Mat4 tm = deformed_metric(f.grid.point(site), k);
    const SiteDerivatives d = site_derivatives(f, site, s);
    VectorXd r = VectorXd::Zero(f.components);
    for (std::size_t mu = 0; mu < 4; ++mu) {
      for (std::size_t nu = 0; nu < 4; ++nu) {
        const double t = tm(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu));
        if (t == 0.0) continue;
        r += t * d.up2[mu][nu];
        for (Eigen::Index p = 0; p < f.components; ++p) {
          r[p] += t * d.up[mu].dot(gamma[static_cast<std::size_t>(p)] * d.up[nu]);
        }
      }
    }
    for (int a = 0; a < 4; ++a) r += 10.0 * k[a] * d.up[static_cast<std::size_t>(a)];
    out.push_back(std::move(r));
  }
  return out;
}

double sigma_eom_residual(const SigmaField& f, const Vec4& k, Stencil s, double eps) {
  double worst = 0.0;
  for (const VectorXd& r : sigma_eom_integrand(f, k, s, eps)) worst = std::max(worst, r.cwiseAbs().maxCoeff());
  return worst;
}

std::vector<VectorXd> covariant_operator_apply(const SigmaField& f, const Vec4& k, Stencil s,
                                               double eps) {
  check_field_chart(f, eps);
  const auto n = f.components;
  std::vector<VectorXd> out;
  const auto sites = sigma_interior(f, s);
  out.reserve(sites.size());
  for (const Index4& site : sites) {
    const VectorXd phi = f.at(site);
    const auto gamma = christoffel(phi, eps);
    const Mat4 tm = deformed_metric(f.grid.point(site), k);
    const SiteDerivatives d = site_derivatives(f, site, s);
    // A^{i mu}_k = Gamma^i_{jk} d^mu Phi^j, one N x N matrix per mu.
    std::array<MatrixXd, 4> a;
    for (std::size_t mu = 0; mu < 4; ++mu) {
      a[mu] = MatrixXd::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i) a[mu].row(i) = d.up[mu].transpose() * gamma[static_cast<std::size_t>(i)];
    }
    VectorXd r = VectorXd::Zero(n);
    for (std::size_t nu = 0; nu < 4; ++nu) {
      // (eta~_{mu nu} D^{mu} + 10 k_nu) applied to d^nu Phi.
      VectorXd col = 10.0 * k[static_cast<Eigen::Index>(nu)] * d.up[nu];
      for (std::size_t mu = 0; mu < 4; ++mu) {
        const double t = tm(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu));
        if (t == 0.0) continue;
        col += t * (d.up2[mu][nu] + a[mu] * d.up[nu]);
      }
      r += col;
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Presets and evolution

SigmaPreset parse_sigma_preset(const std::string& name) {
  if (name == "standing_wave") return SigmaPreset::standing_wave;
  if (name == "travelling_wave") return SigmaPreset::travelling_wave;
  if (name == "gaussian_pulse") return SigmaPreset::gaussian_pulse;
  if (name == "static") return SigmaPreset::static_field;
  throw PreconditionError("unknown sigma preset '" + name +
                          "' (expected standing_wave, travelling_wave, gaussian_pulse, static)");
}

std::string to_string(SigmaPreset p) {
  switch (p) {
    case SigmaPreset::standing_wave:
      return "standing_wave";
    case SigmaPreset::travelling_wave:
      return "travelling_wave";
    case SigmaPreset::gaussian_pulse:
      return "gaussian_pulse";
    case SigmaPreset::static_field:
      return "static";
  }
  return "?";
}

SigmaInitialData sigma_preset(SigmaPreset preset, int components, const SigmaLattice& lattice,
                              double amplitude, int mode) {
  if (components < 1) throw PreconditionError("sigma field needs at least one component");
  if (lattice.sites < 5) throw PreconditionError("sigma lattice needs at least 5 sites");
  if (!(lattice.length > 0.0)) throw PreconditionError("sigma lattice length must be positive");
  SigmaInitialData d;
  d.lattice = lattice;
  d.phi = MatrixXd::Zero(components, lattice.sites);
  d.phi_dot = MatrixXd::Zero(components, lattice.sites);
  const double kappa = 2.0 * std::numbers::pi * mode / lattice.length;
  const double width = lattice.length / 16.0;
  for (int j = 0; j < lattice.sites; ++j) {
    const double x = lattice.x(j);
    for (int c = 0; c < components; ++c) {
      // Components get decreasing amplitudes and shifted phases.
      const double a = amplitude / (1.0 + c);
      const double shift = 0.5 * c;
      switch (preset) {
        case SigmaPreset::standing_wave:
          d.phi(c, j) = a * std::cos(kappa * x + shift);
          break;
        case SigmaPreset::travelling_wave:
          d.phi(c, j) = a * std::cos(kappa * x + shift);
          d.phi_dot(c, j) = a * kappa * std::sin(kappa * x + shift);
          break;
        case SigmaPreset::gaussian_pulse:
          d.phi(c, j) = a * std::exp(-0.5 * (x - shift) * (x - shift) / (width * width));
          break;
        case SigmaPreset::static_field:
          d.phi(c, j) = a;
          break;
      }
    }
  }
  return d;
}

namespace {

class Stepper {
 public:
  Stepper(const SigmaLattice& lat, double dt, const Vec4& k, double eps)
      : lat_(lat), h_(lat.h()), dt_(dt), k_(k), eps_(eps), n_(lat.sites) {}

  int wrap(int j) const { return (j % n_ + n_) % n_; }

  MatrixXd dx(const MatrixXd& f) const {
    MatrixXd out(f.rows(), f.cols());
    for (int j = 0; j < n_; ++j) out.col(j) = (f.col(wrap(j + 1)) - f.col(wrap(j - 1))) / (2.0 * h_);
    return out;
  }

  // Everything in the equation of motion except eta~_00 d_t^2 Phi.
  MatrixXd rest(const MatrixXd& phi, const MatrixXd& v, double t) const {
    const MatrixXd px = dx(phi);
    const MatrixXd vx = dx(v);
    MatrixXd out(phi.rows(), phi.cols());
    for (int j = 0; j < n_; ++j) {
      const Mat4 tm = deformed_metric(Vec4(t, lat_.x(j), 0.0, 0.0), k_);
      const double b = tm(0, 1);
      const double c = tm(1, 1);
      const VectorXd p = phi.col(j);
      const VectorXd vt = v.col(j);
      // d^1 = -d_x.
      const VectorXd ux = -px.col(j);
      const VectorXd pxx =
          (phi.col(wrap(j + 1)) - 2.0 * phi.col(j) + phi.col(wrap(j - 1))) / (h_ * h_);
      const double d = 1.0 - p.squaredNorm();
      // Gamma^p(u, w) = Phi^p g(u, w).
      const auto gmet = [&](const VectorXd& u, const VectorXd& w) {
        return u.dot(w) + p.dot(u) * p.dot(w) / d;
      };
      const double quad = tm(0, 0) * gmet(vt, vt) + 2.0 * b * gmet(vt, ux) + c * gmet(ux, ux);
      out.col(j) = 2.0 * b * (-vx.col(j)) + c * pxx + quad * p + 10.0 * (k_[0] * vt + k_[1] * ux);
    }
    return out;
  }

  MatrixXd accel(const MatrixXd& phi, const MatrixXd& v, double t) const {
    MatrixXd r = rest(phi, v, t);
    for (int j = 0; j < n_; ++j) {
      r.col(j) /= -deformed_metric(Vec4(t, lat_.x(j), 0.0, 0.0), k_)(0, 0);
    }
    return r;
  }

  double chart_max(const MatrixXd& phi, long step) const {
    const double worst = phi.colwise().squaredNorm().maxCoeff();
    if (!(worst < 1.0 - eps_)) {
      std::ostringstream os;
      os << "field left the hemisphere chart at step " << step << ": max |Phi|^2 = " << worst;
      throw ChartViolation(os.str(), step);
    }
    return worst;
  }

  double g(const VectorXd& p, const VectorXd& u, const VectorXd& w) const {
    return u.dot(w) + p.dot(u) * p.dot(w) / (1.0 - p.squaredNorm());
  }

  // Central-difference energy at one time level.
  double energy_at(const MatrixXd& phi, const MatrixXd& v) const {
    const MatrixXd px = dx(phi);
    double e = 0.0;
    for (int j = 0; j < n_; ++j) {
      const VectorXd p = phi.col(j);
      e += 0.5 * h_ * (g(p, v.col(j), v.col(j)) + g(p, px.col(j), px.col(j)));
    }
    return e;
  }

  // E^{n+1/2} with the metric at time-averaged field values.
  double energy_staggered(const MatrixXd& now, const MatrixXd& next) const {
    const MatrixXd mid = 0.5 * (now + next);
    double e = 0.0;
    for (int j = 0; j < n_; ++j) {
      const int jp = wrap(j + 1);
      const VectorXd vel = (next.col(j) - now.col(j)) / dt_;
      const VectorXd half = 0.5 * (mid.col(j) + mid.col(jp));
      const VectorXd d_next = (next.col(jp) - next.col(j)) / h_;
      const VectorXd d_now = (now.col(jp) - now.col(j)) / h_;
      e += 0.5 * h_ * (g(mid.col(j), vel, vel) + g(half, d_next, d_now));
    }
    return e;
  }

  double residual(const MatrixXd& prev, const MatrixXd& now, const MatrixXd& next, double t) const {
    const MatrixXd v = (next - prev) / (2.0 * dt_);
    const MatrixXd tt = (next - 2.0 * now + prev) / (dt_ * dt_);
    MatrixXd r = rest(now, v, t);
    for (int j = 0; j < n_; ++j) r.col(j) += deformed_metric(Vec4(t, lat_.x(j), 0.0, 0.0), k_)(0, 0) * tt.col(j);
    return r.cwiseAbs().maxCoeff();
  }

 private:
  SigmaLattice lat_;
  double h_;
  double dt_;
  Vec4 k_;
  double eps_;
  int n_;
};

}  // namespace

double SigmaRun::energy_drift() const {
  if (diagnostics.size() < 2) return 0.0;
  const double e1 = diagnostics[1].energy;
  double worst = 0.0;
  for (std::size_t n = 1; n < diagnostics.size(); ++n) {
    worst = std::max(worst, std::abs(diagnostics[n].energy - e1));
  }
  return e1 == 0.0 ? worst : worst / std::abs(e1);
}

SigmaRun sigma_evolve(const SigmaInitialData& init, const SigmaEvolveOptions& opt) {
  const SigmaLattice& lat = init.lattice;
  const int n = lat.sites;
  const auto comps = init.phi.rows();
  if (comps < 1 || init.phi.cols() != n || init.phi_dot.rows() != comps || init.phi_dot.cols() != n) {
    throw PreconditionError("sigma initial data shape does not match the lattice");
  }
  if (n < 5) throw PreconditionError("sigma lattice needs at least 5 sites");
  if (opt.steps < 1) throw PreconditionError("sigma evolution needs at least one step");
  const double h = lat.h();
  if (!(opt.dt > 0.0) || opt.dt > 0.5 * h) {
    std::ostringstream os;
    os << "dt = " << opt.dt << " violates the bound 0 < dt <= h/2 = " << 0.5 * h;
    throw PreconditionError(os.str());
  }
  if (!init.phi.allFinite() || !init.phi_dot.allFinite()) {
    throw PreconditionError("sigma initial data has non-finite entries");
  }

  const double dt = opt.dt;
  const Stepper st(lat, dt, opt.k, opt.eps_chart);

  SigmaRun run;
  run.lattice = lat;
  run.dt = dt;
  run.k = opt.k;
  if (opt.keep_history) {
    Grid4 g;
    g.dims = {static_cast<int>(opt.steps + 1), n, 1, 1};
    g.spacing = Vec4(dt, h, 1.0, 1.0);
    g.origin = Vec4(0.0, lat.x(0), 0.0, 0.0);
    run.history = SigmaField(static_cast<int>(comps), g);
    run.history.periodic = {false, true, false, false};
  }
  const auto store = [&](long step, const MatrixXd& phi) {
    if (!opt.keep_history) return;
    for (int j = 0; j < n; ++j) run.history.at({static_cast<int>(step), j, 0, 0}) = phi.col(j);
  };

  MatrixXd prev = init.phi;
  run.diagnostics.push_back({0, 0.0, st.chart_max(prev, 0), st.energy_at(prev, init.phi_dot), 0.0, 0});
  store(0, prev);

  // Taylor start: Phi^1 = Phi^0 + dt V + dt^2/2 Phi_tt(Phi^0, V).
  MatrixXd now = prev + dt * init.phi_dot + 0.5 * dt * dt * st.accel(prev, init.phi_dot, 0.0);
  run.diagnostics.push_back(
      {1, dt, st.chart_max(now, 1), st.energy_staggered(prev, now), 0.0, 0});
  store(1, now);

  for (long step = 2; step <= opt.steps; ++step) {
    const double t = (step - 1) * dt;
    MatrixXd next = 2.0 * now - prev;
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
      const MatrixXd v = (next - prev) / (2.0 * dt);
      const MatrixXd cand = 2.0 * now - prev + dt * dt * st.accel(now, v, t);
      const double change = (cand - next).cwiseAbs().maxCoeff();
      next = cand;
      if (change <= opt.iteration_tol * std::max(1.0, next.cwiseAbs().maxCoeff())) break;
    }
    if (!next.allFinite()) {
      throw ChartViolation("sigma evolution produced non-finite values at step " + std::to_string(step), step);
    }
    const double chart = st.chart_max(next, step);
    run.diagnostics.push_back({step, step * dt, chart, st.energy_staggered(now, next),
                               st.residual(prev, now, next, t), it + 1});
    store(step, next);
    prev = std::move(now);
    now = std::move(next);
  }
  run.final_phi = now;
  return run;
}

void write_sigma_dump(std::ostream& os, const MatrixXd& phi) {
  static_assert(std::endian::native == std::endian::little, "dump writer assumes little-endian");
  const std::uint64_t sites = static_cast<std::uint64_t>(phi.cols());
  const std::uint64_t comps = static_cast<std::uint64_t>(phi.rows());
  os.write(reinterpret_cast<const char*>(&sites), sizeof sites);
  os.write(reinterpret_cast<const char*>(&comps), sizeof comps);
  // Column-major storage is already site-major.
  os.write(reinterpret_cast<const char*>(phi.data()),
           static_cast<std::streamsize>(sizeof(double) * sites * comps));
  if (!os) throw Error("failed to write sigma dump");
}

MatrixXd read_sigma_dump(std::istream& is) {
  std::uint64_t sites = 0, comps = 0;
  is.read(reinterpret_cast<char*>(&sites), sizeof sites);
  is.read(reinterpret_cast<char*>(&comps), sizeof comps);
  if (!is || sites == 0 || comps == 0 || sites > (1u << 28) || comps > 1024) {
    throw PreconditionError("sigma dump header is malformed");
  }
  MatrixXd phi(static_cast<Eigen::Index>(comps), static_cast<Eigen::Index>(sites));
  is.read(reinterpret_cast<char*>(phi.data()), static_cast<std::streamsize>(sizeof(double) * sites * comps));
  if (!is) throw PreconditionError("sigma dump is truncated");
  return phi;
}

}  // namespace exospin
