#include "exospin/deformation.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "exospin/errors.hpp"

namespace exospin {

std::string to_string(Region r) {
  switch (r) {
    case Region::sigma1:
      return "Sigma1";
    case Region::sigma2:
      return "Sigma2";
    case Region::sigma3:
      return "Sigma3";
  }
  return "?";
}

namespace {

// ln(phi) as a function of the slab coordinate s.
double slab_log_phi(const SlabParameters& p, double s) {
  const double a1 = p.sigma1_end;
  const double a2 = p.sigma2_end;
  const double w = p.blend_width;
  const double k = p.k_axis;
  const double l0 = std::log(p.phi0);
  if (s <= a1) return 0.0;
  if (w > 0.0 && s < a1 + w) {
    // Cubic Hermite: value 0 / slope 0 at a1, value ln(phi0) / slope k at a1 + w.
    const double u = (s - a1) / w;
    return l0 * (3.0 * u * u - 2.0 * u * u * u) + k * w * (u * u * u - u * u);
  }
  const double core_end = a2 - w;
  if (s <= core_end) return l0 + k * (s - (a1 + w));
  const double lc = l0 + k * (core_end - (a1 + w));
  if (s < a2) {
    const double t = s - core_end;
    return lc + k * (t - t * t / (2.0 * w));
  }
  return lc + 0.5 * k * w;
}

double slab_theta(const SlabParameters& p, double s) {
  const double a1 = p.sigma1_end;
  const double w = p.blend_width;
  if (s >= a1) return 0.0;
  const double d = a1 - s;
  if (w > 0.0 && d < w) return p.theta_slope * d * d / (2.0 * w);
  return p.theta_slope * (d - 0.5 * w);
}

Region slab_region(const SlabParameters& p, double s) {
  // Interface points go to the lowest-index region whose closure holds them.
  if (s <= p.sigma1_end) return Region::sigma1;
  if (s <= p.sigma2_end) return Region::sigma2;
  return Region::sigma3;
}

void check_k(const Vec4& k, double k_max) {
  if (!(k_max > 0.0)) throw PreconditionError("k_max must be positive");
  for (int mu = 0; mu < 4; ++mu) {
    if (std::abs(k[mu]) > k_max) {
      std::ostringstream os;
      os << "|k_" << mu << "| = " << std::abs(k[mu]) << " exceeds k_max = " << k_max;
      throw PreconditionError(os.str());
    }
  }
}

// Central slope of f along mu with a one-sided consistency probe. For smooth
// f the gap between one-sided slopes is ~h f'' and halves with h; at a kink
// it stays at the slope jump.
double probed_slope(const std::function<double(const Vec4&)>& f, const Vec4& x, int mu, double h,
                    double tol, const char* what) {
  const auto eval = [&](double offset) {
    Vec4 y = x;
    y[mu] += offset;
    return f(y);
  };
  const double f0 = f(x);
  const double fp = eval(h);
  const double fm = eval(-h);
  const double forward = (fp - f0) / h;
  const double backward = (f0 - fm) / h;
  const double gap = std::abs(forward - backward);
  const double gap_half = std::abs((eval(0.5 * h) - f0) - (f0 - eval(-0.5 * h))) / (0.5 * h);
  if (gap > tol && gap_half > 0.75 * gap) {
    std::ostringstream os;
    os << what << " is not differentiable along axis " << mu << " at (" << x[0] << ", " << x[1]
       << ", " << x[2] << ", " << x[3] << "): one-sided slopes " << backward << " vs " << forward;
    throw NonSmoothPoint(os.str());
  }
  return (fp - fm) / (2.0 * h);
}

}  // namespace

DeformationProfile::DeformationProfile(ScalarField phi, ScalarField theta, RegionField region,
                                       Vec4 k, double k_max)
    : phi_(std::move(phi)),
      theta_(std::move(theta)),
      region_(std::move(region)),
      k_(std::move(k)),
      k_max_(k_max) {
  check_k(k_, k_max_);
}

DeformationProfile DeformationProfile::slab(const SlabParameters& p, double k_max) {
  if (p.axis < 0 || p.axis > 3) throw PreconditionError("slab axis outside 0..3");
  if (!(p.phi0 > 0.0 && p.phi0 <= 1.0)) throw PreconditionError("phi0 out of (0,1]");
  if (p.blend_width < 0.0) throw PreconditionError("blend width must be >= 0");
  if (!(p.sigma2_end - p.sigma1_end >= 2.0 * p.blend_width) || !(p.sigma2_end > p.sigma1_end)) {
    throw PreconditionError("Sigma2 slab must be wider than both blend layers");
  }
  if (p.blend_width == 0.0 && p.phi0 != 1.0) {
    throw PreconditionError("phi0 != 1 needs a positive blend width for phi to stay continuous");
  }
  Vec4 k = Vec4::Zero();
  k[p.axis] = p.k_axis;
  // phi must stay in (0, 1]; ln(phi) is piecewise polynomial so dense sampling
  // of the Sigma2 slab is sufficient.
  constexpr int kSamples = 4096;
  for (int n = 0; n <= kSamples; ++n) {
    const double s = p.sigma1_end + (p.sigma2_end - p.sigma1_end) * n / kSamples;
    if (slab_log_phi(p, s) > 1e-15) {
      std::ostringstream os;
      os << "slab profile has phi = " << std::exp(slab_log_phi(p, s)) << " > 1 at s = " << s;
      throw PreconditionError(os.str());
    }
  }
  const int axis = p.axis;
  DeformationProfile out(
      [p, axis](const Vec4& x) { return std::exp(slab_log_phi(p, x[axis])); },
      [p, axis](const Vec4& x) { return slab_theta(p, x[axis]); },
      [p, axis](const Vec4& x) { return slab_region(p, x[axis]); }, k, k_max);
  out.slab_ = p;
  return out;
}

DeformationProfile DeformationProfile::exponential(double phi0, const Vec4& k, double theta,
                                                   double k_max) {
  if (!(phi0 > 0.0 && phi0 <= 1.0)) throw PreconditionError("phi0 out of (0,1]");
  return DeformationProfile([phi0, k](const Vec4& x) { return phi0 * std::exp(k.dot(x)); },
                            [theta](const Vec4&) { return theta; },
                            [](const Vec4&) { return Region::sigma2; }, k, k_max);
}

DeformationProfile DeformationProfile::constant(double phi, double theta) {
  if (!(phi > 0.0 && phi <= 1.0)) throw PreconditionError("phi out of (0,1]");
  return DeformationProfile([phi](const Vec4&) { return phi; },
                            [theta](const Vec4&) { return theta; },
                            [](const Vec4&) { return Region::sigma3; }, Vec4::Zero(), 1.0);
}

DeformationMapValue DeformationProfile::rho_bar(const Vec4& x) const {
  return {std::polar(phi(x), theta(x))};
}

DeformationProfile DeformationProfile::with_fd_step(double h) const {
  if (!(h > 0.0)) throw PreconditionError("finite-difference step must be positive");
  DeformationProfile out = *this;
  out.fd_step_ = h;
  return out;
}

DeformationProfile DeformationProfile::with_smooth_tol(double tol) const {
  if (!(tol > 0.0)) throw PreconditionError("smoothness tolerance must be positive");
  DeformationProfile out = *this;
  out.smooth_tol_ = tol;
  return out;
}

double DeformationProfile::sigma3_phi() const {
  if (!slab_) throw PreconditionError("sigma3_phi is defined for slab profiles only");
  return std::exp(slab_log_phi(*slab_, std::numeric_limits<double>::infinity()));
}

Vec4 k_field(const DeformationProfile& p, const Vec4& x) {
  const auto log_phi = [&p](const Vec4& y) { return std::log(p.phi(y)); };
  Vec4 k;
  for (int mu = 0; mu < 4; ++mu) {
    k[mu] = probed_slope(log_phi, x, mu, p.fd_step(), p.smooth_tol(), "phi");
  }
  return k;
}

Vec4 theta_gradient(const DeformationProfile& p, const Vec4& x) {
  const auto theta = [&p](const Vec4& y) { return p.theta(y); };
  Vec4 d;
  for (int mu = 0; mu < 4; ++mu) {
    d[mu] = probed_slope(theta, x, mu, p.fd_step(), p.smooth_tol(), "theta");
  }
  return d;
}

CVec4 connection_B(const DeformationProfile& p, const Vec4& x) {
  const Vec4 k = k_field(p, x);
  const Vec4 dtheta = theta_gradient(p, x);
  CVec4 b;
  for (int mu = 0; mu < 4; ++mu) b[mu] = cplx(k[mu], 0.5 * dtheta[mu]);
  return b;
}

Spinor4 map_exotic_to_standard(const Spinor4& psi_tilde, const Vec4& x,
                               const DeformationProfile& p) {
  return p.rho_bar(x).rho_bar * psi_tilde;
}

Spinor4 exotic_from_standard(const Spinor4& psi_standard, const Vec4& x,
                             const DeformationProfile& p) {
  return std::polar(1.0 / p.phi(x), -0.5 * p.theta(x)) * psi_standard;
}

Region region_classify(const DeformationProfile& p, const Vec4& x) { return p.region(x); }

double commutation_check(const Mat4c& rho, const GammaSet& g) {
  double worst = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    worst = std::max(worst, (rho * g[mu] - g[mu] * rho).cwiseAbs().maxCoeff());
  }
  return worst;
}

double commutation_check(const DeformationMapValue& rho, const GammaSet& g) {
  return commutation_check(Mat4c(rho.rho_bar * Mat4c::Identity()), g);
}

}  // namespace exospin
