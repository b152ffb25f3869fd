// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "exospin/cech.hpp"
#include "exospin/deformation.hpp"
#include "exospin/dirac.hpp"
#include "exospin/gordon.hpp"
#include "exospin/hausdorff.hpp"
#include "exospin/junction.hpp"
#include "exospin/sigma.hpp"

#ifndef EXOSPIN_DATA_DIR
#error "EXOSPIN_DATA_DIR must point at the data/ directory"
#endif

using namespace exospin;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string data(const std::string& rel) { return std::string(EXOSPIN_DATA_DIR) + "/" + rel; }

std::string sci(double v) { return fmt::format("{:.3e}", v); }

Verdict neutron_fit_reproduction() {
  Verdict v;
  MomentFitInput in;
  in.mu_ratio = -1.913;
  in.e_abs = charge_from_inverse_alpha(137.0);
  in.mass_ratio_nm = 1.00138;
  const MomentFit f = neutron_fit(in, BetaMode::self_consistent);
  v.require(std::abs(f.phi_bar_sq_over_beta - 0.5796) <= 5e-4,
            fmt::format("phi_bar^2/beta = {:.5f}", f.phi_bar_sq_over_beta));
  v.require(std::abs(f.phi_bar - 0.7618) <= 5e-4, fmt::format("phi_bar = {:.5f}", f.phi_bar));
  return v;
}

struct MomentumSample {
  std::vector<Vec3> p;
  std::vector<Vec4> k_dir;
};

// |p| <= 5m uniform in the ball; k directions uniform on S^3 (k^0 included).
MomentumSample momentum_sample(std::uint64_t seed, double p_max) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MomentumSample s;
  for (int n = 0; n < 100; ++n) {
    const Vec3 d(normal(rng), normal(rng), normal(rng));
    s.p.push_back(d.normalized() * p_max * std::cbrt(unit(rng)));
    const Vec4 q(normal(rng), normal(rng), normal(rng), normal(rng));
    s.k_dir.push_back(q.normalized());
  }
  return s;
}

Verdict dispersion_order() {
  Verdict v;
  const double m = 1.0;
  const MomentumSample s = momentum_sample(20240611, 5.0 * m);
  std::vector<double> worst;
  for (double k : {1e-2, 5e-3, 2.5e-3}) {
    double w = 0.0;
    for (std::size_t n = 0; n < s.p.size(); ++n) {
      w = std::max(w, dispersion_approx_error(s.p[n], k * m * s.k_dir[n], m));
    }
    worst.push_back(w);
  }
  for (std::size_t i = 1; i < worst.size(); ++i) {
    const double r = worst[i - 1] / worst[i];
    v.require(r >= 3.5 && r <= 4.5, fmt::format("ratio {:.4f}", r));
  }
  return v;
}

Verdict causal_bound() {
  Verdict v;
  const double m = 1.0;
  const MomentumSample s = momentum_sample(7, 5.0 * m);
  double worst = 0.0;
  for (std::size_t n = 0; n < s.p.size(); ++n) {
    for (double k : {1e-2, 5e-3, 1e-3}) {
      for (const CVec3& g : group_velocity(s.p[n], k * m * s.k_dir[n], m)) {
        worst = std::max(worst, group_speed_squared(g));
      }
    }
  }
  v.require(worst < 1.0, fmt::format("max |v|^2 = {:.6f}", worst));
  return v;
}

Verdict gordon_identity() {
  Verdict v;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    ModeSum pair;
    for (int q = 0; q < 2; ++q) {
      PlaneWaveMode mode;
      mode.p = Vec3(u(rng), u(rng), u(rng));
      mode.branch = u(rng) > 0 ? Branch::positive : Branch::negative;
      mode.polarization = Eigen::Vector2cd(cplx(u(rng), u(rng)), cplx(u(rng), u(rng)));
      pair.push_back({cplx(u(rng), u(rng)), mode});
    }
    const double phi = 0.5 + 0.5 * std::abs(u(rng));
    const Grid4 g = Grid4::centred(Vec4(u(rng), u(rng), u(rng), u(rng)), 1e-3, 5);
    const auto psi = sample_exotic(pair, g);
    const auto split = gordon_decompose(adjoint_field(psi), psi, phi, 1.0, Stencil::fourth, 1e-9);
    worst = std::max(worst, gordon_identity_gap(split));
  }
  v.require(worst <= 1e-10, "max relative gap " + sci(worst));
  return v;
}

Verdict current_conservation() {
  Verdict v;
  const Vec4 k(0.0, -0.004, 0.003, 0.002);
  const DeformationProfile profile = DeformationProfile::exponential(0.9, k);
  PlaneWaveMode a;
  a.p = Vec3(0.7, -0.3, 0.4);
  a.k = k;
  PlaneWaveMode b;
  b.p = Vec3(-0.5, 0.6, 0.2);
  b.k = k;
  b.branch = Branch::negative;
  const ModeSum modes{{1.0, a}, {cplx(0.6, 0.3), b}};
  std::vector<double> div;
  for (int n : {9, 17, 33}) {
    const Grid4 g = Grid4::centred(Vec4::Zero(), 1.6 / (n - 1), n);
    div.push_back(current_divergence_check(modes, profile, g));
  }
  for (std::size_t i = 1; i < div.size(); ++i) {
    const double r = div[i - 1] / div[i];
    v.require(r >= 3.5 && r <= 4.5, fmt::format("ratio {:.4f}", r));
  }
  v.require(div.back() < div.front(), "finest residual " + sci(div.back()));
  return v;
}

Verdict junction_condition() {
  Verdict v;
  SlabParameters slab;
  const DeformationProfile profile = DeformationProfile::slab(slab, 0.01);
  PlaneWaveMode mode;
  mode.p = Vec3(0.3, 0.1, -0.2);
  const GammaSet& g = dirac_gammas();
  // Each side rebuilds the exotic field from the standard wave with its own phi.
  const auto side = [&](const Vec4& x) {
    const Spinor4 psi = exotic_from_standard(mode.standard_value(x), x, profile);
    const double f = profile.phi(x);
    return Vec4(f * f * bilinear_current(dirac_adjoint(psi, g), psi, g));
  };
  const auto z = surface_samples(4, 0.5);
  double sing = 0.0;
  double res = 0.0;
  for (const Hypersurface& s : {Hypersurface::coordinate_plane(slab.axis, slab.sigma1_end),
                                Hypersurface::coordinate_plane(slab.axis, slab.sigma2_end),
                                Hypersurface::coordinate_plane(0, 0.0)}) {
    const GlueResult gr = glue_currents(side, side, s, z);
    for (double c : gr.singular_coefficient) sing = std::max(sing, std::abs(c));
    for (const Vec3& r : junction_residual(side, side, s, z)) res = std::max(res, r.cwiseAbs().maxCoeff());
  }
  v.require(sing <= 1e-8, "max |singular| " + sci(sing));
  v.require(res <= 1e-8, "max |residual| " + sci(res));
  return v;
}

// Cocycles / coboundaries by exhaustive labelling.
int brute_h1(const Nerve& n) {
  const std::size_t e = n.edges().size();
  unsigned long long cocycles = 0;
  for (unsigned long long mask = 0; mask < (1ULL << e); ++mask) {
    bool ok = true;
    for (const auto& t : n.triangles()) {
      const auto bit = [&](int a, int b) { return (mask >> n.edge_index(a, b)) & 1ULL; };
      if ((bit(t[0], t[1]) ^ bit(t[1], t[2]) ^ bit(t[0], t[2])) != 0) {
        ok = false;
        break;
      }
    }
    cocycles += ok;
  }
  const std::size_t nv = n.vertices().size();
  std::set<unsigned long long> boundaries;
  for (unsigned long long chi = 0; chi < (1ULL << nv); ++chi) {
    unsigned long long mask = 0;
    for (std::size_t k = 0; k < e; ++k) {
      const auto& ed = n.edges()[k];
      if (((chi >> ed[0]) ^ (chi >> ed[1])) & 1ULL) mask |= 1ULL << k;
    }
    boundaries.insert(mask);
  }
  return static_cast<int>(std::llround(std::log2(static_cast<double>(cocycles) / boundaries.size())));
}

Verdict spin_structure_counting() {
  Verdict v;
  const std::vector<std::pair<std::string, int>> cases{{"single", 0}, {"circle", 1}, {"torus", 2}};
  for (const auto& [name, expect] : cases) {
    const Nerve n = Nerve::load(data("nerves/" + name + ".nerve"));
    const int h = h1_dimension(n);
    const int brute = brute_h1(n);
    const auto count = spin_structure_count(n);
    v.require(h == expect && brute == h && count == (1ULL << expect),
              fmt::format("{}: h1 {} brute {} structures {} ({} edges)", name, h, brute, count, n.edges().size()));
  }
  return v;
}

Verdict gluing_obstruction() {
  Verdict v;
  int checked = 0;
  for (const std::string name : {"circle", "torus"}) {
    const Nerve n = Nerve::load(data("nerves/" + name + ".nerve"));
    const std::vector<int> chi(n.vertices().size(), 1);
    for (auto functional : {GluingFunctional::identity, GluingFunctional::square}) {
      OverlapDeformation flat{std::vector<double>(n.vertices().size(), 0.6), functional};
      const GluingResult ok = deformed_gluing_check(chi, flat, n);
      v.pass = v.pass && ok.global_map_exists && ok.obstructed_edges.empty();
      for (std::size_t bumped = 0; bumped < n.vertices().size(); ++bumped) {
        OverlapDeformation d = flat;
        d.phi[bumped] = 0.35;
        const GluingResult r = deformed_gluing_check(chi, d, n);
        std::set<std::size_t> expect;
        for (std::size_t e = 0; e < n.edges().size(); ++e) {
          const auto& ed = n.edges()[e];
          if (ed[0] == static_cast<int>(bumped) || ed[1] == static_cast<int>(bumped)) expect.insert(e);
        }
        const std::set<std::size_t> got(r.obstructed_edges.begin(), r.obstructed_edges.end());
        v.pass = v.pass && !r.global_map_exists && got == expect;
        ++checked;
      }
    }
  }
  v.require(v.pass, fmt::format("{} single-vertex perturbations plus constant cases", checked));
  return v;
}

Verdict hausdorff_scaling() {
  Verdict v;
  double worst = 0.0;
  for (double s : {1.0, 2.0}) {
    const std::size_t d = static_cast<std::size_t>(s);
    const CoveringSpec spec = CoveringSpec::halving(s == 1.0 ? 1e-3 : 5e-3);
    // The unit box sits on the grid; the shifted one does not.
    Box off = Box::unit(d);
    for (std::size_t a = 0; a < d; ++a) {
      off.lo[a] += 0.1234 + 0.05 * a;
      off.hi[a] += 0.1234 + 0.05 * a;
    }
    for (const Box& u : {Box::unit(d), off}) {
      for (double phi : {0.25, 0.5, 0.75}) worst = std::max(worst, scaling_law_check(u, phi, s, spec).gap);
    }
  }
  v.require(worst <= 0.02, fmt::format("max gap {:.4f}", worst));
  return v;
}

Verdict sigma_baseline() {
  Verdict v;
  std::vector<double> res;
  double drift = 0.0;
  for (int sites : {128, 256, 512}) {
    SigmaLattice lat;
    lat.sites = sites;
    const auto init = sigma_preset(SigmaPreset::standing_wave, 2, lat, 0.05, 1);
    SigmaEvolveOptions opt;
    opt.dt = 0.5 * lat.h();
    opt.steps = 1000L * sites / 512;
    const SigmaRun run = sigma_evolve(init, opt);
    res.push_back(sigma_eom_residual(run.history, opt.k, Stencil::fourth));
    if (sites == 512) drift = run.energy_drift();
  }
  v.require(drift <= 1e-6, "energy drift " + sci(drift));
  for (std::size_t i = 1; i < res.size(); ++i) {
    const double r = res[i - 1] / res[i];
    v.require(r >= 3.5 && r <= 4.5, fmt::format("residual ratio {:.3f}", r));
  }

  // Operator form against the integrand on a generic off-shell field with k != 0.
  const Vec4 k(0.003, -0.002, 0.001, 0.0);
  const Grid4 g = Grid4::centred(Vec4::Zero(), 0.05, 9);
  SigmaField f(3, g);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const Index4 i = g.unravel(n);
    const Vec4 x = g.point(i);
    f.at(i) << 0.2 * std::sin(x[0] + 2 * x[1]), 0.1 * std::cos(x[2] - x[3]) * x[0], 0.15 * std::sin(x[1] * x[3] + x[2]);
  }
  const auto a = sigma_eom_integrand(f, k);
  const auto b = covariant_operator_apply(f, k);
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    diff = std::max(diff, (a[n] - b[n]).cwiseAbs().maxCoeff());
    scale = std::max(scale, a[n].cwiseAbs().maxCoeff());
  }
  v.require(diff <= 1e-13 * std::max(1.0, scale), "operator gap " + sci(diff));
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"neutron fit reproduction", neutron_fit_reproduction},
      {"dispersion approximation order", dispersion_order},
      {"causal bound", causal_bound},
      {"gordon identity", gordon_identity},
      {"current conservation", current_conservation},
      {"junction condition", junction_condition},
      {"spin-structure counting", spin_structure_counting},
      {"deformed gluing obstruction", gluing_obstruction},
      {"hausdorff scaling law", hausdorff_scaling},
      {"sigma-model baseline", sigma_baseline},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2d %s (%.2fs): %s\n", v.pass ? "PASS" : "FAIL", index, name.c_str(), secs, v.detail.c_str());
    failed += !v.pass;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
