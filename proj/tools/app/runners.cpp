#include "runners.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "exospin/cech.hpp"
#include "exospin/dirac.hpp"
#include "exospin/gordon.hpp"
#include "exospin/hausdorff.hpp"
#include "exospin/junction.hpp"
#include "exospin/sigma.hpp"
#include "output.hpp"

namespace exospin::app {

namespace fs = std::filesystem;

namespace {

RunOutcome run_dispersion(const RunConfig& cfg, const fs::path& dir) {
  const auto& d = cfg.dispersion;
  const double m = cfg.physics.m;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  RunOutcome out;
  const fs::path path = dir / "dispersion.csv";
  CsvWriter csv(path, {"px", "py", "pz", "k0", "kx", "ky", "kz", "m", "ReE+", "ImE+", "ReE-", "ImE-",
                       "approx_err"});
  double worst = 0.0;
  for (int n = 0; n < d.samples; ++n) {
    Vec3 dir3(normal(rng), normal(rng), normal(rng));
    if (dir3.norm() == 0.0) dir3 = Vec3::UnitX();
    const Vec3 p = dir3.normalized() * (d.p_max_over_m * m * unit(rng));
    const auto e = dispersion_exact(p, d.k, m);
    const double err = dispersion_approx_error(p, d.k, m);
    worst = std::max(worst, err);
    csv.row({p[0], p[1], p[2], d.k[0], d.k[1], d.k[2], d.k[3], m, e[0].real(), e[0].imag(),
             e[1].real(), e[1].imag(), err});
  }
  csv.close();
  out.files.push_back(path);
  out.summary = {{"samples", d.samples}, {"max_approx_err", worst}};
  out.report = "dispersion: " + std::to_string(d.samples) + " momenta, max approx error " +
               format_double(worst) + "\n";
  return out;
}

RunOutcome run_junction(const RunConfig& cfg, const fs::path& dir) {
  const auto& j = cfg.junction;
  const auto& slab = cfg.deformation.slab;
  const DeformationProfile profile = DeformationProfile::slab(slab, cfg.k_max());
  const double offset = j.offset ? *j.offset : (j.axis == slab.axis ? slab.sigma1_end : 0.0);
  const Hypersurface surf = Hypersurface::coordinate_plane(j.axis, offset);

  PlaneWaveMode mode;
  mode.p = j.p;
  mode.m = cfg.physics.m;
  mode.branch = j.branch;
  const GammaSet& g = dirac_gammas();
  // phi^2 psi-tilde-bar gamma psi-tilde with psi-tilde mapped from one standard wave.
  const CurrentField current = [&](const Vec4& x) {
    const Spinor4 psi = exotic_from_standard(mode.standard_value(x), x, profile);
    const double f = profile.phi(x);
    return Vec4(f * f * bilinear_current(dirac_adjoint(psi, g), psi, g));
  };

  const auto z = surface_samples(j.samples_per_axis, j.half_extent);
  const GlueResult glue = glue_currents(current, current, surf, z);
  const auto resid = junction_residual(current, current, surf, z);

  RunOutcome out;
  const fs::path path = dir / "junction.csv";
  CsvWriter csv(path, {"z1", "z2", "z3", "singular_coefficient", "residual_1", "residual_2", "residual_3"});
  double worst_sing = 0.0, worst_res = 0.0;
  for (std::size_t n = 0; n < z.size(); ++n) {
    csv.row({z[n][0], z[n][1], z[n][2], glue.singular_coefficient[n], resid[n][0], resid[n][1], resid[n][2]});
    worst_sing = std::max(worst_sing, std::abs(glue.singular_coefficient[n]));
    worst_res = std::max(worst_res, resid[n].cwiseAbs().maxCoeff());
  }
  csv.close();
  out.files.push_back(path);
  const char* causal = surf.causal_type() == CausalType::spacelike ? "spacelike" : "timelike";
  out.summary = {{"points", z.size()},
                 {"causal_type", causal},
                 {"max_singular_coefficient", worst_sing},
                 {"max_tangential_residual", worst_res}};
  out.report = "junction (" + std::string(causal) + " surface x^" + std::to_string(j.axis) + " = " +
               format_double(offset) + "): max |singular| " + format_double(worst_sing) +
               ", max |residual| " + format_double(worst_res) + "\n";
  return out;
}

RunOutcome run_gordon_fit(const RunConfig& cfg, const fs::path& dir) {
  MomentFitInput in;
  in.mu_ratio = cfg.physics.mu_ratio;
  in.e_abs = charge_from_inverse_alpha(cfg.physics.inv_alpha);
  in.mass_ratio_nm = cfg.physics.mass_ratio_nm;
  in.beta = cfg.gordon.beta;
  const MomentFit fit = neutron_fit(in, cfg.gordon.beta_mode);
  const nlohmann::json j{{"phi_bar_sq_over_beta", fit.phi_bar_sq_over_beta},
                         {"phi_bar", fit.phi_bar},
                         {"mu_over_muN_roundtrip", fit.mu_over_muN_roundtrip},
                         {"beta", fit.beta},
                         {"e_abs", in.e_abs}};
  RunOutcome out;
  const fs::path path = dir / "gordon_fit.json";
  write_json(path, j);
  out.files.push_back(path);
  out.summary = j;
  out.report = j.dump() + "\n";
  return out;
}

RunOutcome run_sigma(const RunConfig& cfg, const fs::path& dir) {
  const auto& s = cfg.sigma;
  SigmaLattice lat;
  lat.sites = s.sites;
  lat.length = s.h * s.sites;
  const SigmaInitialData init = sigma_preset(s.preset, s.components, lat, s.amplitude, s.mode);
  SigmaEvolveOptions opt;
  opt.dt = s.dt ? *s.dt : 0.5 * lat.h();
  opt.steps = s.steps;
  opt.k = s.k;
  opt.eps_chart = s.eps_chart;
  opt.keep_history = false;
  const SigmaRun run = sigma_evolve(init, opt);

  RunOutcome out;
  const fs::path diag = dir / "sigma_diagnostics.csv";
  CsvWriter csv(diag, {"step", "time", "chart_max", "energy", "residual", "iterations"});
  for (const auto& d : run.diagnostics) {
    csv.row({static_cast<double>(d.step), d.time, d.chart_max, d.energy, d.residual,
             static_cast<double>(d.iterations)});
  }
  csv.close();
  const fs::path dump = dir / "sigma_final.bin";
  {
    std::ofstream os(dump, std::ios::binary);
    write_sigma_dump(os, run.final_phi);
  }
  out.files = {diag, dump};
  out.summary = {{"steps", s.steps},
                 {"dt", opt.dt},
                 {"energy_drift", run.energy_drift()},
                 {"final_chart_max", run.diagnostics.back().chart_max}};
  out.report = "sigma: " + std::to_string(s.steps) + " steps, relative energy drift " +
               format_double(run.energy_drift()) + "\n";
  return out;
}

RunOutcome run_cech(const RunConfig& cfg, const fs::path& dir) {
  const auto& c = cfg.cech;
  const Nerve nerve = Nerve::load(c.nerve.string());
  RunOutcome out;
  std::ostringstream rep;
  nlohmann::json j{{"nerve", c.nerve.filename().string()},
                   {"vertices", nerve.vertices().size()},
                   {"edges", nerve.edges().size()},
                   {"triangles", nerve.triangles().size()}};
  switch (c.action) {
    case CechAction::h1: {
      const int h = h1_dimension(nerve);
      j["h1"] = h;
      j["structures"] = spin_structure_count(nerve);
      rep << h << "\nstructures: " << spin_structure_count(nerve) << "\n";
      break;
    }
    case CechAction::diff: {
      const Z2Cocycle a = load_cocycle(c.cocycle_a.string(), nerve);
      const Z2Cocycle b = load_cocycle(c.cocycle_b.string(), nerve);
      const Z2Cocycle d = difference_class(a, b, nerve);
      const auto chi = is_coboundary(d, nerve);
      const fs::path path = dir / "difference.cocycle";
      std::ofstream os(path);
      for (std::size_t e = 0; e < d.label.size(); ++e) {
        const auto& ed = nerve.edges()[e];
        os << nerve.vertices()[static_cast<std::size_t>(ed[0])] << ' '
           << nerve.vertices()[static_cast<std::size_t>(ed[1])] << ' ' << (d.label[e] > 0 ? "+1" : "-1") << '\n';
      }
      os.close();
      out.files.push_back(path);
      j["equivalent"] = chi.has_value();
      if (chi) j["chi"] = *chi;
      rep << "difference class is " << (chi ? "trivial: structures are equivalent" : "nontrivial: structures differ")
          << "\n";
      break;
    }
    case CechAction::glue: {
      OverlapDeformation defo = load_deformation(c.deformation.string(), nerve);
      defo.functional = c.functional;
      const std::vector<int> chi(nerve.vertices().size(), 1);
      const GluingResult g = deformed_gluing_check(chi, defo, nerve);
      std::vector<std::string> names;
      for (auto e : g.obstructed_edges) names.push_back(nerve.edge_name(e));
      j["global_map_exists"] = g.global_map_exists;
      j["obstructed_edges"] = names;
      rep << "global map " << (g.global_map_exists ? "exists" : "obstructed");
      for (const auto& n : names) rep << ' ' << n;
      rep << "\n";
      break;
    }
  }
  const fs::path path = dir / "cech.json";
  write_json(path, j);
  out.files.push_back(path);
  out.summary = j;
  out.report = rep.str();
  return out;
}

RunOutcome run_hausdorff(const RunConfig& cfg, const fs::path& dir) {
  const auto& h = cfg.hausdorff;
  const EquippedLocalSet set = EquippedLocalSet::load(h.set.string());
  const CoveringSpec spec = CoveringSpec::halving(h.delta_min, h.levels);
  std::vector<std::string> header{"delta"};
  for (std::size_t i = 0; i < set.pieces.size(); ++i) header.push_back("piece_" + std::to_string(i));
  for (const char* c : {"total", "rhs", "gap"}) header.emplace_back(c);

  RunOutcome out;
  const fs::path path = dir / "hausdorff.csv";
  CsvWriter csv(path, header);
  EquippedMeasure last{};
  for (double delta : spec.deltas) {
    const CoveringSpec one{{delta}};
    std::vector<double> row{delta};
    for (const auto& p : set.pieces) {
      row.push_back(measure_estimate(scale_set(p.box, p.phi), h.s, one).estimate);
    }
    last = equipped_measure(set, h.s, one);
    row.push_back(last.direct);
    row.push_back(last.total);
    row.push_back(last.gap);
    csv.row(row);
  }
  csv.close();
  out.files.push_back(path);
  out.summary = {{"pieces", set.pieces.size()}, {"s", h.s}, {"delta_min", h.delta_min},
                 {"total", last.direct}, {"rhs", last.total}, {"gap", last.gap}};
  out.report = "hausdorff: measured " + format_double(last.direct) + ", closed form " +
               format_double(last.total) + ", gap " + format_double(last.gap) + "\n";
  return out;
}

RunOutcome run_evolve(const RunConfig& cfg, const fs::path& dir) {
  const auto& e = cfg.evolve;
  const double m = cfg.physics.m;
  RunOutcome out;
  const fs::path path = dir / "evolve.csv";
  CsvWriter csv(path, {"t", "factor_positive", "factor_negative"});
  for (int n = 0; n < e.samples; ++n) {
    const double t = e.t_max * n / (e.samples - 1);
    csv.row({t, damping_factor(e.p, e.k, m, t, Branch::positive),
             damping_factor(e.p, e.k, m, t, Branch::negative)});
  }
  csv.close();
  out.files.push_back(path);
  const double fp = damping_factor(e.p, e.k, m, e.t_max, Branch::positive);
  const double fn = damping_factor(e.p, e.k, m, e.t_max, Branch::negative);
  out.summary = {{"t_max", e.t_max}, {"factor_positive_end", fp}, {"factor_negative_end", fn}};
  out.report = "evolve: amplitude factors at t = " + format_double(e.t_max) + ": positive " +
               format_double(fp) + ", negative " + format_double(fn) + "\n";
  return out;
}

}  // namespace

RunOutcome run_scenario(const RunConfig& cfg, const fs::path& out_dir) {
  switch (cfg.scenario) {
    case Scenario::dispersion:
      return run_dispersion(cfg, out_dir);
    case Scenario::junction:
      return run_junction(cfg, out_dir);
    case Scenario::gordon_fit:
      return run_gordon_fit(cfg, out_dir);
    case Scenario::sigma:
      return run_sigma(cfg, out_dir);
    case Scenario::cech:
      return run_cech(cfg, out_dir);
    case Scenario::hausdorff:
      return run_hausdorff(cfg, out_dir);
    case Scenario::evolve:
      return run_evolve(cfg, out_dir);
  }
  throw ConfigError("unhandled scenario");
}

DispatchResult dispatch(const RunConfig& cfg) {
  validate(cfg);
  DispatchResult r;
  r.output_dir = resolve_output_dir(cfg);
  fs::create_directories(r.output_dir);
  const std::string started = utc_now();
  r.outcome = run_scenario(cfg, r.output_dir);
  const fs::path summary = r.output_dir / "summary.json";
  write_json(summary, r.outcome.summary);
  r.outcome.files.push_back(summary);
  r.manifest = write_manifest(r.output_dir, to_json(cfg), r.outcome.files, started, utc_now());
  return r;
}

}  // namespace exospin::app
