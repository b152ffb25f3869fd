#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "app/config.hpp"
#include "app/runners.hpp"
#include "exospin/errors.hpp"
#include "exospin/version.hpp"

namespace {

using exospin::app::RunConfig;

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-c,--config", c.config, "YAML config providing defaults for this run");
  sub->add_option("-o,--out", c.out, "output directory (EXOSPIN_OUTPUT_DIR wins if set)");
  sub->add_option("--seed", c.seed, "RNG seed");
}

RunConfig base_config(const Common& c, exospin::app::Scenario s) {
  RunConfig cfg = c.config.empty() ? RunConfig{} : exospin::app::parse_config(c.config);
  cfg.scenario = s;
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

exospin::Vec4 to_vec4(const std::vector<double>& v) { return {v[0], v[1], v[2], v[3]}; }
exospin::Vec3 to_vec3(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

}  // namespace

int main(int argc, char** argv) {
  using namespace exospin::app;

  CLI::App app{"exospin: exotic spinor numerics"};
  app.set_version_flag("--version", std::string(exospin::kVersion));
  app.require_subcommand(1, 1);

  std::optional<RunConfig> selected;

  // dispersion
  Common c_disp;
  std::optional<int> disp_samples;
  std::optional<double> disp_pmax;
  std::vector<double> disp_k;
  auto* disp = app.add_subcommand("dispersion", "exact vs first-order dispersion over random momenta");
  add_common(disp, c_disp);
  disp->add_option("--samples", disp_samples, "number of momenta");
  disp->add_option("--p-max", disp_pmax, "max |p| in units of m");
  disp->add_option("--k", disp_k, "k_mu (4 values)")->expected(4);
  disp->callback([&] {
    RunConfig cfg = base_config(c_disp, Scenario::dispersion);
    if (disp_samples) cfg.dispersion.samples = *disp_samples;
    if (disp_pmax) cfg.dispersion.p_max_over_m = *disp_pmax;
    if (!disp_k.empty()) cfg.dispersion.k = to_vec4(disp_k);
    selected = cfg;
  });

  // junction
  Common c_junc;
  std::optional<int> junc_axis, junc_n;
  std::optional<double> junc_offset;
  auto* junc = app.add_subcommand("junction", "current gluing across a slab interface");
  add_common(junc, c_junc);
  junc->add_option("--axis", junc_axis, "coordinate normal to the surface");
  junc->add_option("--offset", junc_offset, "surface position along the axis");
  junc->add_option("--samples", junc_n, "surface samples per tangent axis");
  junc->callback([&] {
    RunConfig cfg = base_config(c_junc, Scenario::junction);
    if (junc_axis) cfg.junction.axis = *junc_axis;
    if (junc_offset) cfg.junction.offset = *junc_offset;
    if (junc_n) cfg.junction.samples_per_axis = *junc_n;
    selected = cfg;
  });

  // gordon-fit
  Common c_gor;
  bool gor_free = false;
  std::optional<double> gor_beta, gor_mu, gor_alpha;
  auto* gor = app.add_subcommand("gordon-fit", "fit the mean deformation to a magnetic moment");
  add_common(gor, c_gor);
  gor->add_flag("--free-beta", gor_free, "use --beta instead of m_n/m_p");
  gor->add_option("--beta", gor_beta, "mass ratio used with --free-beta");
  gor->add_option("--mu-ratio", gor_mu, "mu / mu_N");
  gor->add_option("--inv-alpha", gor_alpha, "inverse fine structure constant");
  gor->callback([&] {
    RunConfig cfg = base_config(c_gor, Scenario::gordon_fit);
    if (gor_free) cfg.gordon.beta_mode = exospin::BetaMode::free;
    if (gor_beta) cfg.gordon.beta = *gor_beta;
    if (gor_mu) cfg.physics.mu_ratio = *gor_mu;
    if (gor_alpha) cfg.physics.inv_alpha = *gor_alpha;
    selected = cfg;
  });

  // sigma
  Common c_sig;
  std::optional<int> sig_n, sig_sites, sig_mode;
  std::optional<long> sig_steps;
  std::optional<double> sig_dt, sig_amp;
  std::string sig_preset;
  std::vector<double> sig_k;
  auto* sig = app.add_subcommand("sigma", "1+1D deformed sigma model evolution");
  add_common(sig, c_sig);
  sig->add_option("-N,--components", sig_n, "chart components N (target sphere S^N)");
  sig->add_option("--sites", sig_sites, "lattice sites");
  sig->add_option("--steps", sig_steps, "time steps");
  sig->add_option("--dt", sig_dt, "time step (default h/2)");
  sig->add_option("--preset", sig_preset, "standing_wave | travelling_wave | gaussian_pulse | static");
  sig->add_option("--amplitude", sig_amp, "initial data amplitude");
  sig->add_option("--mode", sig_mode, "initial data wavenumber");
  sig->add_option("--k", sig_k, "k_mu (4 values)")->expected(4);
  sig->callback([&] {
    RunConfig cfg = base_config(c_sig, Scenario::sigma);
    if (sig_n) cfg.sigma.components = *sig_n;
    if (sig_sites) {
      const double length = cfg.sigma.h * cfg.sigma.sites;
      cfg.sigma.sites = *sig_sites;
      cfg.sigma.h = length / *sig_sites;
    }
    if (sig_steps) cfg.sigma.steps = *sig_steps;
    if (sig_dt) cfg.sigma.dt = *sig_dt;
    if (!sig_preset.empty()) cfg.sigma.preset = exospin::parse_sigma_preset(sig_preset);
    if (sig_amp) cfg.sigma.amplitude = *sig_amp;
    if (sig_mode) cfg.sigma.mode = *sig_mode;
    if (!sig_k.empty()) cfg.sigma.k = to_vec4(sig_k);
    selected = cfg;
  });

  // cech
  Common c_cech;
  std::string nerve, glue, functional;
  std::vector<std::string> diff;
  bool h1 = false;
  auto* cech = app.add_subcommand("cech", "spin structures on a Cech nerve");
  add_common(cech, c_cech);
  cech->add_option("--nerve", nerve, "nerve file");
  auto* o_h1 = cech->add_flag("--h1", h1, "dimension of H^1(nerve; Z2)");
  auto* o_diff = cech->add_option("--diff", diff, "two cocycle files")->expected(2);
  auto* o_glue = cech->add_option("--glue", glue, "vertex deformation file");
  cech->add_option("--functional", functional, "gluing functional: identity | square");
  o_h1->excludes(o_diff)->excludes(o_glue);
  o_diff->excludes(o_glue);
  cech->callback([&] {
    RunConfig cfg = base_config(c_cech, Scenario::cech);
    if (!nerve.empty()) cfg.cech.nerve = nerve;
    if (h1) cfg.cech.action = CechAction::h1;
    if (!diff.empty()) {
      cfg.cech.action = CechAction::diff;
      cfg.cech.cocycle_a = diff[0];
      cfg.cech.cocycle_b = diff[1];
    }
    if (!glue.empty()) {
      cfg.cech.action = CechAction::glue;
      cfg.cech.deformation = glue;
    }
    if (!functional.empty()) cfg.cech.functional = exospin::parse_gluing_functional(functional);
    selected = cfg;
  });

  // hausdorff
  Common c_haus;
  std::string set;
  std::optional<double> haus_s, haus_dmin;
  std::optional<int> haus_levels;
  auto* haus = app.add_subcommand("hausdorff", "box-counting measure of an equipped set");
  add_common(haus, c_haus);
  haus->add_option("--set", set, "box list, one 'phi lo.. hi..' per line");
  haus->add_option("--s", haus_s, "measure dimension");
  haus->add_option("--delta-min", haus_dmin, "finest cell size");
  haus->add_option("--levels", haus_levels, "number of halvings down to delta-min");
  haus->callback([&] {
    RunConfig cfg = base_config(c_haus, Scenario::hausdorff);
    if (!set.empty()) cfg.hausdorff.set = set;
    if (haus_s) cfg.hausdorff.s = *haus_s;
    if (haus_dmin) cfg.hausdorff.delta_min = *haus_dmin;
    if (haus_levels) cfg.hausdorff.levels = *haus_levels;
    selected = cfg;
  });

  // evolve
  Common c_evo;
  std::optional<double> evo_tmax;
  std::optional<int> evo_samples;
  std::vector<double> evo_p, evo_k;
  auto* evo = app.add_subcommand("evolve", "amplitude growth and damping of a deformed plane wave");
  add_common(evo, c_evo);
  evo->add_option("--t-max", evo_tmax, "final time");
  evo->add_option("--samples", evo_samples, "time samples");
  evo->add_option("--p", evo_p, "spatial momentum (3 values)")->expected(3);
  evo->add_option("--k", evo_k, "k_mu (4 values)")->expected(4);
  evo->callback([&] {
    RunConfig cfg = base_config(c_evo, Scenario::evolve);
    if (evo_tmax) cfg.evolve.t_max = *evo_tmax;
    if (evo_samples) cfg.evolve.samples = *evo_samples;
    if (!evo_p.empty()) cfg.evolve.p = to_vec3(evo_p);
    if (!evo_k.empty()) cfg.evolve.k = to_vec4(evo_k);
    selected = cfg;
  });

  // run
  std::string run_path, run_out;
  auto* run = app.add_subcommand("run", "run the scenario named in a config file");
  run->add_option("config", run_path, "YAML config")->required();
  run->add_option("-o,--out", run_out, "output directory (EXOSPIN_OUTPUT_DIR wins if set)");
  run->callback([&] {
    RunConfig cfg = parse_config(run_path);
    if (!run_out.empty()) cfg.output_dir = run_out;
    selected = cfg;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    const DispatchResult r = dispatch(*selected);
    std::cout << r.outcome.report;
    std::cerr << "wrote " << r.outcome.files.size() << " files and " << r.manifest.string() << '\n';
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const exospin::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
