#pragma once

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "exospin/cech.hpp"
#include "exospin/deformation.hpp"
#include "exospin/dirac.hpp"
#include "exospin/gordon.hpp"
#include "exospin/sigma.hpp"

namespace exospin::app {

enum class Scenario { dispersion, junction, gordon_fit, sigma, cech, hausdorff, evolve };

Scenario parse_scenario(const std::string& name);
std::string to_string(Scenario s);

/// Bad configuration: unknown key, wrong type, failed validation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PhysicsConfig {
  double m = 1.0;
  double mass_ratio_nm = 1.00138;
  double inv_alpha = 137.0;
  double mu_ratio = -1.913;
};

struct DeformationConfig {
  SlabParameters slab;
  /// Bound on |k_mu| in units of m.
  double k_max_over_m = 0.01;
};

struct DispersionConfig {
  double p_max_over_m = 5.0;
  int samples = 100;
  Vec4 k{0.0, 0.001, 0.0, 0.0};
};

struct JunctionConfig {
  int axis = 1;
  /// Defaults to the Sigma1/Sigma2 interface of the slab.
  std::optional<double> offset;
  int samples_per_axis = 4;
  double half_extent = 0.5;
  Vec3 p{0.3, 0.1, -0.2};
  Branch branch = Branch::positive;
};

struct GordonConfig {
  BetaMode beta_mode = BetaMode::self_consistent;
  double beta = 1.00138;
};

struct SigmaConfig {
  int components = 2;
  int sites = 512;
  double h = 2.0 * std::numbers::pi / 512.0;
  /// Defaults to h/2.
  std::optional<double> dt;
  long steps = 1000;
  Vec4 k = Vec4::Zero();
  SigmaPreset preset = SigmaPreset::standing_wave;
  double amplitude = 0.05;
  int mode = 1;
  double eps_chart = kDefaultChartEps;
};

enum class CechAction { h1, diff, glue };

struct CechConfig {
  std::filesystem::path nerve;
  CechAction action = CechAction::h1;
  std::filesystem::path cocycle_a;
  std::filesystem::path cocycle_b;
  std::filesystem::path deformation;
  GluingFunctional functional = GluingFunctional::identity;
};

struct HausdorffConfig {
  std::filesystem::path set;
  double s = 1.0;
  double delta_min = 1e-3;
  int levels = 6;
};

struct EvolveConfig {
  Vec3 p{1.0, 0.0, 0.0};
  Vec4 k{0.0, -0.001, 0.0, 0.0};
  double t_max = 100.0;
  int samples = 101;
};

struct RunConfig {
  Scenario scenario = Scenario::gordon_fit;
  std::uint64_t seed = 20240611;
  std::filesystem::path output_dir = "exospin_out";
  PhysicsConfig physics;
  DeformationConfig deformation;
  DispersionConfig dispersion;
  JunctionConfig junction;
  GordonConfig gordon;
  SigmaConfig sigma;
  CechConfig cech;
  HausdorffConfig hausdorff;
  EvolveConfig evolve;

  double k_max() const { return deformation.k_max_over_m * physics.m; }
};

/// Reads and validates a YAML config. Relative paths inside it resolve
/// against the config file's directory. Errors carry the line and key.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = ".");

/// Checks every module precondition reachable from cfg; throws ConfigError.
void validate(const RunConfig& cfg);

/// Effective configuration as JSON (for manifests).
nlohmann::json to_json(const RunConfig& cfg);

/// EXOSPIN_OUTPUT_DIR wins over the configured directory when set and non-empty.
std::filesystem::path resolve_output_dir(const RunConfig& cfg);

}  // namespace exospin::app
