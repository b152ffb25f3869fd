#pragma once

#include <array>
#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "exospin/grid.hpp"
#include "exospin/types.hpp"

namespace exospin {

/// dx^mu + 2 x^mu (k_nu dx^nu).
Vec4 deformed_basis_shift(const Vec4& dx, const Vec4& x, const Vec4& k);

/// eta~_{mu nu} = eta_{mu nu} + 2 eta_{mu a} x^a k_nu + 2 eta_{nu a} x^a k_mu (first order in k).
Mat4 deformed_metric(const Vec4& x, const Vec4& k);

inline constexpr double kDefaultChartEps = 1e-3;

/// Phi^k Phi^k; throws ChartViolation (step -1) when it reaches 1 - eps.
double chart_check(const Eigen::VectorXd& phi, double eps = kDefaultChartEps);

/// Phi^{N+1} = sqrt(1 - Phi^k Phi^k) on the upper hemisphere.
double reconstruct_last(const Eigen::VectorXd& phi, double eps = kDefaultChartEps);

/// g_ij = delta_ij + Phi^i Phi^j / (1 - Phi^k Phi^k).
Eigen::MatrixXd target_metric(const Eigen::VectorXd& phi, double eps = kDefaultChartEps);
/// g^ij = delta^ij - Phi^i Phi^j.
Eigen::MatrixXd target_metric_inverse(const Eigen::VectorXd& phi, double eps = kDefaultChartEps);
/// d_q g_ij, returned as dg[q](i, j).
std::vector<Eigen::MatrixXd> target_metric_derivative(const Eigen::VectorXd& phi,
                                                      double eps = kDefaultChartEps);

/// Gamma^p_ij = 1/2 g^pq (d_i g_qj + d_j g_qi - d_q g_ij), returned as gamma[p](i, j).
std::vector<Eigen::MatrixXd> christoffel(const Eigen::VectorXd& phi, double eps = kDefaultChartEps);
/// Gamma^p_ij = Phi^p g_ij, equal to christoffel() on the chart.
std::vector<Eigen::MatrixXd> christoffel_closed_form(const Eigen::VectorXd& phi,
                                                     double eps = kDefaultChartEps);

/// N chart components per site of a Grid4. Axis 0 is time. Axes flagged
/// periodic wrap around in derivatives; the others lose `margin` sites.
struct SigmaField {
  int components = 2;
  Grid4 grid;
  std::array<bool, 4> periodic{false, false, false, false};
  std::vector<double> data;  ///< site-major, `components` doubles per site

  SigmaField() = default;
  SigmaField(int n, const Grid4& g);

  Eigen::Map<Eigen::VectorXd> at(const Index4& i);
  Eigen::Map<const Eigen::VectorXd> at(const Index4& i) const;
};

/// Central first derivative d_mu Phi at site i (periodic axes wrap).
Eigen::VectorXd sigma_derivative(const SigmaField& f, const Index4& i, int mu, Stencil s);
/// Central d_mu d_nu Phi at site i.
Eigen::VectorXd sigma_second_derivative(const SigmaField& f, const Index4& i, int mu, int nu,
                                        Stencil s);

/// Sites where every non-periodic active axis is at least the stencil margin from the edge.
std::vector<Index4> sigma_interior(const SigmaField& f, Stencil s);

/// eta~ d^mu d^nu Phi^p + eta~ Gamma^p_ij d^mu Phi^i d^nu Phi^j + 10 k_a d^a Phi^p
/// at the interior sites (indices raised with eta). Chart checked everywhere.
std::vector<Eigen::VectorXd> sigma_eom_integrand(const SigmaField& f, const Vec4& k,
                                                 Stencil s = Stencil::second,
                                                 double eps = kDefaultChartEps);

/// Max-norm of sigma_eom_integrand over the interior.
double sigma_eom_residual(const SigmaField& f, const Vec4& k, Stencil s = Stencil::second,
                          double eps = kDefaultChartEps);

/// (eta~_{mu nu} D^{i mu}_k + 10 k_nu delta^i_k) d^nu Phi^k with
/// D^{i mu}_k = delta^i_k d^mu + Gamma^i_{jk} d^mu Phi^j, built as an explicit
/// operator on the gradient at each interior site.
std::vector<Eigen::VectorXd> covariant_operator_apply(const SigmaField& f, const Vec4& k,
                                                      Stencil s = Stencil::second,
                                                      double eps = kDefaultChartEps);

/// Periodic 1+1 lattice: `sites` points covering x in [-length/2, length/2).
struct SigmaLattice {
  int sites = 512;
  double length = 2.0 * std::numbers::pi;
  double h() const { return length / sites; }
  double x(int j) const { return -0.5 * length + h() * j; }
};

/// Columns are sites, rows are chart components.
struct SigmaInitialData {
  SigmaLattice lattice;
  Eigen::MatrixXd phi;
  Eigen::MatrixXd phi_dot;
};

enum class SigmaPreset { standing_wave, travelling_wave, gaussian_pulse, static_field };

SigmaPreset parse_sigma_preset(const std::string& name);
std::string to_string(SigmaPreset p);

/// Smooth initial data on the lattice. `mode` counts wavelengths across the box.
SigmaInitialData sigma_preset(SigmaPreset preset, int components, const SigmaLattice& lattice,
                              double amplitude = 0.05, int mode = 1);

struct SigmaEvolveOptions {
  double dt = 0.0;
  long steps = 1000;
  Vec4 k = Vec4::Zero();
  double eps_chart = kDefaultChartEps;
  int max_iterations = 60;
  double iteration_tol = 1e-15;
  bool keep_history = true;
};

struct SigmaStepDiagnostics {
  long step;
  double time;
  double chart_max;  ///< max Phi^k Phi^k over the lattice
  /// Discrete energy: E^{n-1/2} for step n >= 1, the central-difference energy at step 0.
  double energy;
  /// Second-order EOM residual at the previous time level (zero up to the iteration tolerance).
  double residual;
  int iterations;
};

struct SigmaRun {
  SigmaLattice lattice;
  double dt;
  Vec4 k;
  /// (steps + 1) x sites history, periodic in x; empty when keep_history is false.
  SigmaField history;
  Eigen::MatrixXd final_phi;
  std::vector<SigmaStepDiagnostics> diagnostics;

  /// max_n |E_n - E_1| / |E_1| over n >= 1.
  double energy_drift() const;
};

/// Time-centred leapfrog for the 1+1 equations of motion solved for d_t^2 Phi.
/// The centred velocity and the mixed derivative are resolved by fixed-point
/// iteration each step. Throws PreconditionError when dt > h/2 and
/// ChartViolation (with the step) if the field leaves the chart.
SigmaRun sigma_evolve(const SigmaInitialData& init, const SigmaEvolveOptions& opt);

/// Binary layout: uint64 sites, uint64 components, then sites * components
/// float64 little-endian, site-major.
void write_sigma_dump(std::ostream& os, const Eigen::MatrixXd& phi);
Eigen::MatrixXd read_sigma_dump(std::istream& is);

}  // namespace exospin
