#pragma once

// Mean-field solution of weighted Curie-Weiss systems:
//   V_i = tanh(beta * (sum_k w_ik V_k / n + h))
// with the susceptibility from the linearization
//   (I - (beta/n) diag(1 - V^2) w) dV/dh = beta (1 - V^2).

#include "wcw/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wcw {

enum class InitPreset { Zero, Positive, Random };

struct MeanFieldOptions {
  double damping = 0.5;
  double tol = 1e-10;
  int max_iter = 100000;
  InitPreset init = InitPreset::Zero;
  std::uint64_t seed = 0;
  // Overrides the preset when set; must have length n.
  std::optional<Eigen::VectorXd> init_vector;
};

struct MeanFieldState {
  Eigen::VectorXd v;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Initial vector for a preset: zeros, all +0.5, or uniform in (-1, 1) drawn
// from mt19937_64(seed).
Eigen::VectorXd initial_vector(int n, InitPreset preset, std::uint64_t seed);

// max_i |v_i - tanh(beta (w v / n + h)_i)|
double self_consistency_residual(const WeightedSystem& system, const Thermodynamics& thermo,
                                 const Eigen::VectorXd& v);

MeanFieldState solve_mean_field(const WeightedSystem& system, const Thermodynamics& thermo,
                                const MeanFieldOptions& options = {});

// F = (1/(2n^2)) sum w_ij V_i V_j - (T/n) sum_i ln cosh(beta (sum_j w_ij V_j / n + h)),
// state-count constants dropped.
double mean_field_free_energy(const WeightedSystem& system, const Thermodynamics& thermo,
                              const MeanFieldState& state);

double magnetization(const MeanFieldState& state);

struct SusceptibilityResult {
  Eigen::VectorXd dv_dh;
  double chi = 0.0;
  double min_eigen_gap = 0.0;  // smallest-magnitude eigenvalue of the system matrix
};

// Below this |gap| the linear system is treated as singular.
inline constexpr double kSingularGap = 1e-12;

SusceptibilityResult susceptibility(const WeightedSystem& system, const Thermodynamics& thermo,
                                    const MeanFieldState& state);

// Smallest eigenvalue (real part for non-symmetric couplings) of
// I - (beta/n) diag(1 - v^2) w. Negative once the state is unstable.
double stability_gap(const WeightedSystem& system, const Thermodynamics& thermo, const Eigen::VectorXd& v);

struct CriticalPoint {
  double t_c = 0.0;
  std::pair<double, double> bracket;
  double residual_gap = 0.0;
};

CriticalPoint find_critical_temperature(const WeightedSystem& system, std::pair<double, double> t_range,
                                        double tol = 1e-6, const MeanFieldOptions& options = {});

enum class RowStatus { Ok, NotConverged, Diverged, Singular };

const char* to_string(RowStatus status);

struct SweepRow {
  double temperature = 0.0;
  double m = 0.0;
  double chi = 0.0;
  double free_energy = 0.0;
  RowStatus status = RowStatus::Ok;
};

struct SweepOptions {
  MeanFieldOptions solver;
  bool warm_start = true;
  unsigned threads = 0;  // used only without warm starts
};

// Temperatures must be sorted descending when warm starting. A warm start that
// sits on the paramagnetic point (all |v_i| <= 1e-8) is re-seeded from the solver preset,
// so a positive preset tracks the ordered branch through T_c at h = 0.
std::vector<SweepRow> sweep(const WeightedSystem& system, const std::vector<double>& t_grid, double h,
                            const SweepOptions& options = {});

enum class ScalingForm {
  PurePowerLaw,           // ln y = ln A + p ln|t|
  LeadingCorrection,      // ln y = ln A + p ln|t| + c |t|
};

struct ScalingFit {
  double exponent = 0.0;
  double amplitude = 0.0;
  double correction = 0.0;
  double decades = 0.0;
  int points = 0;
};

// Log-log least squares of y against |t| = |T/t_c - 1|.
ScalingFit fit_scaling(const std::vector<double>& t_reduced_abs, const std::vector<double>& y,
                       ScalingForm form = ScalingForm::LeadingCorrection, double min_decades = 1.0);

struct CriticalExponents {
  double beta_exp = 0.0;
  double gamma_exp = 0.0;  // chi ~ |t|^(-gamma_exp)
  double amp_m = 0.0;
  double amp_chi = 0.0;
  ScalingFit order_fit;
  ScalingFit chi_fit;
};

ScalingFit order_parameter_scaling(const std::vector<SweepRow>& rows, double t_c,
                                   ScalingForm form = ScalingForm::LeadingCorrection);
ScalingFit susceptibility_scaling(const std::vector<SweepRow>& rows, double t_c,
                                  ScalingForm form = ScalingForm::LeadingCorrection);

CriticalExponents extract_exponents(const std::vector<SweepRow>& rows, double t_c,
                                    ScalingForm form = ScalingForm::LeadingCorrection);

}  // namespace wcw
