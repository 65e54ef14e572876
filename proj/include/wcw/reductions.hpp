#pragma once

// Exact and first-order mappings between system families.
//
// zero_one_to_pm: substituting a = (1 - u)/2 into the 0/1 Hamiltonian
//   H01(a) = -(1/(2n)) a^T w a - h sum a
// gives, with r = row sums and c = column sums of w and S = sum_ij w_ij,
//   H01 = -(1/(2n)) u^T (w/4) u - sum_i f_i u_i + E0,
//   f_i = -(r_i + c_i)/(8n) - h/2,   E0 = -S/(8n) - n h/2.
// so ln Z01 = -beta E0 + ln Z_pm(w/4, f). Non-uniform f is carried by an
// extended system with a clamped unit; summing that unit over both signs
// doubles Z, which log_constant compensates with -ln 2.
//
// bipartite_reduce: summing out the b-layer gives
//   sum_v exp(-beta H_b) = prod_j 2 cosh(beta (x_j + h_eff)),
// which to second order in w is a fully connected +-1 system on the a-layer
// with coupling proportional to w' = w w^T.

#include "wcw/exact.hpp"
#include "wcw/model.hpp"

#include <string>
#include <vector>

namespace wcw {

struct UnitTransform {
  WeightedSystem target_system;       // kind PlusMinusOne
  std::vector<double> shifted_field;  // per-unit f_i of the +-1 Hamiltonian
  double log_constant = 0.0;          // ln Z01 = log_constant + ln Z(target_system)
  double energy_offset = 0.0;         // E0
  bool extended = false;              // target carries an extra clamped unit
  double temperature = 1.0;
};

UnitTransform zero_one_to_pm(const WeightedSystem& system, const Thermodynamics& thermo = Thermodynamics(1.0));

// Builds the +-1 system for given coupling and per-unit field: uniform fields
// stay a scalar h, anything else goes through absorb_fields. Returns the
// correction to add to its ln Z (0 or -ln 2).
std::pair<WeightedSystem, double> pm_system_with_fields(const Eigen::MatrixXd& w, const std::vector<double>& fields);

struct EffectiveCoupling {
  Eigen::MatrixXd w_prime;  // w w^T
};

EffectiveCoupling effective_coupling(const Eigen::MatrixXd& w);

struct ReducedSystem {
  WeightedSystem system;      // fully connected a-layer (+ clamped unit if extended)
  EffectiveCoupling coupling;
  double coupling_scale = 0.0;  // system coupling = coupling_scale * w' (a-layer block)
  double log_constant = 0.0;    // ln Z_b ~ log_constant + ln Z(system)
  BipartiteForm form = BipartiteForm::Unnormalized;
  double temperature = 1.0;
  bool extended = false;
  std::string normalization;  // human-readable mapping, emitted as metadata
};

ReducedSystem bipartite_reduce(const BipartiteSystem& system, BipartiteForm form = BipartiteForm::Unnormalized,
                               const Thermodynamics& thermo = Thermodynamics(1.0));

inline constexpr int kMaxReductionUnits = 20;

struct ReductionErrorRow {
  double scale = 0.0;
  double defect = 0.0;  // |F_b(s w) - F_reduced(s w)|
};

struct ReductionErrorReport {
  std::vector<ReductionErrorRow> rows;
  double slope = 0.0;  // log-log slope of defect against scale
};

ReductionErrorReport reduction_error(const BipartiteSystem& system, const std::vector<double>& scales,
                                     BipartiteForm form = BipartiteForm::Unnormalized,
                                     const Thermodynamics& thermo = Thermodynamics(1.0));

}  // namespace wcw
