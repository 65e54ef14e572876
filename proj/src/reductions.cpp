#include "wcw/reductions.hpp"

#include "wcw/error.hpp"
#include "wcw/regression.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace wcw {

std::pair<WeightedSystem, double> pm_system_with_fields(const Eigen::MatrixXd& w, const std::vector<double>& fields) {
  const double mean = std::accumulate(fields.begin(), fields.end(), 0.0) / static_cast<double>(fields.size());
  bool uniform = true;
  for (double f : fields) uniform = uniform && std::abs(f - mean) <= 1e-15 * std::max(1.0, std::abs(mean));
  if (uniform) return {WeightedSystem(w, mean, UnitKind::PlusMinusOne), 0.0};
  return {absorb_fields(w, fields), -std::log(2.0)};
}

UnitTransform zero_one_to_pm(const WeightedSystem& system, const Thermodynamics& thermo) {
  if (system.kind() != UnitKind::ZeroOne) {
    throw Error(ErrorKind::Precondition, "zero_one_to_pm expects a 0/1 system");
  }
  const int n = system.n();
  const double nd = n;
  const auto& w = system.w();
  const Eigen::VectorXd rows = w.rowwise().sum();
  const Eigen::VectorXd cols = w.colwise().sum().transpose();

  std::vector<double> fields(n);
  for (int i = 0; i < n; ++i) fields[i] = -(rows[i] + cols[i]) / (8.0 * nd) - system.h() / 2.0;
  const double offset = -w.sum() / (8.0 * nd) - nd * system.h() / 2.0;

  auto [target, correction] = pm_system_with_fields(w / 4.0, fields);
  const bool extended = target.n() != n;
  return UnitTransform{std::move(target), std::move(fields), -thermo.beta() * offset + correction, offset,
                       extended, thermo.temperature()};
}

EffectiveCoupling effective_coupling(const Eigen::MatrixXd& w) {
  Eigen::MatrixXd wp = w * w.transpose();
  // Symmetric by construction; remove rounding asymmetry from the product.
  wp = 0.5 * (wp + wp.transpose()).eval();
  return {std::move(wp)};
}

ReducedSystem bipartite_reduce(const BipartiteSystem& system, BipartiteForm form, const Thermodynamics& thermo) {
  const int na = system.n_a();
  const int nb = system.n_b();
  const double beta = thermo.beta();
  EffectiveCoupling coupling = effective_coupling(system.w);

  double scale = 0.0;
  double log_constant = 0.0;
  std::vector<double> fields(na, 0.0);
  std::ostringstream note;

  if (form == BipartiteForm::Unnormalized) {
    // ln 2cosh(beta x) = ln 2 + beta^2 x^2 / 2 + O(x^4)
    scale = na * beta;
    log_constant = nb * std::log(2.0);
    note << "W = n_a*beta*w' with w' = w w^T; ln Z_b ~= n_b*ln2 + ln Z(W, h=0)";
  } else {
    // ln 2cosh(beta (y + h)) = ln 2cosh(beta h) + beta t y + beta^2 (1 - t^2) y^2 / 2 + O(y^3),
    // y_j = (w^T a)_j / (2N), t = tanh(beta h), N = n_a + n_b.
    const double big_n = na + nb;
    const double t = std::tanh(beta * system.h);
    scale = na * beta * (1.0 - t * t) / (4.0 * big_n * big_n);
    const double bh = std::abs(beta * system.h);
    log_constant = nb * (bh + std::log1p(std::exp(-2.0 * bh)));
    const Eigen::VectorXd rows = system.w.rowwise().sum();
    for (int i = 0; i < na; ++i) fields[i] = t * rows[i] / (2.0 * big_n);
    note << "W = n_a*beta*(1-tanh^2(beta h))/(4N^2)*w' with w' = w w^T, N = n_a+n_b; "
            "field_i = tanh(beta h)*rowsum_i/(2N); ln Z_b ~= n_b*ln(2cosh(beta h)) + ln Z(W, field)";
  }

  auto [reduced, correction] = pm_system_with_fields(scale * coupling.w_prime, fields);
  const bool extended = reduced.n() != na;
  if (extended) note << "; field absorbed into clamped unit 0 (ln 2 removed from log_constant)";
  return ReducedSystem{std::move(reduced), std::move(coupling), scale, log_constant + correction, form,
                       thermo.temperature(), extended, note.str()};
}

ReductionErrorReport reduction_error(const BipartiteSystem& system, const std::vector<double>& scales,
                                     BipartiteForm form, const Thermodynamics& thermo) {
  const int units = system.n_a() + system.n_b();
  if (units > kMaxReductionUnits) {
    throw Error(ErrorKind::Capacity, "bipartite system too large for reduction error enumeration",
                {{"n", static_cast<long long>(units)}, {"limit", static_cast<long long>(kMaxReductionUnits)}});
  }
  ReductionErrorReport report;
  std::vector<double> xs;
  std::vector<double> ys;
  for (double s : scales) {
    if (!(s > 0.0)) throw Error(ErrorKind::Precondition, "scales must be positive", {{"scale", s}});
    const BipartiteSystem scaled(s * system.w, system.h);
    const double f_b = -thermo.temperature() * exact_observables_bipartite(scaled, thermo, form).log_z;
    const ReducedSystem reduced = bipartite_reduce(scaled, form, thermo);
    const double f_r = -thermo.temperature() * (exact_observables(reduced.system, thermo).log_z + reduced.log_constant);
    const double defect = std::abs(f_b - f_r);
    report.rows.push_back({s, defect});
    if (defect > 0.0) {
      xs.push_back(std::log(s));
      ys.push_back(std::log(defect));
    }
  }
  report.slope = xs.size() >= 2 ? ordinary_least_squares(xs, ys).slope
                                : std::numeric_limits<double>::quiet_NaN();
  return report;
}

}  // namespace wcw
