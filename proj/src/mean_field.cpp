#include "wcw/mean_field.hpp"

#include "wcw/error.hpp"
#include "wcw/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace wcw {
namespace {

const double kMaxActivation = std::nextafter(1.0, 0.0);

Eigen::VectorXd mean_field_map(const WeightedSystem& system, double beta, const Eigen::VectorXd& v) {
  const Eigen::VectorXd local = system.w() * v / static_cast<double>(system.n());
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[i] = std::clamp(std::tanh(beta * (local[i] + system.h())), -kMaxActivation, kMaxActivation);
  }
  return out;
}

// ln cosh x without overflow.
double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

bool is_symmetric(const Eigen::MatrixXd& w) {
  return (w - w.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, w.cwiseAbs().maxCoeff());
}

// Eigenvalues of I - (beta/n) diag(1 - v^2) w. For symmetric w the matrix is
// similar to the symmetric I - (beta/n) D^(1/2) w D^(1/2), so the spectrum is real.
Eigen::VectorXcd system_spectrum(const WeightedSystem& system, double beta, const Eigen::VectorXd& v) {
  const int n = system.n();
  const Eigen::VectorXd d = (1.0 - v.array().square()).matrix();
  if (is_symmetric(system.w())) {
    const Eigen::VectorXd root = d.cwiseSqrt();
    const Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n, n) -
                              (beta / n) * root.asDiagonal() * system.w() * root.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cast<std::complex<double>>();
  }
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - (beta / n) * d.asDiagonal() * system.w();
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  return es.eigenvalues();
}

}  // namespace

const char* to_string(RowStatus status) {
  switch (status) {
    case RowStatus::Ok: return "ok";
    case RowStatus::NotConverged: return "not_converged";
    case RowStatus::Diverged: return "diverged";
    case RowStatus::Singular: return "singular";
  }
  return "unknown";
}

Eigen::VectorXd initial_vector(int n, InitPreset preset, std::uint64_t seed) {
  switch (preset) {
    case InitPreset::Zero: return Eigen::VectorXd::Zero(n);
    case InitPreset::Positive: return Eigen::VectorXd::Constant(n, 0.5);
    case InitPreset::Random: {
      std::mt19937_64 rng(seed);
      Eigen::VectorXd v(n);
      // 53-bit uniform in [0,1) mapped to [-1,1); stable across standard libraries.
      for (int i = 0; i < n; ++i) v[i] = 2.0 * ((rng() >> 11) * 0x1p-53) - 1.0;
      return v;
    }
  }
  return Eigen::VectorXd::Zero(n);
}

double self_consistency_residual(const WeightedSystem& system, const Thermodynamics& thermo,
                                 const Eigen::VectorXd& v) {
  return (v - mean_field_map(system, thermo.beta(), v)).cwiseAbs().maxCoeff();
}

MeanFieldState solve_mean_field(const WeightedSystem& system, const Thermodynamics& thermo,
                                const MeanFieldOptions& options) {
  if (system.kind() != UnitKind::PlusMinusOne) {
    throw Error(ErrorKind::Precondition, "mean-field solver requires +-1 units; map 0/1 systems first");
  }
  if (!(options.tol > 0.0)) throw Error(ErrorKind::Config, "tol must be positive", {{"tol", options.tol}});
  if (!(options.damping > 0.0 && options.damping <= 1.0)) {
    throw Error(ErrorKind::Config, "damping must lie in (0, 1]", {{"damping", options.damping}});
  }
  if (options.max_iter < 0) {
    throw Error(ErrorKind::Config, "max_iter must be non-negative",
                {{"max_iter", static_cast<long long>(options.max_iter)}});
  }

  const int n = system.n();
  Eigen::VectorXd v = options.init_vector ? *options.init_vector : initial_vector(n, options.init, options.seed);
  if (v.size() != n) {
    throw Error(ErrorKind::Dimension, "initial vector length does not match system size",
                {{"init_length", static_cast<long long>(v.size())}, {"system_n", static_cast<long long>(n)}});
  }
  v = v.cwiseMax(-kMaxActivation).cwiseMin(kMaxActivation);

  const double lambda = options.damping;
  for (int it = 0;; ++it) {
    const Eigen::VectorXd target = mean_field_map(system, thermo.beta(), v);
    const double residual = (v - target).cwiseAbs().maxCoeff();
    if (!std::isfinite(residual)) {
      throw Error(ErrorKind::Divergence, "mean-field iterate became non-finite",
                  {{"iteration", static_cast<long long>(it)}});
    }
    if (residual <= options.tol || it >= options.max_iter) {
      return {v, it, residual, residual <= options.tol};
    }
    v = (1.0 - lambda) * v + lambda * target;
  }
}

double mean_field_free_energy(const WeightedSystem& system, const Thermodynamics& thermo,
                              const MeanFieldState& state) {
  if (!state.converged) {
    throw Error(ErrorKind::NotConverged, "free energy requires a converged mean-field state",
                {{"residual", state.residual}, {"iterations", static_cast<long long>(state.iterations)}});
  }
  const double n = system.n();
  const Eigen::VectorXd local = system.w() * state.v / n;
  double lc = 0.0;
  for (Eigen::Index i = 0; i < local.size(); ++i) lc += log_cosh(thermo.beta() * (local[i] + system.h()));
  return state.v.dot(system.w() * state.v) / (2.0 * n * n) - thermo.temperature() * lc / n;
}

double magnetization(const MeanFieldState& state) {
  return state.v.size() == 0 ? 0.0 : state.v.mean();
}

double stability_gap(const WeightedSystem& system, const Thermodynamics& thermo, const Eigen::VectorXd& v) {
  const Eigen::VectorXcd spectrum = system_spectrum(system, thermo.beta(), v);
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& ev : spectrum) gap = std::min(gap, ev.real());
  return gap;
}

SusceptibilityResult susceptibility(const WeightedSystem& system, const Thermodynamics& thermo,
                                    const MeanFieldState& state) {
  if (!state.converged) {
    throw Error(ErrorKind::NotConverged, "susceptibility requires a converged mean-field state",
                {{"residual", state.residual}, {"iterations", static_cast<long long>(state.iterations)}});
  }
  const int n = system.n();
  const double beta = thermo.beta();
  const Eigen::VectorXd d = (1.0 - state.v.array().square()).matrix();

  const Eigen::VectorXcd spectrum = system_spectrum(system, beta, state.v);
  std::complex<double> smallest = spectrum[0];
  for (const auto& ev : spectrum) {
    if (std::abs(ev) < std::abs(smallest)) smallest = ev;
  }
  const double gap = smallest.real();
  if (std::abs(smallest) < kSingularGap) {
    throw Error(ErrorKind::Singular, "susceptibility system is singular at this point", {{"gap", gap}});
  }

  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - (beta / n) * d.asDiagonal() * system.w();
  SusceptibilityResult out;
  out.dv_dh = a.partialPivLu().solve(beta * d);
  out.chi = out.dv_dh.mean();
  out.min_eigen_gap = gap;
  return out;
}

CriticalPoint find_critical_temperature(const WeightedSystem& system, std::pair<double, double> t_range,
                                        double tol, const MeanFieldOptions& options) {
  if (system.h() != 0.0) {
    throw Error(ErrorKind::Precondition, "critical temperature search requires h = 0", {{"h", system.h()}});
  }
  auto [lo, hi] = t_range;
  if (!(lo > 0.0 && hi > lo)) {
    throw Error(ErrorKind::Precondition, "temperature range must be positive and ordered",
                {{"t_min", lo}, {"t_max", hi}});
  }
  if (!(tol > 0.0)) throw Error(ErrorKind::Config, "tol must be positive", {{"tol", tol}});

  MeanFieldOptions paramagnetic = options;
  paramagnetic.init = InitPreset::Zero;
  paramagnetic.init_vector.reset();
  auto gap_at = [&](double t) {
    const Thermodynamics thermo(t);
    const MeanFieldState state = solve_mean_field(system, thermo, paramagnetic);
    return stability_gap(system, thermo, state.v);
  };

  double g_lo = gap_at(lo);
  const double g_hi = gap_at(hi);
  if (g_lo == 0.0) return {lo, {lo, lo}, 0.0};
  if (g_hi == 0.0) return {hi, {hi, hi}, 0.0};
  if ((g_lo > 0.0) == (g_hi > 0.0)) {
    throw Error(ErrorKind::NotFound, "stability gap does not change sign in the temperature range",
                {{"t_min", lo}, {"t_max", hi}, {"gap_at_t_min", g_lo}, {"gap_at_t_max", g_hi}});
  }

  double mid = 0.5 * (lo + hi);
  double g_mid = gap_at(mid);
  for (int it = 0; it < 200; ++it) {
    if (g_mid == 0.0 || (hi - lo <= tol && std::abs(g_mid) <= tol)) break;
    if ((g_mid > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
    mid = 0.5 * (lo + hi);
    g_mid = gap_at(mid);
  }
  return {mid, {lo, hi}, std::abs(g_mid)};
}

// Paramagnetic solutions converge to round-off, not to exact zeros; treat them as unseeded.
constexpr double kWarmStartFloor = 1e-8;

std::vector<SweepRow> sweep(const WeightedSystem& system, const std::vector<double>& t_grid, double h,
                            const SweepOptions& options) {
  if (options.warm_start && !std::is_sorted(t_grid.begin(), t_grid.end(), std::greater<>())) {
    throw Error(ErrorKind::Precondition, "warm-started sweeps need a descending temperature grid");
  }
  const WeightedSystem at_field = system.with_field(h);
  const int n = system.n();

  auto solve_row = [&](double t, const std::optional<Eigen::VectorXd>& start, Eigen::VectorXd* last) {
    SweepRow row;
    row.temperature = t;
    MeanFieldOptions opts = options.solver;
    if (start) opts.init_vector = start;
    try {
      const Thermodynamics thermo(t);
      const MeanFieldState state = solve_mean_field(at_field, thermo, opts);
      row.m = magnetization(state);
      if (!state.converged) {
        row.status = RowStatus::NotConverged;
        row.chi = row.free_energy = std::numeric_limits<double>::quiet_NaN();
        return row;
      }
      if (last) *last = state.v;
      row.free_energy = mean_field_free_energy(at_field, thermo, state);
      try {
        row.chi = susceptibility(at_field, thermo, state).chi;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Singular) throw;
        row.status = RowStatus::Singular;
        row.chi = std::numeric_limits<double>::quiet_NaN();
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Divergence) throw;
      row.status = RowStatus::Diverged;
      row.m = row.chi = row.free_energy = std::numeric_limits<double>::quiet_NaN();
    }
    return row;
  };

  std::vector<SweepRow> rows(t_grid.size());
  if (!options.warm_start) {
    parallel_for(t_grid.size(), options.threads, [&](std::size_t i) { rows[i] = solve_row(t_grid[i], {}, nullptr); });
    return rows;
  }

  std::optional<Eigen::VectorXd> previous;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    Eigen::VectorXd last = Eigen::VectorXd::Zero(n);
    std::optional<Eigen::VectorXd> start;
    if (previous && previous->cwiseAbs().maxCoeff() > kWarmStartFloor) start = previous;
    rows[i] = solve_row(t_grid[i], start, &last);
    if (rows[i].status == RowStatus::Ok || rows[i].status == RowStatus::Singular) {
      previous = last;
    } else {
      previous.reset();
    }
  }
  return rows;
}

ScalingFit fit_scaling(const std::vector<double>& t_reduced_abs, const std::vector<double>& y, ScalingForm form,
                       double min_decades) {
  std::vector<double> ts;
  std::vector<double> ys;
  for (std::size_t i = 0; i < std::min(t_reduced_abs.size(), y.size()); ++i) {
    if (t_reduced_abs[i] > 0.0 && y[i] > 0.0 && std::isfinite(t_reduced_abs[i]) && std::isfinite(y[i])) {
      ts.push_back(t_reduced_abs[i]);
      ys.push_back(y[i]);
    }
  }
  const int columns = form == ScalingForm::LeadingCorrection ? 3 : 2;
  double decades = 0.0;
  if (!ts.empty()) {
    const auto [mn, mx] = std::minmax_element(ts.begin(), ts.end());
    decades = std::log10(*mx / *mn);
  }
  if (static_cast<int>(ts.size()) < columns + 2 || decades < min_decades) {
    throw Error(ErrorKind::InsufficientRange, "not enough reduced-temperature range for an exponent fit",
                {{"decades", decades}, {"required_decades", min_decades},
                 {"points", static_cast<long long>(ts.size())}});
  }

  const auto rows = static_cast<Eigen::Index>(ts.size());
  Eigen::MatrixXd design(rows, columns);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = std::log(ts[i]);
    if (columns == 3) design(i, 2) = ts[i];
    rhs[i] = std::log(ys[i]);
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);

  ScalingFit fit;
  fit.amplitude = std::exp(coef[0]);
  fit.exponent = coef[1];
  fit.correction = columns == 3 ? coef[2] : 0.0;
  fit.decades = decades;
  fit.points = static_cast<int>(rows);
  return fit;
}

ScalingFit order_parameter_scaling(const std::vector<SweepRow>& rows, double t_c, ScalingForm form) {
  std::vector<double> ts;
  std::vector<double> ms;
  for (const auto& r : rows) {
    if (r.status == RowStatus::Ok && r.temperature < t_c) {
      ts.push_back(1.0 - r.temperature / t_c);
      ms.push_back(std::abs(r.m));
    }
  }
  return fit_scaling(ts, ms, form);
}

ScalingFit susceptibility_scaling(const std::vector<SweepRow>& rows, double t_c, ScalingForm form) {
  std::vector<double> ts;
  std::vector<double> chis;
  for (const auto& r : rows) {
    if (r.status == RowStatus::Ok && r.temperature > t_c) {
      ts.push_back(r.temperature / t_c - 1.0);
      chis.push_back(r.chi);
    }
  }
  return fit_scaling(ts, chis, form);
}

CriticalExponents extract_exponents(const std::vector<SweepRow>& rows, double t_c, ScalingForm form) {
  if (!(t_c > 0.0)) throw Error(ErrorKind::Precondition, "t_c must be positive", {{"t_c", t_c}});
  CriticalExponents out;
  out.order_fit = order_parameter_scaling(rows, t_c, form);
  out.chi_fit = susceptibility_scaling(rows, t_c, form);
  out.beta_exp = out.order_fit.exponent;
  out.amp_m = out.order_fit.amplitude;
  out.gamma_exp = -out.chi_fit.exponent;
  out.amp_chi = out.chi_fit.amplitude;
  return out;
}

}  // namespace wcw
