#include "wcw/model.hpp"

#include "wcw/error.hpp"

#include <cmath>

namespace wcw {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::NotConverged: return "not_converged";
    case ErrorKind::Singular: return "criticality_singular";
    case ErrorKind::NotFound: return "not_found";
    case ErrorKind::InsufficientRange: return "insufficient_range";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
    case ErrorKind::Format: return "format";
  }
  return "unknown";
}

const char* to_string(UnitKind kind) {
  return kind == UnitKind::PlusMinusOne ? "pm1" : "01";
}

const char* to_string(BipartiteForm form) {
  return form == BipartiteForm::Canonical ? "canonical" : "unnormalized";
}

namespace {

void require_finite(const Eigen::MatrixXd& w) {
  if (!w.allFinite()) {
    throw Error(ErrorKind::Domain, "coupling matrix has non-finite entries");
  }
}

}  // namespace

WeightedSystem::WeightedSystem(Eigen::MatrixXd w, double h, UnitKind kind)
    : w_(std::move(w)), h_(h), kind_(kind) {
  if (w_.rows() < 1 || w_.rows() != w_.cols()) {
    throw Error(ErrorKind::Dimension, "coupling matrix must be square with n >= 1",
                {{"rows", static_cast<long long>(w_.rows())},
                 {"cols", static_cast<long long>(w_.cols())}});
  }
  require_finite(w_);
  if (!std::isfinite(h_)) throw Error(ErrorKind::Domain, "field h must be finite");
}

WeightedSystem WeightedSystem::constant_coupling(int n, double j, double h, UnitKind kind) {
  if (n < 1) throw Error(ErrorKind::Dimension, "n must be >= 1", {{"n", static_cast<long long>(n)}});
  return {Eigen::MatrixXd::Constant(n, n, j), h, kind};
}

BipartiteSystem::BipartiteSystem(Eigen::MatrixXd w_in, double h_in) : w(std::move(w_in)), h(h_in) {
  if (w.rows() < 1 || w.cols() < 1) {
    throw Error(ErrorKind::Dimension, "bipartite weight matrix must be at least 1x1",
                {{"n_a", static_cast<long long>(w.rows())}, {"n_b", static_cast<long long>(w.cols())}});
  }
  require_finite(w);
  if (!std::isfinite(h)) throw Error(ErrorKind::Domain, "field h must be finite");
}

Thermodynamics::Thermodynamics(double temperature) : temperature_(temperature), beta_(1.0 / temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorKind::Domain, "temperature must be positive and finite",
                {{"temperature", temperature}});
  }
}

Thermodynamics Thermodynamics::from_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorKind::Domain, "beta must be positive and finite", {{"beta", beta}});
  }
  Thermodynamics t(1.0 / beta);
  t.beta_ = beta;
  return t;
}

void validate_state(const SpinState& state, int n, UnitKind kind) {
  if (state.size() != n) {
    throw Error(ErrorKind::Dimension, "state length does not match system size",
                {{"state_length", static_cast<long long>(state.size())},
                 {"system_n", static_cast<long long>(n)}});
  }
  for (int i = 0; i < n; ++i) {
    const int v = state.values[i];
    const bool ok = kind == UnitKind::PlusMinusOne ? (v == 1 || v == -1) : (v == 0 || v == 1);
    if (!ok) {
      throw Error(ErrorKind::Domain, "state entry outside the unit domain",
                  {{"index", static_cast<long long>(i)}, {"value", static_cast<long long>(v)},
                   {"kind", std::string(to_string(kind))}});
    }
  }
}

double energy(const Eigen::MatrixXd& w, double h, std::span<const double> x) {
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
  const double n = static_cast<double>(w.rows());
  return -v.dot(w * v) / (2.0 * n) - h * v.sum();
}

double energy(const WeightedSystem& system, const SpinState& state) {
  validate_state(state, system.n(), system.kind());
  std::vector<double> x(state.values.begin(), state.values.end());
  return energy(system.w(), system.h(), x);
}

WeightedSystem absorb_fields(const Eigen::MatrixXd& w, std::span<const double> fields) {
  const auto n = w.rows();
  if (static_cast<Eigen::Index>(fields.size()) != n) {
    throw Error(ErrorKind::Dimension, "field vector length does not match system size",
                {{"fields", static_cast<long long>(fields.size())}, {"system_n", static_cast<long long>(n)}});
  }
  const double nd = static_cast<double>(n);
  Eigen::MatrixXd ext = Eigen::MatrixXd::Zero(n + 1, n + 1);
  // 1/(2(n+1)) normalization of the extended system is undone here.
  ext.bottomRightCorner(n, n) = w * ((nd + 1.0) / nd);
  for (Eigen::Index i = 0; i < n; ++i) {
    ext(0, i + 1) = (nd + 1.0) * fields[i];
    ext(i + 1, 0) = (nd + 1.0) * fields[i];
  }
  return {std::move(ext), 0.0, UnitKind::PlusMinusOne};
}

WeightedSystem absorb_field(const WeightedSystem& system) {
  if (system.kind() != UnitKind::PlusMinusOne) {
    throw Error(ErrorKind::Precondition, "absorb_field requires +-1 units; map 0/1 systems first");
  }
  const std::vector<double> fields(system.n(), system.h());
  return absorb_fields(system.w(), fields);
}

double energy_bipartite(const BipartiteSystem& system, const SpinState& a, const SpinState& b,
                        BipartiteForm form) {
  validate_state(a, system.n_a(), UnitKind::PlusMinusOne);
  validate_state(b, system.n_b(), UnitKind::PlusMinusOne);
  Eigen::VectorXd va(system.n_a());
  Eigen::VectorXd vb(system.n_b());
  for (int i = 0; i < system.n_a(); ++i) va[i] = a.values[i];
  for (int j = 0; j < system.n_b(); ++j) vb[j] = b.values[j];
  const double coupling = va.dot(system.w * vb);
  if (form == BipartiteForm::Unnormalized) return coupling;
  const double big_n = static_cast<double>(system.n_a() + system.n_b());
  return -coupling / (2.0 * big_n) - system.h * vb.sum();
}

}  // namespace wcw
