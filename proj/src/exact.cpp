#include "wcw/exact.hpp"

#include "wcw/error.hpp"
#include "wcw/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace wcw {
namespace {

// Weighted moments of the total unit sum M, kept relative to the largest
// log-weight seen so far.
struct LogMoments {
  double max_log = -std::numeric_limits<double>::infinity();
  double s0 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;

  void add(double log_weight, double m) {
    if (log_weight > max_log) {
      const double scale = std::exp(max_log - log_weight);
      s0 = s0 * scale + 1.0;
      s1 = s1 * scale + m;
      s2 = s2 * scale + m * m;
      max_log = log_weight;
    } else {
      const double e = std::exp(log_weight - max_log);
      s0 += e;
      s1 += e * m;
      s2 += e * m * m;
    }
  }

  void merge(const LogMoments& other) {
    if (other.s0 == 0.0) return;
    if (other.max_log > max_log) {
      const double scale = std::exp(max_log - other.max_log);
      s0 = s0 * scale + other.s0;
      s1 = s1 * scale + other.s1;
      s2 = s2 * scale + other.s2;
      max_log = other.max_log;
    } else {
      const double scale = std::exp(other.max_log - max_log);
      s0 += other.s0 * scale;
      s1 += other.s1 * scale;
      s2 += other.s2 * scale;
    }
  }

  Observables finish(int units, int magnetized_units, const Thermodynamics& thermo) const {
    Observables out;
    out.log_z = max_log + std::log(s0);
    out.free_energy_per_unit = -thermo.temperature() * out.log_z / units;
    const double mean = s1 / s0;
    const double var = std::max(0.0, s2 / s0 - mean * mean);
    out.magnetization = mean / magnetized_units;
    out.susceptibility = thermo.beta() * var / magnetized_units;
    return out;
  }
};

constexpr int kChunkBits = 14;

void check_capacity(int units) {
  if (units > kMaxEnumerationUnits) {
    throw Error(ErrorKind::Capacity, "system too large for exact enumeration",
                {{"n", static_cast<long long>(units)},
                 {"limit", static_cast<long long>(kMaxEnumerationUnits)}});
  }
}

double unit_value(std::uint64_t bits, int i, UnitKind kind) {
  const bool up = (bits >> i) & 1u;
  if (kind == UnitKind::PlusMinusOne) return up ? 1.0 : -1.0;
  return up ? 1.0 : 0.0;
}

// Sums Gray-code indices [first, first + count) with O(n) incremental updates
// per step: flipping unit k by delta changes the energy by
//   -(1/(2n)) (delta * g_k + w_kk delta^2) - h delta,  g = (w + w^T) x.
LogMoments enumerate_chunk(const WeightedSystem& system, const Eigen::MatrixXd& sym, double beta,
                           std::uint64_t first, std::uint64_t count) {
  const int n = system.n();
  const double nd = n;
  const auto& w = system.w();
  const double h = system.h();

  const std::uint64_t gray0 = first ^ (first >> 1);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = unit_value(gray0, i, system.kind());
  Eigen::VectorXd g = sym * x;
  double e = energy(w, h, std::span<const double>(x.data(), n));
  double m = x.sum();

  LogMoments acc;
  acc.add(-beta * e, m);
  for (std::uint64_t idx = first + 1; idx < first + count; ++idx) {
    const int k = std::countr_zero(idx);
    const double delta = system.kind() == UnitKind::PlusMinusOne ? -2.0 * x[k] : 1.0 - 2.0 * x[k];
    e += -(delta * g[k] + w(k, k) * delta * delta) / (2.0 * nd) - h * delta;
    x[k] += delta;
    g += delta * sym.col(k);
    m += delta;
    acc.add(-beta * e, m);
  }
  return acc;
}

}  // namespace

Observables exact_observables(const WeightedSystem& system, const Thermodynamics& thermo,
                              const ExactOptions& options) {
  const int n = system.n();
  check_capacity(n);
  const Eigen::MatrixXd sym = system.w() + system.w().transpose();

  const std::uint64_t total = std::uint64_t{1} << n;
  const std::uint64_t chunk = std::uint64_t{1} << std::min(n, kChunkBits);
  const std::size_t n_chunks = static_cast<std::size_t>(total / chunk);

  std::vector<LogMoments> parts(n_chunks);
  parallel_for(n_chunks, options.threads, [&](std::size_t c) {
    parts[c] = enumerate_chunk(system, sym, thermo.beta(), c * chunk, chunk);
  });

  LogMoments acc;
  for (const auto& p : parts) acc.merge(p);
  return acc.finish(n, n, thermo);
}

Observables exact_observables_naive(const WeightedSystem& system, const Thermodynamics& thermo) {
  const int n = system.n();
  check_capacity(n);
  LogMoments acc;
  std::vector<double> x(n);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] = unit_value(bits, i, system.kind());
      m += x[i];
    }
    acc.add(-thermo.beta() * energy(system.w(), system.h(), x), m);
  }
  return acc.finish(n, n, thermo);
}

Observables exact_observables_bipartite(const BipartiteSystem& system, const Thermodynamics& thermo,
                                        BipartiteForm form, const ExactOptions& options) {
  const int na = system.n_a();
  const int nb = system.n_b();
  check_capacity(na + nb);
  const double big_n = na + nb;
  const double beta = thermo.beta();

  const std::size_t n_outer = std::size_t{1} << na;
  std::vector<LogMoments> parts(n_outer);
  parallel_for(n_outer, options.threads, [&](std::size_t a_bits) {
    Eigen::VectorXd a(na);
    for (int i = 0; i < na; ++i) a[i] = unit_value(a_bits, i, UnitKind::PlusMinusOne);
    // Energy is linear in b given a: E(b) = sum_j coef_j b_j.
    const Eigen::VectorXd field = system.w.transpose() * a;
    Eigen::VectorXd coef(nb);
    for (int j = 0; j < nb; ++j) {
      coef[j] = form == BipartiteForm::Unnormalized ? field[j] : -field[j] / (2.0 * big_n) - system.h;
    }
    Eigen::VectorXd b = Eigen::VectorXd::Constant(nb, -1.0);
    double e = coef.dot(b);
    double m = b.sum();
    LogMoments acc;
    acc.add(-beta * e, m);
    for (std::uint64_t idx = 1; idx < (std::uint64_t{1} << nb); ++idx) {
      const int k = std::countr_zero(idx);
      const double delta = -2.0 * b[k];
      e += coef[k] * delta;
      b[k] += delta;
      m += delta;
      acc.add(-beta * e, m);
    }
    parts[a_bits] = acc;
  });

  LogMoments acc;
  for (const auto& p : parts) acc.merge(p);
  return acc.finish(na + nb, nb, thermo);
}

double exact_susceptibility_fd(const WeightedSystem& system, const Thermodynamics& thermo, double dh,
                               const ExactOptions& options) {
  if (!(dh > 0.0) || !std::isfinite(dh)) {
    throw Error(ErrorKind::Precondition, "finite-difference step dh must be positive", {{"dh", dh}});
  }
  const double up = exact_observables(system.with_field(system.h() + dh), thermo, options).magnetization;
  const double down = exact_observables(system.with_field(system.h() - dh), thermo, options).magnetization;
  return (up - down) / (2.0 * dh);
}

}  // namespace wcw
