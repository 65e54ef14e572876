#include "wcw/monte_carlo.hpp"

#include "wcw/error.hpp"
#include "wcw/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>

namespace wcw {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t chain_seed(std::uint64_t seed, std::uint64_t chain) {
  return splitmix64(seed + chain * 0x9E3779B97F4A7C15ull);
}

void validate(const McConfig& cfg) {
  if (cfg.n_chains < 1) {
    throw Error(ErrorKind::Config, "n_chains must be >= 1", {{"n_chains", static_cast<long long>(cfg.n_chains)}});
  }
  if (cfg.n_sweeps < 1) {
    throw Error(ErrorKind::Config, "n_sweeps must be >= 1", {{"n_sweeps", static_cast<long long>(cfg.n_sweeps)}});
  }
  if (cfg.burn_in < 0 || cfg.burn_in >= cfg.n_sweeps) {
    throw Error(ErrorKind::Config, "burn_in must satisfy 0 <= burn_in < n_sweeps",
                {{"burn_in", static_cast<long long>(cfg.burn_in)},
                 {"n_sweeps", static_cast<long long>(cfg.n_sweeps)}});
  }
  if (cfg.thinning < 1) {
    throw Error(ErrorKind::Config, "thinning must be >= 1", {{"thinning", static_cast<long long>(cfg.thinning)}});
  }
}

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

struct ChainResult {
  double m_mean = 0.0;
  double chi = 0.0;
  long long samples = 0;
};

ChainResult run_chain(const WeightedSystem& system, const Eigen::MatrixXd& sym, double beta, const McConfig& cfg,
                      int chain, const SampleVisitor* visitor) {
  const int n = system.n();
  const double nd = n;
  const auto& w = system.w();
  const double h = system.h();
  std::mt19937_64 rng(chain_seed(cfg.seed, static_cast<std::uint64_t>(chain)));

  std::vector<int> s(n);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) {
    s[i] = (rng() >> 63) ? 1 : -1;
    x[i] = s[i];
  }
  Eigen::VectorXd g = sym * x;
  double e = energy(w, h, std::span<const double>(x.data(), n));
  double m_total = x.sum();

  double sum = 0.0;
  double sum_sq = 0.0;
  long long samples = 0;
  long long attempts = 0;

  for (int sweep = 0; sweep < cfg.n_sweeps; ++sweep) {
    for (int step = 0; step < n; ++step) {
      const int k = std::min(n - 1, static_cast<int>(uniform01(rng) * nd));
      const double delta = -2.0 * s[k];
      const double de = -(delta * g[k] + w(k, k) * delta * delta) / (2.0 * nd) - h * delta;
      const double u = uniform01(rng);
      if (de <= 0.0 || u < std::exp(-beta * de)) {
        s[k] = -s[k];
        x[k] = s[k];
        g += delta * sym.col(k);
        e += de;
        m_total += delta;
      }
      ++attempts;
      if (cfg.energy_check_interval > 0 && attempts % cfg.energy_check_interval == 0) {
        const double full = energy(w, h, std::span<const double>(x.data(), n));
        if (std::abs(full - e) > 1e-10 * std::max(1.0, std::abs(full))) {
          throw Error(ErrorKind::Divergence, "incremental energy drifted from full evaluation",
                      {{"incremental", e}, {"full", full}, {"attempt", attempts}});
        }
      }
    }
    if (sweep >= cfg.burn_in && (sweep - cfg.burn_in) % cfg.thinning == 0) {
      const double m = m_total / nd;
      sum += m;
      sum_sq += m * m;
      ++samples;
      if (visitor) (*visitor)(chain, s);
    }
  }

  ChainResult out;
  out.samples = samples;
  out.m_mean = sum / samples;
  out.chi = beta * nd * std::max(0.0, sum_sq / samples - out.m_mean * out.m_mean);
  return out;
}

std::pair<double, double> mean_and_stderr(const std::vector<double>& xs) {
  const double c = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double v : xs) mean += v;
  mean /= c;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : xs) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (c - 1.0) / c)};
}

McEstimate run(const WeightedSystem& system, const Thermodynamics& thermo, const McConfig& cfg,
               const SampleVisitor* visitor) {
  if (system.kind() != UnitKind::PlusMinusOne) {
    throw Error(ErrorKind::Precondition, "Metropolis sampler requires +-1 units");
  }
  validate(cfg);
  const Eigen::MatrixXd sym = system.w() + system.w().transpose();

  std::vector<ChainResult> chains(cfg.n_chains);
  auto task = [&](std::size_t c) {
    chains[c] = run_chain(system, sym, thermo.beta(), cfg, static_cast<int>(c), visitor);
  };
  if (visitor) {
    for (std::size_t c = 0; c < chains.size(); ++c) task(c);
  } else {
    parallel_for(chains.size(), cfg.threads, task);
  }

  std::vector<double> ms;
  std::vector<double> chis;
  for (const auto& c : chains) {
    ms.push_back(c.m_mean);
    chis.push_back(c.chi);
  }
  McEstimate est;
  std::tie(est.m_mean, est.m_err) = mean_and_stderr(ms);
  std::tie(est.chi_est, est.chi_err) = mean_and_stderr(chis);
  est.n_chains = cfg.n_chains;
  est.samples_per_chain = chains.front().samples;
  return est;
}

}  // namespace

McEstimate metropolis_run(const WeightedSystem& system, const Thermodynamics& thermo, const McConfig& cfg) {
  return run(system, thermo, cfg, nullptr);
}

McEstimate metropolis_run(const WeightedSystem& system, const Thermodynamics& thermo, const McConfig& cfg,
                          const SampleVisitor& visitor) {
  return run(system, thermo, cfg, &visitor);
}

ChiScan chi_peak_scan(const WeightedSystem& system, const std::vector<double>& t_grid, const McConfig& cfg) {
  if (t_grid.empty()) throw Error(ErrorKind::Precondition, "temperature grid must be nonempty");
  ChiScan scan;
  for (double t : t_grid) {
    const McEstimate est = metropolis_run(system, Thermodynamics(t), cfg);
    scan.rows.push_back({t, est.chi_est, est.chi_err});
  }
  for (std::size_t i = 1; i < scan.rows.size(); ++i) {
    if (scan.rows[i].chi_est > scan.rows[scan.peak_index].chi_est) scan.peak_index = i;
  }
  scan.peak_temperature = scan.rows[scan.peak_index].temperature;
  const auto [lo, hi] = std::minmax_element(t_grid.begin(), t_grid.end());
  scan.peak_is_interior = scan.peak_temperature > *lo && scan.peak_temperature < *hi;
  return scan;
}

}  // namespace wcw
