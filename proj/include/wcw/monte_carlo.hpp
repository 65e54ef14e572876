#pragma once

// Single-flip Metropolis sampling of exp(-H/T).
//
// Random streams: chain c of a run with seed s draws from
// std::mt19937_64(splitmix64(s + c * 0x9E3779B97F4A7C15)). Uniform doubles are
// (x >> 11) * 2^-53. Both mappings are fixed; changing them changes every
// golden output.

#include "wcw/model.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace wcw {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t chain_seed(std::uint64_t seed, std::uint64_t chain);

struct McConfig {
  std::uint64_t seed = 12345;
  int n_sweeps = 10000;  // total, burn-in included
  int burn_in = 1000;
  int n_chains = 8;
  int thinning = 1;
  unsigned threads = 0;
  // When > 0, the incrementally tracked energy is compared with a full
  // re-evaluation every this many attempted flips.
  long long energy_check_interval = 0;
};

void validate(const McConfig& cfg);

struct McEstimate {
  double m_mean = 0.0;
  double m_err = 0.0;
  double chi_est = 0.0;
  double chi_err = 0.0;
  int n_chains = 0;
  long long samples_per_chain = 0;
};

// Per-chain fluctuation estimates beta n (<m^2> - <m>^2) are averaged over
// chains; errors are standard errors across chains (zero for a single chain).
McEstimate metropolis_run(const WeightedSystem& system, const Thermodynamics& thermo, const McConfig& cfg);

// Called once per recorded sample with the current chain state. Used by the
// detailed-balance tests; runs chains sequentially.
using SampleVisitor = std::function<void(int chain, const std::vector<int>& state)>;
McEstimate metropolis_run(const WeightedSystem& system, const Thermodynamics& thermo, const McConfig& cfg,
                          const SampleVisitor& visitor);

struct ChiScanRow {
  double temperature = 0.0;
  double chi_est = 0.0;
  double chi_err = 0.0;
};

struct ChiScan {
  std::vector<ChiScanRow> rows;
  double peak_temperature = 0.0;
  std::size_t peak_index = 0;
  bool peak_is_interior = false;
};

ChiScan chi_peak_scan(const WeightedSystem& system, const std::vector<double>& t_grid, const McConfig& cfg);

}  // namespace wcw
