#include "wcw/error.hpp"
#include "wcw/exact.hpp"
#include "wcw/monte_carlo.hpp"

#include "../support/test_support.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <doctest.h>

#include <cmath>
#include <map>

using namespace wcw;

namespace {

McConfig quick(int sweeps, int burn_in, int chains) {
  McConfig c;
  c.n_sweeps = sweeps;
  c.burn_in = burn_in;
  c.n_chains = chains;
  return c;
}

}  // namespace

TEST_CASE("seed mapping") {
  // First output of the reference SplitMix64 generator seeded with 0.
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFull);
  CHECK(chain_seed(7, 0) == splitmix64(7));
  CHECK(chain_seed(7, 1) != chain_seed(7, 0));
}

TEST_CASE("free spins") {
  const auto s = WeightedSystem::constant_coupling(64, 0.0);
  const auto est = metropolis_run(s, Thermodynamics(1.0), quick(3000, 300, 8));
  CHECK(std::abs(est.m_mean) <= 3.0 * est.m_err);
  CHECK(std::abs(est.chi_est - 1.0) <= 3.0 * est.chi_err);
  CHECK(est.m_err > 0.0);
  CHECK(est.samples_per_chain == 2700);
}

TEST_CASE("constant coupling matches enumeration") {
  const auto s = WeightedSystem::constant_coupling(10, 1.0);
  const auto est = metropolis_run(s, Thermodynamics(2.0), quick(20000, 1000, 16));
  CHECK(std::abs(est.chi_est - 0.85732187141027525) <= 3.0 * est.chi_err);
  CHECK(std::abs(est.m_mean) <= 3.0 * est.m_err);
}

TEST_CASE("low temperature saturates") {
  const auto s = WeightedSystem::constant_coupling(64, 1.0, 0.01);
  const auto est = metropolis_run(s, Thermodynamics(0.05), quick(500, 100, 8));
  CHECK(std::abs(est.m_mean - 1.0) <= 3.0 * est.m_err + 1e-12);
}

TEST_CASE("configuration checks") {
  const auto s = WeightedSystem::constant_coupling(4, 1.0);
  const Thermodynamics t(1.0);
  auto expect_config = [&](const McConfig& c) {
    try {
      metropolis_run(s, t, c);
      FAIL("expected a config error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Config);
    }
  };
  expect_config(quick(100, 10, 0));
  expect_config(quick(0, 0, 2));
  expect_config(quick(100, 100, 2));
  McConfig thin = quick(100, 10, 2);
  thin.thinning = 0;
  expect_config(thin);
  CHECK_THROWS_AS(metropolis_run(WeightedSystem(Eigen::MatrixXd::Ones(2, 2), 0.0, UnitKind::ZeroOne), t,
                                 quick(100, 10, 2)),
                  Error);
}

TEST_CASE("runs are reproducible and independent of the thread count") {
  std::mt19937_64 rng(41);
  const WeightedSystem s(test::random_matrix(rng, 12, 12, -1.0, 2.0), 0.1);
  McConfig c = quick(800, 100, 6);
  c.seed = 2024;
  c.threads = 1;
  const auto a = metropolis_run(s, Thermodynamics(1.2), c);
  c.threads = 3;
  const auto b = metropolis_run(s, Thermodynamics(1.2), c);
  CHECK(a.m_mean == b.m_mean);
  CHECK(a.m_err == b.m_err);
  CHECK(a.chi_est == b.chi_est);
  CHECK(a.chi_err == b.chi_err);
  c.seed = 2025;
  CHECK(metropolis_run(s, Thermodynamics(1.2), c).chi_est != a.chi_est);
}

TEST_CASE("incremental energy stays consistent with full evaluation") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = test::random_int(rng, 2, 30);
    const WeightedSystem s(test::random_matrix(rng, n, n, -2.0, 2.0), test::random_real(rng, -1.0, 1.0));
    McConfig c = quick(2000, 10, 2);
    c.energy_check_interval = 10000;
    CHECK_NOTHROW(metropolis_run(s, Thermodynamics(test::random_real(rng, 0.3, 2.0)), c));
  }
}

TEST_CASE("sampled states follow the Boltzmann distribution") {
  std::mt19937_64 rng(43);
  const int n = 4;
  const WeightedSystem s(test::random_matrix(rng, n, n, -1.5, 1.5), 0.3);
  const Thermodynamics t(1.0);

  std::map<std::uint64_t, long long> counts;
  McConfig c = quick(40000, 1000, 8);
  c.thinning = 10;
  c.seed = 7;
  metropolis_run(s, t, c, [&](int, const std::vector<int>& state) {
    std::uint64_t key = 0;
    for (int i = 0; i < n; ++i) key |= static_cast<std::uint64_t>(state[i] > 0) << i;
    ++counts[key];
  });
  long long total = 0;
  for (const auto& [k, v] : counts) total += v;

  const double log_z = exact_observables(s, t).log_z;
  double stat = 0.0;
  for (std::uint64_t b = 0; b < 16; ++b) {
    const auto x = test::unit_values(b, n, UnitKind::PlusMinusOne);
    const double p = std::exp(-t.beta() * energy(s.w(), s.h(), x) - log_z);
    const double expected = p * static_cast<double>(total);
    const double diff = static_cast<double>(counts[b]) - expected;
    stat += diff * diff / expected;
  }
  const boost::math::chi_squared dist(15.0);
  CHECK(stat < boost::math::quantile(dist, 0.999));
}

TEST_CASE("susceptibility peak of a large constant-coupling system") {
  const auto s = WeightedSystem::constant_coupling(512, 1.0);
  McConfig c = quick(1200, 200, 4);
  const auto scan = chi_peak_scan(s, {0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3}, c);
  REQUIRE(scan.rows.size() == 7);
  CHECK(std::abs(scan.peak_temperature - 1.0) <= 0.1 + 1e-12);
  CHECK(scan.peak_is_interior);
}

TEST_CASE("free spins have no interior peak") {
  const auto s = WeightedSystem::constant_coupling(32, 0.0);
  const auto scan = chi_peak_scan(s, {0.5, 1.0, 2.0, 4.0}, quick(1500, 100, 8));
  for (std::size_t i = 1; i < scan.rows.size(); ++i) CHECK(scan.rows[i].chi_est < scan.rows[i - 1].chi_est);
  CHECK(scan.peak_temperature == 0.5);
  CHECK_FALSE(scan.peak_is_interior);

  const auto single = chi_peak_scan(s, {1.0}, quick(200, 10, 2));
  CHECK(single.rows.size() == 1);
  CHECK_THROWS_AS(chi_peak_scan(s, {}, quick(200, 10, 2)), Error);
}
