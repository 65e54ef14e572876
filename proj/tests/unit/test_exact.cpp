#include "wcw/error.hpp"
#include "wcw/exact.hpp"

#include "../support/test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace wcw;

TEST_CASE("free spin") {
  const auto obs = exact_observables(WeightedSystem::constant_coupling(1, 0.0), Thermodynamics(1.0));
  CHECK(obs.log_z == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(obs.magnetization == 0.0);
  CHECK(obs.susceptibility == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("two coupled spins") {
  const auto obs = exact_observables(WeightedSystem::constant_coupling(2, 1.0), Thermodynamics(1.0));
  CHECK(obs.log_z == doctest::Approx(std::log(2.0 * std::exp(1.0) + 2.0)).epsilon(1e-15));
  CHECK(std::exp(obs.log_z) == doctest::Approx(7.436564).epsilon(1e-7));
  CHECK(obs.free_energy_per_unit == doctest::Approx(-1.0032044340390841).epsilon(1e-14));
}

TEST_CASE("frozen reference values for a three-unit system") {
  const Eigen::MatrixXd w{{0.3, -1.2, 0.5}, {0.7, 0.1, -0.4}, {-0.9, 1.1, 0.2}};
  const Thermodynamics t(0.8);
  const auto pm = exact_observables(WeightedSystem(w, 0.15), t);
  CHECK(pm.log_z == doctest::Approx(2.2755187341440897).epsilon(1e-13));
  CHECK(pm.free_energy_per_unit == doctest::Approx(-0.60680499577175729).epsilon(1e-13));
  CHECK(pm.magnetization == doctest::Approx(0.17810117123502759).epsilon(1e-12));
  CHECK(pm.susceptibility == doctest::Approx(1.1631174222570838).epsilon(1e-12));

  const auto zo = exact_observables(WeightedSystem(w, 0.15, UnitKind::ZeroOne), t);
  CHECK(zo.log_z == doctest::Approx(2.4321555275593374).epsilon(1e-13));
  CHECK(zo.magnetization == doctest::Approx(0.55347180749373645).epsilon(1e-12));
  CHECK(zo.susceptibility == doctest::Approx(0.3062967204633524).epsilon(1e-12));
}

TEST_CASE("magnetization vanishes at zero field") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = test::random_int(rng, 1, 12);
    const WeightedSystem s(test::random_matrix(rng, n, n, -2.0, 2.0), 0.0);
    CHECK(std::abs(exact_observables(s, Thermodynamics(test::random_real(rng, 0.3, 3.0))).magnetization) <= 1e-13);
  }
}

TEST_CASE("observable invariants") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = test::random_int(rng, 1, 10);
    const auto kind = trial % 2 ? UnitKind::ZeroOne : UnitKind::PlusMinusOne;
    const WeightedSystem s(test::random_matrix(rng, n, n, -2.0, 2.0), test::random_real(rng, -1.0, 1.0), kind);
    const Thermodynamics t(test::random_real(rng, 0.2, 3.0));
    const auto obs = exact_observables(s, t);
    CHECK(obs.free_energy_per_unit == -t.temperature() * obs.log_z / n);
    CHECK(std::abs(obs.magnetization) <= 1.0);
    CHECK(obs.susceptibility >= 0.0);
  }
}

TEST_CASE("low temperature does not overflow") {
  const auto obs = exact_observables(WeightedSystem::constant_coupling(12, 5.0, 0.1), Thermodynamics(1e-3));
  CHECK(std::isfinite(obs.log_z));
  CHECK(obs.magnetization == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("incremental enumeration matches naive re-evaluation for n <= 12") {
  std::mt19937_64 rng(23);
  for (int n = 1; n <= 12; ++n) {
    for (auto kind : {UnitKind::PlusMinusOne, UnitKind::ZeroOne}) {
      const WeightedSystem s(test::random_matrix(rng, n, n, -2.0, 2.0), test::random_real(rng, -1.0, 1.0), kind);
      const Thermodynamics t(test::random_real(rng, 0.3, 2.0));
      const auto fast = exact_observables(s, t);
      const auto slow = exact_observables_naive(s, t);
      CHECK(fast.log_z == doctest::Approx(slow.log_z).epsilon(1e-12));
      CHECK(fast.magnetization == doctest::Approx(slow.magnetization).epsilon(1e-10));
      CHECK(fast.susceptibility == doctest::Approx(slow.susceptibility).epsilon(1e-9));
    }
  }
}

TEST_CASE("enumeration agrees with an independent long-double sum") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = test::random_int(rng, 1, 10);
    const auto kind = trial % 3 == 0 ? UnitKind::ZeroOne : UnitKind::PlusMinusOne;
    const Eigen::MatrixXd w = test::random_matrix(rng, n, n, -2.0, 2.0);
    const double h = test::random_real(rng, -1.0, 1.0);
    const double temperature = test::random_real(rng, 0.2, 3.0);
    const auto obs = exact_observables(WeightedSystem(w, h, kind), Thermodynamics(temperature));
    const auto ref = test::brute_force(w, h, temperature, kind);
    CHECK(test::rel_diff(obs.log_z, static_cast<double>(ref.log_z)) <= 1e-12);
    CHECK(std::abs(obs.magnetization - static_cast<double>(ref.magnetization)) <= 1e-11);
    CHECK(std::abs(obs.susceptibility - static_cast<double>(ref.susceptibility)) <= 1e-9);
  }
}

TEST_CASE("results do not depend on the thread count") {
  std::mt19937_64 rng(25);
  const WeightedSystem s(test::random_matrix(rng, 18, 18, -1.0, 1.0), 0.2);
  const Thermodynamics t(0.9);
  ExactOptions one;
  one.threads = 1;
  ExactOptions four;
  four.threads = 4;
  const auto a = exact_observables(s, t, one);
  const auto b = exact_observables(s, t, four);
  CHECK(a.log_z == b.log_z);
  CHECK(a.magnetization == b.magnetization);
  CHECK(a.susceptibility == b.susceptibility);
}

TEST_CASE("finite-difference susceptibility") {
  const auto free_spin = WeightedSystem::constant_coupling(1, 0.0);
  CHECK(std::abs(exact_susceptibility_fd(free_spin, Thermodynamics(1.0), 1e-4) - 1.0) <= 1e-6);

  const auto cw = WeightedSystem::constant_coupling(2, 1.0);
  const Thermodynamics t2(2.0);
  CHECK(std::abs(exact_susceptibility_fd(cw, t2, 1e-4) - exact_observables(cw, t2).susceptibility) <= 1e-6);

  try {
    exact_susceptibility_fd(cw, t2, 0.0);
    FAIL("expected a precondition error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
}

TEST_CASE("fluctuation and finite-difference susceptibility agree on 100 random systems") {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = test::random_int(rng, 1, 10);
    const WeightedSystem s(test::random_matrix(rng, n, n, -2.0, 2.0), test::random_real(rng, -1.0, 1.0));
    const Thermodynamics t(test::random_real(rng, 0.5, 3.0));
    const double fluct = exact_observables(s, t).susceptibility;
    const double fd = exact_susceptibility_fd(s, t, 1e-4);
    CHECK(std::abs(fluct - fd) <= 1e-6 * std::max(1.0, fluct));
  }
}

TEST_CASE("log Z is invariant under relabeling units") {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = test::random_int(rng, 2, 10);
    const Eigen::MatrixXd w = test::random_matrix(rng, n, n, -2.0, 2.0);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::MatrixXd p(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) p(i, j) = w(perm[i], perm[j]);
    }
    const double h = test::random_real(rng, -1.0, 1.0);
    const Thermodynamics t(1.3);
    CHECK(exact_observables(WeightedSystem(w, h), t).log_z ==
          doctest::Approx(exact_observables(WeightedSystem(p, h), t).log_z).epsilon(1e-13));
  }
}

TEST_CASE("constant coupling susceptibility stays finite at every temperature") {
  const auto cw = WeightedSystem::constant_coupling(10, 1.0);
  for (double t : {0.2, 0.5, 0.9, 1.0, 1.1, 2.0, 5.0}) {
    const double chi = exact_observables(cw, Thermodynamics(t)).susceptibility;
    CHECK(std::isfinite(chi));
    CHECK(chi > 0.0);
  }
  CHECK(exact_observables(cw, Thermodynamics(2.0)).susceptibility ==
        doctest::Approx(0.85732187141027525).epsilon(1e-12));
}

TEST_CASE("capacity limit") {
  const auto big = WeightedSystem::constant_coupling(kMaxEnumerationUnits + 1, 1.0);
  try {
    exact_observables(big, Thermodynamics(1.0));
    FAIL("expected a capacity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Capacity);
    CHECK(std::get<long long>(e.details().at("limit")) == kMaxEnumerationUnits);
  }
}

TEST_CASE("bipartite enumeration") {
  const Thermodynamics t(1.0);
  const BipartiteSystem zero(Eigen::MatrixXd::Zero(2, 2), 0.0);
  CHECK(exact_observables_bipartite(zero, t).log_z == doctest::Approx(std::log(16.0)).epsilon(1e-15));

  const BipartiteSystem one(Eigen::MatrixXd::Ones(1, 1), 0.0);
  const double z = 2.0 * std::exp(1.0) + 2.0 * std::exp(-1.0);
  CHECK(std::exp(exact_observables_bipartite(one, t).log_z) == doctest::Approx(z).epsilon(1e-14));
  CHECK(z == doctest::Approx(6.172).epsilon(1e-3));
  CHECK(exact_observables_bipartite(one, t).log_z == doctest::Approx(1.8200751916029178).epsilon(1e-14));

  std::mt19937_64 rng(28);
  const Eigen::MatrixXd w = test::random_matrix(rng, 3, 4, -1.0, 1.0);
  double previous = exact_observables_bipartite(BipartiteSystem(w, 0.0), t).free_energy_per_unit;
  const double free = -std::log(2.0);
  for (double s : {0.5, 0.1, 0.01, 0.001}) {
    const double f = exact_observables_bipartite(BipartiteSystem(s * w, 0.0), t).free_energy_per_unit;
    CHECK(std::abs(f - free) <= std::abs(previous - free) + 1e-15);
    previous = f;
  }
  CHECK(std::abs(previous - free) <= 1e-6);
}

TEST_CASE("canonical bipartite form matches a direct sum") {
  std::mt19937_64 rng(29);
  const Eigen::MatrixXd w = test::random_matrix(rng, 3, 2, -2.0, 2.0);
  const BipartiteSystem s(w, 0.3);
  const Thermodynamics t(0.7);
  double z = 0.0;
  for (std::uint64_t a = 0; a < 8; ++a) {
    for (std::uint64_t b = 0; b < 4; ++b) {
      SpinState sa{{}};
      SpinState sb{{}};
      for (int i = 0; i < 3; ++i) sa.values.push_back((a >> i) & 1 ? 1 : -1);
      for (int j = 0; j < 2; ++j) sb.values.push_back((b >> j) & 1 ? 1 : -1);
      z += std::exp(-t.beta() * energy_bipartite(s, sa, sb, BipartiteForm::Canonical));
    }
  }
  CHECK(exact_observables_bipartite(s, t, BipartiteForm::Canonical).log_z == doctest::Approx(std::log(z)).epsilon(1e-13));
}
