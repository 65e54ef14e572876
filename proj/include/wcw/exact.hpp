#pragma once

// Brute-force thermodynamics by summing every state. Deliberately dumb: the
// reference all approximate modules are checked against.

#include "wcw/model.hpp"

namespace wcw {

inline constexpr int kMaxEnumerationUnits = 24;

struct Observables {
  double log_z = 0.0;
  double free_energy_per_unit = 0.0;  // -T log_z / n
  double magnetization = 0.0;         // <(1/n) sum x_i>
  double susceptibility = 0.0;        // beta n Var(m_hat)
};

struct ExactOptions {
  unsigned threads = 0;
};

Observables exact_observables(const WeightedSystem& system, const Thermodynamics& thermo,
                              const ExactOptions& options = {});

// Magnetization and susceptibility refer to the b-layer. The normalizing n of
// the free energy is n_a + n_b.
Observables exact_observables_bipartite(const BipartiteSystem& system, const Thermodynamics& thermo,
                                        BipartiteForm form = BipartiteForm::Unnormalized,
                                        const ExactOptions& options = {});

// Central difference (m(h+dh) - m(h-dh)) / (2 dh) on exact magnetizations.
double exact_susceptibility_fd(const WeightedSystem& system, const Thermodynamics& thermo, double dh,
                               const ExactOptions& options = {});

// Reference implementation: evaluates every state from scratch. Quadratic
// cost per state; intended for validating the incremental path (n <= 12).
Observables exact_observables_naive(const WeightedSystem& system, const Thermodynamics& thermo);

}  // namespace wcw
