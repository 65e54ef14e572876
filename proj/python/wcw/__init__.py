"""Weighted Curie-Weiss models: exact, mean-field and Monte Carlo solvers."""

from ._core import (
    BipartiteSystem,
    WcwError,
    WeightedSystem,
    bipartite_reduce,
    critical_temperature,
    exact,
    exact_bipartite,
    exact_susceptibility_fd,
    fit_observations,
    fit_rank_counts,
    grow,
    mean_field,
    metropolis,
    pattern_frequencies,
    reduction_error,
    susceptibility,
    sweep,
    zero_one_to_pm,
)

__version__ = "0.1.0"

__all__ = [
    "BipartiteSystem",
    "WcwError",
    "WeightedSystem",
    "bipartite_reduce",
    "critical_temperature",
    "exact",
    "exact_bipartite",
    "exact_susceptibility_fd",
    "fit_observations",
    "fit_rank_counts",
    "grow",
    "mean_field",
    "metropolis",
    "pattern_frequencies",
    "reduction_error",
    "susceptibility",
    "sweep",
    "zero_one_to_pm",
]
