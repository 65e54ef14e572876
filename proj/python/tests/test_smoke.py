import math

import numpy as np
import pytest

import wcw

W3 = np.array([[0.3, -1.2, 0.5], [0.7, 0.1, -0.4], [-0.9, 1.1, 0.2]])


def test_exact_two_units():
    s = wcw.WeightedSystem.constant_coupling(2, 1.0)
    assert wcw.exact(s, 1.0)["log_z"] == pytest.approx(math.log(2 * math.e + 2), rel=1e-14)


def test_exact_matches_frozen_reference():
    obs = wcw.exact(wcw.WeightedSystem(W3, 0.15), 0.8)
    assert obs["log_z"] == pytest.approx(2.2755187341440897, rel=1e-12)
    assert obs["magnetization"] == pytest.approx(0.17810117123502759, rel=1e-10)
    assert obs["susceptibility"] == pytest.approx(1.1631174222570838, rel=1e-10)


def test_fluctuation_matches_finite_difference():
    s = wcw.WeightedSystem(W3, 0.15)
    assert wcw.exact_susceptibility_fd(s, 0.8) == pytest.approx(wcw.exact(s, 0.8)["susceptibility"], abs=1e-6)


def test_mean_field_and_critical_temperature():
    s = wcw.WeightedSystem.constant_coupling(4, 2.0)
    assert wcw.critical_temperature(s, 0.1, 5.0)["t_c"] == pytest.approx(2.0, abs=1e-3)
    st = wcw.mean_field(s, 1.0, init="positive")
    assert st["converged"]
    m = st["m"]
    assert m == pytest.approx(math.tanh(2.0 * m), abs=1e-9)
    assert wcw.susceptibility(s, 3.0)["chi"] == pytest.approx(1.0 / (3.0 - 2.0), rel=1e-8)


def test_sweep_rows():
    rows = wcw.sweep(wcw.WeightedSystem.constant_coupling(2, 1.0), [1.5, 0.5])
    assert [r["status"] for r in rows] == ["ok", "ok"]
    assert rows[0]["m"] == pytest.approx(0.0, abs=1e-8)
    assert rows[1]["m"] == pytest.approx(0.95750402407726874, rel=1e-8)


def test_metropolis_is_deterministic_and_close():
    s = wcw.WeightedSystem.constant_coupling(10, 1.0)
    a = wcw.metropolis(s, 2.0, sweeps=4000, burn_in=400, chains=8)
    b = wcw.metropolis(s, 2.0, sweeps=4000, burn_in=400, chains=8, threads=1)
    assert a == b
    assert abs(a["chi_est"] - 0.85732187141027525) <= 4 * a["chi_err"]


def test_zero_one_transform_preserves_partition_function():
    s = wcw.WeightedSystem(W3, 0.15, kind="01")
    tr = wcw.zero_one_to_pm(s, 0.8)
    mapped = tr["log_constant"] + wcw.exact(tr["target_system"], 0.8)["log_z"]
    assert mapped == pytest.approx(2.4321555275593374, rel=1e-12)


def test_bipartite_reduction_error_is_quartic():
    b = wcw.BipartiteSystem(np.array([[0.4, -0.8, 0.3], [1.1, 0.2, -0.5], [-0.6, 0.9, 0.7]]))
    rep = wcw.reduction_error(b, [0.01, 0.02, 0.05, 0.1])
    assert 3.7 <= rep["slope"] <= 4.3
    red = wcw.bipartite_reduce(b)
    np.testing.assert_allclose(red["w_prime"], b.w @ b.w.T)


def test_power_law_fits():
    counts = [round(1e10 * r ** -2.0) for r in range(1, 1001)]
    fit = wcw.fit_rank_counts(counts)
    assert fit["verdict"] == "PowerLaw"
    assert fit["exponent"] == pytest.approx(-2.0, abs=0.05)
    assert wcw.fit_rank_counts(counts[:5])["verdict"] == "InsufficientData"


def test_pattern_frequencies():
    traces = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 2.0]])
    assert wcw.pattern_frequencies(traces) == [2, 1]


def test_growth():
    g = wcw.grow(n=200, m0=3, m=2, seed=7)
    assert sum(g["degrees"]) == 2 * len(g["edges"])
    assert g == wcw.grow(n=200, m0=3, m=2, seed=7)


def test_errors_carry_kind_and_details():
    with pytest.raises(wcw.WcwError) as info:
        wcw.WeightedSystem(np.ones((2, 3)))
    assert info.value.kind == "dimension"
    with pytest.raises(wcw.WcwError) as info:
        wcw.exact(wcw.WeightedSystem.constant_coupling(25, 1.0), 1.0)
    assert info.value.kind == "capacity"
    assert info.value.details["limit"] == 24
