"""Independent reference values frozen into the C++ tests.

Everything here is plain brute force in numpy / mpmath, written without
looking at the library code paths. Rerun to reproduce the constants:

    python3 tests/oracles/reference_values.py
"""

import itertools

import mpmath as mp
import numpy as np

mp.mp.dps = 40


def states(n, values):
    return [np.array(s, dtype=float) for s in itertools.product(values, repeat=n)]


def canonical_energy(w, h, s):
    n = len(s)
    return -(s @ w @ s) / (2 * n) - h * s.sum()


def exact(w, h, temperature, values=(-1.0, 1.0)):
    n = w.shape[0]
    beta = mp.mpf(1) / temperature
    z = mp.mpf(0)
    m1 = mp.mpf(0)
    m2 = mp.mpf(0)
    for s in states(n, values):
        weight = mp.exp(-beta * mp.mpf(canonical_energy(w, h, s)))
        m = mp.mpf(s.sum()) / n
        z += weight
        m1 += weight * m
        m2 += weight * m * m
    m1 /= z
    m2 /= z
    return {
        "log_z": mp.log(z),
        "free_energy_per_unit": -temperature * mp.log(z) / n,
        "magnetization": m1,
        "susceptibility": beta * n * (m2 - m1 * m1),
    }


def bipartite_log_z_unnormalized(w, temperature):
    beta = mp.mpf(1) / temperature
    na, nb = w.shape
    z = mp.mpf(0)
    for u in states(na, (-1.0, 1.0)):
        for v in states(nb, (-1.0, 1.0)):
            z += mp.exp(-beta * mp.mpf(u @ w @ v))
    return mp.log(z)


def second_order_log_z(w, temperature):
    # ln prod_j 2 cosh(beta x_j) ~ n_b ln 2 + (beta^2 / 2) x.x with x = u w
    beta = mp.mpf(1) / temperature
    na, nb = w.shape
    wp = w @ w.T
    z = mp.mpf(0)
    for u in states(na, (-1.0, 1.0)):
        z += mp.exp(beta**2 / 2 * mp.mpf(u @ wp @ u))
    return nb * mp.log(2) + mp.log(z)


def show(name, x):
    print(f"{name} = {mp.nstr(x, 17)}")


W3 = np.array([[0.3, -1.2, 0.5], [0.7, 0.1, -0.4], [-0.9, 1.1, 0.2]])
H3 = 0.15
T3 = 0.8

WB = np.array([[0.4, -0.8, 0.3], [1.1, 0.2, -0.5], [-0.6, 0.9, 0.7]])

WS = np.array(
    [
        [1.0, 0.4, -0.2, 0.3, 0.1, 0.5],
        [0.4, 0.8, 0.6, -0.1, 0.2, 0.0],
        [-0.2, 0.6, 1.2, 0.4, -0.3, 0.2],
        [0.3, -0.1, 0.4, 0.9, 0.5, 0.1],
        [0.1, 0.2, -0.3, 0.5, 0.7, 0.6],
        [0.5, 0.0, 0.2, 0.1, 0.6, 1.1],
    ]
)

if __name__ == "__main__":
    print("# pm1 n=3 system W3, h=0.15, T=0.8")
    for k, v in exact(W3, H3, T3).items():
        show(f"pm_{k}", v)
    print("# 01 n=3 system W3, h=0.15, T=0.8")
    for k, v in exact(W3, H3, T3, values=(0.0, 1.0)).items():
        show(f"zo_{k}", v)
    print("# constant J=1, n=10, h=0, T=2")
    show("chi_n10_T2", exact(np.ones((10, 10)), 0.0, 2.0)["susceptibility"])
    print("# constant J=1, n=2, h=0, T=1")
    show("log_z_n2", exact(np.ones((2, 2)), 0.0, 1.0)["log_z"])
    print("# root of m = tanh(2 m)")
    show("m_T05", mp.findroot(lambda m: m - mp.tanh(2 * m), 0.9))
    print("# root of m = tanh((m + 0.1) / 1.5)")
    show("m_T15_h01", mp.findroot(lambda m: m - mp.tanh((m + 0.1) / 1.5), 0.3))
    print("# lambda_max(WS) / 6")
    show("tc_ws", max(np.linalg.eigvalsh(WS)) / 6)
    print("# bipartite WB, Unnormalized form, T=1: defect of the second-order reduction")
    xs, ys = [], []
    for s in (0.2, 0.1, 0.05, 0.025):
        d = abs(bipartite_log_z_unnormalized(s * WB, 1.0) - second_order_log_z(s * WB, 1.0))
        show(f"defect_{s}", d)
        xs.append(float(mp.log(s)))
        ys.append(float(mp.log(d)))
    print(f"slope = {np.polyfit(xs, ys, 1)[0]:.6f}")
    show("log_z_1x1", bipartite_log_z_unnormalized(np.array([[1.0]]), 1.0))
