"""Regenerates the synthetic activation-trace fixtures.

powerlaw_traces.csv / .ntrc: 16 nodes, 200 distinct firing patterns, pattern k
repeated round(3000 * k^-1.5) times. Active nodes carry positive values,
inactive nodes exactly 0.

flat_traces.csv: 16 nodes, 64 distinct patterns, each repeated 90..110 times.

    python3 tests/fixtures/make_traces.py
"""

import pathlib
import struct

import numpy as np

HERE = pathlib.Path(__file__).resolve().parent
NODES = 16


def distinct_patterns(rng, count):
    chosen = rng.choice(np.arange(1, 2**NODES), size=count, replace=False)
    return [[(int(p) >> i) & 1 for i in range(NODES)] for p in chosen]


def expand(rng, patterns, counts):
    rows = []
    for pattern, c in zip(patterns, counts):
        for _ in range(int(c)):
            rows.append([round(float(rng.uniform(0.05, 2.0)), 3) if bit else 0.0 for bit in pattern])
    order = rng.permutation(len(rows))
    return [rows[i] for i in order]


def write_csv(path, rows):
    with open(path, "w", newline="\n") as f:
        f.write(",".join(f"node_{i}" for i in range(NODES)) + "\n")
        for r in rows:
            f.write(",".join(repr(v) if v else "0" for v in r) + "\n")


def write_ntrc(path, rows):
    with open(path, "wb") as f:
        f.write(b"NTRC")
        f.write(struct.pack("<III", 1, len(rows), NODES))
        for r in rows:
            f.write(struct.pack(f"<{NODES}f", *r))


def main():
    rng = np.random.default_rng(20240611)
    ks = np.arange(1, 201)
    power_rows = expand(rng, distinct_patterns(rng, len(ks)), np.round(3000.0 * ks**-1.5))
    write_csv(HERE / "powerlaw_traces.csv", power_rows)
    write_ntrc(HERE / "powerlaw_traces.ntrc", power_rows)

    flat_counts = rng.integers(90, 111, size=64)
    write_csv(HERE / "flat_traces.csv", expand(rng, distinct_patterns(rng, 64), flat_counts))


if __name__ == "__main__":
    main()
