"""Time each kernel under both backends.

Run ``python3 benchmarks/bench_kernels.py``. Numba kernels are called once
before timing so compilation is excluded.
"""

from __future__ import annotations

import argparse
import random
import timeit

import numpy as np

from lllkit import kernels
from lllkit._accel import HAVE_NUMBA
from lllkit.latin import IntMatrix, build_latin_events
from lllkit.solver import AvoidanceProblem


def _random_tables(rng, k, m, n):
    fwd = np.zeros((k, m), dtype=np.int64)
    inv = np.zeros((k, n), dtype=np.int64)
    for a in range(k):
        r = rng.randint(1, 3)
        for u, v in zip(rng.sample(range(m), r), rng.sample(range(n), r)):
            fwd[a, u] = v + 1
            inv[a, v] = u + 1
    return fwd, inv


def cases():
    rng = random.Random(0)
    outcomes = kernels.enumerate_injections_np(8, 8)
    dom = np.array([0, 3, 5], dtype=np.int64)
    img = np.array([2, 7, 1], dtype=np.int64)
    masks = np.random.default_rng(0).random((14, outcomes.shape[0])) < 0.3
    counts = np.random.default_rng(1).integers(0, 100, size=1 << 18)
    fwd, inv = _random_tables(rng, 600, 12, 12)
    # the even cyclic square has no transversal, so every step of the budget runs
    cyclic = IntMatrix(np.add.outer(np.arange(8), np.arange(8)) % 8)
    problem = AvoidanceProblem(8, 8, build_latin_events(cyclic).matchings)
    offsets, sdom, simg = problem.packed()
    return {
        "enumerate_injections(8, 8)": lambda impl: impl(8, 8),
        "extension_mask(40320 rows)": lambda impl: impl(outcomes, dom, img),
        "event_codes(14 x 40320)": lambda impl: impl(masks),
        "subset_sums(2^18)": lambda impl: impl(counts),
        "conflict_matrix(600 matchings)": lambda impl: impl(fwd, inv),
        "search(cyclic 8x8, 5 x 2000 steps)": lambda impl: impl(8, 8, offsets, sdom, simg, 0, 5, 2000, False),
    }


KERNELS = {
    "enumerate_injections(8, 8)": "enumerate_injections",
    "extension_mask(40320 rows)": "extension_mask",
    "event_codes(14 x 40320)": "event_codes",
    "subset_sums(2^18)": "subset_sums",
    "conflict_matrix(600 matchings)": "conflict_matrix",
    "search(cyclic 8x8, 5 x 2000 steps)": "search",
}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    print(f"{'kernel':40} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for label, run in cases().items():
        base = KERNELS[label]
        np_impl = getattr(kernels, f"{base}_np")
        row = [min(timeit.repeat(lambda: run(np_impl), number=1, repeat=args.repeat)) * 1e3]
        if HAVE_NUMBA:
            nb_impl = getattr(kernels, f"{base}_nb")
            run(nb_impl)
            row.append(min(timeit.repeat(lambda: run(nb_impl), number=1, repeat=args.repeat)) * 1e3)
            print(f"{label:40} {row[0]:10.2f} {row[1]:10.2f} {row[0] / row[1]:7.1f}x")
        else:
            print(f"{label:40} {row[0]:10.2f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
