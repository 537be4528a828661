"""Time the numba-compiled kernels against their pure-Python originals.

    python benchmarks/bench_kernels.py [--instances 30] [--n 12] [--m 6]

Requires numba; with ``MESC_JIT=0`` both columns run the Python path.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from mesc import _kernels
from mesc.generators import GenSpec, random_set_system
from mesc.solvers import _SCORE_TOL, _candidates, split_light_heavy


def _prepare(args):
    jobs = []
    for seed in range(args.instances):
        system = random_set_system(GenSpec(args.n, args.m, args.target_f, seed))
        light = split_light_heavy(system, 0.5).light
        mask = [u + 1 in light for u in range(system.n)]
        indptr, cand = _candidates(system)
        jobs.append(
            (
                (system.membership(), system.sizes, np.array(mask)),
                (indptr, cand, system.n, system.m, _kernels.xlogx_table(system.n), 10**9, _SCORE_TOL),
            )
        )
    return jobs


def _time(fn, arglists, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for a in arglists:
            fn(*a)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=30)
    ap.add_argument("--n", type=int, default=12)
    ap.add_argument("--m", type=int, default=6)
    ap.add_argument("--target-f", type=float, default=2.5)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    jobs = _prepare(args)
    print(f"jit enabled: {_kernels.JIT_ENABLED}")
    print(f"{'kernel':<14}{'python s':>12}{'jit s':>12}{'speedup':>10}")
    for k, (name, jit_fn) in enumerate(
        [("biased_greedy", _kernels.biased_greedy_kernel), ("bnb_search", _kernels.bnb_search_kernel)]
    ):
        arglists = [job[k] for job in jobs]
        jit_fn(*arglists[0])  # compile outside the timing
        t_py = _time(_kernels.PY_KERNELS[name], arglists, args.repeat)
        t_jit = _time(jit_fn, arglists, args.repeat)
        print(f"{name:<14}{t_py:>12.4f}{t_jit:>12.4f}{t_py / t_jit:>10.1f}x")


if __name__ == "__main__":
    main()
