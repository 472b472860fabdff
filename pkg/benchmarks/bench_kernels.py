#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy fallbacks.

Builds a corpus of random (pattern, segment) crossing problems and hardcore
thinning problems, checks that both backends return identical results, then
times each path. Run from the repository root:

    python3 benchmarks/bench_kernels.py [--cases 400] [--repeat 3]
"""

import argparse
import math
import time

import numpy as np

from hocount import linear_trajectory
from hocount._kernels import (
    hcp_survivors_nb,
    hcp_survivors_py,
    walk_segments_nb,
    walk_segments_py,
)
from hocount.harness import rng_for_trial
from hocount.pointprocess import sample_ppp_rng
from hocount.traversal import safe_window_for


def build_walk_corpus(n_cases, master=20_250):
    corpus = []
    for i in range(n_cases):
        rng = rng_for_trial(master, i)
        lam = 400.0 + 1200.0 * rng.random()
        d = (1.0 + 5.0 * rng.random()) / math.sqrt(lam)
        traj = linear_trajectory(d / 12.0, 12.0, (0.0, 0.0), rng.random() * 7.0)
        pat = sample_ppp_rng(lam, safe_window_for(traj, lam), rng)
        corpus.append((np.ascontiguousarray(pat.points[:, 0]),
                       np.ascontiguousarray(pat.points[:, 1]),
                       traj.x, traj.y))
    return corpus


def build_hcp_corpus(n_cases, master=20_251):
    corpus = []
    for i in range(n_cases):
        rng = rng_for_trial(master, i)
        n = 300 + int(900 * rng.random())
        corpus.append((rng.random(n), rng.random(n), rng.random(n),
                       (0.015 + 0.03 * rng.random()) ** 2))
    return corpus


def run_walk(kernel, corpus):
    total = 0
    out = np.zeros(1, dtype=np.int64)
    for xs, ys, wx, wy in corpus:
        kernel(xs, ys, wx, wy, out)
        total += int(out[0])
    return total


def run_hcp(kernel, corpus):
    total = 0
    for xs, ys, marks, r2 in corpus:
        keep = np.empty(xs.shape[0], dtype=np.bool_)
        kernel(xs, ys, marks, r2, keep)
        total += int(keep.sum())
    return total


def best_time(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cases", type=int, default=400)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if walk_segments_nb is None:
        raise SystemExit("numba backend unavailable; nothing to compare")

    walk_corpus = build_walk_corpus(args.cases)
    hcp_corpus = build_hcp_corpus(max(args.cases // 4, 20))

    # warm-up also triggers jit compilation
    assert run_walk(walk_segments_nb, walk_corpus) == run_walk(walk_segments_py, walk_corpus)
    assert run_hcp(hcp_survivors_nb, hcp_corpus) == run_hcp(hcp_survivors_py, hcp_corpus)
    print(f"outputs identical over {len(walk_corpus)} walk cases "
          f"and {len(hcp_corpus)} thinning cases\n")

    rows = [
        ("crossing walk", lambda: run_walk(walk_segments_nb, walk_corpus),
         lambda: run_walk(walk_segments_py, walk_corpus), len(walk_corpus)),
        ("hcp thinning", lambda: run_hcp(hcp_survivors_nb, hcp_corpus),
         lambda: run_hcp(hcp_survivors_py, hcp_corpus), len(hcp_corpus)),
    ]
    print(f"{'kernel':<16} {'numba':>12} {'numpy':>12} {'speedup':>9}")
    print("-" * 51)
    for name, nb, py, n in rows:
        t_nb = best_time(nb, args.repeat)
        t_py = best_time(py, args.repeat)
        print(f"{name:<16} {t_nb / n * 1e6:>9.1f} us {t_py / n * 1e6:>9.1f} us "
              f"{t_py / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
