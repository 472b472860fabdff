"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The backend is picked once at import time from the HOCOUNT_BACKEND environment
variable: "auto" (default, numba when importable), "numba" (required) or
"numpy". Both paths evaluate the same IEEE expressions in the same order, so
they produce identical counts; benchmarks/bench_kernels.py compares them.
"""

from __future__ import annotations

import os

import numpy as np


def _walk_segments_py(xs, ys, wx, wy, seg_counts):
    """Count nearest-site identity changes along a polyline, per segment.

    Bisector walk: hold the current nearest site, solve for the smallest
    segment parameter at which any other site becomes strictly nearer (the
    crossing of the pair's perpendicular bisector), advance and repeat. The
    current site carries across segments so a multi-segment path is counted
    as one continuous trip. Ties pick the smallest site index.
    """
    n = xs.shape[0]
    idx = np.arange(n)
    d2 = (xs - wx[0]) ** 2 + (ys - wy[0]) ** 2
    cur = int(np.argmin(d2))
    nseg = wx.shape[0] - 1
    for s in range(nseg):
        ax = wx[s]
        ay = wy[s]
        ux = wx[s + 1] - ax
        uy = wy[s + 1] - ay
        count = 0
        t = 0.0
        while True:
            dxj = xs - xs[cur]
            dyj = ys - ys[cur]
            g = ux * dxj + uy * dyj
            mx = 0.5 * (xs + xs[cur]) - ax
            my = 0.5 * (ys + ys[cur]) - ay
            with np.errstate(divide="ignore", invalid="ignore"):
                tj = (mx * dxj + my * dyj) / g
            valid = (g > 0.0) & (tj > t) & (idx != cur)
            tj = np.where(valid, tj, np.inf)
            jbest = int(np.argmin(tj))
            tbest = tj[jbest]
            if not tbest <= 1.0:
                break
            cur = jbest
            count += 1
            t = float(tbest)
        seg_counts[s] = count
    return seg_counts


def _hcp_survivors_py(xs, ys, marks, r2, keep):
    """Dependent thinning mask: a point dies if a lower-marked point sits closer
    than the hardcore distance (equal marks resolved by lower index)."""
    n = xs.shape[0]
    idx = np.arange(n)
    block = 512  # bound the pairwise matrices to ~n*block
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        dx = xs[None, :] - xs[lo:hi, None]
        dy = ys[None, :] - ys[lo:hi, None]
        close = dx * dx + dy * dy < r2
        beats = (marks[None, :] < marks[lo:hi, None]) | (
            (marks[None, :] == marks[lo:hi, None]) & (idx[None, :] < idx[lo:hi, None])
        )
        dead = close & beats
        dead[idx[lo:hi] - lo, idx[lo:hi]] = False
        keep[lo:hi] = ~np.any(dead, axis=1)
    return keep


def _make_numba_kernels():
    from numba import njit

    @njit(cache=True, nogil=True)
    def walk_segments(xs, ys, wx, wy, seg_counts):
        n = xs.shape[0]
        best = (xs[0] - wx[0]) ** 2 + (ys[0] - wy[0]) ** 2
        cur = 0
        for j in range(1, n):
            d2 = (xs[j] - wx[0]) ** 2 + (ys[j] - wy[0]) ** 2
            if d2 < best:
                best = d2
                cur = j
        nseg = wx.shape[0] - 1
        for s in range(nseg):
            ax = wx[s]
            ay = wy[s]
            ux = wx[s + 1] - ax
            uy = wy[s + 1] - ay
            count = 0
            t = 0.0
            while True:
                tbest = np.inf
                jbest = -1
                for j in range(n):
                    if j == cur:
                        continue
                    dxj = xs[j] - xs[cur]
                    dyj = ys[j] - ys[cur]
                    g = ux * dxj + uy * dyj
                    if g <= 0.0:
                        continue
                    mx = 0.5 * (xs[j] + xs[cur]) - ax
                    my = 0.5 * (ys[j] + ys[cur]) - ay
                    tj = (mx * dxj + my * dyj) / g
                    if tj > t and tj < tbest:
                        tbest = tj
                        jbest = j
                if jbest < 0 or not tbest <= 1.0:
                    break
                cur = jbest
                count += 1
                t = tbest
            seg_counts[s] = count
        return seg_counts

    @njit(cache=True, nogil=True)
    def hcp_survivors(xs, ys, marks, r2, keep):
        n = xs.shape[0]
        for i in range(n):
            alive = True
            for j in range(n):
                if j == i:
                    continue
                dx = xs[j] - xs[i]
                dy = ys[j] - ys[i]
                if dx * dx + dy * dy < r2:
                    if marks[j] < marks[i] or (marks[j] == marks[i] and j < i):
                        alive = False
                        break
            keep[i] = alive
        return keep

    return walk_segments, hcp_survivors


def _select_backend():
    choice = os.environ.get("HOCOUNT_BACKEND", "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"HOCOUNT_BACKEND must be auto, numba or numpy, got {choice!r}")
    if choice == "numpy":
        return "numpy", None
    try:
        kernels = _make_numba_kernels()
    except ImportError:
        if choice == "numba":
            raise
        return "numpy", None
    return "numba", kernels


BACKEND, _nb = _select_backend()

if _nb is not None:
    walk_segments_nb, hcp_survivors_nb = _nb
    walk_segments = walk_segments_nb
    hcp_survivors = hcp_survivors_nb
else:
    walk_segments_nb = None
    hcp_survivors_nb = None
    walk_segments = _walk_segments_py
    hcp_survivors = _hcp_survivors_py

walk_segments_py = _walk_segments_py
hcp_survivors_py = _hcp_survivors_py


def backend_name() -> str:
    return BACKEND
