"""Site location generators: homogeneous PPP, Matern cluster, Matern type-II hardcore.

All generators are pure functions of (params, window, seed). Poisson counts are
drawn by CDF inversion below mean 30 and by transformed rejection (PTRS) above,
so realizations are reproducible bit-for-bit across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import hcp_survivors


@dataclass(frozen=True)
class Window:
    """Axis-aligned rectangle in km."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError(f"degenerate window {self}")

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def area(self) -> float:
        return self.width * self.height

    def dilated(self, margin: float) -> "Window":
        return Window(self.x_min - margin, self.x_max + margin,
                      self.y_min - margin, self.y_max + margin)


@dataclass(frozen=True)
class PointPattern:
    """A finite set of 2D sites inside a window."""

    points: np.ndarray  # shape (n, 2), km
    window: Window
    intensity_nominal: float

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=np.float64).reshape(-1, 2))
        object.__setattr__(self, "points", pts)
        if pts.size:
            w = self.window
            inside = (
                (pts[:, 0] >= w.x_min) & (pts[:, 0] <= w.x_max)
                & (pts[:, 1] >= w.y_min) & (pts[:, 1] <= w.y_max)
            )
            if not inside.all():
                raise ValueError("pattern contains points outside its window")

    @property
    def n(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class ClusterParams:
    """Matern cluster process: parent intensity, per-disc intensity, disc radius."""

    lambda0: float
    lambda1: float
    R: float

    def __post_init__(self):
        if min(self.lambda0, self.lambda1, self.R) <= 0:
            raise ValueError(f"cluster parameters must be positive, got {self}")

    @property
    def equivalent_intensity(self) -> float:
        return self.lambda0 * self.lambda1 * math.pi * self.R * self.R


@dataclass(frozen=True)
class HcpParams:
    """Matern type-II hardcore process: target intensity and randomness rho in [0, 1)."""

    lambda_hc: float
    rho: float
    R_hc: float = field(init=False)

    def __post_init__(self):
        if self.lambda_hc <= 0:
            raise ValueError(f"intensity must be positive, got {self.lambda_hc}")
        if not 0.0 <= self.rho < 1.0:
            raise ValueError(f"rho must lie in [0, 1), got {self.rho}")
        object.__setattr__(self, "R_hc", self.rho / math.sqrt(math.pi * self.lambda_hc))


_INVERSION_CUTOFF = 30.0


def poisson_count(rng: np.random.Generator, mean: float) -> int:
    """One Poisson draw from a Generator's uniform stream."""
    if mean < 0:
        raise ValueError(f"mean must be nonnegative, got {mean}")
    if mean == 0.0:
        return 0
    if mean < _INVERSION_CUTOFF:
        return _poisson_inversion(rng, mean)
    return _poisson_ptrs(rng, mean)


def _poisson_inversion(rng, mean):
    u = rng.random()
    p = math.exp(-mean)
    cdf = p
    k = 0
    k_cap = int(mean) + 120  # cdf saturates in double precision long before this
    while u > cdf and k < k_cap:
        k += 1
        p *= mean / k
        cdf += p
    return k

def _poisson_ptrs(rng, mean):
    # transformed rejection with squeeze (Hormann's PTRS); no normal approximation
    log_mean = math.log(mean)
    b = 0.931 + 2.53 * math.sqrt(mean)
    a = -0.059 + 0.02483 * b
    inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
    v_r = 0.9277 - 3.6224 / (b - 2.0)
    while True:
        u = rng.random() - 0.5
        v = rng.random()
        us = 0.5 - abs(u)
        k = math.floor((2.0 * a / us + b) * u + mean + 0.43)
        if us >= 0.07 and v <= v_r:
            return int(k)
        if k < 0 or (us < 0.013 and v > us):
            continue
        if math.log(v * inv_alpha / (a / (us * us) + b)) <= k * log_mean - mean - math.lgamma(k + 1.0):
            return int(k)


def _uniform_in_window(rng, window: Window, n: int) -> np.ndarray:
    pts = rng.random((n, 2))
    pts[:, 0] = window.x_min + pts[:, 0] * window.width
    pts[:, 1] = window.y_min + pts[:, 1] * window.height
    return pts


def sample_ppp_rng(lambda_: float, window: Window, rng: np.random.Generator) -> PointPattern:
    if lambda_ <= 0:
        raise ValueError(f"intensity must be positive, got {lambda_}")
    n = poisson_count(rng, lambda_ * window.area)
    return PointPattern(_uniform_in_window(rng, window, n), window, lambda_)


def sample_ppp(lambda_: float, window: Window, seed: int) -> PointPattern:
    """Homogeneous Poisson point process on the window, deterministic in the seed."""
    return sample_ppp_rng(lambda_, window, rng_from_seed(seed))


def sample_matern_cluster_rng(params: ClusterParams, window: Window,
                              rng: np.random.Generator) -> PointPattern:
    # parents live on the window dilated by R so discs overlapping the window contribute
    parent_win = window.dilated(params.R)
    n_parents = poisson_count(rng, params.lambda0 * parent_win.area)
    parents = _uniform_in_window(rng, parent_win, n_parents)
    mean_per_disc = params.lambda1 * math.pi * params.R * params.R
    chunks = []
    for i in range(n_parents):
        m = poisson_count(rng, mean_per_disc)
        if m == 0:
            continue
        r = params.R * np.sqrt(rng.random(m))
        theta = 2.0 * math.pi * rng.random(m)
        pts = np.empty((m, 2))
        pts[:, 0] = parents[i, 0] + r * np.cos(theta)
        pts[:, 1] = parents[i, 1] + r * np.sin(theta)
        chunks.append(pts)
    if chunks:
        pts = np.concatenate(chunks)
        inside = (
            (pts[:, 0] >= window.x_min) & (pts[:, 0] <= window.x_max)
            & (pts[:, 1] >= window.y_min) & (pts[:, 1] <= window.y_max)
        )
        pts = pts[inside]
    else:
        pts = np.empty((0, 2))
    return PointPattern(pts, window, params.equivalent_intensity)


def sample_matern_cluster(params: ClusterParams, window: Window, seed: int) -> PointPattern:
    """Matern cluster process: Poisson parents, uniform-disc Poisson daughters."""
    return sample_matern_cluster_rng(params, window, rng_from_seed(seed))


def hcp_parent_intensity(lambda_hc: float, R_hc: float) -> float:
    """Parent PPP intensity that a type-II thinning needs to land on lambda_hc."""
    if lambda_hc <= 0:
        raise ValueError(f"intensity must be positive, got {lambda_hc}")
    if R_hc < 0:
        raise ValueError(f"hardcore distance must be nonnegative, got {R_hc}")
    x = lambda_hc * math.pi * R_hc * R_hc
    if x >= 1.0:
        raise ValueError(
            f"lambda_hc*pi*R_hc^2 = {x} >= 1: hardcore distance at or beyond its maximum"
        )
    if x == 0.0:
        return lambda_hc
    return -math.log1p(-x) / (math.pi * R_hc * R_hc)


def sample_matern_hcp2_rng(params: HcpParams, window: Window,
                           rng: np.random.Generator) -> PointPattern:
    if params.R_hc == 0.0:
        pattern = sample_ppp_rng(params.lambda_hc, window, rng)
        return PointPattern(pattern.points, window, params.lambda_hc)
    parent_lambda = hcp_parent_intensity(params.lambda_hc, params.R_hc)
    parent_win = window.dilated(params.R_hc)
    n = poisson_count(rng, parent_lambda * parent_win.area)
    pts = _uniform_in_window(rng, parent_win, n)
    marks = rng.random(n)
    keep = np.empty(n, dtype=np.bool_)
    hcp_survivors(
        np.ascontiguousarray(pts[:, 0]),
        np.ascontiguousarray(pts[:, 1]),
        marks,
        params.R_hc * params.R_hc,
        keep,
    )
    pts = pts[keep]
    inside = (
        (pts[:, 0] >= window.x_min) & (pts[:, 0] <= window.x_max)
        & (pts[:, 1] >= window.y_min) & (pts[:, 1] <= window.y_max)
    )
    return PointPattern(pts[inside], window, params.lambda_hc)


def sample_matern_hcp2(params: HcpParams, window: Window, seed: int) -> PointPattern:
    """Matern type-II hardcore process by mark-based dependent thinning of a PPP."""
    return sample_matern_hcp2_rng(params, window, rng_from_seed(seed))


def rng_from_seed(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def pattern_to_csv(pattern: PointPattern, params: str = "", seed=None) -> str:
    """x,y rows with a comment header carrying the generator params and seed."""
    w = pattern.window
    lines = [
        f"# params: {params}" if params else "# params: (none)",
        f"# seed: {seed}",
        f"# window: {w.x_min!r},{w.x_max!r},{w.y_min!r},{w.y_max!r}",
        f"# intensity_nominal: {pattern.intensity_nominal!r}",
        "x,y",
    ]
    lines.extend(f"{x!r},{y!r}" for x, y in pattern.points)
    return "\n".join(lines) + "\n"
