"""Handover-count statistics: exact mean, gamma and Gaussian PMF models, fits.

The fitted parameter laws take only the dimensionless d*sqrt(lambda). The
gamma model integrates a gamma density over unit bins; the Gaussian model
samples a normal density at the integers and is deliberately not renormalized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scenario import Scenario
from .special import (
    ConvergenceError,
    regularized_gamma_p,
    regularized_gamma_q,
)

# fitted parameter laws (dimensionless d*sqrt(lambda) in, model parameters out)
ALPHA_INTERCEPT = 2.7
ALPHA_SLOPE = 4.0
BETA_NUMERATOR = 0.8
BETA_OFFSET = 0.38
SIGMA2_INTERCEPT = 0.07
SIGMA2_SLOPE = 0.41


@dataclass(frozen=True)
class GammaApprox:
    """Shape/rate pair of the binned-gamma count model."""

    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError(f"gamma parameters must be positive, got {self}")


@dataclass(frozen=True)
class GaussianApprox:
    """Mean/variance pair of the integer-sampled Gaussian count model."""

    mu: float
    sigma2: float

    def __post_init__(self):
        if self.sigma2 <= 0:
            raise ValueError(f"variance must be positive, got {self.sigma2}")


@dataclass(frozen=True)
class HandoverPmf:
    """Discrete distribution over nonnegative counts."""

    probs: dict[int, float]
    source: str  # empirical | gamma | gaussian

    def __post_init__(self):
        for h, p in self.probs.items():
            if h < 0 or not 0.0 <= p <= 1.0:
                raise ValueError(f"bad pmf entry {h}: {p}")

    def prob(self, h: int) -> float:
        return self.probs.get(h, 0.0)

    @property
    def max_support(self) -> int:
        return max(self.probs)

    def mean(self) -> float:
        return sum(h * p for h, p in self.probs.items())

    def variance(self) -> float:
        m = self.mean()
        return sum((h - m) ** 2 * p for h, p in self.probs.items())

    def total_mass(self) -> float:
        return sum(self.probs.values())


def mean_handovers(scn: Scenario) -> float:
    """Exact mean crossing count 4*v*T*sqrt(lambda)/pi.

    Evaluated through the scenario's d*sqrt(lambda) so it shares the Gaussian
    model's mu bit for bit.
    """
    return 4.0 * scn.d_sqrt_lambda / math.pi


def gamma_params(d_sqrt_lambda: float) -> GammaApprox:
    """Fitted shape/rate law of the gamma count model."""
    if d_sqrt_lambda < 0:
        raise ValueError(f"d*sqrt(lambda) must be nonnegative, got {d_sqrt_lambda}")
    alpha = ALPHA_INTERCEPT + ALPHA_SLOPE * d_sqrt_lambda
    beta = math.pi + BETA_NUMERATOR / (BETA_OFFSET + d_sqrt_lambda)
    return GammaApprox(alpha, beta)


def gaussian_params(d_sqrt_lambda: float) -> GaussianApprox:
    """Fitted mean/variance law of the Gaussian count model."""
    if d_sqrt_lambda < 0:
        raise ValueError(f"d*sqrt(lambda) must be nonnegative, got {d_sqrt_lambda}")
    mu = 4.0 * d_sqrt_lambda / math.pi
    sigma2 = SIGMA2_INTERCEPT + SIGMA2_SLOPE * d_sqrt_lambda
    return GaussianApprox(mu, sigma2)


def gamma_pmf(h: int, ga: GammaApprox) -> float:
    """Gamma mass of the unit bin [h, h+1], i.e. the binned-gamma count model."""
    if h < 0:
        raise ValueError(f"count must be nonnegative, got {h}")
    z1 = ga.beta * h
    z2 = ga.beta * (h + 1)
    if z1 >= ga.alpha + 1.0:
        # far right tail: difference of upper tails stays accurate
        p = regularized_gamma_q(ga.alpha, z1) - regularized_gamma_q(ga.alpha, z2)
    else:
        p = regularized_gamma_p(ga.alpha, z2) - regularized_gamma_p(ga.alpha, z1)
    return min(max(p, 0.0), 1.0)


def gaussian_pmf(h: int, gn: GaussianApprox) -> float:
    """Normal density sampled at integer h; not renormalized over h >= 0."""
    if h < 0:
        raise ValueError(f"count must be nonnegative, got {h}")
    return math.exp(-((h - gn.mu) ** 2) / (2.0 * gn.sigma2)) / math.sqrt(2.0 * math.pi * gn.sigma2)


def gamma_pmf_table(ga: GammaApprox, h_max: int) -> HandoverPmf:
    return HandoverPmf({h: gamma_pmf(h, ga) for h in range(h_max + 1)}, "gamma")


def gaussian_pmf_table(gn: GaussianApprox, h_max: int) -> HandoverPmf:
    return HandoverPmf({h: gaussian_pmf(h, gn) for h in range(h_max + 1)}, "gaussian")


def empirical_pmf(samples) -> HandoverPmf:
    """Relative frequencies of an integer sample set."""
    arr = np.asarray(samples)
    if arr.size == 0:
        raise ValueError("cannot build a pmf from no samples")
    if arr.min() < 0:
        raise ValueError("counts must be nonnegative")
    counts = np.bincount(arr.astype(np.int64))
    n = arr.size
    return HandoverPmf({h: int(c) / n for h, c in enumerate(counts) if c > 0}, "empirical")


def pmf_mse(approx: HandoverPmf, empirical: HandoverPmf) -> float:
    """Mean squared error over h = 0 .. max empirical support."""
    if not approx.probs or not empirical.probs:
        raise ValueError("both pmfs must be non-empty")
    n_h = empirical.max_support + 1
    return float(sum((approx.prob(h) - empirical.prob(h)) ** 2 for h in range(n_h))) / n_h


def _coordinate_descent(objective, x0, step0, lower, min_step, max_evals=40_000):
    """Derivative-free minimization: axis moves on a step grid that halves
    whenever a full sweep fails to improve."""
    x = list(x0)
    fx = objective(x)
    evals = 1
    step = list(step0)
    while max(s / m for s, m in zip(step, min_step)) > 1.0:
        moved = False
        for i in range(len(x)):
            for sgn in (1.0, -1.0):
                while True:
                    cand = list(x)
                    cand[i] = x[i] + sgn * step[i]
                    if cand[i] <= lower[i]:
                        break
                    fc = objective(cand)
                    evals += 1
                    if evals > max_evals:
                        raise ConvergenceError("fit budget exhausted before convergence")
                    if fc < fx:
                        x, fx = cand, fc
                        moved = True
                    else:
                        break
        if not moved:
            step = [s * 0.5 for s in step]
    return x, fx


def fit_gamma_params(empirical: HandoverPmf) -> GammaApprox:
    """Refit (alpha, beta) by minimizing the pmf MSE against an empirical pmf.

    Moment-based start: the binned gamma has mean ~ alpha/beta - 1/2 and
    variance ~ alpha/beta^2.
    """
    mean = empirical.mean()
    var = max(empirical.variance(), 1e-6)
    beta0 = max((mean + 0.5) / var, 0.2)
    alpha0 = max((mean + 0.5) * beta0, 0.2)

    def objective(params):
        return pmf_mse(gamma_pmf_table(GammaApprox(params[0], params[1]),
                                       empirical.max_support), empirical)

    (alpha, beta), _ = _coordinate_descent(
        objective,
        [alpha0, beta0],
        step0=[0.25 * alpha0, 0.25 * beta0],
        lower=[0.0, 0.0],
        min_step=[1e-4 * alpha0, 1e-4 * beta0],
    )
    return GammaApprox(alpha, beta)


def fit_gaussian_sigma2(empirical: HandoverPmf, mu: float | None = None) -> float:
    """Refit sigma^2 of the integer-sampled Gaussian model; mu defaults to the
    empirical mean."""
    if mu is None:
        mu = empirical.mean()
    s0 = max(empirical.variance(), 1e-3)

    def objective(params):
        return pmf_mse(gaussian_pmf_table(GaussianApprox(mu, params[0]),
                                          empirical.max_support), empirical)

    (sigma2,), _ = _coordinate_descent(
        objective,
        [s0],
        step0=[0.25 * s0],
        lower=[0.0],
        min_step=[1e-5 * s0],
    )
    return sigma2
