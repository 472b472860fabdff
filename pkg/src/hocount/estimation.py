"""Velocity estimation: closed-form Gaussian CRLB, numeric gamma CRLB, MVU estimator."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hostats import (
    BETA_NUMERATOR,
    BETA_OFFSET,
    SIGMA2_SLOPE,
    gamma_params,
    gamma_pmf,
    gaussian_params,
)
from .scenario import Scenario, canonical_to_kmh
from .special import digamma, hyp2f2_special, regularized_gamma_p

_PMF_FLOOR = 1e-300


@dataclass(frozen=True)
class CrlbResult:
    """Velocity-variance lower bound; variance carried in (km/s)^2."""

    variance: float
    method: str  # gaussian | gamma_asymptotic

    def __post_init__(self):
        if self.variance <= 0:
            raise ValueError(f"variance must be positive, got {self.variance}")

    @property
    def std_kms(self) -> float:
        return math.sqrt(self.variance)

    @property
    def std_kmh(self) -> float:
        return canonical_to_kmh(self.std_kms)


@dataclass(frozen=True)
class VelocityEstimate:
    """Count-based velocity estimate pi*h/(4*T*sqrt(lambda))."""

    v_hat: float  # km/s
    h: int
    T: float
    lambda_: float

    @property
    def v_hat_kmh(self) -> float:
        return canonical_to_kmh(self.v_hat)


def mvu_estimate(h: int, T: float, lambda_: float) -> VelocityEstimate:
    """Minimum-variance unbiased velocity estimate from one handover count."""
    if h < 0:
        raise ValueError(f"count must be nonnegative, got {h}")
    if T <= 0 or lambda_ <= 0:
        raise ValueError(f"need T > 0 and lambda > 0, got T={T}, lambda={lambda_}")
    return VelocityEstimate(math.pi * h / (4.0 * T * math.sqrt(lambda_)), h, T, lambda_)


def mvu_variance(scn: Scenario) -> float:
    """Variance (v*sigma/mu)^2 of the MVU estimate under the Gaussian count model."""
    if scn.v <= 0:
        raise ValueError("MVU variance needs v > 0")
    gn = gaussian_params(scn.d_sqrt_lambda)
    return (scn.v * math.sqrt(gn.sigma2) / gn.mu) ** 2


def crlb_gaussian(scn: Scenario) -> CrlbResult:
    """Closed-form CRLB from the Gaussian count model."""
    if scn.v <= 0:
        raise ValueError("Gaussian CRLB needs v > 0")
    gn = gaussian_params(scn.d_sqrt_lambda)
    t_sqrt_lambda = scn.T * math.sqrt(scn.lambda_)
    fisher = (gn.mu / (scn.v * math.sqrt(gn.sigma2))) ** 2
    fisher += 0.5 * (SIGMA2_SLOPE * t_sqrt_lambda / gn.sigma2) ** 2
    return CrlbResult(1.0 / fisher, "gaussian")


def dlogf_dv_gamma(h: int, scn: Scenario) -> float:
    """Velocity derivative of the log gamma-model pmf at count h.

    Four pieces: the hypergeometric pair from differentiating the incomplete
    gamma integral in its order, the gamma*log pair, the rate-derivative
    exponential term, and the digamma term from the normalizing Gamma(alpha).
    """
    if h < 0:
        raise ValueError(f"count must be nonnegative, got {h}")
    if scn.v <= 0:
        raise ValueError("gamma-model derivative needs v > 0")
    ga = gamma_params(scn.d_sqrt_lambda)
    a, b = ga.alpha, ga.beta
    ts = scn.T * math.sqrt(scn.lambda_)
    pmf = gamma_pmf(h, ga)
    if pmf < _PMF_FLOOR:
        raise ValueError(f"pmf underflow at h={h}: derivative not representable")
    lgam_a = math.lgamma(a)
    z1 = b * h
    z2 = b * (h + 1)
    log_z2 = math.log(z2)

    # z^alpha 2F2(a,a;a+1,a+1;-z) / (alpha^2 Gamma(a,z1,z2)), log-scaled
    f2_2 = hyp2f2_special(a, z2) * math.exp(a * log_z2 - lgam_a) / (a * a * pmf)
    p2 = regularized_gamma_p(a, z2)
    e2 = (h + 1) * math.exp(-z2 + (a - 1.0) * log_z2 - lgam_a) / pmf
    if h == 0:
        # z1 = 0: every z1 piece vanishes (z1^alpha, gamma(a, 0) log z1, e^-z1 z1^(a-1))
        f2_1 = 0.0
        glog1 = 0.0
        e1 = 0.0
    else:
        log_z1 = math.log(z1)
        f2_1 = hyp2f2_special(a, z1) * math.exp(a * log_z1 - lgam_a) / (a * a * pmf)
        glog1 = regularized_gamma_p(a, z1) * log_z1 / pmf
        e1 = h * math.exp(-z1 + (a - 1.0) * log_z1 - lgam_a) / pmf

    term_hyp = 4.0 * ts * (f2_1 - f2_2)
    term_glog = -4.0 * ts * (glog1 - p2 * log_z2 / pmf)
    term_rate = BETA_NUMERATOR * ts * (e1 - e2) / (BETA_OFFSET + scn.d_sqrt_lambda) ** 2
    term_digamma = -4.0 * ts * digamma(a)
    return term_hyp + term_glog + term_rate + term_digamma


def crlb_gamma_asymptotic(samples, scn: Scenario) -> CrlbResult:
    """Numeric CRLB: N over the observed-support sum of squared score values."""
    arr = np.asarray(samples, dtype=np.int64)
    n = arr.size
    if n < 1000:
        raise ValueError(f"need at least 1000 samples, got {n}")
    if scn.v <= 0:
        raise ValueError("gamma-model CRLB needs v > 0")
    values, counts = np.unique(arr, return_counts=True)
    total = 0.0
    for m, n_m in zip(values, counts):
        total += n_m * dlogf_dv_gamma(int(m), scn) ** 2
    if total <= 0.0:
        raise ValueError("degenerate samples: squared score sums to zero")
    return CrlbResult(n / total, "gamma_asymptotic")
