"""Mobility state detection: thresholds, state probabilities, detection rates."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .hostats import gaussian_params, gaussian_pmf
from .scenario import Scenario, kmh_to_canonical

# tail cutoff mu + 12*sigma for the open-ended high-state sum; truncation < 1e-30
_TAIL_SIGMAS = 12.0


class MobilityState(enum.Enum):
    LOW = "S_L"
    MEDIUM = "S_M"
    HIGH = "S_H"


def handover_thresholds(v_l: float, v_u: float, T: float, lambda_: float) -> tuple[int, int]:
    """Optimum count thresholds floor(4*T*sqrt(lambda)*v/pi) for both velocity bounds."""
    if not 0 < v_l < v_u:
        raise ValueError(f"need 0 < v_l < v_u, got {v_l}, {v_u}")
    if T <= 0 or lambda_ <= 0:
        raise ValueError(f"need T > 0 and lambda > 0, got T={T}, lambda={lambda_}")
    scale = 4.0 * T * math.sqrt(lambda_) / math.pi
    return int(math.floor(scale * v_l)), int(math.floor(scale * v_u))


@dataclass(frozen=True)
class MsdConfig:
    """Velocity thresholds (km/s) with their derived count thresholds."""

    v_l: float
    v_u: float
    T: float
    lambda_: float
    h_l: int = field(init=False)
    h_u: int = field(init=False)

    def __post_init__(self):
        h_l, h_u = handover_thresholds(self.v_l, self.v_u, self.T, self.lambda_)
        object.__setattr__(self, "h_l", h_l)
        object.__setattr__(self, "h_u", h_u)

    @classmethod
    def from_kmh(cls, v_l_kmh: float, v_u_kmh: float, T: float, lambda_: float) -> "MsdConfig":
        return cls(kmh_to_canonical(v_l_kmh), kmh_to_canonical(v_u_kmh), T, lambda_)


@dataclass(frozen=True)
class StateProbs:
    """Low/medium/high state probabilities; they sum to the total model mass.

    The integer-sampled Gaussian model is deliberately left unnormalized, so
    below the fitted range (d*sqrt(lambda) well under 1) a state mass can
    exceed one; inside the calibrated operating range all three lie in [0, 1].
    """

    p_low: float
    p_med: float
    p_high: float

    def __post_init__(self):
        for p in (self.p_low, self.p_med, self.p_high):
            if p < 0.0:
                raise ValueError(f"negative state mass in {self}")

    def total(self) -> float:
        return self.p_low + self.p_med + self.p_high

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p_low, self.p_med, self.p_high)


def detect_state(v_hat: float, cfg: MsdConfig) -> MobilityState:
    """Classify an estimated velocity; both boundaries belong to the lower state."""
    if v_hat < 0:
        raise ValueError(f"speed must be nonnegative, got {v_hat}")
    if v_hat <= cfg.v_l:
        return MobilityState.LOW
    if v_hat <= cfg.v_u:
        return MobilityState.MEDIUM
    return MobilityState.HIGH


def true_state(v: float, cfg: MsdConfig) -> MobilityState:
    """The state the true velocity belongs to (same boundary rule)."""
    return detect_state(v, cfg)


def state_probabilities_for_thresholds(scn: Scenario, h_l: int, h_u: int) -> StateProbs:
    """Gaussian-model state masses for explicit count thresholds."""
    if not 0 <= h_l < h_u:
        raise ValueError(f"need 0 <= h_l < h_u, got {h_l}, {h_u}")
    if scn.v <= 0:
        raise ValueError("state probabilities need v > 0")
    gn = gaussian_params(scn.d_sqrt_lambda)
    h_star = int(math.ceil(gn.mu + _TAIL_SIGMAS * math.sqrt(gn.sigma2)))
    top = max(h_star, h_u)
    f = np.array([gaussian_pmf(h, gn) for h in range(top + 1)])
    p_low = float(f[0 : h_l + 1].sum())
    p_med = float(f[h_l + 1 : h_u + 1].sum())
    p_high = float(f[h_u + 1 : h_star + 1].sum())
    return StateProbs(p_low, p_med, p_high)


def state_probabilities(scn: Scenario, cfg: MsdConfig) -> StateProbs:
    """Gaussian-model probabilities of the three detected states."""
    return state_probabilities_for_thresholds(scn, cfg.h_l, cfg.h_u)


def detection_probability(scn: Scenario, cfg: MsdConfig) -> tuple[float, float]:
    """(P_D, P_FA): mass of the true state's interval, and everything else."""
    probs = state_probabilities(scn, cfg)
    state = true_state(scn.v, cfg)
    if state is MobilityState.LOW:
        p_d = probs.p_low
    elif state is MobilityState.MEDIUM:
        p_d = probs.p_med
    else:
        p_d = probs.p_high
    return p_d, probs.total() - p_d


def average_detection_probability(h_l: int, h_u: int, lambda_: float, T: float,
                                  v_l: float, v_u: float,
                                  v_grid_kmh=None) -> float:
    """Mean P_D over a uniform velocity grid, with explicit count thresholds.

    The default grid is 10..120 km/h in 1 km/h steps.
    """
    if not 0 <= h_l < h_u:
        raise ValueError(f"need 0 <= h_l < h_u, got {h_l}, {h_u}")
    if v_grid_kmh is None:
        v_grid_kmh = np.arange(10, 121)
    cfg = MsdConfig(v_l, v_u, T, lambda_)
    acc = 0.0
    for v_kmh in v_grid_kmh:
        scn = Scenario(lambda_, kmh_to_canonical(float(v_kmh)), T)
        probs = state_probabilities_for_thresholds(scn, h_l, h_u)
        state = true_state(scn.v, cfg)
        if state is MobilityState.LOW:
            acc += probs.p_low
        elif state is MobilityState.MEDIUM:
            acc += probs.p_med
        else:
            acc += probs.p_high
    return acc / len(v_grid_kmh)


def threshold_sweep(lambda_: float, T: float, v_l: float, v_u: float,
                    h_max: int = 15) -> list[tuple[int, int, float]]:
    """Average P_D for every threshold pair h_l < h_u <= h_max."""
    rows = []
    for h_l in range(h_max):
        for h_u in range(h_l + 1, h_max + 1):
            rows.append((h_l, h_u, average_detection_probability(h_l, h_u, lambda_, T, v_l, v_u)))
    return rows
