"""Canonical units and scenario parameters.

Everything internal works in km and seconds; km/h is accepted only at I/O
boundaries. All count statistics downstream depend on a scenario only through
the dimensionless product d*sqrt(lambda).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


def kmh_to_canonical(speed_kmh: float) -> float:
    """Convert a speed from km/h to the canonical km/s."""
    if speed_kmh < 0:
        raise ValueError(f"speed must be nonnegative, got {speed_kmh} km/h")
    return speed_kmh / 3600.0


def canonical_to_kmh(speed_kms: float) -> float:
    """Convert a speed from km/s back to km/h."""
    return speed_kms * 3600.0


def scaled_intensity(lambda_: float, d: float) -> float:
    """Dimensionless intensity after rescaling space by the travel distance d."""
    if lambda_ <= 0:
        raise ValueError(f"intensity must be positive, got {lambda_}")
    if d < 0:
        raise ValueError(f"distance must be nonnegative, got {d}")
    return lambda_ * d * d


@dataclass(frozen=True)
class Scenario:
    """Deployment intensity, UE speed and measurement window, plus derived scales.

    lambda_ is the site intensity in 1/km^2, v the speed in km/s, T the
    measurement window in s. The derived travel distance is d = v*T, the
    scaled intensity lambda_prime = lambda_ * d**2 and d_sqrt_lambda its
    square root, the single knob all analytic count statistics take.
    """

    lambda_: float
    v: float
    T: float
    d: float = field(init=False)
    lambda_prime: float = field(init=False)
    d_sqrt_lambda: float = field(init=False)

    def __post_init__(self):
        if self.lambda_ <= 0:
            raise ValueError(f"lambda must be positive, got {self.lambda_}")
        if self.T <= 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if self.v < 0:
            raise ValueError(f"v must be nonnegative, got {self.v}")
        d = self.v * self.T
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "lambda_prime", self.lambda_ * d * d)
        # derived from lambda_prime so the two invariants hold bit-exactly
        object.__setattr__(self, "d_sqrt_lambda", math.sqrt(self.lambda_prime))

    @classmethod
    def from_kmh(cls, lambda_: float, v_kmh: float, T: float) -> "Scenario":
        return cls(lambda_, kmh_to_canonical(v_kmh), T)

    @property
    def v_kmh(self) -> float:
        return canonical_to_kmh(self.v)
