"""UE trajectories: linear constant-speed, random waypoint, piecewise speed profiles."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pointprocess import rng_from_seed


@dataclass(frozen=True)
class Trajectory:
    """Time-stamped polyline; the UE moves at constant speed on each segment."""

    t: np.ndarray  # s
    x: np.ndarray  # km
    y: np.ndarray  # km

    def __post_init__(self):
        t = np.asarray(self.t, dtype=np.float64)
        x = np.asarray(self.x, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64)
        if not (t.shape == x.shape == y.shape) or t.ndim != 1 or t.size < 2:
            raise ValueError("trajectory needs matching 1-d arrays with >= 2 waypoints")
        if not np.all(np.diff(t) > 0):
            raise ValueError("timestamps must be strictly increasing")
        if not np.all(np.isfinite(t)) or not np.all(np.isfinite(x)) or not np.all(np.isfinite(y)):
            raise ValueError("trajectory coordinates must be finite")
        object.__setattr__(self, "t", np.ascontiguousarray(t))
        object.__setattr__(self, "x", np.ascontiguousarray(x))
        object.__setattr__(self, "y", np.ascontiguousarray(y))

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0])

    @property
    def segment_lengths(self) -> np.ndarray:
        return np.hypot(np.diff(self.x), np.diff(self.y))

    @property
    def segment_speeds(self) -> np.ndarray:
        return self.segment_lengths / np.diff(self.t)

    @property
    def total_length(self) -> float:
        return float(self.segment_lengths.sum())

    def bounding_box(self) -> tuple[float, float, float, float]:
        return (float(self.x.min()), float(self.x.max()),
                float(self.y.min()), float(self.y.max()))


@dataclass(frozen=True)
class RwpParams:
    """Random-waypoint mobility: transition lengths Rayleigh-like with parameter xi."""

    xi: float  # 1/km^2
    v: float   # km/s
    pause: float = 0.0

    def __post_init__(self):
        if self.xi <= 0 or self.v <= 0 or self.pause < 0:
            raise ValueError(f"invalid RWP parameters {self}")


@dataclass(frozen=True)
class SpeedProfile:
    """Ordered (duration s, speed km/s) legs travelled on a straight line."""

    legs: tuple[tuple[float, float], ...]

    def __post_init__(self):
        legs = tuple((float(d), float(v)) for d, v in self.legs)
        if not legs:
            raise ValueError("profile needs at least one leg")
        for d, v in legs:
            if d <= 0:
                raise ValueError(f"leg durations must be positive, got {d}")
            if v < 0:
                raise ValueError(f"leg speeds must be nonnegative, got {v}")
        object.__setattr__(self, "legs", legs)

    @property
    def total_duration(self) -> float:
        return sum(d for d, _ in self.legs)

    def mean_speed(self, t0: float, t1: float) -> float:
        """Time-averaged speed over [t0, t1] of the trip, t measured from 0."""
        if not 0 <= t0 < t1 <= self.total_duration + 1e-9:
            raise ValueError(f"window [{t0}, {t1}] outside the profile")
        dist = 0.0
        start = 0.0
        for d, v in self.legs:
            end = start + d
            overlap = min(end, t1) - max(start, t0)
            if overlap > 0:
                dist += overlap * v
            start = end
        return dist / (t1 - t0)


def trajectory_to_csv(traj: Trajectory) -> str:
    """t,x,y waypoint rows for plotting."""
    lines = ["t,x,y"]
    lines.extend(f"{t!r},{x!r},{y!r}" for t, x, y in zip(traj.t, traj.x, traj.y))
    return "\n".join(lines) + "\n"


def linear_trajectory(v: float, T: float, origin=(0.0, 0.0), angle: float = 0.0) -> Trajectory:
    """Straight constant-speed path of chord length v*T."""
    if v < 0 or T <= 0:
        raise ValueError(f"need v >= 0 and T > 0, got v={v}, T={T}")
    x0, y0 = origin
    d = v * T
    return Trajectory(
        np.array([0.0, T]),
        np.array([x0, x0 + d * math.cos(angle)]),
        np.array([y0, y0 + d * math.sin(angle)]),
    )


def sample_rwp(params: RwpParams, duration: float, origin=(0.0, 0.0), seed=0) -> Trajectory:
    """Random-waypoint trip truncated exactly at the requested duration.

    Transition lengths are drawn by inversion L = sqrt(-ln(1-U)/(xi*pi)),
    headings i.i.d. uniform on [-pi, pi], constant speed, fixed pause time
    (zero by default).
    """
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration}")
    rng = seed if isinstance(seed, np.random.Generator) else rng_from_seed(seed)
    ts = [0.0]
    xs = [float(origin[0])]
    ys = [float(origin[1])]
    t = 0.0
    while t < duration:
        u = rng.random()
        length = math.sqrt(-math.log1p(-u) / (params.xi * math.pi))
        theta = (2.0 * rng.random() - 1.0) * math.pi
        hop = length / params.v
        if t + hop >= duration:
            frac = (duration - t) / hop
            xs.append(xs[-1] + frac * length * math.cos(theta))
            ys.append(ys[-1] + frac * length * math.sin(theta))
            ts.append(duration)
            t = duration
            break
        xs.append(xs[-1] + length * math.cos(theta))
        ys.append(ys[-1] + length * math.sin(theta))
        t += hop
        ts.append(t)
        if params.pause > 0.0:
            if t + params.pause >= duration:
                ts.append(duration)
                xs.append(xs[-1])
                ys.append(ys[-1])
                t = duration
                break
            t += params.pause
            ts.append(t)
            xs.append(xs[-1])
            ys.append(ys[-1])
    return Trajectory(np.array(ts), np.array(xs), np.array(ys))


def profile_trajectory(profile: SpeedProfile, origin=(0.0, 0.0), angle: float = 0.0,
                       extra_breaks=()) -> Trajectory:
    """Straight-line trip following a piecewise-constant speed profile.

    extra_breaks inserts additional waypoints at the given trip times (useful
    for aligning measurement windows with trajectory segments).
    """
    times = {0.0, profile.total_duration}
    acc = 0.0
    for d, _ in profile.legs:
        acc += d
        times.add(acc)
    for b in extra_breaks:
        if not 0.0 <= b <= profile.total_duration:
            raise ValueError(f"break {b} outside the profile")
        times.add(float(b))
    ts = sorted(times)
    cos_a = math.cos(angle)
    sin_a = math.sin(angle)
    xs = [float(origin[0])]
    ys = [float(origin[1])]
    dist = 0.0
    for t0, t1 in zip(ts[:-1], ts[1:]):
        dist += profile.mean_speed(t0, t1) * (t1 - t0)
        xs.append(origin[0] + dist * cos_a)
        ys.append(origin[1] + dist * sin_a)
    return Trajectory(np.array(ts), np.array(xs), np.array(ys))
