"""Reproducible Monte Carlo experiments over deployment and mobility models.

Trial i draws from an independent stream seeded by (master_seed, i), and all
aggregation is per-trial storage plus commutative reduction, so results do not
depend on execution order or worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .estimation import mvu_estimate
from .hostats import HandoverPmf, empirical_pmf
from .mobility import RwpParams, SpeedProfile, Trajectory, linear_trajectory, profile_trajectory, sample_rwp
from .msd import MobilityState, MsdConfig, StateProbs, detect_state
from .pointprocess import (
    ClusterParams,
    HcpParams,
    PointPattern,
    Window,
    sample_matern_cluster_rng,
    sample_matern_hcp2_rng,
    sample_ppp_rng,
)
from .scenario import Scenario, canonical_to_kmh
from .traversal import SAFE_MARGIN_FACTOR, safe_window_for, segment_counts

DEPLOYMENTS = ("ppp", "cluster", "hcp")
MOBILITIES = ("linear", "rwp", "profile")


def rng_for_trial(master_seed: int, trial: int) -> np.random.Generator:
    """Independent per-trial stream derived from (master_seed, trial)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((master_seed, trial))))


@dataclass(frozen=True)
class ExperimentPlan:
    """A scenario grid with one deployment model, one mobility model and a seed."""

    scenarios: tuple[Scenario, ...]
    deployment: str = "ppp"
    cluster: Optional[ClusterParams] = None
    hcp: Optional[HcpParams] = None
    mobility: str = "linear"
    rwp_xi: Optional[float] = None
    profile: Optional[SpeedProfile] = None
    trials: int = 10_000
    master_seed: int = 0

    def __post_init__(self):
        if isinstance(self.scenarios, Scenario):
            object.__setattr__(self, "scenarios", (self.scenarios,))
        else:
            object.__setattr__(self, "scenarios", tuple(self.scenarios))
        if not self.scenarios:
            raise ValueError("plan needs at least one scenario")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.deployment not in DEPLOYMENTS:
            raise ValueError(f"unknown deployment {self.deployment!r}")
        if self.mobility not in MOBILITIES:
            raise ValueError(f"unknown mobility {self.mobility!r}")
        if self.deployment == "cluster" and self.cluster is None:
            raise ValueError("cluster deployment needs ClusterParams")
        if self.deployment == "hcp" and self.hcp is None:
            raise ValueError("hcp deployment needs HcpParams")
        if self.mobility == "rwp" and (self.rwp_xi is None or self.rwp_xi <= 0):
            raise ValueError("rwp mobility needs a positive rwp_xi")
        if self.mobility == "profile" and self.profile is None:
            raise ValueError("profile mobility needs a SpeedProfile")
        for scn in self.scenarios:
            if self.deployment == "cluster":
                eq = self.cluster.equivalent_intensity
                if abs(scn.lambda_ - eq) > 1e-6 * eq:
                    raise ValueError(
                        f"scenario lambda {scn.lambda_} disagrees with the cluster "
                        f"equivalent intensity {eq}"
                    )
            if self.deployment == "hcp" and scn.lambda_ != self.hcp.lambda_hc:
                raise ValueError("scenario lambda disagrees with the hardcore intensity")
            if self.mobility == "profile" and abs(scn.T - self.profile.total_duration) > 1e-9:
                raise ValueError("profile duration must equal the scenario window T")


@dataclass(frozen=True)
class MetricsRecord:
    """Per-grid-point summary of an estimator experiment."""

    scenario: Scenario
    deployment: str
    mobility: str
    trials: int
    rmse_kmh: float
    mean_h: float

    def __post_init__(self):
        if self.rmse_kmh < 0:
            raise ValueError(f"rmse must be nonnegative, got {self.rmse_kmh}")


def _pattern_window(traj: Trajectory, scn: Scenario, plan: ExperimentPlan) -> Window:
    if plan.deployment == "cluster":
        # parent-driven voids: margin from the parent intensity, plus the disc reach
        return safe_window_for(traj, plan.cluster.lambda0).dilated(plan.cluster.R)
    if plan.deployment == "hcp":
        return safe_window_for(traj, plan.hcp.lambda_hc)
    return safe_window_for(traj, scn.lambda_)


def _sample_pattern(window: Window, scn: Scenario, plan: ExperimentPlan, rng) -> PointPattern:
    if plan.deployment == "cluster":
        pattern = sample_matern_cluster_rng(plan.cluster, window, rng)
        # the counting margin check runs against the scenario intensity
        return PointPattern(pattern.points, window, scn.lambda_)
    if plan.deployment == "hcp":
        return sample_matern_hcp2_rng(plan.hcp, window, rng)
    return sample_ppp_rng(scn.lambda_, window, rng)


def _trial_count(scn: Scenario, plan: ExperimentPlan, shared_traj, shared_window, trial) -> int:
    rng = rng_for_trial(plan.master_seed, trial)
    if plan.mobility == "rwp":
        traj = sample_rwp(RwpParams(plan.rwp_xi, scn.v), scn.T, (0.0, 0.0), rng)
        window = _pattern_window(traj, scn, plan)
    else:
        traj = shared_traj
        window = shared_window
    pattern = _sample_pattern(window, scn, plan, rng)
    if pattern.n == 0:
        return 0
    return int(segment_counts(pattern, traj).sum())


def simulate_counts(scn: Scenario, plan: ExperimentPlan, threads: int = 1) -> np.ndarray:
    """Handover counts for every trial of one grid point."""
    if plan.mobility == "linear":
        shared_traj = linear_trajectory(scn.v, scn.T)
        shared_window = _pattern_window(shared_traj, scn, plan)
    elif plan.mobility == "profile":
        shared_traj = profile_trajectory(plan.profile)
        shared_window = _pattern_window(shared_traj, scn, plan)
    else:
        shared_traj = None
        shared_window = None
    counts = np.empty(plan.trials, dtype=np.int64)

    def fill(lo, hi):
        for i in range(lo, hi):
            counts[i] = _trial_count(scn, plan, shared_traj, shared_window, i)

    if threads <= 1:
        fill(0, plan.trials)
    else:
        chunk = -(-plan.trials // threads)
        bounds = [(lo, min(lo + chunk, plan.trials)) for lo in range(0, plan.trials, chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda b: fill(*b), bounds))
    return counts


def run_pmf_experiment(plan: ExperimentPlan, threads: int = 1) -> HandoverPmf:
    """Empirical count pmf for a single linear-trajectory PPP grid point."""
    if plan.deployment != "ppp" or plan.mobility != "linear":
        raise ValueError("pmf experiments are defined for linear mobility over a PPP")
    if len(plan.scenarios) != 1:
        raise ValueError("pmf experiments take exactly one scenario")
    return empirical_pmf(simulate_counts(plan.scenarios[0], plan, threads))


def run_rmse_experiment(plan: ExperimentPlan, threads: int = 1) -> list[MetricsRecord]:
    """MVU-estimate RMSE per grid point, against each trial's true mean speed."""
    records = []
    for scn in plan.scenarios:
        counts = simulate_counts(scn, plan, threads)
        scale = canonical_to_kmh(math.pi / (4.0 * scn.T * math.sqrt(scn.lambda_)))
        v_hat_kmh = counts * scale
        if plan.mobility == "profile":
            truth = canonical_to_kmh(
                plan.profile.mean_speed(0.0, plan.profile.total_duration))
        else:
            truth = scn.v_kmh
        rmse = float(np.sqrt(np.mean((v_hat_kmh - truth) ** 2)))
        records.append(MetricsRecord(scn, plan.deployment, plan.mobility,
                                     plan.trials, rmse, float(counts.mean())))
    return records


def run_msd_experiment(plan: ExperimentPlan, cfg: MsdConfig, threads: int = 1) -> list[StateProbs]:
    """Empirical state frequencies per grid point (they sum to one exactly)."""
    out = []
    for scn in plan.scenarios:
        counts = simulate_counts(scn, plan, threads)
        tallies = {MobilityState.LOW: 0, MobilityState.MEDIUM: 0, MobilityState.HIGH: 0}
        for h in counts:
            est = mvu_estimate(int(h), scn.T, scn.lambda_)
            tallies[detect_state(est.v_hat, cfg)] += 1
        n = plan.trials
        out.append(StateProbs(tallies[MobilityState.LOW] / n,
                              tallies[MobilityState.MEDIUM] / n,
                              tallies[MobilityState.HIGH] / n))
    return out


@dataclass(frozen=True)
class TripWindow:
    """One measurement window of a variable-speed trip."""

    index: int
    t_start: float
    v_true_kmh: float
    v_hat_kmh: float
    state: MobilityState


def run_trip_demo(profile: SpeedProfile, T_window: float, lambda_: float, seed: int,
                  v_l_kmh: float = 40.0, v_u_kmh: float = 80.0) -> list[TripWindow]:
    """Windowed velocity estimates along one continuous variable-speed trip."""
    if T_window <= 0:
        raise ValueError(f"window must be positive, got {T_window}")
    n_windows = int(profile.total_duration / T_window + 1e-9)
    if n_windows < 1:
        raise ValueError("profile shorter than one measurement window")
    breaks = [k * T_window for k in range(1, n_windows + 1)]
    traj = profile_trajectory(profile, extra_breaks=breaks)
    rng = rng_for_trial(seed, 0)
    window = safe_window_for(traj, lambda_)
    pattern = sample_ppp_rng(lambda_, window, rng)
    per_segment = segment_counts(pattern, traj)
    seg_start = traj.t[:-1]
    cfg = MsdConfig.from_kmh(v_l_kmh, v_u_kmh, T_window, lambda_)
    out = []
    for k in range(n_windows):
        t0, t1 = k * T_window, (k + 1) * T_window
        in_window = (seg_start >= t0 - 1e-9) & (seg_start < t1 - 1e-9)
        h = int(per_segment[in_window].sum())
        est = mvu_estimate(h, T_window, lambda_)
        out.append(TripWindow(k, t0, canonical_to_kmh(profile.mean_speed(t0, t1)),
                              est.v_hat_kmh, detect_state(est.v_hat, cfg)))
    return out


def train_profile(cruise_kmh: float = 100.0, cruise_s: float = 240.0,
                  ramp_s: float = 120.0, steps: int = 20) -> SpeedProfile:
    """Synthetic accelerate-cruise-decelerate trip used by the trip demo."""
    legs = []
    dt = ramp_s / steps
    for k in range(1, steps + 1):
        legs.append((dt, (cruise_kmh * k / steps) / 3600.0))
    legs.append((cruise_s, cruise_kmh / 3600.0))
    for k in range(steps - 1, -1, -1):
        legs.append((dt, (cruise_kmh * k / steps) / 3600.0))
    return SpeedProfile(tuple(legs))
