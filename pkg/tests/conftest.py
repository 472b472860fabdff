"""Shared Monte Carlo fixtures; the heavy runs execute once per session."""

import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hocount import ExperimentPlan, Scenario, simulate_counts

MASTER_SEED = 42


def _counts(lambda_, v_kmh, trials):
    scn = Scenario.from_kmh(lambda_, v_kmh, 12.0)
    plan = ExperimentPlan(scenarios=(scn,), trials=trials, master_seed=MASTER_SEED)
    t0 = time.perf_counter()
    counts = simulate_counts(scn, plan)
    return scn, counts, time.perf_counter() - t0


@pytest.fixture(scope="session")
def counts_1000_60_timed():
    return _counts(1000.0, 60.0, 100_000)


@pytest.fixture(scope="session")
def counts_1000_60(counts_1000_60_timed):
    """10^5 linear-PPP trials at lambda=1000, v=60 km/h, T=12 s."""
    return counts_1000_60_timed[:2]


@pytest.fixture(scope="session")
def counts_500_60():
    """10^5 linear-PPP trials at lambda=500, v=60 km/h, T=12 s."""
    return _counts(500.0, 60.0, 100_000)[:2]


@pytest.fixture(scope="session")
def counts_1000_120():
    """10^5 linear-PPP trials at lambda=1000, v=120 km/h, T=12 s."""
    return _counts(1000.0, 120.0, 100_000)[:2]
