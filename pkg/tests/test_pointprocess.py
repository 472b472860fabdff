import math

import numpy as np
import pytest

from hocount import (
    ClusterParams,
    HcpParams,
    Window,
    hcp_parent_intensity,
    poisson_count,
    sample_matern_cluster,
    sample_matern_hcp2,
    sample_ppp,
)
from hocount.pointprocess import rng_from_seed

WIN = Window(-1.0, 1.0, -1.0, 1.0)


def test_window_validation():
    with pytest.raises(ValueError):
        Window(0.0, 0.0, 0.0, 1.0)
    assert WIN.area == pytest.approx(4.0)


def test_ppp_determinism():
    a = sample_ppp(300.0, WIN, seed=11)
    b = sample_ppp(300.0, WIN, seed=11)
    assert np.array_equal(a.points, b.points)
    c = sample_ppp(300.0, WIN, seed=12)
    assert not np.array_equal(a.points, c.points)


def test_ppp_rejects_bad_intensity():
    with pytest.raises(ValueError):
        sample_ppp(0.0, WIN, seed=1)


@pytest.mark.parametrize("mean", [0.5, 5.0, 25.0, 29.9, 30.1, 114.6, 1000.0])
def test_poisson_count_moments(mean):
    # covers both the inversion branch (mean < 30) and the rejection branch
    rng = rng_from_seed(99)
    draws = np.array([poisson_count(rng, mean) for _ in range(40_000)])
    se = math.sqrt(mean / draws.size)
    assert abs(draws.mean() - mean) < 4.0 * se
    assert abs(draws.var() - mean) < 4.0 * mean * math.sqrt(2.0 / draws.size)


def test_ppp_count_mean():
    # lambda*A = 1000 on the unit square; 1e4 draws, 3-sigma band
    win = Window(0.0, 1.0, 0.0, 1.0)
    counts = [sample_ppp(1000.0, win, seed=s).n for s in range(10_000)]
    assert abs(np.mean(counts) - 1000.0) < 3.0 * math.sqrt(1000.0 / 10_000)


def test_ppp_count_mean_small_window():
    counts = [sample_ppp(100.0, WIN, seed=s).n for s in range(4000)]
    assert np.mean(counts) == pytest.approx(400.0, abs=3.0 * math.sqrt(400.0 / 4000))


def test_cluster_empirical_intensity():
    params = ClusterParams(50.0, 500.0, 0.2)
    assert params.equivalent_intensity == pytest.approx(3141.59, abs=0.01)
    total = sum(sample_matern_cluster(params, WIN, 1000 + i).n for i in range(100))
    emp = total / (100 * WIN.area)
    assert abs(emp / params.equivalent_intensity - 1.0) < 0.02


def test_cluster_vanishing_daughter_intensity():
    params = ClusterParams(50.0, 1e-6, 0.2)
    empty = sum(sample_matern_cluster(params, WIN, i).n == 0 for i in range(50))
    assert empty >= 49


def test_cluster_params_validated():
    with pytest.raises(ValueError):
        ClusterParams(50.0, 500.0, 0.0)


def test_hcp_parent_intensity_values():
    assert hcp_parent_intensity(100.0, 1e-9) == pytest.approx(100.0, rel=1e-9)
    r = HcpParams(100.0, 0.5).R_hc
    assert r == pytest.approx(0.0282095, abs=1e-6)
    assert hcp_parent_intensity(100.0, r) == pytest.approx(115.07, abs=0.01)
    assert math.isfinite(hcp_parent_intensity(100.0, HcpParams(100.0, 0.99).R_hc))


def test_hcp_parent_intensity_rejects_max_distance():
    lam = 100.0
    r_max = 1.0 / math.sqrt(math.pi * lam)
    with pytest.raises(ValueError):
        hcp_parent_intensity(lam, r_max * (1.0 + 1e-9))
    with pytest.raises(ValueError):
        HcpParams(100.0, 1.0)


def test_hcp_rho_zero_is_plain_ppp():
    params = HcpParams(500.0, 0.0)
    pat = sample_matern_hcp2(params, WIN, 3)
    counts = [sample_matern_hcp2(params, WIN, s).n for s in range(2000)]
    assert abs(np.mean(counts) - 2000.0) < 4.0 * math.sqrt(2000.0 / 2000)
    assert pat.intensity_nominal == 500.0


def test_hcp_hardcore_property_exact():
    params = HcpParams(500.0, 0.5)
    for seed in range(20):
        pts = sample_matern_hcp2(params, WIN, seed).points
        d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1)
        np.fill_diagonal(d2, np.inf)
        assert d2.min() >= params.R_hc ** 2


def test_hcp_empirical_intensity_high_rho():
    params = HcpParams(500.0, 0.9)
    total = sum(sample_matern_hcp2(params, WIN, 2000 + i).n for i in range(100))
    emp = total / (100 * WIN.area)
    assert abs(emp / 500.0 - 1.0) < 0.03


def test_patterns_stay_inside_window():
    for seed in range(5):
        for pat in (
            sample_ppp(200.0, WIN, seed),
            sample_matern_cluster(ClusterParams(30.0, 300.0, 0.15), WIN, seed),
            sample_matern_hcp2(HcpParams(300.0, 0.7), WIN, seed),
        ):
            pts = pat.points
            assert (pts[:, 0] >= WIN.x_min).all() and (pts[:, 0] <= WIN.x_max).all()
            assert (pts[:, 1] >= WIN.y_min).all() and (pts[:, 1] <= WIN.y_max).all()
