"""Handover-count based velocity estimation and mobility state detection."""

__version__ = "0.1.0"

from ._kernels import backend_name
from .estimation import (
    CrlbResult,
    VelocityEstimate,
    crlb_gamma_asymptotic,
    crlb_gaussian,
    dlogf_dv_gamma,
    mvu_estimate,
    mvu_variance,
)
from .harness import (
    ExperimentPlan,
    MetricsRecord,
    TripWindow,
    rng_for_trial,
    run_msd_experiment,
    run_pmf_experiment,
    run_rmse_experiment,
    run_trip_demo,
    simulate_counts,
    train_profile,
)
from .hostats import (
    GammaApprox,
    GaussianApprox,
    HandoverPmf,
    empirical_pmf,
    fit_gamma_params,
    fit_gaussian_sigma2,
    gamma_params,
    gamma_pmf,
    gamma_pmf_table,
    gaussian_params,
    gaussian_pmf,
    gaussian_pmf_table,
    mean_handovers,
    pmf_mse,
)
from .mobility import (
    RwpParams,
    SpeedProfile,
    Trajectory,
    linear_trajectory,
    profile_trajectory,
    sample_rwp,
)
from .msd import (
    MobilityState,
    MsdConfig,
    StateProbs,
    average_detection_probability,
    detect_state,
    detection_probability,
    handover_thresholds,
    state_probabilities,
    threshold_sweep,
)
from .pointprocess import (
    ClusterParams,
    HcpParams,
    PointPattern,
    Window,
    hcp_parent_intensity,
    poisson_count,
    sample_matern_cluster,
    sample_matern_hcp2,
    sample_ppp,
)
from .scenario import Scenario, canonical_to_kmh, kmh_to_canonical, scaled_intensity
from .special import (
    ConvergenceError,
    digamma,
    generalized_incomplete_gamma,
    hyp2f2_special,
    lower_incomplete_gamma,
)
from .traversal import (
    HandoverCount,
    count_handovers,
    crossing_events,
    nearest_site,
    safe_window_for,
    segment_counts,
)

__all__ = [
    "ClusterParams",
    "ConvergenceError",
    "CrlbResult",
    "ExperimentPlan",
    "GammaApprox",
    "GaussianApprox",
    "HandoverCount",
    "HandoverPmf",
    "HcpParams",
    "MetricsRecord",
    "MobilityState",
    "MsdConfig",
    "PointPattern",
    "RwpParams",
    "Scenario",
    "SpeedProfile",
    "StateProbs",
    "Trajectory",
    "TripWindow",
    "VelocityEstimate",
    "Window",
    "average_detection_probability",
    "backend_name",
    "canonical_to_kmh",
    "count_handovers",
    "crlb_gamma_asymptotic",
    "crlb_gaussian",
    "crossing_events",
    "detect_state",
    "detection_probability",
    "digamma",
    "dlogf_dv_gamma",
    "empirical_pmf",
    "fit_gamma_params",
    "fit_gaussian_sigma2",
    "gamma_params",
    "gamma_pmf",
    "gamma_pmf_table",
    "gaussian_params",
    "gaussian_pmf",
    "gaussian_pmf_table",
    "generalized_incomplete_gamma",
    "handover_thresholds",
    "hcp_parent_intensity",
    "hyp2f2_special",
    "kmh_to_canonical",
    "linear_trajectory",
    "lower_incomplete_gamma",
    "mean_handovers",
    "mvu_estimate",
    "mvu_variance",
    "nearest_site",
    "pmf_mse",
    "poisson_count",
    "profile_trajectory",
    "rng_for_trial",
    "run_msd_experiment",
    "run_pmf_experiment",
    "run_rmse_experiment",
    "run_trip_demo",
    "safe_window_for",
    "sample_matern_cluster",
    "sample_matern_hcp2",
    "sample_ppp",
    "sample_rwp",
    "scaled_intensity",
    "segment_counts",
    "simulate_counts",
    "state_probabilities",
    "threshold_sweep",
    "train_profile",
]
