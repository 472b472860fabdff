"""Command-line front end: analytic tables and Monte Carlo experiments.

Speeds enter in km/h and are converted at this boundary. Every file command
validates its arguments before any computation starts, embeds the full input
manifest in the output and writes atomically. Exit codes: 0 success, 2 usage,
1 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .estimation import crlb_gamma_asymptotic, crlb_gaussian, mvu_estimate, mvu_variance
from .harness import (
    ExperimentPlan,
    run_pmf_experiment,
    run_rmse_experiment,
    run_trip_demo,
    simulate_counts,
    train_profile,
)
from .hostats import (
    gamma_params,
    gamma_pmf_table,
    gaussian_params,
    gaussian_pmf_table,
    pmf_mse,
)
from .mobility import SpeedProfile
from .msd import MsdConfig, detect_state, detection_probability, state_probabilities, threshold_sweep
from .pointprocess import ClusterParams, HcpParams
from .scenario import Scenario, kmh_to_canonical
from .tableio import FORMATS, read_manifest, render, write_atomic


def _float_list(text: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty number list")
    return values


def _parse_profile(text: str) -> SpeedProfile:
    if text == "train":
        return train_profile()
    try:
        legs = []
        for tok in text.split(","):
            dur, kmh = tok.split(":")
            legs.append((float(dur), kmh_to_canonical(float(kmh))))
        return SpeedProfile(tuple(legs))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"bad profile {text!r}; expected 'train' or 'dur_s:speed_kmh,...'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hocount",
        description="Handover-count velocity estimation and mobility state detection.",
    )
    parser.add_argument("--version", action="version", version=f"hocount {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_out=True):
        p.add_argument("--seed", type=int, default=0, help="master seed")
        p.add_argument("--trials", type=int, default=20000, help="Monte Carlo trials")
        p.add_argument("--threads", type=int, default=1, help="worker threads")
        if needs_out:
            p.add_argument("--out", required=True, help="output file path")
            p.add_argument("--format", choices=FORMATS, default="csv")

    p = sub.add_parser("pmf", help="empirical + analytic count pmfs with their MSEs")
    p.add_argument("--lambda", dest="lambda_", type=float, required=True)
    p.add_argument("--v-kmh", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    add_common(p)

    p = sub.add_parser("crlb", help="velocity CRLB grid (Gaussian closed form)")
    p.add_argument("--lambda", dest="lambda_", type=_float_list, required=True,
                   help="comma-separated intensities")
    p.add_argument("--v-kmh", type=_float_list, required=True, help="comma-separated speeds")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--gamma-asymptotic", action="store_true",
                   help="add simulation-based gamma-model rows")
    add_common(p)

    p = sub.add_parser("estimate", help="map one handover count to velocity and state")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--lambda", dest="lambda_", type=float, required=True)
    p.add_argument("--vl-kmh", type=float, default=40.0)
    p.add_argument("--vu-kmh", type=float, default=80.0)

    p = sub.add_parser("msd", help="state probability and P_D/P_FA curves")
    p.add_argument("--lambda", dest="lambda_", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--vl-kmh", type=float, default=40.0)
    p.add_argument("--vu-kmh", type=float, default=80.0)
    p.add_argument("--v-min", type=float, default=1.0)
    p.add_argument("--v-max", type=float, default=120.0)
    p.add_argument("--v-step", type=float, default=1.0)
    add_common(p)

    p = sub.add_parser("sweep-thresholds", help="average P_D per count-threshold pair")
    p.add_argument("--lambda", dest="lambda_", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--vl-kmh", type=float, default=40.0)
    p.add_argument("--vu-kmh", type=float, default=80.0)
    p.add_argument("--h-max", type=int, default=15)
    add_common(p)

    p = sub.add_parser("rmse", help="estimator RMSE for a deployment/mobility combination")
    p.add_argument("--deployment", choices=("ppp", "cluster", "hcp"), default="ppp")
    p.add_argument("--mobility", choices=("linear", "rwp"), default="linear")
    p.add_argument("--lambda", dest="lambda_", type=float,
                   help="PPP intensity (ppp deployment)")
    p.add_argument("--lambda0", type=float, help="cluster parent intensity")
    p.add_argument("--lambda1", type=float, help="cluster in-disc intensity")
    p.add_argument("--R", type=float, help="cluster disc radius, km")
    p.add_argument("--lambda-hc", type=float, help="hardcore target intensity")
    p.add_argument("--rho", type=float, help="hardcore randomness parameter in [0,1)")
    p.add_argument("--xi", type=float, help="RWP mobility parameter, 1/km^2")
    p.add_argument("--v-kmh", type=_float_list, required=True)
    p.add_argument("--T", type=float, required=True)
    add_common(p)

    p = sub.add_parser("trip", help="windowed estimates along a variable-speed trip")
    p.add_argument("--profile", type=str, default="train",
                   help="'train' or comma list of dur_s:speed_kmh legs")
    p.add_argument("--T-window", type=float, required=True)
    p.add_argument("--lambda", dest="lambda_", type=float, required=True)
    p.add_argument("--vl-kmh", type=float, default=40.0)
    p.add_argument("--vu-kmh", type=float, default=80.0)
    add_common(p)
    return parser


def compute_pmf(manifest: dict, threads: int = 1):
    scn = Scenario.from_kmh(manifest["lambda"], manifest["v_kmh"], manifest["T"])
    plan = ExperimentPlan(scenarios=(scn,), trials=manifest["trials"],
                          master_seed=manifest["seed"])
    empirical = run_pmf_experiment(plan, threads)
    h_max = empirical.max_support
    gamma = gamma_pmf_table(gamma_params(scn.d_sqrt_lambda), h_max)
    gauss = gaussian_pmf_table(gaussian_params(scn.d_sqrt_lambda), h_max)
    hs = list(range(h_max + 1))
    columns = {
        "h": hs,
        "empirical": [empirical.prob(h) for h in hs],
        "gamma": [gamma.prob(h) for h in hs],
        "gaussian": [gauss.prob(h) for h in hs],
    }
    notes = [
        f"mse_gamma: {pmf_mse(gamma, empirical)!r}",
        f"mse_gaussian: {pmf_mse(gauss, empirical)!r}",
    ]
    return columns, notes


def compute_crlb(manifest: dict, threads: int = 1):
    rows = {k: [] for k in ("lambda", "v_kmh", "T", "crlb_std_kmh", "mvu_std_kmh", "method")}
    T = manifest["T"]

    def add(scn, lam, v_kmh, result):
        rows["lambda"].append(lam)
        rows["v_kmh"].append(v_kmh)
        rows["T"].append(T)
        rows["crlb_std_kmh"].append(result.std_kmh)
        rows["mvu_std_kmh"].append(float(np.sqrt(mvu_variance(scn))) * 3600.0)
        rows["method"].append(result.method)

    for lam in manifest["lambda"]:
        for v_kmh in manifest["v_kmh"]:
            scn = Scenario.from_kmh(lam, v_kmh, T)
            add(scn, lam, v_kmh, crlb_gaussian(scn))
            if manifest["gamma_asymptotic"]:
                plan = ExperimentPlan(scenarios=(scn,), trials=manifest["trials"],
                                      master_seed=manifest["seed"])
                samples = simulate_counts(scn, plan, threads)
                add(scn, lam, v_kmh, crlb_gamma_asymptotic(samples, scn))
    return rows, []


def compute_msd(manifest: dict, threads: int = 1):
    cfg = MsdConfig.from_kmh(manifest["vl_kmh"], manifest["vu_kmh"],
                             manifest["T"], manifest["lambda"])
    grid = np.arange(manifest["v_min"], manifest["v_max"] + 1e-9, manifest["v_step"])
    rows = {k: [] for k in ("v_kmh", "p_low", "p_med", "p_high", "p_d", "p_fa")}
    for v_kmh in grid:
        scn = Scenario.from_kmh(manifest["lambda"], float(v_kmh), manifest["T"])
        probs = state_probabilities(scn, cfg)
        p_d, p_fa = detection_probability(scn, cfg)
        rows["v_kmh"].append(float(v_kmh))
        rows["p_low"].append(probs.p_low)
        rows["p_med"].append(probs.p_med)
        rows["p_high"].append(probs.p_high)
        rows["p_d"].append(p_d)
        rows["p_fa"].append(p_fa)
    return rows, [f"h_l: {cfg.h_l}", f"h_u: {cfg.h_u}"]


def compute_sweep(manifest: dict, threads: int = 1):
    table = threshold_sweep(manifest["lambda"], manifest["T"],
                            kmh_to_canonical(manifest["vl_kmh"]),
                            kmh_to_canonical(manifest["vu_kmh"]),
                            manifest["h_max"])
    best = max(table, key=lambda row: row[2])
    columns = {
        "h_l": [r[0] for r in table],
        "h_u": [r[1] for r in table],
        "avg_p_d": [r[2] for r in table],
    }
    return columns, [f"argmax: h_l={best[0]} h_u={best[1]} avg_p_d={best[2]!r}"]


def compute_rmse(manifest: dict, threads: int = 1):
    dep = manifest["deployment"]
    if dep == "cluster":
        cluster = ClusterParams(manifest["lambda0"], manifest["lambda1"], manifest["R"])
        lam = cluster.equivalent_intensity
        hcp = None
    elif dep == "hcp":
        hcp = HcpParams(manifest["lambda_hc"], manifest["rho"])
        lam = hcp.lambda_hc
        cluster = None
    else:
        cluster = hcp = None
        lam = manifest["lambda"]
    scenarios = tuple(Scenario.from_kmh(lam, v, manifest["T"]) for v in manifest["v_kmh"])
    plan = ExperimentPlan(
        scenarios=scenarios, deployment=dep, cluster=cluster, hcp=hcp,
        mobility=manifest["mobility"], rwp_xi=manifest.get("xi"),
        trials=manifest["trials"], master_seed=manifest["seed"],
    )
    records = run_rmse_experiment(plan, threads)
    columns = {
        "deployment": [r.deployment for r in records],
        "mobility": [r.mobility for r in records],
        "lambda": [r.scenario.lambda_ for r in records],
        "v_kmh": [r.scenario.v_kmh for r in records],
        "T": [r.scenario.T for r in records],
        "trials": [r.trials for r in records],
        "rmse_kmh": [r.rmse_kmh for r in records],
        "mean_h": [r.mean_h for r in records],
    }
    return columns, []


def compute_trip(manifest: dict, threads: int = 1):
    profile = _parse_profile(manifest["profile"])
    windows = run_trip_demo(profile, manifest["T_window"], manifest["lambda"],
                            manifest["seed"], manifest["vl_kmh"], manifest["vu_kmh"])
    columns = {
        "window": [w.index for w in windows],
        "t_start_s": [w.t_start for w in windows],
        "v_true_kmh": [w.v_true_kmh for w in windows],
        "v_hat_kmh": [w.v_hat_kmh for w in windows],
        "state": [w.state.value for w in windows],
    }
    return columns, []


_COMPUTE = {
    "pmf": compute_pmf,
    "crlb": compute_crlb,
    "msd": compute_msd,
    "sweep-thresholds": compute_sweep,
    "rmse": compute_rmse,
    "trip": compute_trip,
}


def run_from_manifest(manifest: dict, threads: int = 1) -> str:
    """Recompute a table from its embedded manifest and render it to text."""
    command = manifest["command"]
    columns, notes = _COMPUTE[command](manifest, threads)
    return render(manifest, columns, manifest["format"], notes)


def regenerate_file(path: str, threads: int = 1) -> str:
    return run_from_manifest(read_manifest(path), threads)


def _manifest_from_args(args) -> dict:
    skip = {"command", "out", "threads", "func"}
    manifest = {"command": args.command, "version": __version__}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        name = {"lambda_": "lambda"}.get(key, key)
        manifest[name] = value
    return manifest


def _validate(parser, args):
    positive = {"T": None, "T_window": None, "trials": None, "threads": None,
                "v_step": None, "h_max": None}
    for key in list(positive):
        if getattr(args, key, None) is not None and getattr(args, key) <= 0:
            parser.error(f"--{key.replace('_', '-')} must be positive")
    for key in ("lambda_", "lambda0", "lambda1", "R", "lambda_hc", "xi"):
        value = getattr(args, key, None)
        if value is not None:
            values = value if isinstance(value, list) else [value]
            if any(v <= 0 for v in values):
                parser.error(f"--{key.rstrip('_').replace('_', '-')} must be positive")
    if getattr(args, "seed", 0) < 0:
        parser.error("--seed must be nonnegative")
    for key in ("v_kmh", "vl_kmh", "vu_kmh", "v_min", "v_max"):
        value = getattr(args, key, None)
        if value is not None:
            values = value if isinstance(value, list) else [value]
            if any(v < 0 for v in values):
                parser.error(f"--{key.replace('_', '-')} must be nonnegative")
    if getattr(args, "h", None) is not None and args.h < 0:
        parser.error("--h must be nonnegative")
    if getattr(args, "vl_kmh", None) is not None and getattr(args, "vu_kmh", None) is not None:
        if not args.vl_kmh < args.vu_kmh:
            parser.error("--vl-kmh must be strictly below --vu-kmh")
    if getattr(args, "rho", None) is not None and not 0 <= args.rho < 1:
        parser.error("--rho must lie in [0, 1)")
    if args.command == "rmse":
        dep = args.deployment
        if dep == "ppp" and args.lambda_ is None:
            parser.error("ppp deployment needs --lambda")
        if dep == "cluster" and None in (args.lambda0, args.lambda1, args.R):
            parser.error("cluster deployment needs --lambda0, --lambda1 and --R")
        if dep == "hcp" and None in (args.lambda_hc, args.rho):
            parser.error("hcp deployment needs --lambda-hc and --rho")
        if args.mobility == "rwp" and args.xi is None:
            parser.error("rwp mobility needs --xi")
    if args.command == "trip":
        try:
            profile = _parse_profile(args.profile)
        except argparse.ArgumentTypeError as exc:
            parser.error(str(exc))
        if profile.total_duration < args.T_window:
            parser.error("profile is shorter than one measurement window")


def _run_estimate(args) -> str:
    est = mvu_estimate(args.h, args.T, args.lambda_)
    cfg = MsdConfig.from_kmh(args.vl_kmh, args.vu_kmh, args.T, args.lambda_)
    state = detect_state(est.v_hat, cfg)
    lines = [
        f"v_hat_kmh: {est.v_hat_kmh:.4g}",
        f"state: {state.value}",
    ]
    if est.v_hat > 0:
        scn = Scenario(args.lambda_, est.v_hat, args.T)
        lines.append(f"crlb_std_kmh: {crlb_gaussian(scn).std_kmh:.4g}")
    else:
        lines.append("crlb_std_kmh: n/a (zero estimate)")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        if args.command == "estimate":
            print(_run_estimate(args))
            return 0
        manifest = _manifest_from_args(args)
        text = run_from_manifest(manifest, threads=args.threads)
        write_atomic(args.out, text)
        # sidecar run manifest: the data file is regenerable from this alone
        write_atomic(args.out + ".manifest.json",
                     json.dumps(manifest, sort_keys=True, indent=2) + "\n")
        return 0
    except BrokenPipeError:
        raise
    except Exception as exc:  # runtime failure: report and exit 1, nothing written
        print(f"hocount: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
