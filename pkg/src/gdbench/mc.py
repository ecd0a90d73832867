"""Seeded Monte Carlo harness reproducing the figure studies as datasets.

Each experiment id maps to a sampling procedure; trials are drawn from a
counter-based Philox generator so a (config, seed) pair yields byte-identical
CSV output.  Numeric CSV fields are printed with 17 significant digits.
"""

from __future__ import annotations

import dataclasses
import importlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from gdbench import __version__
from gdbench.channels import discrete_params, liouville_gd, liouville_pgd, LiouvilleChannel
from gdbench.diamond import bound_report, diamond_oracle, identity_minus
from gdbench.estimation import (
    fit_exponential,
    simulate_avg_ramsey,
    simulate_population_inversion,
    simulate_static_ramsey,
)
from gdbench.model import PerturbedGDParams, SpamParams
from gdbench.rb import esum_from_observables, ideal_predictions, rb_observables
from gdbench.diamond import bound_new as bound_new_fn

log = logging.getLogger(__name__)

EXPERIMENTS = (
    "fig1a",
    "fig1b",
    "fig2a",
    "fig2b",
    "fig2c",
    "fig2d",
    "fig3a",
    "fig3b",
    "fig4",
)

DEFAULT_S_SWEEP = (1e-4, 3e-4, 1e-3, 3e-3, 1e-2)


@dataclass
class ExperimentConfig:
    """Settings of one Monte Carlo study."""

    experiment: str
    n_trials: int = 200
    seed: int = 0
    gamma2_prime: float = 0.1
    gamma1: float = 0.01
    lambda_lo: float = 0.8
    lambda_hi: float = 1.0
    s: float = 1e-3
    s_list: tuple = DEFAULT_S_SWEEP
    p_list: tuple = (0.0,)
    gamma2p_lo: float = 0.01
    gamma2p_hi: float = 1.0 / 70.0
    gamma2p_list: tuple = (0.02, 0.05, 0.1, 0.2)
    spam_k_hi: float = 0.02
    spam_n1_hi: float = 0.02
    spam_n2_abs: float = 0.02
    dt: float = 1.0
    n_times: int = 100
    n_angles: int = 0  # 0 -> analytic averaged Ramsey
    with_oracle: bool = True
    oracle_restarts: int = 8
    general_bound: str = ""  # optional "module:function" plug-in
    r_bin_edges: tuple = (0.0, 0.005, 0.01, 0.02, 0.05, 0.1)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1")
        for name in ("s_list", "p_list", "gamma2p_list", "r_bin_edges"):
            vals = tuple(float(x) for x in getattr(self, name))
            if not vals:
                raise ValueError(f"{name} must be nonempty")
            setattr(self, name, vals)
        if self.lambda_lo > self.lambda_hi or self.gamma2p_lo > self.gamma2p_hi:
            raise ValueError("range bounds out of order")


@dataclass
class ExperimentResult:
    """Trial rows plus summary rows plus reproducibility metadata."""

    trials: list
    summary: list
    meta: dict


def load_general_bound(spec: str) -> Optional[Callable]:
    """Resolve an optional 'module:function' comparator bound."""
    if not spec:
        return None
    mod_name, _, fn_name = spec.partition(":")
    if not fn_name:
        raise ValueError("general_bound must look like 'module:function'")
    return getattr(importlib.import_module(mod_name), fn_name)


def parse_config(path, overrides: Optional[dict] = None) -> ExperimentConfig:
    """Read a key=value config file ('#' comments, unknown keys rejected)."""
    raw = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        raw[key.strip()] = value.strip()
    if overrides:
        raw.update({k: v for k, v in overrides.items() if v is not None})
    fields = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
    unknown = set(raw) - set(fields)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if "experiment" not in raw:
        raise ValueError("config must set 'experiment'")
    kwargs = {}
    for key, value in raw.items():
        kwargs[key] = _coerce(fields[key], value)
    return ExperimentConfig(**kwargs)


def _coerce(f, value):
    if not isinstance(value, str):
        return value
    if f.type in ("int", int):
        return int(value)
    if f.type in ("float", float):
        return float(value)
    if f.type in ("bool", bool):
        if value.lower() in ("1", "true", "yes"):
            return True
        if value.lower() in ("0", "false", "no"):
            return False
        raise ValueError(f"bad boolean for {f.name}: {value!r}")
    if f.type in ("tuple", tuple):
        return tuple(float(x) for x in value.split(",") if x.strip())
    return value


def _rng(cfg: ExperimentConfig):
    return np.random.Generator(np.random.Philox(np.uint64(cfg.seed)))


def _sample_params(rng, cfg: ExperimentConfig, s: float) -> PerturbedGDParams:
    alpha_r, alpha_i, beta, delta = rng.uniform(-s, s, 4)
    lam = rng.uniform(cfg.lambda_lo, cfg.lambda_hi)
    return PerturbedGDParams(
        gamma1_rate=cfg.gamma1,
        gamma2_rate=cfg.gamma2_prime - cfg.gamma1 / 2.0,
        lambda_eq=lam,
        alpha_r=alpha_r,
        alpha_i=alpha_i,
        beta_raw=beta,
        delta_raw=delta,
    )


def _sample_spam(rng, cfg: ExperimentConfig) -> SpamParams:
    return SpamParams(
        k=rng.uniform(0.0, cfg.spam_k_hi),
        n1=rng.uniform(0.0, cfg.spam_n1_hi),
        n2=rng.uniform(-cfg.spam_n2_abs, cfg.spam_n2_abs),
    )


def _estimation_trial(rng, cfg: ExperimentConfig, kind: str, s: float) -> dict:
    """One sampled estimation experiment; kind in {t1, ramsey, avg_ramsey}."""
    params = _sample_params(rng, cfg, s)
    spam = _sample_spam(rng, cfg)
    if kind == "t1":
        times = np.linspace(0.0, 1.0 / cfg.gamma1, cfg.n_times)
        series = simulate_population_inversion(params, spam, times)
        truth = cfg.gamma1
    elif kind == "ramsey":
        times = np.linspace(0.0, 1.0 / cfg.gamma2_prime, cfg.n_times)
        series = simulate_static_ramsey(params, spam, times)
        truth = cfg.gamma2_prime
    else:
        times = np.linspace(0.0, 1.0 / cfg.gamma2_prime, cfg.n_times)
        n_angles = cfg.n_angles if cfg.n_angles > 0 else None
        series = simulate_avg_ramsey(params, spam, times, n_angles=n_angles)
        truth = cfg.gamma2_prime
    fit = fit_exponential(series)
    row = {
        "s": s,
        "alpha_r": params.alpha_r,
        "alpha_i": params.alpha_i,
        "beta": params.beta_raw,
        "delta": params.delta_raw,
        "lambda": params.lambda_eq,
        "k": spam.k,
        "n1": spam.n1,
        "n2": spam.n2,
        "estimate": fit.rate,
        "error": fit.rate - truth if fit.converged else float("nan"),
        "abs_error": abs(fit.rate - truth) if fit.converged else float("nan"),
        "converged": fit.converged,
        "iterations": fit.iterations,
    }
    return row


def _estimation_summary(rows: Iterable[dict], label: Optional[dict] = None) -> dict:
    rows = list(rows)
    good = [r for r in rows if r["converged"]]
    n_failed = len(rows) - len(good)
    if n_failed:
        log.warning("%d non-converged fits excluded from means", n_failed)
    out = dict(label or {})
    out.update(
        n_trials=len(rows),
        n_converged=len(good),
        n_failed=n_failed,
        mean_estimate=float(np.mean([r["estimate"] for r in good])) if good else float("nan"),
        mean_error=float(np.mean([r["error"] for r in good])) if good else float("nan"),
        mean_abs_error=float(np.mean([r["abs_error"] for r in good])) if good else float("nan"),
    )
    return out


def _channel_trial_fig3(rng, cfg: ExperimentConfig, s: float, trial: int) -> dict:
    """One perturbed-generator channel with RB observables, bounds, oracle."""
    params = _sample_params(rng, cfg, s)
    report = bound_report(
        params,
        cfg.dt,
        with_oracle=cfg.with_oracle,
        oracle_restarts=cfg.oracle_restarts,
        oracle_seed=cfg.seed + trial,
        general_bound_fn=load_general_bound(cfg.general_bound),
    )
    channel = liouville_pgd(params, cfg.dt)
    measured = rb_observables(channel)
    g1, g2 = discrete_params(params.gamma1_rate, params.gamma2_rate, cfg.dt)
    ideal = ideal_predictions(g1, g2)
    row = {
        "s": s,
        "alpha_r": params.alpha_r,
        "alpha_i": params.alpha_i,
        "beta": params.beta_raw,
        "delta": params.delta_raw,
        "lambda": params.lambda_eq,
        "r": measured.r,
        "r_ideal": ideal.r,
        "unitarity": measured.unitarity,
        "esum": report.esum_used,
        "eps_gd_ub": report.eps_gd_ub,
        "bound_new": report.bound_new,
        "bound_robust": report.bound_robust,
        "bound_new_user": report.bound_new_user,
        "bound_robust_user": report.bound_robust_user,
        "oracle": report.oracle_diamond if report.oracle_diamond is not None else float("nan"),
        "general_bound": report.general_bound
        if report.general_bound is not None
        else float("nan"),
    }
    return row


def _channel_trial_fig4(rng, cfg: ExperimentConfig, p: float, trial: int) -> dict:
    """One discrete Eq.-type channel: GD plus uniform unital block noise."""
    g2p = rng.uniform(cfg.gamma2p_lo, cfg.gamma2p_hi)
    g1_rate = g2p / 10.0
    g2_rate = g2p - g1_rate / 2.0
    lam = rng.uniform(cfg.lambda_lo, cfg.lambda_hi)
    gamma1, gamma2 = discrete_params(g1_rate, g2_rate, cfg.dt)
    pert = rng.uniform(-p * g2p, p * g2p, size=(3, 3))
    base = liouville_gd(gamma1, gamma2, lam)
    m = np.array(base.matrix)
    m[1:, 1:] += pert
    channel = LiouvilleChannel(matrix=m)
    measured = rb_observables(channel)
    ideal = ideal_predictions(gamma1, gamma2)
    esum = esum_from_observables(measured, ideal, gamma1, gamma2)
    new = bound_new_fn(gamma1, gamma2, esum)
    oracle = float("nan")
    if cfg.with_oracle:
        oracle = diamond_oracle(
            identity_minus(channel),
            restarts=cfg.oracle_restarts,
            seed=cfg.seed + trial,
        ).value
    general_fn = load_general_bound(cfg.general_bound)
    general = general_fn(measured) if general_fn is not None else float("nan")
    return {
        "p": p,
        "gamma2_prime": g2p,
        "gamma1_rate": g1_rate,
        "lambda": lam,
        "r": measured.r,
        "esum": esum,
        "bound_new": new,
        "oracle": oracle,
        "general_bound": general,
        "cp_flag": channel.is_cptp(1e-12),
    }


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run the configured study; deterministic for a fixed (config, seed)."""
    rng = _rng(config)
    trials: list = []
    summary: list = []
    exp = config.experiment

    if exp in ("fig1a", "fig2a", "fig2b"):
        kind = {"fig1a": "t1", "fig2a": "ramsey", "fig2b": "avg_ramsey"}[exp]
        for i in range(config.n_trials):
            row = _estimation_trial(rng, config, kind, config.s)
            row["trial"] = i
            trials.append(row)
        summary.append(_estimation_summary(trials))

    elif exp in ("fig1b", "fig2d"):
        kind = "t1" if exp == "fig1b" else "avg_ramsey"
        for s in config.s_list:
            rows = []
            for i in range(config.n_trials):
                row = _estimation_trial(rng, config, kind, s)
                row["trial"] = i
                rows.append(row)
            trials.extend(rows)
            summary.append(_estimation_summary(rows, {"s": s}))
        slope, intercept = sweep_slope(
            [(r["s"], r["mean_abs_error"]) for r in summary]
        )
        summary.append({"slope": slope, "intercept": intercept})

    elif exp == "fig2c":
        for s in config.s_list:
            static_rows, avg_rows = [], []
            for i in range(config.n_trials):
                row = _estimation_trial(rng, config, "ramsey", s)
                row.update(trial=i, kind="ramsey")
                static_rows.append(row)
                row = _estimation_trial(rng, config, "avg_ramsey", s)
                row.update(trial=i, kind="avg_ramsey")
                avg_rows.append(row)
            trials.extend(static_rows)
            trials.extend(avg_rows)
            s_sum = _estimation_summary(static_rows, {"s": s})
            a_sum = _estimation_summary(avg_rows, {"s": s})
            summary.append(
                {
                    "s": s,
                    "mean_abs_error_static": s_sum["mean_abs_error"],
                    "mean_abs_error_avg": a_sum["mean_abs_error"],
                    "n_failed": s_sum["n_failed"] + a_sum["n_failed"],
                }
            )

    elif exp == "fig3a":
        for s in config.s_list:
            rows = []
            for i in range(config.n_trials):
                row = _channel_trial_fig3(rng, config, s, len(trials) + i)
                row["trial"] = i
                rows.append(row)
            trials.extend(rows)
            summary.append(_fig3_summary(rows, s))

    elif exp == "fig3b":
        general_fn = load_general_bound(config.general_bound)
        for g2p in config.gamma2p_list:
            sub = dataclasses.replace(
                config, experiment="fig3a", gamma2_prime=g2p, gamma1=g2p / 10.0
            )
            per_s = []
            for s in config.s_list:
                rows = []
                for i in range(config.n_trials):
                    row = _channel_trial_fig3(rng, sub, s, len(trials) + i)
                    row.update(trial=i, gamma2_prime=g2p)
                    rows.append(row)
                trials.extend(rows)
                agg = _fig3_summary(rows, s)
                agg["gamma2_prime"] = g2p
                per_s.append(agg)
                summary.append(agg)
            s_star = _crossover(per_s) if general_fn is not None else float("nan")
            summary.append(
                {
                    "gamma2_prime": g2p,
                    "mean_r": float(np.mean([a["mean_r"] for a in per_s])),
                    "s_star": s_star,
                }
            )

    elif exp == "fig4":
        for p in config.p_list:
            for i in range(config.n_trials):
                row = _channel_trial_fig4(rng, config, p, len(trials))
                row["trial"] = i
                trials.append(row)
        summary.extend(fig4_binning(trials, config.r_bin_edges, config.p_list))

    meta = {
        "experiment": exp,
        "seed": config.seed,
        "rng": "philox4x64",
        "version": __version__,
        "config": dataclasses.asdict(config),
    }
    for row in trials:
        bad = [k for k, v in row.items() if isinstance(v, float) and not np.isfinite(v)]
        allowed_nan = {"oracle", "general_bound", "s_star", "error", "abs_error", "estimate"}
        if set(bad) - allowed_nan:
            raise AssertionError(f"non-finite trial fields: {bad}")
    return ExperimentResult(trials=trials, summary=summary, meta=meta)


def _fig3_summary(rows: Sequence[dict], s: float) -> dict:
    def mean(key):
        return float(np.mean([r[key] for r in rows]))

    chain_ok = sum(
        1
        for r in rows
        if r["bound_robust_user"] >= r["bound_robust"] - 1e-12
        and r["bound_robust"] >= r["bound_new"] - 1e-12
        and (np.isnan(r["oracle"]) or r["bound_new"] >= r["oracle"] - 1e-12)
    )
    return {
        "s": s,
        "mean_r": mean("r"),
        "mean_esum": mean("esum"),
        "mean_bound_new": mean("bound_new"),
        "mean_bound_robust": mean("bound_robust"),
        "mean_bound_new_user": mean("bound_new_user"),
        "mean_bound_robust_user": mean("bound_robust_user"),
        "mean_oracle": mean("oracle"),
        "mean_general_bound": mean("general_bound"),
        "chain_ok_fraction": chain_ok / len(rows),
    }


def _crossover(per_s: Sequence[dict]) -> float:
    """Smallest s where the robust bound stops beating the general bound."""
    for agg in sorted(per_s, key=lambda a: a["s"]):
        if agg["mean_bound_robust"] >= agg["mean_general_bound"]:
            return agg["s"]
    return float("nan")


def sweep_slope(dataset) -> tuple:
    """OLS slope/intercept of log10(mean error) against log10(s).

    Accepts an ExperimentResult of a sweep experiment or an iterable of
    (s, mean_error) pairs; needs at least 4 positive points.
    """
    if isinstance(dataset, ExperimentResult):
        pairs = [
            (row["s"], row["mean_abs_error"])
            for row in dataset.summary
            if "s" in row and "mean_abs_error" in row
        ]
    else:
        pairs = list(dataset)
    pairs = [(s, e) for s, e in pairs if s > 0 and e > 0]
    if len(pairs) < 4:
        raise ValueError("need at least 4 positive sweep points")
    x = np.log10([p[0] for p in pairs])
    y = np.log10([p[1] for p in pairs])
    slope, intercept = np.polyfit(x, y, 1)
    return float(slope), float(intercept)


def fig4_binning(trials: Sequence[dict], r_bin_edges: Sequence[float], p_values) -> list:
    """Aggregate fig4 trials into (p, r-bin) cells; empty cells are omitted."""
    edges = list(r_bin_edges)
    out = []
    for p in p_values:
        for lo, hi in zip(edges[:-1], edges[1:]):
            cell = [t for t in trials if t["p"] == p and lo <= t["r"] < hi]
            if not cell:
                continue
            have_general = not all(np.isnan(t["general_bound"]) for t in cell)
            improved = float("nan")
            if have_general:
                improved = float(
                    np.mean([t["general_bound"] > t["bound_new"] for t in cell])
                )
            out.append(
                {
                    "p": p,
                    "r_lo": lo,
                    "r_hi": hi,
                    "count": len(cell),
                    "mean_r": float(np.mean([t["r"] for t in cell])),
                    "mean_oracle": float(np.mean([t["oracle"] for t in cell])),
                    "mean_bound_new": float(np.mean([t["bound_new"] for t in cell])),
                    "mean_general_bound": float(
                        np.mean([t["general_bound"] for t in cell])
                    )
                    if have_general
                    else float("nan"),
                    "improvement_fraction": improved,
                }
            )
    return out


def _fmt(value) -> str:
    if isinstance(value, bool) or isinstance(value, np.bool_):
        return "1" if value else "0"
    if isinstance(value, (float, np.floating)):
        return f"{value:.17g}"
    return str(value)


def _write_rows(path: Path, rows: Sequence[dict]):
    keys: list = []
    for row in rows:
        for k in row:
            if k not in keys:
                keys.append(k)
    with open(path, "w") as fh:
        fh.write(",".join(keys) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(row[k]) if k in row else "" for k in keys) + "\n")


def write_dataset(result: ExperimentResult, outdir) -> None:
    """Write trials.csv, summary.csv and meta.json under outdir."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    order = sorted(range(len(result.trials)), key=lambda i: i)  # trial order preserved
    _write_rows(out / "trials.csv", [result.trials[i] for i in order])
    _write_rows(out / "summary.csv", result.summary)
    (out / "meta.json").write_text(json.dumps(result.meta, indent=2, sort_keys=True) + "\n")
