"""Experiment orchestration: regret accounting, validation, sweeps, slopes.

A sweep runs a grid of (algorithm, horizon, replicate) cells, each with a
derived seed, writes one JSON + trace CSV per run under
out/<name>/<variant>/<T>/<seed>/, aggregates per-horizon means into a sweep
CSV, and fits the regret exponent by least squares on (ln T, ln mean).
Horizons where a run burned more than 90% of its budget inside the very
first estimate are flagged pre-asymptotic and excluded from the fit (the
sampling constants would mask the exponent); exclusions are recorded in the
summary.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from monobandit.algorithms import RunResult, run_variant
from monobandit.objective import (
    NoiseModel,
    ObjectiveSpec,
    make_quadratic,
    make_quartic_blend,
)
from monobandit.oracle import EV_GUARD_CLAMP, Trace, write_trace_csv

__all__ = [
    "RegretReport",
    "ValidationSummary",
    "SweepResult",
    "cumulative_regret",
    "validate_trace",
    "validate_run",
    "fit_regret_slope",
    "run_sweep",
    "build_objective",
    "build_noise",
    "contraction_cap",
]

PRE_ASYMPTOTIC_FRACTION = 0.9
SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# Regret accounting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegretReport:
    T: int
    cum_regret: float
    algo: str = ""
    config_digest: str = ""
    seed: int = 0
    kappa: float = 1.0
    violations: dict = field(default_factory=dict)
    inst_series_path: Optional[str] = None


def cumulative_regret(
    trace: Trace,
    spec: ObjectiveSpec,
    *,
    algo: str = "",
    config_digest: str = "",
    seed: int = 0,
    kappa: float = 1.0,
    inst_series_path: Optional[str] = None,
) -> RegretReport:
    """Sum f(x) - f(x*) over all ledger entries, against the analytic optimum.

    Uses the spec, not the noisy observations; the oracle recorded the same
    quantity per entry, so the total agrees with the inst_regret column.
    """
    if trace.n == 0:
        raise ValueError("empty trace")
    x = trace.x[: trace.n]
    inst = np.asarray(spec.f(x), dtype=float) - spec.f_star
    cum = float(np.add.reduce(inst))
    xcol = x
    violations = {
        "monotone_violations": int(np.count_nonzero(np.diff(xcol) < 0)),
        "guard_clamps": trace.event_count(EV_GUARD_CLAMP),
        "overshoot_count": int(np.count_nonzero(xcol > spec.x_star)),
    }
    return RegretReport(
        T=trace.n, cum_regret=cum, algo=algo, config_digest=config_digest,
        seed=seed, kappa=kappa, violations=violations,
        inst_series_path=inst_series_path,
    )


# ---------------------------------------------------------------------------
# Structural validation
# ---------------------------------------------------------------------------

def contraction_cap(alpha: float, beta: float, gamma: float) -> float:
    """Per-jump regret contraction bound 1 - 2*alpha*c, c = 1/(2b) - 1/((1+g)b)."""
    c = 1.0 / (2.0 * beta) - 1.0 / ((1.0 + gamma) * beta)
    return 1.0 - 2.0 * alpha * c


@dataclass
class ValidationSummary:
    monotone: bool
    monotone_violations: int
    guard_clamps: int
    overshoot_count: int
    max_overshoot: float
    contractions: list = field(default_factory=list)
    contraction_cap: Optional[float] = None
    contraction_ok: Optional[bool] = None
    bracket_clean: Optional[bool] = None
    bracket_failures: int = 0

    def as_dict(self) -> dict:
        return {
            "monotone": self.monotone,
            "monotone_violations": self.monotone_violations,
            "guard_clamps": self.guard_clamps,
            "overshoot_count": self.overshoot_count,
            "max_overshoot": self.max_overshoot,
            "contraction_cap": self.contraction_cap,
            "contraction_ok": self.contraction_ok,
            "bracket_clean": self.bracket_clean,
            "bracket_failures": self.bracket_failures,
        }


def validate_trace(
    trace: Trace,
    spec: ObjectiveSpec,
    *,
    jumps: Optional[Sequence] = None,
    estimates: Optional[Sequence] = None,
    gamma: Optional[float] = None,
) -> ValidationSummary:
    """Audit a ledger: monotonicity, overshoot, contraction, bracket replay.

    Never raises. The contraction check (per-jump regret ratio against
    1 - 2*alpha*c) runs when jumps and gamma are supplied; the bracket
    replay (analytic grad(x_lo) <= g <= grad(x_hi) for every recorded
    estimate) when estimates are supplied.
    """
    x = trace.x[: trace.n]
    diffs = np.diff(x)
    violations = int(np.count_nonzero(diffs < 0))
    over = x > spec.x_star
    summary = ValidationSummary(
        monotone=bool(violations == 0),
        monotone_violations=violations,
        guard_clamps=trace.event_count(EV_GUARD_CLAMP),
        overshoot_count=int(np.count_nonzero(over)),
        max_overshoot=float(np.max(x[over] - spec.x_star)) if over.any() else 0.0,
    )
    if estimates is not None:
        failures = 0
        tol = 1e-12
        for est in estimates:
            g_lo = float(spec.grad(est.x_lo))
            g_hi = float(spec.grad(est.x_hi))
            if not (g_lo - tol <= est.g <= g_hi + tol):
                failures += 1
        summary.bracket_clean = failures == 0
        summary.bracket_failures = failures
    if jumps is not None and gamma is not None:
        cap = contraction_cap(spec.alpha, spec.beta, gamma)
        f_star = spec.f_star
        ratios = []
        ok = True
        for j in jumps:
            h_from = float(spec.f(j.from_x)) - f_star
            h_to = float(spec.f(j.to_x)) - f_star
            if h_from <= 0.0:
                continue  # jumping from the optimum itself; vacuous
            ratio = h_to / h_from
            ratios.append(ratio)
            if ratio > cap * (1.0 + 1e-12):
                ok = False
        summary.contractions = ratios
        summary.contraction_cap = cap
        summary.contraction_ok = ok
    return summary


def validate_run(result: RunResult) -> ValidationSummary:
    """validate_trace with the run's own jumps, estimates, and gamma."""
    return validate_trace(
        result.trace,
        result.spec,
        jumps=result.jumps,
        estimates=result.estimates,
        gamma=result.config.gamma,
    )


# ---------------------------------------------------------------------------
# Slope fitting
# ---------------------------------------------------------------------------

def fit_regret_slope(points: Sequence[tuple[float, float]]) -> tuple[float, float, float]:
    """OLS of ln(regret) on ln(T); returns (slope, intercept, r2).

    Needs at least 3 distinct horizons. Non-positive regret values are
    floored at 1e-12 before taking logs. A constant series fits slope 0
    with r2 = 1.
    """
    pts = [(float(T), float(r)) for T, r in points]
    horizons = {T for T, _ in pts}
    if len(horizons) < 3:
        raise ValueError(f"need at least 3 distinct horizons, got {len(horizons)}")
    ln_t = np.array([math.log(T) for T, _ in pts])
    ln_r = np.array([math.log(max(r, 1e-12)) for _, r in pts])
    slope, intercept = np.polyfit(ln_t, ln_r, 1)
    fitted = slope * ln_t + intercept
    ss_res = float(np.sum((ln_r - fitted) ** 2))
    ss_tot = float(np.sum((ln_r - ln_r.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), r2


# ---------------------------------------------------------------------------
# Config parsing shared by the CLI and sweep files
# ---------------------------------------------------------------------------

def build_objective(cfg: dict) -> ObjectiveSpec:
    """{"family": "quad"|"quartic", "center", ..., "lo", "hi"} -> spec."""
    family = cfg.get("family")
    if family == "quad":
        return make_quadratic(cfg["center"], cfg["curv"], cfg["lo"], cfg["hi"])
    if family == "quartic":
        return make_quartic_blend(cfg["center"], cfg["a"], cfg["b"], cfg["lo"], cfg["hi"])
    raise ValueError(f"unknown objective family {family!r} (want quad or quartic)")


def build_noise(cfg: dict) -> NoiseModel:
    return NoiseModel(
        kind=cfg.get("kind", "uniform"),
        diameter=cfg.get("diameter", 1.0),
        seed=cfg.get("seed", 0),
    )


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

@dataclass
class AlgoSweepSummary:
    variant: str
    label: str
    slope: Optional[float]
    intercept: Optional[float]
    r2: Optional[float]
    points: list  # [T, mean, std]
    excluded: list
    kappa: float
    config_digests: dict
    failed_cells: list


@dataclass
class SweepResult:
    name: str
    kappa: float
    out_dir: str
    algos: dict  # label -> AlgoSweepSummary


_REQUIRED_SWEEP_KEYS = ("name", "objective", "noise", "algos", "horizons", "replicates")


def _validate_sweep_config(cfg: dict) -> None:
    missing = [k for k in _REQUIRED_SWEEP_KEYS if k not in cfg]
    if missing:
        raise ValueError(f"sweep config missing keys: {missing}")
    if not isinstance(cfg["algos"], list):
        raise ValueError("sweep 'algos' must be a list of {variant, overrides...}")
    if int(cfg["replicates"]) <= 0:
        raise ValueError("replicates must be positive")


def _run_cell(cell: dict) -> dict:
    """One (algo, horizon, replicate) cell; executed possibly in a subprocess."""
    out_dir = Path(cell["out_dir"])
    try:
        spec = build_objective(cell["objective"])
        noise = build_noise(cell["noise"])
        overrides = dict(cell["overrides"])
        result = run_variant(
            cell["variant"], spec, noise, cell["T"], seed=cell["seed"], **overrides
        )
        report = result.to_json_dict()
        out_dir.mkdir(parents=True, exist_ok=True)
        if cell["write_trace"]:
            trace_path = out_dir / "trace.csv"
            write_trace_csv(result.trace, trace_path)
            report["trace_path"] = str(trace_path)
        first_frac = result.samples_first_estimate / cell["T"]
        report["pre_asymptotic"] = bool(first_frac > PRE_ASYMPTOTIC_FRACTION)
        with open(out_dir / "run.json", "w") as fh:
            json.dump(report, fh, indent=1)
        return {
            "label": cell["label"],
            "variant": cell["variant"],
            "T": cell["T"],
            "seed": cell["seed"],
            "cum_regret": report["cum_regret"],
            "pre_asymptotic": report["pre_asymptotic"],
            "config_digest": report["config_digest"],
            "violations": report["violations"],
            "error": None,
        }
    except Exception as exc:  # per-cell failures never abort the sweep
        return {
            "label": cell["label"],
            "variant": cell["variant"],
            "T": cell["T"],
            "seed": cell["seed"],
            "cum_regret": None,
            "pre_asymptotic": False,
            "config_digest": None,
            "violations": None,
            "error": f"{type(exc).__name__}: {exc}",
        }


def run_sweep(config: dict | str | Path, out_root: str | Path, workers: int = 1) -> SweepResult:
    """Run every (algo, T, replicate) cell and aggregate.

    Replicate r uses seed base_seed + r, matched across algorithms and
    horizons. Per-run artifacts land under out/<name>/<label>/<T>/<seed>/;
    aggregation writes <label>/summary.json (slope schema), sweep.csv and
    summary.json at the sweep root. config["write_traces"] may be true
    (default), false, or "first" (only replicate 0, keeps sweeps at large
    T from swamping the disk).
    """
    if not isinstance(config, dict):
        with open(config) as fh:
            config = json.load(fh)
    _validate_sweep_config(config)
    name = config["name"]
    kappa = float(config.get("kappa", 1.0))
    base_seed = int(config.get("seed", 0))
    replicates = int(config["replicates"])
    horizons = sorted({int(T) for T in config["horizons"]})
    write_traces = config.get("write_traces", True)
    sweep_dir = Path(out_root) / name
    sweep_dir.mkdir(parents=True, exist_ok=True)

    cells = []
    labels = []
    for algo_cfg in config["algos"]:
        algo_cfg = dict(algo_cfg)
        variant = algo_cfg.pop("variant")
        label = algo_cfg.pop("label", variant)
        if label in labels:
            raise ValueError(f"duplicate algo label {label!r}; set distinct 'label' keys")
        labels.append(label)
        overrides = algo_cfg
        if "kappa" not in overrides and variant != "lgd_noiseless" and variant != "kw_baseline":
            overrides["kappa"] = kappa
        for T in horizons:
            for r in range(replicates):
                seed = base_seed + r
                write_trace = write_traces is True or (write_traces == "first" and r == 0)
                cells.append(
                    {
                        "label": label,
                        "variant": variant,
                        "objective": config["objective"],
                        "noise": config["noise"],
                        "overrides": overrides,
                        "T": T,
                        "seed": seed,
                        "write_trace": write_trace,
                        "out_dir": str(sweep_dir / label / str(T) / str(seed)),
                    }
                )

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_cell, cells))
    else:
        rows = [_run_cell(cell) for cell in cells]

    # Sweep CSV: one row per completed cell.
    with open(sweep_dir / "sweep.csv", "w") as fh:
        fh.write("label,variant,T,seed,cum_regret,pre_asymptotic,error\n")
        for row in rows:
            reg = "" if row["cum_regret"] is None else f"{row['cum_regret']:.17g}"
            err = (row["error"] or "").replace(",", ";")
            fh.write(
                f"{row['label']},{row['variant']},{row['T']},{row['seed']},"
                f"{reg},{int(row['pre_asymptotic'])},{err}\n"
            )

    algo_summaries: dict[str, AlgoSweepSummary] = {}
    for label in labels:
        mine = [r for r in rows if r["label"] == label]
        variant = mine[0]["variant"]
        failed = [r for r in mine if r["error"] is not None]
        points = []
        excluded = []
        for T in horizons:
            cellrows = [r for r in mine if r["T"] == T and r["error"] is None]
            if not cellrows:
                excluded.append(T)
                continue
            regs = np.array([r["cum_regret"] for r in cellrows])
            flagged = np.mean([r["pre_asymptotic"] for r in cellrows])
            points.append([T, float(regs.mean()), float(regs.std())])
            if flagged > 0.5:
                excluded.append(T)
        fit_pts = [(T, m) for T, m, _ in points if T not in excluded]
        if len({T for T, _ in fit_pts}) >= 3:
            slope, intercept, r2 = fit_regret_slope(fit_pts)
        else:
            slope = intercept = r2 = None
        digests = sorted({r["config_digest"] for r in mine if r["config_digest"]})
        summary = AlgoSweepSummary(
            variant=variant, label=label, slope=slope, intercept=intercept, r2=r2,
            points=points, excluded=excluded, kappa=kappa,
            config_digests={label: digests},
            failed_cells=[
                {"T": r["T"], "seed": r["seed"], "error": r["error"]} for r in failed
            ],
        )
        algo_summaries[label] = summary
        algo_dir = sweep_dir / label
        algo_dir.mkdir(parents=True, exist_ok=True)
        with open(algo_dir / "summary.json", "w") as fh:
            json.dump(
                {
                    "version": SCHEMA_VERSION,
                    "name": name,
                    "variant": variant,
                    "label": label,
                    "slope": slope,
                    "intercept": intercept,
                    "r2": r2,
                    "points": summary.points,
                    "excluded": summary.excluded,
                    "kappa": kappa,
                    "config_digests": digests,
                    "failed_cells": summary.failed_cells,
                },
                fh,
                indent=1,
            )

    with open(sweep_dir / "summary.json", "w") as fh:
        json.dump(
            {
                "version": SCHEMA_VERSION,
                "name": name,
                "kappa": kappa,
                "horizons": horizons,
                "replicates": replicates,
                "algos": {
                    label: {
                        "variant": s.variant,
                        "slope": s.slope,
                        "intercept": s.intercept,
                        "r2": s.r2,
                        "points": s.points,
                        "excluded": s.excluded,
                        "config_digests": s.config_digests[label],
                        "failed_cells": s.failed_cells,
                    }
                    for label, s in algo_summaries.items()
                },
            },
            fh,
            indent=1,
        )
    return SweepResult(name=name, kappa=kappa, out_dir=str(sweep_dir), algos=algo_summaries)
