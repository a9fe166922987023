"""Figure rendering from monobandit output files.

Inputs are the harness's wire formats only: sweep summary JSON (version
field checked) and trace CSV (exact header checked). Every figure writes a
sidecar JSON next to the image containing exactly the series plotted, so
golden tests compare data instead of pixels. Rendering is deterministic:
fixed figure geometry, fonts, and downsampling rules.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["SchemaError", "FigureSpec", "render", "KINDS"]

KINDS = ("regret_curve", "loglog_slope", "lag_timeline")
SUPPORTED_VERSION = 1
TRACE_HEADER = ["t", "x", "y", "inst_regret", "phase", "lag", "event"]
MAX_CURVE_POINTS = 10_000

plt.rcParams.update({
    "figure.figsize": (7.0, 4.5),
    "figure.dpi": 110,
    "font.family": "DejaVu Sans",
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
})


class SchemaError(ValueError):
    """Input file does not match the harness schema this tool expects."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: list = field(default_factory=list)
    out_path: str = "figure.png"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}, expected one of {KINDS}")
        if not self.inputs:
            raise SchemaError("at least one input file is required")


def load_summary(path) -> dict:
    """Parse and validate a sweep summary JSON (per-algo slope schema)."""
    try:
        blob = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(blob, dict):
        raise SchemaError(f"{path}: expected a JSON object")
    version = blob.get("version")
    if version != SUPPORTED_VERSION:
        raise SchemaError(f"{path}: version {version!r}, this tool supports {SUPPORTED_VERSION}")
    for key in ("slope", "intercept", "r2", "points", "excluded", "kappa"):
        if key not in blob:
            raise SchemaError(f"{path}: summary is missing key {key!r}")
    points = blob["points"]
    if not isinstance(points, list) or any(len(p) != 3 for p in points):
        raise SchemaError(f"{path}: points must be [[T, mean, std], ...]")
    return blob


def load_trace(path) -> dict:
    """Parse and validate a trace CSV; returns columns as Python lists."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != TRACE_HEADER:
            raise SchemaError(f"{path}: trace header {header} != {TRACE_HEADER}")
        cols = {name: [] for name in TRACE_HEADER}
        for row in reader:
            if len(row) != len(TRACE_HEADER):
                raise SchemaError(f"{path}: malformed row {row}")
            cols["t"].append(int(row[0]))
            cols["x"].append(float(row[1]))
            cols["y"].append(float(row[2]))
            cols["inst_regret"].append(float(row[3]))
            cols["phase"].append(int(row[4]))
            cols["lag"].append(float(row[5]))
            cols["event"].append(row[6])
    if not cols["t"]:
        raise SchemaError(f"{path}: trace has no samples")
    return cols


def _curve_indices(n: int) -> list[int]:
    """Deterministic log-spaced subset of 1..n when the trace is large."""
    if n <= MAX_CURVE_POINTS:
        return list(range(n))
    raw = [int(round(math.exp(math.log(n) * k / (MAX_CURVE_POINTS - 1)))) - 1
           for k in range(MAX_CURVE_POINTS)]
    seen = []
    last = -1
    for idx in raw:
        idx = min(max(idx, 0), n - 1)
        if idx > last:
            seen.append(idx)
            last = idx
    if seen[-1] != n - 1:
        seen.append(n - 1)
    return seen


def _render_regret_curve(spec: FigureSpec) -> dict:
    fig, ax = plt.subplots()
    series = []
    for path in spec.inputs:
        cols = load_trace(path)
        n = len(cols["t"])
        cum = 0.0
        cumsum = []
        for v in cols["inst_regret"]:
            cum += v
            cumsum.append(cum)
        idx = _curve_indices(n)
        ts = [cols["t"][i] for i in idx]
        rs = [cumsum[i] for i in idx]
        label = Path(path).parent.name or Path(path).stem
        ax.plot(ts, rs, label=label)
        series.append({"source": str(path), "t": ts, "cum_regret": rs})
    ax.set_xlabel("sample index t")
    ax.set_ylabel("cumulative regret")
    ax.set_title("Cumulative regret")
    ax.legend()
    fig.savefig(spec.out_path)
    plt.close(fig)
    return {"kind": spec.kind, "series": series}


def _render_loglog_slope(spec: FigureSpec) -> dict:
    fig, ax = plt.subplots()
    sidecar_series = []
    annotations = []
    for path in spec.inputs:
        summary = load_summary(path)
        points = summary["points"]
        if not points:
            plt.close(fig)
            raise SchemaError(f"{path}: empty points list, nothing to plot")
        horizons = [p[0] for p in points]
        means = [p[1] for p in points]
        stds = [p[2] for p in points]
        label = summary.get("label") or summary.get("variant") or Path(path).parent.name
        ax.errorbar(horizons, means, yerr=stds, fmt="o", capsize=3, label=label)
        slope = summary["slope"]
        fit_line = None
        annotation = None
        if slope is not None and summary["intercept"] is not None:
            fit_line = [
                [T, math.exp(summary["intercept"]) * T ** slope] for T in horizons
            ]
            ax.plot([p[0] for p in fit_line], [p[1] for p in fit_line], "--")
            annotation = f"{label}: slope = {slope:.2f}"
            annotations.append(annotation)
        sidecar_series.append({
            "source": str(path),
            "label": label,
            "points": points,
            "excluded": summary["excluded"],
            "slope": slope,
            "intercept": summary["intercept"],
            "r2": summary["r2"],
            "kappa": summary["kappa"],
            "fit_line": fit_line,
            "annotation": annotation,
        })
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("horizon T")
    ax.set_ylabel("mean cumulative regret")
    ax.set_title("Regret scaling (log-log)")
    for k, text in enumerate(annotations):
        ax.annotate(text, xy=(0.02, 0.95 - 0.07 * k), xycoords="axes fraction")
    ax.legend(loc="lower right")
    fig.savefig(spec.out_path)
    plt.close(fig)
    return {"kind": spec.kind, "series": sidecar_series}


def _render_lag_timeline(spec: FigureSpec) -> dict:
    if len(spec.inputs) != 1:
        raise SchemaError("lag_timeline takes exactly one trace CSV")
    cols = load_trace(spec.inputs[0])
    segments = []  # [t_start, t_end, lag] over maximal constant-lag stretches
    for t, lag in zip(cols["t"], cols["lag"]):
        if lag <= 0.0:
            continue
        if segments and segments[-1][2] == lag and segments[-1][1] == t - 1:
            segments[-1][1] = t
        else:
            segments.append([t, t, lag])
    if not segments:
        raise SchemaError(f"{spec.inputs[0]}: no positive lag entries, nothing to plot")
    boundaries = [seg[0] for seg in segments[1:]]

    fig, ax = plt.subplots()
    for t0, t1, lag in segments:
        ax.hlines(lag, t0, t1, linewidth=2)
    for b in boundaries:
        ax.axvline(b, color="gray", alpha=0.4, linestyle=":")
    ax.set_yscale("log")
    ax.set_xlabel("sample index t")
    ax.set_ylabel("active lag size")
    ax.set_title("Lag ladder timeline")
    fig.savefig(spec.out_path)
    plt.close(fig)
    return {
        "kind": spec.kind,
        "source": str(spec.inputs[0]),
        "segments": segments,
        "phase_boundaries": boundaries,
    }


def render(spec: FigureSpec) -> str:
    """Render the figure and its sidecar JSON; returns the sidecar path.

    The sidecar (out_path + '.json') holds exactly the series plotted and
    is byte-deterministic for identical inputs. On schema errors nothing
    is written.
    """
    if spec.kind == "regret_curve":
        sidecar = _render_regret_curve(spec)
    elif spec.kind == "loglog_slope":
        sidecar = _render_loglog_slope(spec)
    else:
        sidecar = _render_lag_timeline(spec)
    sidecar_path = str(spec.out_path) + ".json"
    with open(sidecar_path, "w") as fh:
        json.dump(sidecar, fh, indent=1, sort_keys=True)
    return sidecar_path
