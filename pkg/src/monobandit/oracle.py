"""Budgeted query oracle with a monotonicity audit and an append-only ledger.

Every sample an algorithm ever takes flows through one Oracle, which charges
the budget, adds observation noise, enforces (or audits) the rule that query
points never decrease, and records the sample in a Trace. The Trace is the
ground truth for all downstream regret accounting and validation.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from monobandit import _backend
from monobandit.objective import NoiseModel, ObjectiveSpec

__all__ = [
    "OracleError",
    "BudgetExhausted",
    "MonotonicityViolation",
    "OutOfDomain",
    "Trace",
    "Oracle",
    "EVENT_NAMES",
    "EV_SAMPLE",
    "EV_JUMP",
    "EV_LAG_SHRINK",
    "EV_STABILIZE",
    "EV_GUARD_CLAMP",
    "EV_BUDGET_EXHAUSTED",
    "write_trace_csv",
    "read_trace_csv",
]


class OracleError(RuntimeError):
    pass


class BudgetExhausted(OracleError):
    """The sample budget ran out (possibly mid-estimate)."""


class MonotonicityViolation(OracleError):
    """A strict oracle rejected a query below the high-water mark."""


class OutOfDomain(OracleError):
    """Query below p_min (queries above p_max are clamped and logged)."""


# Event codes, one per ledger entry. 'sample' is an ordinary observation;
# 'jump' marks the first observation after a gradient step; 'lag_shrink'
# the first observation after the lag ladder contracts; 'stabilize' the
# budget spent parked at a final point; 'guard_clamp' an observation whose
# requested point had to be clamped (monotonicity or domain guard);
# 'budget_exhausted' the final observation of a truncated block.
EV_SAMPLE = 0
EV_JUMP = 1
EV_LAG_SHRINK = 2
EV_STABILIZE = 3
EV_GUARD_CLAMP = 4
EV_BUDGET_EXHAUSTED = 5
EVENT_NAMES = ("sample", "jump", "lag_shrink", "stabilize", "guard_clamp", "budget_exhausted")

_EMPTY = np.empty(0)


class Trace:
    """Append-only, time-ordered record of every sample taken.

    Columns: x (queried point), y (observed value), inst_regret
    (f(x) - f(x*), analytic), phase (integer label, algorithm-specific),
    lag (active lag size or 0), event (code into EVENT_NAMES). The 1-based
    sample index t is implicit in the position.
    """

    __slots__ = ("budget", "n", "x", "y", "inst", "phase", "lag", "event", "meta")

    def __init__(self, budget: int, meta: Optional[dict] = None):
        self.budget = int(budget)
        self.n = 0
        cap = min(self.budget, 65536)
        self.x = np.empty(cap)
        self.y = np.empty(cap)
        self.inst = np.empty(cap)
        self.phase = np.empty(cap, dtype=np.int64)
        self.lag = np.empty(cap)
        self.event = np.empty(cap, dtype=np.int8)
        self.meta = dict(meta or {})

    def __len__(self) -> int:
        return self.n

    def _ensure(self, extra: int) -> None:
        need = self.n + extra
        cap = self.x.shape[0]
        if need <= cap:
            return
        new_cap = min(self.budget, max(need, cap * 2))
        for name in ("x", "y", "inst", "phase", "lag", "event"):
            old = getattr(self, name)
            grown = np.empty(new_cap, dtype=old.dtype)
            grown[: self.n] = old[: self.n]
            setattr(self, name, grown)

    def columns(self) -> dict[str, np.ndarray]:
        """Trimmed views of the recorded columns."""
        return {
            "x": self.x[: self.n],
            "y": self.y[: self.n],
            "inst_regret": self.inst[: self.n],
            "phase": self.phase[: self.n],
            "lag": self.lag[: self.n],
            "event": self.event[: self.n],
        }

    def cum_regret(self) -> float:
        return float(np.add.reduce(self.inst[: self.n]))

    def event_count(self, code: int) -> int:
        return int(np.count_nonzero(self.event[: self.n] == code))


class Oracle:
    """Single-owner sampling gateway for one run.

    strict=True raises MonotonicityViolation on a backward query;
    strict=False clamps the point up to the high-water mark and logs a
    guard_clamp event. monotone=False disables the audit entirely (used
    only by the oscillating baseline). The RNG is derived from
    noise.seed so identical (spec, noise, budget) triples replay exactly.
    """

    def __init__(
        self,
        spec: ObjectiveSpec,
        noise: NoiseModel,
        budget: int,
        *,
        strict: bool = True,
        monotone: bool = True,
        meta: Optional[dict] = None,
    ):
        if budget <= 0:
            raise ValueError(f"budget must be positive, got {budget}")
        self.spec = spec
        self.noise = noise
        self.budget = int(budget)
        self.strict = strict
        self.monotone = monotone
        self.rng = np.random.default_rng(noise.seed)
        self.trace = Trace(self.budget, meta=meta)
        self.high_water = -np.inf
        self.f_star = spec.f_star

    @property
    def used(self) -> int:
        return self.trace.n

    @property
    def remaining(self) -> int:
        return self.budget - self.trace.n

    def _guard(self, x: float) -> tuple[float, bool]:
        """Apply domain and monotonicity rules; returns (point, clamped)."""
        clamped = False
        if x < self.spec.p_min:
            raise OutOfDomain(f"query {x:g} below p_min = {self.spec.p_min:g}")
        if x > self.spec.p_max:
            x = self.spec.p_max
            clamped = True
        if self.monotone and x < self.high_water:
            if self.strict:
                raise MonotonicityViolation(
                    f"query {x!r} below high-water mark {self.high_water!r}"
                )
            x = self.high_water
            clamped = True
        return x, clamped

    def query_block(
        self,
        x: float,
        n: int,
        *,
        phase: int = 0,
        lag: float = 0.0,
        event_first: int = EV_SAMPLE,
        event_rest: int = EV_SAMPLE,
    ) -> float:
        """Take n samples at x; returns the empirical mean.

        Consumes one budget unit per sample. If the budget covers only part
        of the block, the affordable samples are recorded (last one tagged
        budget_exhausted) and BudgetExhausted is raised.
        """
        if n <= 0:
            raise ValueError(f"block size must be positive, got {n}")
        if self.remaining <= 0:
            raise BudgetExhausted(f"budget {self.budget} already spent")
        x_eff, clamped = self._guard(x)
        if clamped:
            event_first = EV_GUARD_CLAMP
        k = min(n, self.remaining)
        f_x = float(self.spec.f(x_eff))
        inst = f_x - self.f_star
        noise = _EMPTY if self.noise.is_none else self.noise.draw(self.rng, k)
        tr = self.trace
        tr._ensure(k)
        _backend.fill_block(
            tr.x, tr.y, tr.inst, tr.phase, tr.lag, tr.event,
            tr.n, k, x_eff, f_x, inst, phase, lag, event_first, event_rest, noise,
        )
        tr.n += k
        if x_eff > self.high_water:
            self.high_water = x_eff
        if noise.shape[0] > 0:
            mean = f_x + float(np.add.reduce(noise)) / k
        else:
            mean = f_x
        if k < n:
            tr.event[tr.n - 1] = EV_BUDGET_EXHAUSTED
            raise BudgetExhausted(f"budget ran out {n - k} samples into a block of {n}")
        return mean

    def query(self, x: float, *, phase: int = 0, lag: float = 0.0, event: int = EV_SAMPLE) -> float:
        """Take a single sample at x; returns the observed value."""
        return self.query_block(x, 1, phase=phase, lag=lag, event_first=event, event_rest=event)

    def fill_remaining(self, x: float, *, phase: int = 0, lag: float = 0.0) -> int:
        """Spend the entire remaining budget at x (stabilization)."""
        k = self.remaining
        if k > 0:
            self.query_block(
                x, k, phase=phase, lag=lag,
                event_first=EV_STABILIZE, event_rest=EV_STABILIZE,
            )
        return k


# ---------------------------------------------------------------------------
# Trace CSV, the wire format shared with external tools.
# ---------------------------------------------------------------------------

def write_trace_csv(trace: Trace, path) -> None:
    """Header t,x,y,inst_regret,phase,lag,event; floats at 17 significant digits."""
    import pandas as pd

    cols = trace.columns()
    frame = pd.DataFrame(
        {
            "t": np.arange(1, trace.n + 1, dtype=np.int64),
            "x": cols["x"],
            "y": cols["y"],
            "inst_regret": cols["inst_regret"],
            "phase": cols["phase"],
            "lag": cols["lag"],
            "event": np.asarray(EVENT_NAMES, dtype=object)[cols["event"]],
        }
    )
    frame.to_csv(path, index=False, float_format="%.17g")


def read_trace_csv(path) -> dict[str, np.ndarray]:
    """Read a trace CSV back into column arrays (event as strings)."""
    import pandas as pd

    frame = pd.read_csv(path, float_precision="round_trip")
    expected = ["t", "x", "y", "inst_regret", "phase", "lag", "event"]
    if list(frame.columns) != expected:
        raise ValueError(f"unexpected trace header {list(frame.columns)}, want {expected}")
    out = {name: frame[name].to_numpy() for name in expected}
    return out
