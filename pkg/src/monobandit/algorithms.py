"""The five runners: lagged-secant descent in four flavors plus a baseline.

All four monotone variants share one movement rule: estimate the secant
between a lagged point and the current point, and if the implied step is
steep enough, jump forward *from the lagged point* so the target provably
stays at or below the optimum. They differ in how the lag is chosen:

- lgd_noiseless: constant lag, exact function values, stop when flat.
- static_lgd:    constant lag, Hoeffding-sized sample averages, stop when flat.
- adaptive_lgd:  a geometric lag ladder, contracted in place whenever the
                 local secant is too flat to certify a safe jump, so progress
                 never stops for good.
- hybrid_lgd:    static descent, then a constant-step forward walk driven by
                 noisy value comparisons.
- kw_baseline:   classic two-probe stochastic approximation with no
                 monotonicity constraint, for regret comparisons only.

Every sample (including averaging and stabilization) costs one unit of the
budget T and accrues instantaneous regret f(x) - f(x*).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from monobandit import _backend
from monobandit.estimator import (
    SecantEstimate,
    conservative_secant,
    estimate_pair,
    hoeffding_samples,
    required_samples,
)
from monobandit.objective import NoiseModel, ObjectiveSpec
from monobandit.oracle import (
    EV_GUARD_CLAMP,
    EV_JUMP,
    EV_LAG_SHRINK,
    EV_SAMPLE,
    BudgetExhausted,
    Oracle,
)

__all__ = [
    "ConfigError",
    "VARIANTS",
    "AlgoConfig",
    "JumpRecord",
    "PhaseRecord",
    "RunResult",
    "run_lgd_noiseless",
    "run_static_lgd",
    "run_adaptive_lgd",
    "run_hybrid_lgd",
    "run_kw_baseline",
    "run_variant",
]

VARIANTS = ("lgd_noiseless", "static_lgd", "adaptive_lgd", "hybrid_lgd", "kw_baseline")

_FAMILY_CODES = {"quad": 0, "quartic": 1}


class ConfigError(ValueError):
    """Invalid or inconsistent algorithm parameters."""


@dataclass(frozen=True)
class AlgoConfig:
    """Resolved parameter bundle echoed into every report.

    Only the fields meaningful for the variant are set; the rest stay None.
    gamma must exceed 1 wherever it applies (the jump test needs the slack),
    q lies in (0,1), and delta_floor, when given, is positive.
    """

    variant: str
    T: int
    delta: Optional[float] = None
    delta1: Optional[float] = None
    gamma: Optional[float] = None
    epsilon: Optional[float] = None
    n: Optional[int] = None
    q: Optional[float] = None
    p: Optional[float] = None
    eta: Optional[float] = None
    iota: Optional[float] = None
    kappa: float = 1.0
    delta_floor: Optional[float] = None
    kw_a: Optional[float] = None
    kw_c: Optional[float] = None
    x1: Optional[float] = None
    deterministic: bool = False

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}")
        if self.T <= 0:
            raise ConfigError(f"budget must be positive, got {self.T}")
        if self.gamma is not None and not self.gamma > 1.0:
            raise ConfigError(f"stopping parameter gamma must exceed 1, got {self.gamma}")
        if self.q is not None and not (0.0 < self.q < 1.0):
            raise ConfigError(f"lag contraction q must be in (0,1), got {self.q}")
        if self.p is not None and not (0.0 < self.p < 1.0):
            raise ConfigError(f"failure probability p must be in (0,1), got {self.p}")
        if not (0.0 < self.kappa <= 1.0):
            raise ConfigError(f"kappa must be in (0,1], got {self.kappa}")
        if self.delta_floor is not None and not self.delta_floor > 0:
            raise ConfigError(f"delta_floor must be positive, got {self.delta_floor}")

    def as_dict(self) -> dict:
        out = {"variant": self.variant, "T": self.T, "kappa": self.kappa,
               "deterministic": self.deterministic}
        for name in ("delta", "delta1", "gamma", "epsilon", "n", "q", "p",
                     "eta", "iota", "delta_floor", "kw_a", "kw_c", "x1"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out

    def digest(self) -> str:
        blob = json.dumps(self.as_dict(), sort_keys=True, default=repr)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class JumpRecord:
    from_x: float
    to_x: float
    grad_est: float


@dataclass(frozen=True)
class PhaseRecord:
    index: int
    lag: float
    first_x: float
    ladder: int = 0  # lag-ladder index (adaptive only)


@dataclass
class RunResult:
    """Everything a single run produced, with structured annotations.

    jumps are the gradient steps (strictly increasing in from_x), phases
    group jumps by lag size (strictly decreasing lags), estimates are every
    secant formed (for analytic bracket replay), and terminated_by records
    whether the run stabilized by choice, ran out of budget, or hit a guard.
    """

    variant: str
    config: AlgoConfig
    spec: ObjectiveSpec
    noise: NoiseModel
    seed: int
    trace: object
    final_x: float
    terminated_by: str
    jumps: list = field(default_factory=list)
    phases: list = field(default_factory=list)
    estimates: list = field(default_factory=list)
    samples_first_estimate: int = 0

    def cum_regret(self) -> float:
        return self.trace.cum_regret()

    def violation_counts(self) -> dict:
        x = self.trace.x[: self.trace.n]
        backsteps = int(np.count_nonzero(np.diff(x) < 0))
        over = x > self.spec.x_star
        return {
            "monotone_violations": backsteps,
            "guard_clamps": self.trace.event_count(EV_GUARD_CLAMP),
            "overshoot_count": int(np.count_nonzero(over)),
            "max_overshoot": float(np.max(x[over] - self.spec.x_star)) if over.any() else 0.0,
        }

    def to_json_dict(self) -> dict:
        return {
            "version": 1,
            "variant": self.variant,
            "config": self.config.as_dict(),
            "config_digest": self.config.digest(),
            "objective": self.spec.describe(),
            "noise": self.noise.describe(),
            "seed": self.seed,
            "backend": _backend.BACKEND,
            "T": self.config.T,
            "samples_taken": self.trace.n,
            "final_x": self.final_x,
            "terminated_by": self.terminated_by,
            "cum_regret": self.cum_regret(),
            "samples_first_estimate": self.samples_first_estimate,
            "estimate_count": len(self.estimates),
            "jumps": [[j.from_x, j.to_x, j.grad_est] for j in self.jumps],
            "phases": [[ph.index, ph.lag, ph.first_x, ph.ladder] for ph in self.phases],
            "violations": self.violation_counts(),
        }


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------

def _resolve_seed(noise: NoiseModel, seed: Optional[int]) -> int:
    return int(seed) if seed is not None else int(noise.seed)


def _new_oracle(spec, noise, T, seed, *, monotone=True, strict=True, meta=None) -> Oracle:
    return Oracle(spec, noise.with_seed(seed), T, strict=strict, monotone=monotone, meta=meta)


def _check_lag_fits(spec: ObjectiveSpec, lag: float, what: str) -> None:
    if lag <= 0:
        raise ConfigError(f"{what} must be positive, got {lag}")
    if spec.p_min + lag > spec.p_max:
        raise ConfigError(
            f"{what} {lag:g} does not fit the domain [{spec.p_min:g}, {spec.p_max:g}]"
        )


# ---------------------------------------------------------------------------
# Noiseless lagged descent
# ---------------------------------------------------------------------------

def run_lgd_noiseless(
    spec: ObjectiveSpec,
    T: int,
    delta: Optional[float] = None,
    gamma: Optional[float] = None,
) -> RunResult:
    """Constant-lag descent on exact values; stops when the secant flattens.

    Starts at p_min and p_min + delta, jumps from the lagged point by
    -(1/beta) times the secant whenever that step is at least
    (1+gamma)*delta, and otherwise parks the remaining budget at the
    current point. Defaults delta = T^-1/2 and gamma = 1 + 1/ln T keep the
    total regret bounded independently of T. The analysis assumes the walk
    starts at or below the optimum; starting above it just stabilizes.
    """
    T = int(T)
    if delta is None:
        delta = T ** -0.5
    if gamma is None:
        gamma = 1.0 + 1.0 / math.log(T)
    _check_lag_fits(spec, delta, "lag size delta")
    config = AlgoConfig(variant="lgd_noiseless", T=T, delta=delta, gamma=gamma)
    noise = NoiseModel(kind="none")
    oracle = _new_oracle(spec, noise, T, 0)
    beta = spec.beta

    jumps: list[JumpRecord] = []
    estimates: list[SecantEstimate] = []
    x_lo, x = spec.p_min, spec.p_min + delta
    phases = [PhaseRecord(index=1, lag=delta, first_x=x)]
    terminated = "budget"
    t = 1
    try:
        y_lo = oracle.query(x_lo, phase=t, lag=delta)
        y_x = oracle.query(x, phase=t, lag=delta)
        while True:
            est = conservative_secant(y_lo, y_x, x_lo, x, 0.0, n_lo=1, n_hi=1)
            estimates.append(est)
            step = -(est.g / beta)
            if step < (1.0 + gamma) * delta:
                oracle.fill_remaining(x, phase=t, lag=delta)
                terminated = "stabilized"
                break
            x_lo_next = x_lo + step - delta
            x_next = x_lo_next + delta
            if x_next > spec.p_max:
                oracle.fill_remaining(spec.p_max, phase=t, lag=delta)
                x = spec.p_max
                terminated = "guard"
                break
            if oracle.remaining < 2:
                oracle.fill_remaining(x, phase=t, lag=delta)
                terminated = "budget"
                break
            t += 1
            y_lo = oracle.query(x_lo_next, phase=t, lag=delta, event=EV_JUMP)
            y_x = oracle.query(x_next, phase=t, lag=delta)
            jumps.append(JumpRecord(from_x=x, to_x=x_next, grad_est=est.g))
            x_lo, x = x_lo_next, x_next
    except BudgetExhausted:
        terminated = "budget"

    return RunResult(
        variant="lgd_noiseless", config=config, spec=spec, noise=noise, seed=0,
        trace=oracle.trace, final_x=x, terminated_by=terminated,
        jumps=jumps, phases=phases, estimates=estimates, samples_first_estimate=2,
    )


# ---------------------------------------------------------------------------
# Static-lag noisy descent
# ---------------------------------------------------------------------------

def run_static_lgd(
    spec: ObjectiveSpec,
    noise: NoiseModel,
    T: int,
    *,
    n: Optional[int] = None,
    epsilon: Optional[float] = None,
    delta: Optional[float] = None,
    gamma: Optional[float] = None,
    p: Optional[float] = None,
    kappa: float = 1.0,
    seed: Optional[int] = None,
    deterministic: bool = False,
) -> RunResult:
    """Constant-lag descent on n-sample averages with a bias offset epsilon.

    The secant over [lagged, current] is inflated by epsilon before the
    step test, which keeps the jump target below the optimum as long as
    each average is within epsilon/2 of the truth; that requires
    epsilon <= alpha*delta^2/4 (enforced). Defaults delta = T^-1/6,
    epsilon at its cap, p = T^-2, and n Hoeffding-sized from (epsilon, p),
    scaled by kappa.
    """
    T = int(T)
    if delta is None:
        delta = T ** (-1.0 / 6.0)
    if gamma is None:
        gamma = 1.0 + 1.0 / math.log(T)
    if p is None:
        p = float(T) ** -2.0
    _check_lag_fits(spec, delta, "lag size delta")
    eps_cap = spec.alpha * delta * delta / 4.0
    if epsilon is None:
        epsilon = eps_cap
    if epsilon < 0:
        raise ConfigError(f"precision epsilon must be nonnegative, got {epsilon}")
    if epsilon > eps_cap * (1.0 + 1e-12):
        raise ConfigError(
            f"epsilon {epsilon:g} exceeds the no-overshoot cap alpha*delta^2/4 = {eps_cap:g}"
        )
    if deterministic:
        n = 1
    elif n is None:
        if epsilon <= 0:
            raise ConfigError("n must be given explicitly when epsilon = 0")
        n = hoeffding_samples(epsilon, p, kappa)
    config = AlgoConfig(
        variant="static_lgd", T=T, delta=delta, gamma=gamma, epsilon=epsilon,
        n=n, p=p, kappa=kappa, deterministic=deterministic,
    )
    seed = _resolve_seed(noise, seed)
    oracle = _new_oracle(spec, noise, T, seed, meta={"deterministic": deterministic})
    beta = spec.beta

    jumps: list[JumpRecord] = []
    estimates: list[SecantEstimate] = []
    x_lo, x = spec.p_min, spec.p_min + delta
    phases = [PhaseRecord(index=1, lag=delta, first_x=x)]
    terminated = "budget"
    t = 1
    try:
        mean_lo = oracle.query_block(x_lo, n, phase=t, lag=delta)
        mean_x = oracle.query_block(x, n, phase=t, lag=delta)
        while True:
            gap = x - x_lo
            g = (mean_x - mean_lo + epsilon) / gap
            est = SecantEstimate(
                g=g, x_lo=x_lo, x_hi=x, mean_lo=mean_lo, mean_hi=mean_x,
                epsilon=epsilon, n_lo=n, n_hi=n,
            )
            estimates.append(est)
            step = -(g / beta)
            if step < (1.0 + gamma) * delta:
                oracle.fill_remaining(x, phase=t, lag=delta)
                terminated = "stabilized"
                break
            x_lo_next = x + step - 2.0 * delta
            x_next = x_lo_next + delta
            if x_next > spec.p_max:
                oracle.fill_remaining(spec.p_max, phase=t, lag=delta)
                x = spec.p_max
                terminated = "guard"
                break
            if 2 * n > oracle.remaining:
                oracle.fill_remaining(x, phase=t, lag=delta)
                terminated = "budget"
                break
            t += 1
            mean_lo = oracle.query_block(x_lo_next, n, phase=t, lag=delta, event_first=EV_JUMP)
            mean_x = oracle.query_block(x_next, n, phase=t, lag=delta)
            jumps.append(JumpRecord(from_x=x, to_x=x_next, grad_est=g))
            x_lo, x = x_lo_next, x_next
    except BudgetExhausted:
        terminated = "budget"

    return RunResult(
        variant="static_lgd", config=config, spec=spec, noise=noise, seed=seed,
        trace=oracle.trace, final_x=x, terminated_by=terminated,
        jumps=jumps, phases=phases, estimates=estimates, samples_first_estimate=2 * n,
    )


# ---------------------------------------------------------------------------
# Adaptive-lag noisy descent
# ---------------------------------------------------------------------------

def run_adaptive_lgd(
    spec: ObjectiveSpec,
    noise: NoiseModel,
    T: int,
    *,
    delta1: Optional[float] = None,
    gamma: Optional[float] = None,
    q: float = 0.5,
    p: Optional[float] = None,
    kappa: float = 1.0,
    delta_floor: Optional[float] = None,
    seed: Optional[int] = None,
    deterministic: bool = False,
) -> RunResult:
    """Lag-ladder descent: shrink the lag whenever the local slope is flat.

    At iterate x the pair (x - d_i, x - d_{i+1}) is sampled (lower point
    first) to form a conservative secant g; while -(1/beta)*g falls short
    of (2+gamma)*d_i the ladder contracts, d_{i+1} = q*d_i. Once some d_i
    passes, x itself is sampled, the secant over [x - d_i, x] drives the
    jump x' = x - (1/beta)*grad - d_i, and the next iterate re-tests the
    incumbent rung before shrinking further. The run stabilizes only when
    the next estimate cannot fit the remaining budget or the lag would
    drop below delta_floor. Defaults delta1 = 1/ln T, gamma = 1 + 1/ln T,
    p = T^-2.
    """
    T = int(T)
    if delta1 is None:
        delta1 = 1.0 / math.log(T)
    if gamma is None:
        gamma = 1.0 + 1.0 / math.log(T)
    if p is None:
        p = float(T) ** -2.0
    _check_lag_fits(spec, delta1, "initial lag delta1")
    config = AlgoConfig(
        variant="adaptive_lgd", T=T, delta1=delta1, gamma=gamma, q=q, p=p,
        kappa=kappa, delta_floor=delta_floor, deterministic=deterministic,
    )
    seed = _resolve_seed(noise, seed)
    oracle = _new_oracle(spec, noise, T, seed, meta={"deterministic": deterministic})
    alpha, beta = spec.alpha, spec.beta

    jumps: list[JumpRecord] = []
    estimates: list[SecantEstimate] = []
    phases: list[PhaseRecord] = []
    x = spec.p_min + delta1
    d = delta1          # current rung, maintained as a running product
    ladder = 1
    t = 1
    first_estimate = 0
    pending_event = EV_SAMPLE
    terminated = None

    def _stabilize(point: float, why: str) -> str:
        oracle.fill_remaining(point, phase=ladder, lag=d)
        return why

    try:
        while terminated is None:
            # Inner loop: contract the ladder until a rung certifies a jump.
            pair = None
            while True:
                if delta_floor is not None and d < delta_floor:
                    terminated = _stabilize(x, "budget")
                    break
                lo = x - d
                hi = x - d * q
                n_pair = 1 if deterministic else required_samples(alpha, hi - lo, p, kappa)
                if 2 * n_pair > oracle.remaining:
                    terminated = _stabilize(x, "budget")
                    break
                est = estimate_pair(
                    oracle, lo, hi, p, alpha, kappa, n_override=n_pair,
                    phase=ladder, lag=d, event_lo=pending_event,
                )
                if first_estimate == 0:
                    first_estimate = 2 * n_pair
                estimates.append(est)
                pending_event = EV_SAMPLE
                if -(est.g / beta) >= (2.0 + gamma) * d:
                    pair = est
                    break
                d = d * q
                ladder += 1
                pending_event = EV_LAG_SHRINK
            if terminated is not None:
                break

            # Jump step: sample the current point, form the lagged secant.
            lo = pair.x_lo
            n_x = 1 if deterministic else required_samples(alpha, x - lo, p, kappa)
            if n_x > oracle.remaining:
                terminated = _stabilize(x, "budget")
                break
            mean_x = oracle.query_block(x, n_x, phase=ladder, lag=d)
            grad = conservative_secant(
                pair.mean_lo, mean_x, lo, x, alpha, n_lo=pair.n_lo, n_hi=n_x
            )
            estimates.append(grad)
            x_next = x - grad.g / beta - d
            pending_event = EV_JUMP
            if x_next > spec.p_max:
                if x + d > spec.p_max:
                    terminated = _stabilize(x, "guard")
                    break
                x_next = spec.p_max
            elif x_next - d < x:
                # Secant failure made the computed step too small to keep the
                # next lagged point ahead of us; clamp so it lands exactly here.
                if x + d > spec.p_max:
                    terminated = _stabilize(x, "guard")
                    break
                x_next = x + d
                while x_next - d < x:
                    x_next = float(np.nextafter(x_next, np.inf))
                pending_event = EV_GUARD_CLAMP
            jumps.append(JumpRecord(from_x=x, to_x=x_next, grad_est=grad.g))
            if not phases or phases[-1].ladder != ladder:
                phases.append(
                    PhaseRecord(index=len(phases) + 1, lag=d, first_x=x, ladder=ladder)
                )
            x = x_next
            t += 1
    except BudgetExhausted:
        terminated = "budget"

    return RunResult(
        variant="adaptive_lgd", config=config, spec=spec, noise=noise, seed=seed,
        trace=oracle.trace, final_x=x, terminated_by=terminated,
        jumps=jumps, phases=phases, estimates=estimates,
        samples_first_estimate=first_estimate,
    )


# ---------------------------------------------------------------------------
# Hybrid: static descent, then constant forward steps
# ---------------------------------------------------------------------------

def constant_step_walk(
    oracle: Oracle,
    x: float,
    eta: float,
    iota: float,
    n2: int,
    *,
    phase: int = 2,
) -> tuple[float, str, list[float]]:
    """Forward walk on value comparisons: advance by eta while the point
    ahead measures lower by more than iota, else park there.

    Each round averages n2 samples at x and at x + eta (lower point first).
    On halt the walk stabilizes at x + eta, the highest point already
    sampled, which is the only monotone-safe parking spot; the extra offset
    is at most eta. Returns (final_x, terminated_by, advances).
    """
    spec = oracle.spec
    advances: list[float] = []
    while True:
        if 2 * n2 > oracle.remaining:
            oracle.fill_remaining(x, phase=phase, lag=eta)
            return x, "budget", advances
        ahead = x + eta
        if ahead > spec.p_max:
            oracle.fill_remaining(x, phase=phase, lag=eta)
            return x, "guard", advances
        mean_here = oracle.query_block(x, n2, phase=phase, lag=eta)
        mean_ahead = oracle.query_block(ahead, n2, phase=phase, lag=eta)
        if mean_here - iota / 2.0 > mean_ahead + iota / 2.0:
            x = ahead
            advances.append(x)
        else:
            oracle.fill_remaining(ahead, phase=phase, lag=eta)
            return ahead, "stabilized", advances


def run_hybrid_lgd(
    spec: ObjectiveSpec,
    noise: NoiseModel,
    T: int,
    *,
    delta: Optional[float] = None,
    eta: Optional[float] = None,
    iota: Optional[float] = None,
    gamma: Optional[float] = None,
    p: Optional[float] = None,
    kappa: float = 1.0,
    n: Optional[int] = None,
    epsilon: Optional[float] = None,
    seed: Optional[int] = None,
    deterministic: bool = False,
) -> RunResult:
    """Static-lag descent followed by an eta-step value-comparison walk.

    Once the secant phase stops, the walk repeatedly averages the current
    point and the point eta ahead, advancing while the ahead value is lower
    by more than iota, then stabilizes. Stabilization parks at the ahead
    point (the highest sampled), which keeps the whole run monotone at the
    cost of at most eta of extra offset, inside the same regret order.
    Defaults delta = T^-5/34, eta = T^-7/34, iota = T^-7/17, p = T^-2.
    """
    T = int(T)
    if delta is None:
        delta = float(T) ** (-5.0 / 34.0)
    if eta is None:
        eta = float(T) ** (-7.0 / 34.0)
    if iota is None:
        iota = float(T) ** (-7.0 / 17.0)
    if gamma is None:
        gamma = 1.0 + 1.0 / math.log(T)
    if p is None:
        p = float(T) ** -2.0
    if not eta < delta:
        raise ConfigError(f"constant step eta {eta:g} must be below the lag delta {delta:g}")
    if iota <= 0:
        raise ConfigError(f"comparison precision iota must be positive, got {iota}")
    if not gamma > 1.0:
        raise ConfigError(f"stopping parameter gamma must exceed 1, got {gamma}")
    _check_lag_fits(spec, delta, "lag size delta")
    eps_cap = spec.alpha * delta * delta / 4.0
    if epsilon is None:
        epsilon = eps_cap
    if epsilon > eps_cap * (1.0 + 1e-12):
        raise ConfigError(
            f"epsilon {epsilon:g} exceeds the no-overshoot cap alpha*delta^2/4 = {eps_cap:g}"
        )
    if deterministic:
        n = 1
        n2 = 1
    else:
        if n is None:
            n = hoeffding_samples(epsilon, p, kappa)
        n2 = hoeffding_samples(iota, p, kappa)
    config = AlgoConfig(
        variant="hybrid_lgd", T=T, delta=delta, gamma=gamma, epsilon=epsilon,
        n=n, p=p, eta=eta, iota=iota, kappa=kappa, deterministic=deterministic,
    )
    seed = _resolve_seed(noise, seed)
    oracle = _new_oracle(spec, noise, T, seed, meta={"deterministic": deterministic})
    beta = spec.beta

    jumps: list[JumpRecord] = []
    estimates: list[SecantEstimate] = []
    x_lo, x = spec.p_min, spec.p_min + delta
    phases = [PhaseRecord(index=1, lag=delta, first_x=x)]
    terminated = None
    t = 1
    try:
        # Phase 1: static-lag descent until its stopping condition fires.
        mean_lo = oracle.query_block(x_lo, n, phase=1, lag=delta)
        mean_x = oracle.query_block(x, n, phase=1, lag=delta)
        while terminated is None:
            g = (mean_x - mean_lo + epsilon) / (x - x_lo)
            est = SecantEstimate(
                g=g, x_lo=x_lo, x_hi=x, mean_lo=mean_lo, mean_hi=mean_x,
                epsilon=epsilon, n_lo=n, n_hi=n,
            )
            estimates.append(est)
            step = -(g / beta)
            if step < (1.0 + gamma) * delta:
                break  # hand over to the constant-step walk
            x_lo_next = x + step - 2.0 * delta
            x_next = x_lo_next + delta
            if x_next > spec.p_max:
                oracle.fill_remaining(spec.p_max, phase=1, lag=delta)
                x = spec.p_max
                terminated = "guard"
                break
            if 2 * n > oracle.remaining:
                oracle.fill_remaining(x, phase=1, lag=delta)
                terminated = "budget"
                break
            t += 1
            mean_lo = oracle.query_block(x_lo_next, n, phase=1, lag=delta, event_first=EV_JUMP)
            mean_x = oracle.query_block(x_next, n, phase=1, lag=delta)
            jumps.append(JumpRecord(from_x=x, to_x=x_next, grad_est=g))
            x_lo, x = x_lo_next, x_next

        # Phase 2: constant-step walk on value comparisons.
        if terminated is None:
            phases.append(PhaseRecord(index=2, lag=eta, first_x=x))
            x, terminated, _ = constant_step_walk(oracle, x, eta, iota, n2)
    except BudgetExhausted:
        terminated = "budget"

    return RunResult(
        variant="hybrid_lgd", config=config, spec=spec, noise=noise, seed=seed,
        trace=oracle.trace, final_x=x, terminated_by=terminated,
        jumps=jumps, phases=phases, estimates=estimates, samples_first_estimate=2 * n,
    )


# ---------------------------------------------------------------------------
# Kiefer-Wolfowitz baseline (non-monotone)
# ---------------------------------------------------------------------------

def run_kw_baseline(
    spec: ObjectiveSpec,
    noise: NoiseModel,
    T: int,
    *,
    kw_a: Optional[float] = None,
    kw_c: Optional[float] = None,
    x1: Optional[float] = None,
    seed: Optional[int] = None,
) -> RunResult:
    """Two-probe stochastic approximation; monotonicity deliberately off.

    Step k probes x_k +- c_k with c_k = kw_c * k^-1/4, then moves by
    -a_k * g with a_k = kw_a / k and g the noisy central secant. Serves
    only as the oscillating comparator in regret plots.
    """
    T = int(T)
    if kw_a is None:
        kw_a = 1.0 / spec.alpha
    if kw_c is None:
        kw_c = (spec.p_max - spec.p_min) / 10.0
    if kw_a <= 0 or kw_c <= 0:
        raise ConfigError(f"gain and perturbation must be positive, got ({kw_a}, {kw_c})")
    if x1 is None:
        x1 = spec.p_min + (spec.p_max - spec.p_min) / 2.0
    if not (spec.p_min <= x1 <= spec.p_max):
        raise ConfigError(f"start point {x1} outside the domain")
    config = AlgoConfig(variant="kw_baseline", T=T, kw_a=kw_a, kw_c=kw_c, x1=x1)
    seed = _resolve_seed(noise, seed)
    oracle = _new_oracle(spec, noise, T, seed, monotone=False, strict=False)
    tr = oracle.trace
    tr._ensure(T)

    fam = _FAMILY_CODES.get(spec.family)
    if fam is not None:
        params = spec.params + (0.0,) * (3 - len(spec.params))
        noise_arr = np.empty(0) if noise.is_none else noise.draw(oracle.rng, T)
        used, final_x = _backend.kw_loop(
            fam, params[0], params[1], params[2],
            spec.p_min, spec.p_max, oracle.f_star, kw_a, kw_c, x1,
            noise_arr, tr.x, tr.y, tr.inst, tr.n, T,
        )
        tr.phase[: used] = 0
        tr.lag[: used] = 0.0
        tr.event[: used] = EV_SAMPLE
        tr.n = used
        oracle.high_water = float(np.max(tr.x[:used]))
    else:
        # Custom objective: plain per-query path through the oracle.
        x = x1
        half_range = (spec.p_max - spec.p_min) / 2.0
        k = 1
        while oracle.remaining >= 2:
            c_k = kw_c * float(k) ** -0.25
            if c_k > half_range:
                c_k = half_range
            x = min(max(x, spec.p_min + c_k), spec.p_max - c_k)
            ym = oracle.query(x - c_k)
            yp = oracle.query(x + c_k)
            g = (yp - ym) / (2.0 * c_k)
            x = x - (kw_a / float(k)) * g
            k += 1
        x = min(max(x, spec.p_min), spec.p_max)
        if oracle.remaining:
            oracle.query(x)
        final_x = x

    return RunResult(
        variant="kw_baseline", config=config, spec=spec, noise=noise, seed=seed,
        trace=tr, final_x=float(final_x), terminated_by="budget",
        samples_first_estimate=2,
    )


# ---------------------------------------------------------------------------
# Dispatch by variant name (CLI and sweep entry point)
# ---------------------------------------------------------------------------

def run_variant(variant: str, spec: ObjectiveSpec, noise: NoiseModel, T: int,
                seed: Optional[int] = None, **overrides) -> RunResult:
    if variant == "lgd_noiseless":
        allowed = {"delta", "gamma"}
        extra = set(overrides) - allowed
        if extra:
            raise ConfigError(f"unsupported parameters for {variant}: {sorted(extra)}")
        if not noise.is_none:
            raise ConfigError("lgd_noiseless requires noise kind 'none'")
        return run_lgd_noiseless(spec, T, **overrides)
    if variant == "static_lgd":
        return run_static_lgd(spec, noise, T, seed=seed, **overrides)
    if variant == "adaptive_lgd":
        return run_adaptive_lgd(spec, noise, T, seed=seed, **overrides)
    if variant == "hybrid_lgd":
        return run_hybrid_lgd(spec, noise, T, seed=seed, **overrides)
    if variant == "kw_baseline":
        return run_kw_baseline(spec, noise, T, seed=seed, **overrides)
    raise ConfigError(f"unknown variant {variant!r}")
