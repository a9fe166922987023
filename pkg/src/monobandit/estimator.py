"""Conservative secant estimation from noisy two-point averages.

The estimator samples two points (lower first, so the monotone oracle is
never asked to step back), averages each, and biases the resulting slope
upward by alpha*gap/4. With the Hoeffding-sized sample counts below, the
biased slope lands between the endpoint gradients with probability at
least (1-p)^2, which is what lets the runners jump from a lagged point
without overshooting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from monobandit.oracle import EV_SAMPLE, Oracle

__all__ = [
    "EstimatorError",
    "TooManySamples",
    "SecantEstimate",
    "hoeffding_samples",
    "required_samples",
    "conservative_secant",
    "estimate_pair",
]

_COUNT_LIMIT = float(2**62)


class EstimatorError(ValueError):
    pass


class TooManySamples(EstimatorError):
    """The Hoeffding count exceeds 2^62; the caller must coarsen the gap."""


@dataclass(frozen=True)
class SecantEstimate:
    """A conservative secant g over [x_lo, x_hi] with its bias offset.

    epsilon is the additive offset alpha*(x_hi - x_lo)^2 / 4 used to build
    g; mean_lo/mean_hi are the empirical averages (exact values in
    noiseless use); n_lo/n_hi the sample counts behind them (0 when the
    means were supplied externally).
    """

    g: float
    x_lo: float
    x_hi: float
    mean_lo: float
    mean_hi: float
    epsilon: float
    n_lo: int = 0
    n_hi: int = 0

    def __post_init__(self):
        if not self.x_lo < self.x_hi:
            raise EstimatorError(f"need x_lo < x_hi, got ({self.x_lo}, {self.x_hi})")


def hoeffding_samples(eps: float, p: float, kappa: float = 1.0) -> int:
    """ceil(kappa * 2*ln(2/p) / eps^2): samples for |mean - f| <= eps/2 w.p. 1-p.

    The bound assumes diameter-1 observation noise. kappa in (0, 1] scales
    the theoretical count for desk-scale experiments; kappa = 1 is faithful.
    """
    if eps <= 0:
        raise EstimatorError(f"precision must be positive, got {eps}")
    if not (0.0 < p < 1.0):
        raise EstimatorError(f"failure probability must be in (0,1), got {p}")
    if not (0.0 < kappa <= 1.0):
        raise EstimatorError(f"kappa must be in (0, 1], got {kappa}")
    count = kappa * (2.0 * math.log(2.0 / p) / (eps * eps))
    if count > _COUNT_LIMIT:
        raise TooManySamples(f"required count {count:.3g} exceeds 2^62")
    return max(1, math.ceil(count))


def required_samples(alpha: float, gap: float, p: float, kappa: float = 1.0) -> int:
    """Samples per point for a conservative secant over a gap.

    Equals ceil(kappa * 32*ln(2/p) / (alpha^2 * gap^4)); computed through
    the precision form with eps = alpha*gap^2/4 so the two algebraic forms
    agree exactly for every input.
    """
    if alpha <= 0:
        raise EstimatorError(f"strong-convexity constant must be positive, got {alpha}")
    if gap <= 0:
        raise EstimatorError(f"gap must be positive, got {gap}")
    return hoeffding_samples(alpha * gap * gap / 4.0, p, kappa)


def conservative_secant(
    mean_lo: float,
    mean_hi: float,
    x_lo: float,
    x_hi: float,
    alpha: float,
    *,
    n_lo: int = 0,
    n_hi: int = 0,
) -> SecantEstimate:
    """g = (mean_hi - mean_lo + alpha*(x_hi-x_lo)^2/4) / (x_hi - x_lo).

    With exact means and a convex f of strong-convexity alpha, g is
    sandwiched: grad(x_lo) <= true secant <= g <= grad(x_hi).
    """
    if not x_lo < x_hi:
        raise EstimatorError(f"need x_lo < x_hi, got ({x_lo}, {x_hi})")
    gap = x_hi - x_lo
    epsilon = alpha * (gap * gap) / 4.0
    g = (mean_hi - mean_lo + epsilon) / gap
    return SecantEstimate(
        g=g, x_lo=x_lo, x_hi=x_hi, mean_lo=mean_lo, mean_hi=mean_hi,
        epsilon=epsilon, n_lo=n_lo, n_hi=n_hi,
    )


def estimate_pair(
    oracle: Oracle,
    x_lo: float,
    x_hi: float,
    p: float,
    alpha: float,
    kappa: float = 1.0,
    *,
    n_override: int | None = None,
    phase: int = 0,
    lag: float = 0.0,
    event_lo: int = EV_SAMPLE,
    event_hi: int = EV_SAMPLE,
) -> SecantEstimate:
    """Sample both points (lower first) and form the conservative secant.

    Each point gets required_samples(alpha, x_hi - x_lo, p, kappa)
    observations, or n_override if given (deterministic test mode).
    Oracle errors (budget, monotonicity) propagate; on budget exhaustion
    the partial samples are already on the ledger.
    """
    if not x_lo < x_hi:
        raise EstimatorError(f"need x_lo < x_hi, got ({x_lo}, {x_hi})")
    gap = x_hi - x_lo
    n = n_override if n_override is not None else required_samples(alpha, gap, p, kappa)
    mean_lo = oracle.query_block(x_lo, n, phase=phase, lag=lag, event_first=event_lo)
    mean_hi = oracle.query_block(x_hi, n, phase=phase, lag=lag, event_first=event_hi)
    return conservative_secant(mean_lo, mean_hi, x_lo, x_hi, alpha, n_lo=n, n_hi=n)
