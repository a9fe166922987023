"""Analytic test objectives and bounded zero-mean observation noise.

Objectives are one-dimensional, strongly convex and smooth, with a known
interior minimizer. The declared curvature bounds (alpha, beta) are part of
the contract: every algorithm consumes them, and ``certify`` checks them
against the analytic gradient on a grid. The gradient itself is never shown
to an algorithm; it exists for construction checks and post-hoc validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

__all__ = [
    "ObjectiveError",
    "CertificationError",
    "NoiseError",
    "ObjectiveSpec",
    "NoiseModel",
    "make_quadratic",
    "make_quartic_blend",
    "certify",
    "NOISE_KINDS",
]


class ObjectiveError(ValueError):
    """Invalid objective construction."""


class CertificationError(ValueError):
    """Declared curvature bounds contradicted by the analytic gradient."""


class NoiseError(ValueError):
    """Invalid noise model."""


@dataclass(frozen=True, eq=False)
class ObjectiveSpec:
    """A certified convex objective on [p_min, p_max].

    ``f`` and ``grad`` accept scalars or NumPy arrays. ``family`` and
    ``params`` identify the analytic family for serialization and for the
    compiled fast path ("custom" disables both).
    """

    p_min: float
    p_max: float
    x_star: float
    alpha: float
    beta: float
    f: Callable[[float], float]
    grad: Callable[[float], float]
    family: str = "custom"
    params: tuple = ()

    def __post_init__(self):
        if not self.p_min < self.p_max:
            raise ObjectiveError(f"empty domain: [{self.p_min}, {self.p_max}]")
        if not (self.p_min < self.x_star < self.p_max):
            raise ObjectiveError(
                f"minimizer {self.x_star} not interior to ({self.p_min}, {self.p_max})"
            )
        if not (0.0 < self.alpha <= self.beta):
            raise ObjectiveError(f"need 0 < alpha <= beta, got ({self.alpha}, {self.beta})")
        g0 = float(self.grad(self.x_star))
        if abs(g0) > 1e-12:
            raise ObjectiveError(f"grad(x_star) = {g0:g}, expected 0 to within 1e-12")

    @property
    def f_star(self) -> float:
        return float(self.f(self.x_star))

    def describe(self) -> dict:
        return {
            "family": self.family,
            "params": list(self.params),
            "p_min": self.p_min,
            "p_max": self.p_max,
            "x_star": self.x_star,
            "alpha": self.alpha,
            "beta": self.beta,
        }


def make_quadratic(center: float, curvature: float, p_min: float, p_max: float) -> ObjectiveSpec:
    """f(x) = curvature*(x-center)^2, so alpha = beta = 2*curvature."""
    if curvature <= 0:
        raise ObjectiveError(f"curvature must be positive, got {curvature}")
    if not (p_min < center < p_max):
        raise ObjectiveError(f"center {center} outside open interval ({p_min}, {p_max})")

    def f(x):
        r = x - center
        return curvature * (r * r)

    def grad(x):
        return 2.0 * curvature * (x - center)

    return ObjectiveSpec(
        p_min=p_min,
        p_max=p_max,
        x_star=center,
        alpha=2.0 * curvature,
        beta=2.0 * curvature,
        f=f,
        grad=grad,
        family="quad",
        params=(center, curvature),
    )


def make_quartic_blend(center: float, a: float, b: float, p_min: float, p_max: float) -> ObjectiveSpec:
    """f(x) = a*(x-center)^2 + b*(x-center)^4.

    alpha = 2a everywhere; beta = 2a + 12*b*r_max^2 with r_max the largest
    offset reachable inside the domain, so alpha < beta whenever b > 0.
    """
    if a <= 0:
        raise ObjectiveError(f"quadratic coefficient must be positive, got {a}")
    if b < 0:
        raise ObjectiveError(f"quartic coefficient must be nonnegative, got {b}")
    if not (p_min < center < p_max):
        raise ObjectiveError(f"center {center} outside open interval ({p_min}, {p_max})")
    r_max = max(center - p_min, p_max - center)

    def f(x):
        r = x - center
        r2 = r * r
        return a * r2 + b * (r2 * r2)

    def grad(x):
        r = x - center
        return 2.0 * a * r + 4.0 * b * (r * r * r)

    return ObjectiveSpec(
        p_min=p_min,
        p_max=p_max,
        x_star=center,
        alpha=2.0 * a,
        beta=2.0 * a + 12.0 * b * (r_max * r_max),
        f=f,
        grad=grad,
        family="quartic",
        params=(center, a, b),
    )


def certify(spec: ObjectiveSpec, grid_points: int = 1001) -> tuple[float, float]:
    """Scan all ordered grid pairs for the gradient's growth rate.

    Returns (alpha_hat, beta_hat) = (min, max) of
    (grad(y) - grad(x)) / (y - x) over x < y on a uniform grid, and raises
    CertificationError (naming a violating pair) unless
    spec.alpha <= alpha_hat and beta_hat <= spec.beta, within 1e-9.
    """
    if grid_points < 3:
        raise ValueError(f"need at least 3 grid points, got {grid_points}")
    xs = np.linspace(spec.p_min, spec.p_max, grid_points)
    gs = np.asarray(spec.grad(xs), dtype=float)
    i_idx, j_idx = np.triu_indices(grid_points, k=1)
    ratios = (gs[j_idx] - gs[i_idx]) / (xs[j_idx] - xs[i_idx])
    alpha_hat = float(ratios.min())
    beta_hat = float(ratios.max())
    tol = 1e-9
    if spec.alpha > alpha_hat + tol:
        k = int(ratios.argmin())
        raise CertificationError(
            f"declared alpha {spec.alpha:g} exceeds observed slope {alpha_hat:.12g} "
            f"on pair (x={xs[i_idx[k]]:.12g}, y={xs[j_idx[k]]:.12g})"
        )
    if beta_hat > spec.beta + tol:
        k = int(ratios.argmax())
        raise CertificationError(
            f"observed slope {beta_hat:.12g} exceeds declared beta {spec.beta:g} "
            f"on pair (x={xs[i_idx[k]]:.12g}, y={xs[j_idx[k]]:.12g})"
        )
    return alpha_hat, beta_hat


# ---------------------------------------------------------------------------
# Noise
# ---------------------------------------------------------------------------

NOISE_KINDS = ("none", "uniform", "rademacher", "custom")


@dataclass(frozen=True, eq=False)
class NoiseModel:
    """Zero-mean observation noise with support of diameter <= 1.

    uniform: U[-diameter/2, +diameter/2]; rademacher: +-diameter/2 with
    equal probability; custom: caller-supplied sampler (rng, size) -> array
    whose support diameter the caller vouches for.
    """

    kind: str = "uniform"
    diameter: float = 1.0
    seed: int = 0
    sampler: Optional[Callable[[np.random.Generator, int], np.ndarray]] = field(
        default=None, repr=False
    )

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise NoiseError(f"unknown noise kind {self.kind!r}, expected one of {NOISE_KINDS}")
        if self.kind != "none" and not (0.0 < self.diameter <= 1.0):
            raise NoiseError(f"support diameter must be in (0, 1], got {self.diameter}")
        if self.kind == "custom" and self.sampler is None:
            raise NoiseError("custom noise requires a sampler")

    @property
    def is_none(self) -> bool:
        return self.kind == "none"

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "none":
            return np.zeros(size)
        if self.kind == "uniform":
            return (rng.random(size) - 0.5) * self.diameter
        if self.kind == "rademacher":
            return (rng.integers(0, 2, size=size) * 2 - 1) * (self.diameter / 2.0)
        return np.asarray(self.sampler(rng, size), dtype=float)

    def with_seed(self, seed: int) -> "NoiseModel":
        return replace(self, seed=int(seed))

    def describe(self) -> dict:
        return {"kind": self.kind, "diameter": self.diameter, "seed": self.seed}
