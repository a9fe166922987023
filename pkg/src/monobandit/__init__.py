"""Monotone stochastic minimization with bandit feedback.

One-dimensional convex minimization where every query point must be at
least as large as all earlier ones (a fairness-in-hindsight constraint on
price experiments). The package provides certified analytic objectives, a
budgeted monotonicity-auditing oracle, four lagged-secant descent runners
plus an unconstrained baseline, and a sweep harness that measures regret
growth exponents.
"""

from monobandit._backend import BACKEND
from monobandit.algorithms import (
    VARIANTS,
    AlgoConfig,
    ConfigError,
    JumpRecord,
    PhaseRecord,
    RunResult,
    run_adaptive_lgd,
    run_hybrid_lgd,
    run_kw_baseline,
    run_lgd_noiseless,
    run_static_lgd,
    run_variant,
)
from monobandit.estimator import (
    EstimatorError,
    SecantEstimate,
    TooManySamples,
    conservative_secant,
    estimate_pair,
    hoeffding_samples,
    required_samples,
)
from monobandit.harness import (
    RegretReport,
    SweepResult,
    ValidationSummary,
    cumulative_regret,
    fit_regret_slope,
    run_sweep,
    validate_run,
    validate_trace,
)
from monobandit.objective import (
    CertificationError,
    NoiseModel,
    ObjectiveError,
    ObjectiveSpec,
    certify,
    make_quadratic,
    make_quartic_blend,
)
from monobandit.oracle import (
    BudgetExhausted,
    MonotonicityViolation,
    Oracle,
    OutOfDomain,
    Trace,
    read_trace_csv,
    write_trace_csv,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    "VARIANTS",
    "AlgoConfig",
    "ConfigError",
    "JumpRecord",
    "PhaseRecord",
    "RunResult",
    "run_lgd_noiseless",
    "run_static_lgd",
    "run_adaptive_lgd",
    "run_hybrid_lgd",
    "run_kw_baseline",
    "run_variant",
    "EstimatorError",
    "TooManySamples",
    "SecantEstimate",
    "required_samples",
    "hoeffding_samples",
    "conservative_secant",
    "estimate_pair",
    "RegretReport",
    "SweepResult",
    "ValidationSummary",
    "cumulative_regret",
    "validate_trace",
    "validate_run",
    "fit_regret_slope",
    "run_sweep",
    "ObjectiveError",
    "CertificationError",
    "ObjectiveSpec",
    "NoiseModel",
    "make_quadratic",
    "make_quartic_blend",
    "certify",
    "Oracle",
    "Trace",
    "BudgetExhausted",
    "MonotonicityViolation",
    "OutOfDomain",
    "read_trace_csv",
    "write_trace_csv",
]
