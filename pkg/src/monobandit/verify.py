"""Self-contained property suite behind `monobandit verify`.

Each check returns (ok, detail); the CLI prints one line per check and
exits nonzero if any fails. These are the fast structural invariants; the
heavier Monte-Carlo acceptance experiments live in the test suite.
"""

from __future__ import annotations

import math

import numpy as np

from monobandit import harness
from monobandit.algorithms import (
    run_adaptive_lgd,
    run_hybrid_lgd,
    run_kw_baseline,
    run_lgd_noiseless,
    run_static_lgd,
)
from monobandit.estimator import (
    conservative_secant,
    estimate_pair,
    hoeffding_samples,
    required_samples,
)
from monobandit.objective import (
    NoiseModel,
    certify,
    make_quadratic,
    make_quartic_blend,
)
from monobandit.oracle import Oracle, write_trace_csv

__all__ = ["CHECKS", "run_checks"]


def _specs():
    return [
        make_quadratic(1.0, 1.0, 0.0, 2.0),
        make_quartic_blend(1.0, 1.0, 1.0, 0.0, 2.0),
    ]


def check_noise_mean_and_support():
    """Empirical mean of 1e6 draws within 3*diameter/1000; support inside diameter."""
    rng_n = 10**6
    for kind in ("uniform", "rademacher"):
        for diameter in (1.0, 0.5):
            model = NoiseModel(kind=kind, diameter=diameter, seed=7)
            draws = model.draw(np.random.default_rng(7), rng_n)
            tol = 3.0 * diameter / math.sqrt(rng_n)
            if abs(float(draws.mean())) > tol:
                return False, f"{kind} d={diameter}: mean {draws.mean():.2e} > {tol:.2e}"
            if float(draws.max() - draws.min()) > diameter + 1e-15:
                return False, f"{kind} d={diameter}: support too wide"
    return True, "uniform and rademacher draws are centered and bounded"


def check_certify_closed_form():
    """Grid certification reproduces analytic alpha, beta within 1e-6."""
    quad = make_quadratic(1.0, 1.0, 0.0, 2.0)
    a_hat, b_hat = certify(quad, 1001)
    if abs(a_hat - 2.0) > 1e-6 or abs(b_hat - 2.0) > 1e-6:
        return False, f"quadratic: ({a_hat}, {b_hat}) != (2, 2)"
    quart = make_quartic_blend(1.0, 1.0, 1.0, 0.0, 2.0)
    a_hat, b_hat = certify(quart, 1001)
    if abs(a_hat - 2.0) > 1e-3 or abs(b_hat - 14.0) > 0.05:
        return False, f"quartic: ({a_hat}, {b_hat}) not near (2, 14)"
    if not (quart.alpha <= a_hat and b_hat <= quart.beta + 1e-9):
        return False, "quartic certification bounds violated"
    return True, "grid scan matches closed-form curvature bounds"


def check_anti_lipschitz():
    """|y-x| <= (1/alpha)|grad(y)-grad(x)| + 1e-9 on 1001-point grids."""
    for spec in _specs():
        xs = np.linspace(spec.p_min, spec.p_max, 1001)
        gs = np.asarray(spec.grad(xs), dtype=float)
        i, j = np.triu_indices(xs.size, k=1)
        lhs = xs[j] - xs[i]
        rhs = np.abs(gs[j] - gs[i]) / spec.alpha
        worst = float(np.max(lhs - rhs))
        if worst > 1e-9:
            return False, f"{spec.family}: violation {worst:.2e}"
    return True, "gradient separation bounds point separation on both families"


def check_grad_square_inequality():
    """grad(x)^2 >= 2*alpha*(f(x)-f*) - 1e-9 on 1001-point grids."""
    for spec in _specs():
        xs = np.linspace(spec.p_min, spec.p_max, 1001)
        lhs = np.asarray(spec.grad(xs), dtype=float) ** 2
        rhs = 2.0 * spec.alpha * (np.asarray(spec.f(xs), dtype=float) - spec.f_star)
        worst = float(np.max(rhs - lhs))
        if worst > 1e-9:
            return False, f"{spec.family}: violation {worst:.2e}"
    return True, "squared gradient dominates 2*alpha*gap on both families"


def check_noiseless_sandwich():
    """grad(lo) <= secant <= g <= grad(hi) for exact means on a 50x50 grid."""
    for spec in _specs():
        xs = np.linspace(spec.p_min, spec.p_max, 50)
        for i in range(xs.size - 1):
            for j in range(i + 1, xs.size):
                lo, hi = float(xs[i]), float(xs[j])
                est = conservative_secant(
                    float(spec.f(lo)), float(spec.f(hi)), lo, hi, spec.alpha
                )
                secant = (float(spec.f(hi)) - float(spec.f(lo))) / (hi - lo)
                g_lo, g_hi = float(spec.grad(lo)), float(spec.grad(hi))
                if not (g_lo - 1e-12 <= secant <= est.g <= g_hi + 1e-12):
                    return False, f"{spec.family}: pair ({lo:.3g},{hi:.3g}) breaks the sandwich"
    return True, "conservative secant sandwiched on both families, all grid pairs"


def check_sample_count_formulas():
    """Count formula is monotone in its arguments and both forms agree."""
    alphas = [0.5, 1.0, 2.0, 10.0]
    gaps = [0.05, 0.1, 0.5, 1.0]
    ps = [0.3, 0.1, 0.01, 1e-4]
    prev = None
    for alpha in alphas:
        for gap in gaps:
            for p in ps:
                n = required_samples(alpha, gap, p)
                eps = alpha * gap * gap / 4.0
                if n != hoeffding_samples(eps, p):
                    return False, f"forms disagree at ({alpha},{gap},{p})"
    for p_hi, p_lo in zip(ps, ps[1:]):
        if required_samples(1.0, 0.5, p_lo) < required_samples(1.0, 0.5, p_hi):
            return False, "count not non-decreasing as p shrinks"
    for a_lo, a_hi in zip(alphas, alphas[1:]):
        if required_samples(a_hi, 0.5, 0.01) > required_samples(a_lo, 0.5, 0.01):
            return False, "count not non-increasing in alpha"
    for g_lo, g_hi in zip(gaps, gaps[1:]):
        if required_samples(1.0, g_hi, 0.01) > required_samples(1.0, g_lo, 0.01):
            return False, "count not non-increasing in gap"
    return True, "sample counts monotone; gap form and precision form identical"


def check_noiseless_oracle_exact():
    """With noise none the observation equals f(x) bit-for-bit."""
    spec = make_quadratic(1.0, 1.0, 0.0, 2.0)
    oracle = Oracle(spec, NoiseModel(kind="none"), 16)
    for x in (0.1, 0.25, 0.8, 1.0):
        y = oracle.query(x)
        if y != float(spec.f(x)):
            return False, f"observation at {x} differs from f(x)"
    return True, "noiseless observations are exact"


def check_hand_traces():
    """The worked noiseless and deterministic-adaptive walks come out exactly."""
    spec = make_quadratic(1.0, 1.0, 0.0, 2.0)
    res = run_lgd_noiseless(spec, 12, delta=0.1, gamma=2.0)
    xs = res.trace.x[: res.trace.n]
    visited = [xs[0]]
    for v in xs[1:]:
        if v != visited[-1]:
            visited.append(v)
    expect = [0.0, 0.1, 0.85, 0.95]
    if len(visited) != 4 or any(abs(a - b) > 1e-12 for a, b in zip(visited, expect)):
        return False, f"noiseless walk visited {visited}"
    res2 = run_adaptive_lgd(
        spec, NoiseModel(kind="none"), 64,
        delta1=0.2, gamma=2.0, q=0.5, p=0.01, deterministic=True,
    )
    iterates = [res2.jumps[0].from_x, res2.jumps[0].to_x, res2.jumps[1].to_x]
    expect2 = [0.2, 0.85, 0.98125]
    if any(abs(a - b) > 1e-12 for a, b in zip(iterates, expect2)):
        return False, f"adaptive walk iterates {iterates}"
    return True, "hand-derived walks reproduced to 1e-12"


def check_contraction_on_hand_trace():
    """Jump regret ratio beats 1 - 2*alpha*c on the worked noiseless run."""
    spec = make_quadratic(1.0, 1.0, 0.0, 2.0)
    res = run_lgd_noiseless(spec, 12, delta=0.1, gamma=2.0)
    summary = harness.validate_run(res)
    if not summary.bracket_clean:
        return False, "bracket replay failed on a noiseless run"
    if not summary.contraction_ok:
        return False, f"contraction ratios {summary.contractions} exceed {summary.contraction_cap}"
    cap = summary.contraction_cap
    if abs(cap - 2.0 / 3.0) > 1e-12:
        return False, f"contraction cap {cap} != 2/3 for alpha=beta=2, gamma=2"
    return True, "per-jump contraction verified on the worked run (cap 2/3)"


def check_determinism(tmp_dir=None):
    """Identical config + seed gives bit-identical trace CSVs."""
    import io

    spec = make_quadratic(1.0, 1.0, 0.0, 2.0)
    noise = NoiseModel(kind="uniform", diameter=1.0)
    blobs = []
    for _ in range(2):
        res = run_static_lgd(spec, noise, 2000, kappa=0.02, seed=42)
        buf = io.StringIO()
        write_trace_csv(res.trace, buf)
        blobs.append(buf.getvalue())
    if blobs[0] != blobs[1]:
        return False, "repeated run differs"
    return True, "seeded runs serialize to identical CSV bytes"


def check_kw_oscillates():
    """The unconstrained baseline violates monotonicity under noise."""
    spec = make_quadratic(1.0, 1.0, 0.0, 2.0)
    res = run_kw_baseline(spec, NoiseModel(kind="uniform"), 2000, seed=3)
    summary = harness.validate_trace(res.trace, spec)
    if summary.monotone or summary.monotone_violations == 0:
        return False, "baseline unexpectedly monotone"
    return True, f"baseline backsteps {summary.monotone_violations} times in 2000 samples"


def check_monotone_runs_smoke():
    """A handful of seeded noisy runs of each monotone variant stay monotone."""
    spec = make_quartic_blend(1.25, 5.0, 2.0 / 18.75, 0.0, 2.0)
    noise = NoiseModel(kind="uniform", diameter=1.0)
    for seed in range(5):
        runs = [
            run_static_lgd(spec, noise, 20000, kappa=0.05, seed=seed),
            run_adaptive_lgd(spec, noise, 20000, delta1=0.3, gamma=2.0, q=0.5,
                             kappa=0.05, seed=seed),
            run_hybrid_lgd(spec, noise, 20000, kappa=0.05, seed=seed),
        ]
        for res in runs:
            summary = harness.validate_run(res)
            if not summary.monotone or summary.guard_clamps:
                return False, f"{res.variant} seed {seed}: monotonicity broken"
    return True, "static/adaptive/hybrid monotone across seeds (15 runs)"


def check_hoeffding_halfwidth():
    """|mean - f| <= eps/2 fails at most p of the time (+3 sigma, 1e4 trials)."""
    rng = np.random.default_rng(11)
    eps, p = 0.2, 0.1
    n = hoeffding_samples(eps, p)
    trials = 10**4
    draws = (rng.random((trials, n)) - 0.5)  # diameter-1 noise around f = 0
    means = draws.mean(axis=1)
    fail = float(np.mean(np.abs(means) > eps / 2.0))
    bound = p + 3.0 * math.sqrt(p * (1.0 - p) / trials)
    if fail > bound:
        return False, f"failure rate {fail:.4f} > {bound:.4f}"
    return True, f"empirical failure rate {fail:.4f} <= {bound:.4f}"


CHECKS = [
    ("noise-mean-and-support", check_noise_mean_and_support),
    ("certify-closed-form", check_certify_closed_form),
    ("anti-lipschitz-grid", check_anti_lipschitz),
    ("grad-square-inequality", check_grad_square_inequality),
    ("noiseless-sandwich-grid", check_noiseless_sandwich),
    ("sample-count-formulas", check_sample_count_formulas),
    ("noiseless-oracle-exact", check_noiseless_oracle_exact),
    ("hand-traces", check_hand_traces),
    ("contraction-hand-trace", check_contraction_on_hand_trace),
    ("seeded-determinism", check_determinism),
    ("kw-baseline-oscillates", check_kw_oscillates),
    ("monotone-runs-smoke", check_monotone_runs_smoke),
    ("hoeffding-halfwidth", check_hoeffding_halfwidth),
]


def run_checks(names=None, printer=print) -> bool:
    """Run the named checks (all by default); returns overall success."""
    selected = CHECKS if not names else [c for c in CHECKS if c[0] in set(names)]
    all_ok = True
    for name, fn in selected:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        all_ok &= ok
        printer(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return all_ok
