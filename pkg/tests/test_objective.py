"""Objective construction, certification, and noise-model contracts."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monobandit import (
    CertificationError,
    NoiseModel,
    ObjectiveError,
    ObjectiveSpec,
    certify,
    make_quadratic,
    make_quartic_blend,
)


class TestQuadratic:
    def test_basic_fields(self):
        spec = make_quadratic(1.0, 1.0, 0.0, 2.0)
        assert spec.alpha == 2.0
        assert spec.beta == 2.0
        assert spec.x_star == 1.0
        assert spec.f(0.0) == 1.0

    def test_steeper_curvature(self):
        spec = make_quadratic(0.5, 5.0, 0.0, 1.0)
        assert spec.alpha == spec.beta == 10.0
        assert spec.grad(0.5) == 0.0

    def test_eval_example(self):
        spec = make_quadratic(1.0, 1.0, 0.0, 2.0)
        assert spec.f(0.85) == pytest.approx(0.0225, abs=1e-15)

    def test_center_outside_interval_rejected(self):
        with pytest.raises(ObjectiveError):
            make_quadratic(2.0, 1.0, 0.0, 2.0)
        with pytest.raises(ObjectiveError):
            make_quadratic(-0.5, 1.0, 0.0, 2.0)

    def test_nonpositive_curvature_rejected(self):
        with pytest.raises(ObjectiveError):
            make_quadratic(1.0, 0.0, 0.0, 2.0)

    def test_vectorized_eval(self):
        spec = make_quadratic(1.0, 1.0, 0.0, 2.0)
        xs = np.array([0.0, 1.0, 2.0])
        assert np.allclose(spec.f(xs), [1.0, 0.0, 1.0])
        assert np.allclose(spec.grad(xs), [-2.0, 0.0, 2.0])


class TestQuarticBlend:
    def test_degenerates_to_quadratic_when_b_zero(self):
        quart = make_quartic_blend(1.0, 1.0, 0.0, 0.0, 2.0)
        quad = make_quadratic(1.0, 1.0, 0.0, 2.0)
        assert quart.alpha == quad.alpha
        assert quart.beta == quad.beta
        xs = np.linspace(0.0, 2.0, 11)
        assert np.array_equal(np.asarray(quart.f(xs)), np.asarray(quad.f(xs)))

    def test_curvature_bounds(self):
        spec = make_quartic_blend(1.0, 1.0, 1.0, 0.0, 2.0)
        assert spec.alpha == 2.0
        assert spec.beta == pytest.approx(14.0)  # 2a + 12*b*r_max^2, r_max = 1

    def test_eval_example(self):
        spec = make_quartic_blend(1.0, 1.0, 1.0, 0.0, 2.0)
        assert spec.f(0.5) == pytest.approx(0.3125, abs=1e-15)  # 0.25 + 0.0625

    def test_nonpositive_a_rejected(self):
        with pytest.raises(ObjectiveError):
            make_quartic_blend(1.0, 0.0, 1.0, 0.0, 2.0)
        with pytest.raises(ObjectiveError):
            make_quartic_blend(1.0, -1.0, 1.0, 0.0, 2.0)


class TestObjectiveSpecInvariants:
    def test_rejects_noncentered_gradient(self):
        with pytest.raises(ObjectiveError, match="grad"):
            ObjectiveSpec(
                p_min=0.0, p_max=2.0, x_star=1.0, alpha=1.0, beta=2.0,
                f=lambda x: x * x, grad=lambda x: 2.0 * x,
            )

    def test_rejects_alpha_above_beta(self):
        with pytest.raises(ObjectiveError, match="alpha"):
            ObjectiveSpec(
                p_min=0.0, p_max=2.0, x_star=1.0, alpha=3.0, beta=2.0,
                f=lambda x: (x - 1.0) ** 2, grad=lambda x: 2.0 * (x - 1.0),
            )

    def test_rejects_exterior_minimizer(self):
        with pytest.raises(ObjectiveError, match="interior"):
            ObjectiveSpec(
                p_min=0.0, p_max=0.5, x_star=1.0, alpha=2.0, beta=2.0,
                f=lambda x: (x - 1.0) ** 2, grad=lambda x: 2.0 * (x - 1.0),
            )


class TestCertify:
    def test_quadratic_exact(self):
        spec = make_quadratic(1.0, 1.0, 0.0, 2.0)
        alpha_hat, beta_hat = certify(spec, 101)
        assert alpha_hat == pytest.approx(2.0, abs=1e-9)
        assert beta_hat == pytest.approx(2.0, abs=1e-9)

    def test_quartic_near_closed_form(self):
        spec = make_quartic_blend(1.0, 1.0, 1.0, 0.0, 2.0)
        alpha_hat, beta_hat = certify(spec, 201)
        assert alpha_hat == pytest.approx(2.0, rel=1e-3)
        assert beta_hat == pytest.approx(14.0, rel=2e-2)
        # grid resolution only ever weakens the observed extremes
        assert spec.alpha <= alpha_hat
        assert beta_hat <= spec.beta

    def test_closed_form_at_1001_points(self):
        quad = make_quadratic(1.0, 1.0, 0.0, 2.0)
        a_hat, b_hat = certify(quad, 1001)
        assert a_hat == pytest.approx(2.0, abs=1e-6)
        assert b_hat == pytest.approx(2.0, abs=1e-6)

    def test_overdeclared_alpha_fails_with_pair(self):
        spec = make_quadratic(1.0, 1.0, 0.0, 2.0)
        bad = ObjectiveSpec(
            p_min=spec.p_min, p_max=spec.p_max, x_star=spec.x_star,
            alpha=3.0, beta=3.0, f=spec.f, grad=spec.grad,
        )
        with pytest.raises(CertificationError, match="pair"):
            certify(bad, 51)

    def test_rejects_tiny_grid(self):
        spec = make_quadratic(1.0, 1.0, 0.0, 2.0)
        with pytest.raises(ValueError):
            certify(spec, 2)

    @given(
        center=st.floats(0.3, 1.7),
        curv=st.floats(0.1, 50.0),
    )
    @settings(max_examples=30, deadline=None)
    def test_random_quadratics_certify(self, center, curv):
        spec = make_quadratic(center, curv, 0.0, 2.0)
        alpha_hat, beta_hat = certify(spec, 41)
        assert alpha_hat == pytest.approx(2.0 * curv, rel=1e-9)
        assert beta_hat == pytest.approx(2.0 * curv, rel=1e-9)


class TestAntiLipschitz:
    @pytest.mark.parametrize("spec", [
        make_quadratic(1.0, 1.0, 0.0, 2.0),
        make_quartic_blend(1.0, 1.0, 1.0, 0.0, 2.0),
    ], ids=["quad", "quartic"])
    def test_gradient_separation_bounds_distance(self, spec):
        xs = np.linspace(spec.p_min, spec.p_max, 1001)
        gs = np.asarray(spec.grad(xs))
        i, j = np.triu_indices(xs.size, k=1)
        assert np.all(xs[j] - xs[i] <= np.abs(gs[j] - gs[i]) / spec.alpha + 1e-9)


class TestNoiseModel:
    def test_mean_zero_and_support_uniform(self):
        model = NoiseModel(kind="uniform", diameter=1.0, seed=123)
        draws = model.draw(np.random.default_rng(123), 10**6)
        assert abs(draws.mean()) <= 3.0 * 1.0 / 1000.0
        assert draws.min() >= -0.5 and draws.max() <= 0.5

    def test_mean_zero_and_support_rademacher(self):
        model = NoiseModel(kind="rademacher", diameter=1.0, seed=5)
        draws = model.draw(np.random.default_rng(5), 10**6)
        assert abs(draws.mean()) <= 3.0 / 1000.0
        assert set(np.unique(draws)) == {-0.5, 0.5}

    def test_scaled_diameter(self):
        model = NoiseModel(kind="uniform", diameter=0.25, seed=9)
        draws = model.draw(np.random.default_rng(9), 10**5)
        assert draws.max() - draws.min() <= 0.25
        assert abs(draws.mean()) <= 3.0 * 0.25 / math.sqrt(10**5)

    def test_rejects_oversized_diameter(self):
        with pytest.raises(ValueError):
            NoiseModel(kind="uniform", diameter=1.5)

    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError):
            NoiseModel(kind="gaussian")

    def test_custom_requires_sampler(self):
        with pytest.raises(ValueError):
            NoiseModel(kind="custom")

    def test_custom_sampler_used(self):
        model = NoiseModel(
            kind="custom", diameter=0.5,
            sampler=lambda rng, size: (rng.random(size) - 0.5) * 0.5,
        )
        draws = model.draw(np.random.default_rng(0), 1000)
        assert np.all(np.abs(draws) <= 0.25)

    def test_none_is_zero(self):
        model = NoiseModel(kind="none")
        assert np.array_equal(model.draw(np.random.default_rng(0), 8), np.zeros(8))
