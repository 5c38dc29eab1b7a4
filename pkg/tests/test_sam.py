# -*- coding: utf-8 -*-
import numpy as np
import pytest

from sslf.errors import ShapeMismatchError
from sslf.model import ParamVector, gradient, objective
from sslf.sam import Perturbation, is_null, perturbed_point, sam_perturbation


def test_normalized_gradient():
    pert = sam_perturbation(np.array([3.0, 4.0]), 1.0)
    np.testing.assert_allclose(pert.epsilon, [0.6, 0.8], rtol=1e-15)
    assert pert.grad_norm == 5.0
    assert pert.rho == 1.0


def test_zero_radius():
    pert = sam_perturbation(np.array([3.0, 4.0]), 0.0)
    np.testing.assert_array_equal(pert.epsilon, [0.0, 0.0])
    assert is_null(pert)


def test_zero_gradient():
    pert = sam_perturbation(np.zeros(3), 0.1)
    np.testing.assert_array_equal(pert.epsilon, np.zeros(3))
    assert is_null(pert)


def test_gradient_below_floor():
    assert is_null(sam_perturbation(np.full(4, 1e-14), 0.1))


def test_negative_radius():
    with pytest.raises(ValueError):
        sam_perturbation(np.ones(2), -1e-3)


def test_norm_exactness(rng):
    for _ in range(100):
        g = rng.standard_normal(int(rng.integers(1, 40))) * 10.0 ** rng.integers(-6, 6)
        for rho in (1e-4, 1e-2, 1.0):
            epsilon = sam_perturbation(g, rho).epsilon
            assert np.linalg.norm(epsilon) == pytest.approx(rho, rel=1e-12)


def test_scale_invariance(rng):
    for _ in range(50):
        g = rng.standard_normal(12)
        scale = 10.0 ** rng.uniform(-3, 3)
        np.testing.assert_allclose(
            sam_perturbation(scale * g, 0.01).epsilon,
            sam_perturbation(g, 0.01).epsilon,
            rtol=1e-12,
            atol=1e-18,
        )


def test_perturbed_point():
    y = ParamVector(1, 1, 1, [1.0, 1.0])
    moved = perturbed_point(y, Perturbation(np.array([0.6, 0.8]), 1.0, 5.0))
    np.testing.assert_allclose(moved.values, [1.6, 1.8])
    np.testing.assert_array_equal(y.values, [1.0, 1.0])
    assert np.linalg.norm(moved.values - y.values) == pytest.approx(1.0, rel=1e-12)


def test_null_perturbation_is_identity():
    y = ParamVector(1, 2, 1, [0.1, 0.2, 0.3])
    moved = perturbed_point(y, sam_perturbation(np.ones(3), 0.0))
    np.testing.assert_array_equal(moved.values, y.values)


def test_perturbed_point_shape_mismatch():
    y = ParamVector(1, 1, 1, [1.0, 1.0])
    with pytest.raises(ShapeMismatchError):
        perturbed_point(y, Perturbation(np.ones(3), 1.0, 1.0))


def test_perturbation_climbs_the_objective(rng, instance_factory):
    climbs, trials, lam, rho = 0, 60, 0.05, 1e-4
    for _ in range(trials):
        y, index = instance_factory(
            rng, int(rng.integers(2, 7)), int(rng.integers(2, 7)), int(rng.integers(1, 4))
        )
        pert = sam_perturbation(gradient(y, index, lam), rho)
        if objective(perturbed_point(y, pert), index, lam) >= objective(y, index, lam):
            climbs += 1
    assert climbs >= 0.95 * trials
