# -*- coding: utf-8 -*-
import numpy as np
import pytest

from sslf.dataset import InteractionIndex
from sslf.errors import CheckpointError, ConfigError, ShapeMismatchError
from sslf.model import (
    Hyperparams,
    ParamVector,
    gradient,
    init_params,
    load_checkpoint,
    objective,
    predict,
    predict_observed,
    save_checkpoint,
)


def test_init_is_deterministic():
    hp = Hyperparams(f=2, seed=11)
    a = init_params(1, 1, hp)
    b = init_params(1, 1, hp)
    np.testing.assert_array_equal(a.values, b.values)


def test_init_default_range():
    y = init_params(30, 40, Hyperparams())
    assert y.values.min() >= 0.0
    assert y.values.max() < 0.004


def test_init_length():
    assert init_params(2, 3, Hyperparams(f=2)).size == 10


def test_slot_layout():
    y = ParamVector(2, 3, 2, np.arange(10.0))
    assert y.user_slot(1, 0) == 2
    assert y.item_slot(0, 1) == 5
    assert y.user_factors[1].tolist() == [2.0, 3.0]
    assert y.item_factors[0].tolist() == [4.0, 5.0]


def test_wrong_length_values():
    with pytest.raises(ShapeMismatchError):
        ParamVector(1, 1, 2, [1.0, 2.0, 3.0])


@pytest.mark.parametrize(
    "y_u, y_i, expected",
    [([0, 0], [3, 4], 0.0), ([1, 1], [2, 5], 7.0), ([1, 0, 0], [1, 0, 0], 1.0)],
)
def test_predict(y_u, y_i, expected):
    y = ParamVector(1, 1, len(y_u), y_u + y_i)
    assert predict(y, 0, 0) == expected


def test_predict_out_of_range():
    y = ParamVector(1, 1, 1)
    with pytest.raises(IndexError):
        predict(y, 1, 0)


def test_objective_examples(pair):
    y = ParamVector(1, 1, 1)
    index = InteractionIndex([0], [0], [2.0], 1, 1)
    assert objective(y, index, 0.0) == 2.0
    y, index = pair(1.0, 1.0, rating=1.0)
    assert objective(y, index, 0.0) == 0.0
    assert objective(y, index, 0.1) == pytest.approx(0.1, abs=1e-15)


def test_regularizer_counts_every_entry():
    # user 0 rates two items, so its factor is penalized twice
    index = InteractionIndex([0, 0], [0, 1], [0.0, 0.0], 1, 2)
    y = ParamVector(1, 2, 1, [1.0, 0.0, 0.0])
    assert objective(y, index, 1.0) == pytest.approx(1.0)


def test_gradient_examples(pair):
    y, index = pair(1.0, 1.0, rating=1.0)
    np.testing.assert_array_equal(gradient(y, index, 0.0), [0.0, 0.0])
    y, index = pair(2.0, 3.0, rating=0.0)
    np.testing.assert_allclose(gradient(y, index, 0.0), [18.0, 12.0])


def test_gradient_matches_central_differences(small_instances):
    h = 1e-6
    for y, index in small_instances:
        for lam in (0.0, 0.1):
            g = gradient(y, index, lam)
            fd = np.empty(y.size)
            for k in range(y.size):
                step = np.zeros(y.size)
                step[k] = h
                up = objective(y.with_values(y.values + step), index, lam)
                down = objective(y.with_values(y.values - step), index, lam)
                fd[k] = (up - down) / (2 * h)
            np.testing.assert_allclose(g, fd, rtol=1e-5, atol=1e-6)


def test_predict_observed_matches_predict(rng, instance_factory):
    y, index = instance_factory(rng, 4, 5, 3)
    expected = [predict(y, t.user_id, t.item_id) for t in index.triples()]
    np.testing.assert_allclose(predict_observed(y, index), expected, rtol=1e-14)


def test_shape_mismatch_with_index():
    y = ParamVector(2, 2, 1)
    index = InteractionIndex([0], [0], [1.0], 3, 2)
    with pytest.raises(ShapeMismatchError):
        objective(y, index, 0.0)


@pytest.mark.parametrize(
    "changes",
    [{"f": 0}, {"gamma": 0.0}, {"rho": -1.0}, {"lam": -0.1},
     {"init_low": 1.0, "init_high": 0.0}, {"sam_mode": "curvature-only"}],
)
def test_hyperparams_validate(changes):
    with pytest.raises(ConfigError):
        Hyperparams(**changes).validate()


def test_checkpoint_roundtrip(tmp_path, rng):
    y = ParamVector(3, 4, 2, rng.standard_normal(14))
    path = str(tmp_path / "checkpoint.bin")
    save_checkpoint(y, path)
    with open(path, "rb") as f:
        assert f.readline() == b"SSLF-CHECKPOINT 1\n"
        assert f.readline() == b"3 4 2\n"
        assert len(f.read()) == 14 * 8
    loaded = load_checkpoint(path)
    assert (loaded.n_users, loaded.n_items, loaded.f) == (3, 4, 2)
    np.testing.assert_array_equal(loaded.values, y.values)


def test_checkpoint_rejects_other_files(tmp_path):
    path = tmp_path / "bogus.bin"
    path.write_bytes(b"NOT-A-CHECKPOINT\n1 1 1\n")
    with pytest.raises(CheckpointError):
        load_checkpoint(str(path))
    path.write_bytes(b"SSLF-CHECKPOINT 2\n1 1 1\n" + b"\0" * 16)
    with pytest.raises(CheckpointError):
        load_checkpoint(str(path))
    path.write_bytes(b"SSLF-CHECKPOINT 1\n1 1 1\n" + b"\0" * 8)
    with pytest.raises(CheckpointError):
        load_checkpoint(str(path))


@pytest.mark.parametrize("lam", [0.0, 0.1])
def test_objective_is_nonnegative(small_instances, lam):
    for y, index in small_instances:
        assert objective(y, index, lam) >= 0.0


def test_predict_is_bilinear(rng):
    n_users, n_items, f = 3, 4, 3
    y = ParamVector(n_users, n_items, f, rng.standard_normal((n_users + n_items) * f))
    z = ParamVector(n_users, n_items, f, rng.standard_normal((n_users + n_items) * f))
    alpha, beta = rng.uniform(-3.0, 3.0, 2)
    n_user_values = n_users * f

    scaled = y.values.copy()
    scaled[:n_user_values] *= alpha
    scaled[n_user_values:] *= beta
    summed = y.values.copy()
    summed[:n_user_values] += z.values[:n_user_values]
    # z's user factors with y's item factors
    mixed = ParamVector(n_users, n_items, f, np.concatenate(
        (z.values[:n_user_values], y.values[n_user_values:])
    ))
    for u in range(n_users):
        for i in range(n_items):
            expected = alpha * beta * predict(y, u, i)
            assert predict(y.with_values(scaled), u, i) == pytest.approx(expected, abs=1e-12)
            assert predict(y.with_values(summed), u, i) == pytest.approx(
                predict(y, u, i) + predict(mixed, u, i), abs=1e-12
            )
