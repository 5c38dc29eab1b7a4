# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from sslf.dataset import InteractionIndex
from sslf.errors import EmptyEvalSetError
from sslf.metrics import rating_range, rmse
from sslf.model import ParamVector, objective


def test_perfect_predictions():
    y = ParamVector(1, 2, 1, [1.0, 2.0, 3.0])
    index = InteractionIndex([0, 0], [0, 1], [2.0, 3.0], 1, 2)
    assert rmse(y, index) == (0.0, 2)


def test_zero_parameters():
    y = ParamVector(1, 2, 2)
    index = InteractionIndex([0, 0], [0, 1], [3.0, 4.0], 1, 2)
    assert rmse(y, index).rmse == pytest.approx(math.sqrt(12.5))


def test_single_residual():
    y = ParamVector(1, 1, 1, [1.0, 1.0])
    index = InteractionIndex([0], [0], [3.0], 1, 1)
    assert rmse(y, index).rmse == 2.0


def test_empty_set():
    y = ParamVector(1, 1, 1)
    with pytest.raises(EmptyEvalSetError):
        rmse(y, InteractionIndex([], [], [], 1, 1))


def test_clamp():
    y = ParamVector(1, 2, 1, [1.0, 10.0, -3.0])
    index = InteractionIndex([0, 0], [0, 1], [5.0, 1.0], 1, 2)
    assert rmse(y, index, clamp=(1.0, 5.0)).rmse == 0.0
    assert rating_range(index) == (1.0, 5.0)


def test_consistent_with_objective(small_instances):
    for y, index in small_instances:
        result = rmse(y, index)
        assert result.rmse ** 2 * result.n_evaluated == pytest.approx(
            2.0 * objective(y, index, 0.0), rel=1e-12
        )


def test_rmse_ignores_entry_order(rng, instance_factory):
    for _ in range(10):
        y, index = instance_factory(rng, 5, 6, 2)
        order = rng.permutation(index.n_observed)
        shuffled = InteractionIndex(
            index.users[order], index.items[order], index.ratings[order],
            index.n_users, index.n_items,
        )
        assert rmse(y, shuffled).rmse == pytest.approx(rmse(y, index).rmse, rel=1e-12)
        assert rmse(y, shuffled).n_evaluated == index.n_observed
