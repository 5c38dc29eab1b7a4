# -*- coding: utf-8 -*-
import numpy as np
import pytest

from sslf.curvature import jacobian_matrix
from sslf.dataset import DatasetSplit, InteractionIndex
from sslf.model import ParamVector


def make_instance(rng, n_users, n_items, f, density=0.6, scale=1.0):
    """Random parameters and a random observed set with at least one entry"""
    mask = rng.random((n_users, n_items)) < density
    if not mask.any():
        mask[rng.integers(n_users), rng.integers(n_items)] = True
    users, items = np.nonzero(mask)
    ratings = rng.uniform(1.0, 5.0, users.shape[0])
    index = InteractionIndex(users, items, ratings, n_users, n_items)
    values = scale * rng.standard_normal((n_users + n_items) * f)
    return ParamVector(n_users, n_items, f, values), index


def dense_damped(params, index, lam, gamma):
    """J^T J + lambda D + gamma I, assembled explicitly"""
    jac = jacobian_matrix(params, index).toarray()
    diag = np.concatenate(
        (
            np.repeat(index.user_counts, params.f),
            np.repeat(index.item_counts, params.f),
        )
    )
    return jac.T @ jac + lam * np.diag(diag) + gamma * np.eye(params.size)


def low_rank_split(rng, n_users, n_items, rank, scale=1.0):
    """Fully observed R = A B^T used as train and validation at once"""
    a = rng.uniform(0.5, 1.5, (n_users, rank)) * scale
    b = rng.uniform(0.5, 1.5, (n_items, rank)) * scale
    ratings = a @ b.T
    users, items = np.nonzero(np.ones_like(ratings, dtype=bool))
    index = InteractionIndex(users, items, ratings[users, items], n_users, n_items)
    empty = index.subset(np.zeros(index.n_observed, dtype=bool))
    return DatasetSplit(index, index, empty, seed=0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def instance_factory():
    return make_instance


@pytest.fixture
def dense_oracle():
    return dense_damped


@pytest.fixture
def low_rank():
    return low_rank_split


@pytest.fixture
def small_instances(rng):
    """50 random instances with |U|, |I| <= 5 and f <= 3"""
    instances = []
    for _ in range(50):
        instances.append(
            make_instance(
                rng,
                int(rng.integers(1, 6)),
                int(rng.integers(1, 6)),
                int(rng.integers(1, 4)),
            )
        )
    return instances


def one_pair(y_u, y_i, rating=0.0):
    """f=1, one user, one item, one observed entry"""
    index = InteractionIndex([0], [0], [rating], 1, 1)
    return ParamVector(1, 1, 1, [y_u, y_i]), index


@pytest.fixture
def pair():
    return one_pair
