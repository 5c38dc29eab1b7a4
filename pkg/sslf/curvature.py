#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Matrix-free curvature operators of the latent factor model

The prediction map f(y)_(u,i) = y_u . y_i has the Jacobian J (|K| x p).
Nothing here forms a p x p matrix: products with J are one gather over the
observed entries and products with J^T are one sparse scatter.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from operator import attrgetter

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import LinearOperator

from .helpers import as_float_vector

logger = logging.getLogger(__name__)


def _directional(params, index, v_users, v_items, users=None, items=None):
    """s_(u,i) = sum_d v_ud y_id + y_ud v_id over the given entries"""
    users = index.users if users is None else users
    items = index.items if items is None else items
    y_users, y_items = params.user_factors, params.item_factors
    return np.einsum("kd,kd->k", v_users[users], y_items[items]) + np.einsum(
        "kd,kd->k", y_users[users], v_items[items]
    )


def _scatter(params, index, s):
    """(J^T s) as (user block, item block)"""
    weights = index.as_matrix(s)
    return weights @ params.item_factors, weights.T @ params.user_factors


def jacobian_vector_product(params, index, v):
    """J v, one value per observed entry in canonical (user-major) order"""
    params.check_index(index)
    v_users, v_items = params.split_blocks(v)
    return _directional(params, index, v_users, v_items)


def jacobian_transpose_vector_product(params, index, s):
    """J^T s, laid out like the parameter vector"""
    params.check_index(index)
    s = as_float_vector(s, index.n_observed, "s")
    user_block, item_block = _scatter(params, index, s)
    return np.concatenate((user_block.ravel(), item_block.ravel()))


def gauss_newton_vector_product(params, index, v):
    """J^T (J v)"""
    return jacobian_transpose_vector_product(
        params, index, jacobian_vector_product(params, index, v)
    )


def jacobian_matrix(params, index):
    """The explicit sparse Jacobian, shape (|K|, p)

    Row k holds y_i at the user slots of entry k and y_u at its item slots.
    """
    params.check_index(index)
    f = params.f
    n_observed = index.n_observed
    dims = np.arange(f)
    rows = np.repeat(np.arange(n_observed), 2 * f)
    user_cols = index.users[:, None] * f + dims
    item_cols = params.n_users * f + index.items[:, None] * f + dims
    cols = np.hstack((user_cols, item_cols)).ravel()
    data = np.hstack(
        (params.item_factors[index.items], params.user_factors[index.users])
    ).ravel()
    return sparse.csr_matrix((data, (rows, cols)), shape=(n_observed, params.size))


class HvpOperator(object):

    """Damped, regularized Gauss-Newton operator at a fixed point

    apply(v) = J^T J v + lambda D v + gamma v, where D repeats |K_u| (resp.
    |K_i|) over the f slots of user u (resp. item i).

    Parameters:
    :param params: evaluation point
    :param index: observed entries
    :param lam: L2 coefficient
    :param gamma: damping, > 0
    :param workers: threads sharing one application (split by user ranges)
    """

    def __init__(self, params, index, lam, gamma, workers=1):
        params.check_index(index)
        if not gamma > 0:
            raise ValueError("gamma must be > 0")
        self._params = params
        self._index = index
        self._lam = float(lam)
        self._gamma = float(gamma)
        self._workers = max(1, int(workers))
        f = params.f
        self._user_diag = np.repeat(self._lam * index.user_counts + self._gamma, f)
        self._item_diag = np.repeat(self._lam * index.item_counts + self._gamma, f)

    params = property(attrgetter("_params"))
    index = property(attrgetter("_index"))
    lam = property(attrgetter("_lam"))
    gamma = property(attrgetter("_gamma"))
    workers = property(attrgetter("_workers"))

    @property
    def size(self):
        return self._params.size

    @property
    def diagonal(self):
        """lambda D + gamma I as a p-vector"""
        return np.concatenate((self._user_diag, self._item_diag))

    def apply(self, v):
        """One fused pass: s per entry, scattered into both blocks"""
        v = as_float_vector(v, self.size, "v")
        v_users, v_items = self._params.split_blocks(v)
        if self._workers > 1 and self._index.n_users >= 2 * self._workers:
            user_block, item_block = self._apply_sharded(v_users, v_items)
        else:
            s = _directional(self._params, self._index, v_users, v_items)
            user_block, item_block = _scatter(self._params, self._index, s)
        cut = self._params.n_users * self._params.f
        out = np.concatenate((user_block.ravel(), item_block.ravel()))
        out[:cut] += self._user_diag * v[:cut]
        out[cut:] += self._item_diag * v[cut:]
        return out

    __call__ = apply

    def _apply_shard(self, start, end, v_users, v_items):
        index = self._index
        lo, hi = index.user_ptr[start], index.user_ptr[end]
        users, items = index.users[lo:hi], index.items[lo:hi]
        s = _directional(self._params, index, v_users, v_items, users, items)
        y_users, y_items = self._params.user_factors, self._params.item_factors
        weights = sparse.csr_matrix(
            (s, items, index.user_ptr[start : end + 1] - lo),
            shape=(end - start, index.n_items),
        )
        return weights @ y_items, weights.T @ y_users[start:end]

    def _apply_sharded(self, v_users, v_items):
        bounds = np.linspace(0, self._index.n_users, self._workers + 1).astype(int)
        with ThreadPoolExecutor(max_workers=self._workers) as pool:
            parts = list(
                pool.map(
                    lambda se: self._apply_shard(se[0], se[1], v_users, v_items),
                    zip(bounds[:-1], bounds[1:]),
                )
            )
        # shards own disjoint users, item contributions are summed once
        user_block = np.vstack([part[0] for part in parts])
        item_block = parts[0][1]
        for part in parts[1:]:
            item_block = item_block + part[1]
        return user_block, item_block

    def as_linear_operator(self):
        """scipy LinearOperator view (symmetric, so rmatvec == matvec)"""
        def matvec(x):
            return self.apply(np.ravel(x))

        return LinearOperator(
            (self.size, self.size), matvec=matvec, rmatvec=matvec, dtype=np.float64
        )

    def __repr__(self):
        return "<HvpOperator p={:d} lambda={:g} gamma={:g}>".format(
            self.size, self._lam, self._gamma
        )


def damped_hvp(op, v):
    """(J^T J + lambda D + gamma I) v at the operator's evaluation point"""
    return op.apply(v)
