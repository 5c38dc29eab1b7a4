#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Latent factor model: stacked parameters, predictions, objective, gradient

The parameter vector stacks the user block first, then the item block::

    user slot (u, d) -> u * f + d
    item slot (i, d) -> n_users * f + i * f + d

The objective sums the L2 term once per observed entry, so a user with
|K_u| ratings carries a regularization weight of lambda * |K_u|.
"""
import dataclasses
import io
import logging
import math
from operator import attrgetter
from typing import Optional

import numpy as np

from .errors import CheckpointError, ConfigError, ShapeMismatchError
from .helpers import as_float_vector

logger = logging.getLogger(__name__)

SAM_MODES = ("gradient-only", "gradient-and-curvature")
CHECKPOINT_MAGIC = "SSLF-CHECKPOINT"
CHECKPOINT_VERSION = 1


@dataclasses.dataclass(frozen=True)
class Hyperparams(object):

    """SSLF training configuration

    `cg_max_iters=None` means min(p, 250).
    """

    f: int = 20
    lam: float = 0.02
    gamma: float = 1.0
    rho: float = 1e-3
    cg_max_iters: Optional[int] = None
    cg_rel_tol: float = 1e-4
    cg_abs_tol: float = 1e-12
    max_epochs: int = 500
    patience: int = 10
    init_low: float = 0.0
    init_high: float = 0.004
    seed: int = 42
    sam_mode: str = "gradient-and-curvature"
    adapt_gamma: bool = True
    warm_start: bool = False
    workers: int = 1

    def validate(self):
        """Raise ConfigError on the first value out of range"""
        checks = (
            (self.f >= 1, "f must be >= 1"),
            (self.lam >= 0 and math.isfinite(self.lam), "lambda must be >= 0"),
            (self.gamma > 0 and math.isfinite(self.gamma), "gamma must be > 0"),
            (self.rho >= 0 and math.isfinite(self.rho), "rho must be >= 0"),
            (
                self.cg_max_iters is None or self.cg_max_iters >= 1,
                "cg_max_iters must be >= 1",
            ),
            (self.cg_rel_tol > 0, "cg_rel_tol must be > 0"),
            (self.cg_abs_tol >= 0, "cg_abs_tol must be >= 0"),
            (self.max_epochs >= 1, "max_epochs must be >= 1"),
            (self.patience >= 1, "patience must be >= 1"),
            (self.init_low <= self.init_high, "init_low must be <= init_high"),
            (self.sam_mode in SAM_MODES, "sam_mode must be one of " + ", ".join(SAM_MODES)),
            (self.workers >= 1, "workers must be >= 1"),
        )
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)
        return self

    def as_dict(self):
        return dataclasses.asdict(self)


class ParamVector(object):

    """Stacked latent factors y = vec(Y_U, Y_I)

    Parameters:
    :param n_users: |U|
    :param n_items: |I|
    :param f: latent dimension
    :param values: flat array of length (n_users + n_items) * f, copied
    """

    def __init__(self, n_users, n_items, f, values=None):
        self._n_users = int(n_users)
        self._n_items = int(n_items)
        self._f = int(f)
        if values is None:
            self._values = np.zeros(self.size)
        else:
            self._values = as_float_vector(values, self.size, "values").copy()

    n_users = property(attrgetter("_n_users"))
    n_items = property(attrgetter("_n_items"))
    f = property(attrgetter("_f"))
    values = property(attrgetter("_values"))

    @property
    def size(self):
        """p"""
        return (self._n_users + self._n_items) * self._f

    @property
    def user_factors(self):
        """Y_U as an (n_users, f) view"""
        return self._values[: self._n_users * self._f].reshape(self._n_users, self._f)

    @property
    def item_factors(self):
        """Y_I as an (n_items, f) view"""
        return self._values[self._n_users * self._f :].reshape(self._n_items, self._f)

    def user_slot(self, u, d):
        return u * self._f + d

    def item_slot(self, i, d):
        return self._n_users * self._f + i * self._f + d

    def split_blocks(self, vector):
        """View a p-vector of this space as (user block, item block) matrices"""
        vector = as_float_vector(vector, self.size)
        cut = self._n_users * self._f
        return (
            vector[:cut].reshape(self._n_users, self._f),
            vector[cut:].reshape(self._n_items, self._f),
        )

    def with_values(self, values):
        """New ParamVector in the same space"""
        return ParamVector(self._n_users, self._n_items, self._f, values)

    def copy(self):
        return self.with_values(self._values)

    def check_index(self, index):
        if index.n_users != self._n_users or index.n_items != self._n_items:
            raise ShapeMismatchError(
                "index is {:d}x{:d}, parameters are {:d}x{:d}".format(
                    index.n_users, index.n_items, self._n_users, self._n_items
                )
            )

    def __repr__(self):
        return "<ParamVector users={:d} items={:d} f={:d}>".format(
            self._n_users, self._n_items, self._f
        )


def init_params(n_users, n_items, hp):
    """Draw every factor i.i.d. from U[init_low, init_high)"""
    if n_users <= 0 or n_items <= 0:
        raise ValueError("n_users and n_items must be positive")
    rng = np.random.default_rng(hp.seed)
    size = (n_users + n_items) * hp.f
    return ParamVector(n_users, n_items, hp.f, rng.uniform(hp.init_low, hp.init_high, size))


def predict(params, u, i):
    """y_u . y_i"""
    if not 0 <= u < params.n_users:
        raise IndexError("user {:d} out of range".format(u))
    if not 0 <= i < params.n_items:
        raise IndexError("item {:d} out of range".format(i))
    return float(np.dot(params.user_factors[u], params.item_factors[i]))


def predict_observed(params, index):
    """Predictions for every observed entry, canonical order"""
    params.check_index(index)
    return np.einsum(
        "kd,kd->k",
        params.user_factors[index.users],
        params.item_factors[index.items],
    )


def residuals(params, index):
    """r_ui - y_u . y_i over K"""
    return index.ratings - predict_observed(params, index)


def regularization(params, index, lam):
    """(lambda / 2) * sum over K of |y_u|^2 + |y_i|^2"""
    if not lam:
        return 0.0
    user_sq = np.einsum("ud,ud->u", params.user_factors, params.user_factors)
    item_sq = np.einsum("id,id->i", params.item_factors, params.item_factors)
    return 0.5 * lam * float(
        np.dot(index.user_counts, user_sq) + np.dot(index.item_counts, item_sq)
    )


def objective(params, index, lam):
    """E = 1/2 sum (r_ui - y_u.y_i)^2 + lambda/2 sum (|y_u|^2 + |y_i|^2), over K"""
    error = residuals(params, index)
    return 0.5 * float(np.dot(error, error)) + regularization(params, index, lam)


def gradient(params, index, lam):
    """Exact gradient of `objective`, laid out like the parameter vector"""
    error = residuals(params, index)
    scatter = index.as_matrix(error)
    users, items = params.user_factors, params.item_factors
    grad_users = lam * index.user_counts[:, None] * users - scatter @ items
    grad_items = lam * index.item_counts[:, None] * items - scatter.T @ users
    return np.concatenate((grad_users.ravel(), grad_items.ravel()))


def save_checkpoint(params, filename):
    """Write parameters in the versioned binary checkpoint layout (see README)"""
    header = "{:s} {:d}\n{:d} {:d} {:d}\n".format(
        CHECKPOINT_MAGIC, CHECKPOINT_VERSION, params.n_users, params.n_items, params.f
    )
    with io.open(filename, "wb") as checkpoint:
        checkpoint.write(header.encode("ascii"))
        checkpoint.write(params.values.astype("<f8").tobytes())


def load_checkpoint(filename):
    """Read a checkpoint written by save_checkpoint"""
    with io.open(filename, "rb") as checkpoint:
        magic = checkpoint.readline().decode("ascii", "replace").split()
        shape = checkpoint.readline().decode("ascii", "replace").split()
        payload = checkpoint.read()
    if len(magic) != 2 or magic[0] != CHECKPOINT_MAGIC:
        raise CheckpointError("{:s} is not an sslf checkpoint".format(filename))
    if magic[1] != str(CHECKPOINT_VERSION):
        raise CheckpointError(
            "unsupported checkpoint version {:s}, expected {:d}".format(
                magic[1], CHECKPOINT_VERSION
            )
        )
    try:
        n_users, n_items, f = (int(v) for v in shape)
    except ValueError:
        raise CheckpointError("bad shape line in {:s}".format(filename))
    values = np.frombuffer(payload, dtype="<f8")
    if values.shape[0] != (n_users + n_items) * f:
        raise CheckpointError(
            "{:s} holds {:d} values, expected {:d}".format(
                filename, values.shape[0], (n_users + n_items) * f
            )
        )
    return ParamVector(n_users, n_items, f, values.astype(np.float64))
