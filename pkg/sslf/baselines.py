#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""First-order latent factor baselines: per-entry SGD and Adam"""
import dataclasses
import logging
import math

import numpy as np

from . import metrics, model
from .errors import ConfigError
from .helpers import timer
from .trainer import (
    STOP_DIVERGENCE,
    STOP_MAX_EPOCHS,
    STOP_PATIENCE,
    EarlyStopping,
    EpochRecord,
    TrainReport,
    monitor_set,
)

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class FirstOrderConfig(object):

    """SGD / Adam configuration"""

    learning_rate: float = 0.001
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    lam: float = 0.02
    max_epochs: int = 500
    patience: int = 10
    seed: int = 42
    f: int = 20
    init_low: float = 0.0
    init_high: float = 0.004

    def validate(self):
        checks = (
            (self.learning_rate >= 0 and math.isfinite(self.learning_rate),
             "learning_rate must be >= 0"),
            (0 <= self.adam_beta1 < 1, "adam_beta1 must be in [0, 1)"),
            (0 <= self.adam_beta2 < 1, "adam_beta2 must be in [0, 1)"),
            (self.adam_eps > 0, "adam_eps must be > 0"),
            (self.lam >= 0, "lambda must be >= 0"),
            (self.max_epochs >= 1, "max_epochs must be >= 1"),
            (self.patience >= 1, "patience must be >= 1"),
            (self.f >= 1, "f must be >= 1"),
            (self.init_low <= self.init_high, "init_low must be <= init_high"),
        )
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)
        return self

    def as_dict(self):
        return dataclasses.asdict(self)


def sgd_epoch(params, order, index, cfg, state=None):
    """One shuffled pass of per-entry SGD, updating params in place

    Both factors move from their pre-update values.
    """
    users, items = params.user_factors, params.item_factors
    lr, lam = cfg.learning_rate, cfg.lam
    all_users, all_items, ratings = index.users, index.items, index.ratings
    for k in order:
        u, i = all_users[k], all_items[k]
        y_u = users[u].copy()
        y_i = items[i]
        error = ratings[k] - np.dot(y_u, y_i)
        users[u] += lr * (error * y_i - lam * y_u)
        items[i] += lr * (error * y_u - lam * y_i)


class AdamState(object):

    """First and second moments, one row per user and per item"""

    def __init__(self, params):
        self.m_users = np.zeros_like(params.user_factors)
        self.v_users = np.zeros_like(params.user_factors)
        self.m_items = np.zeros_like(params.item_factors)
        self.v_items = np.zeros_like(params.item_factors)
        self.t = 0


def adam_update(factors, m, v, row, grad, t, cfg):
    """Bias-corrected Adam step on one factor row"""
    b1, b2 = cfg.adam_beta1, cfg.adam_beta2
    m[row] = b1 * m[row] + (1.0 - b1) * grad
    v[row] = b2 * v[row] + (1.0 - b2) * grad * grad
    m_hat = m[row] / (1.0 - b1 ** t)
    v_hat = v[row] / (1.0 - b2 ** t)
    factors[row] -= cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.adam_eps)


def adam_epoch(params, order, index, cfg, state):
    """One shuffled pass of per-entry Adam

    Only the rows an entry touches are updated; the step counter is global.
    """
    users, items = params.user_factors, params.item_factors
    lam = cfg.lam
    all_users, all_items, ratings = index.users, index.items, index.ratings
    for k in order:
        u, i = all_users[k], all_items[k]
        y_u = users[u].copy()
        y_i = items[i].copy()
        error = ratings[k] - np.dot(y_u, y_i)
        state.t += 1
        adam_update(users, state.m_users, state.v_users, u, lam * y_u - error * y_i, state.t, cfg)
        adam_update(items, state.m_items, state.v_items, i, lam * y_i - error * y_u, state.t, cfg)


def _train_first_order(name, epoch_fn, split, cfg, state_factory=None, callback=None):
    cfg.validate()
    train = split.train
    if not train.n_observed:
        raise ValueError("the training partition is empty")
    monitor = monitor_set(split)
    rng = np.random.default_rng(cfg.seed)

    params = model.init_params(train.n_users, train.n_items, cfg)
    state = state_factory(params) if state_factory else None
    report = TrainReport(name, hyperparams=cfg.as_dict())
    stopper = EarlyStopping(cfg.patience, params)
    started = timer()

    for epoch in range(1, cfg.max_epochs + 1):
        epoch_started = timer()
        before = params.values.copy()
        order = rng.permutation(train.n_observed)
        with np.errstate(over="ignore", invalid="ignore"):
            epoch_fn(params, order, train, cfg, state)
            E = model.objective(params, train, cfg.lam)
            val_rmse = metrics.rmse(params, monitor).rmse
        if not (math.isfinite(E) and math.isfinite(val_rmse)):
            logger.error("%s diverged at epoch %d", name, epoch)
            report.stopped_reason = STOP_DIVERGENCE
            break
        record = EpochRecord(
            epoch, E, val_rmse, 0,
            float(np.linalg.norm(params.values - before)), 0.0,
            timer() - epoch_started,
        )
        report.records.append(record)
        logger.info("%s epoch %d: E=%.6g val_rmse=%.6f", name, epoch, E, val_rmse)
        if callback is not None:
            callback(record)
        if stopper.update(epoch, val_rmse, params):
            report.stopped_reason = STOP_PATIENCE
            break
    else:
        report.stopped_reason = STOP_MAX_EPOCHS

    report.seconds = timer() - started
    return stopper.finish(report), report


def train_sgd(split, cfg, callback=None):
    """Per-entry SGD on the regularized squared loss

    :returns: (ParamVector from the best validation epoch, TrainReport)
    """
    return _train_first_order("sgd", sgd_epoch, split, cfg, callback=callback)


def train_adam(split, cfg, callback=None):
    """Per-entry Adam on the regularized squared loss"""
    return _train_first_order(
        "adam", adam_epoch, split, cfg, state_factory=AdamState, callback=callback
    )
