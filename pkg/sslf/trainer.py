#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""SSLF training loop: SAM-perturbed Hessian-free damped Newton steps"""
import dataclasses
import logging
import math
from typing import List, Optional

import numpy as np

from . import cg, curvature, metrics, model, sam
from .errors import NumericalDivergence
from .helpers import timer

logger = logging.getLogger(__name__)

ARMIJO_C = 1e-4
MAX_HALVINGS = 20
GAMMA_MIN = 1e-8
GAMMA_MAX = 1e8

STOP_PATIENCE = "patience"
STOP_MAX_EPOCHS = "max_epochs"
STOP_DIVERGENCE = "divergence"

EPOCH_FIELDS = ("epoch", "E", "val_rmse", "cg_iters", "step_norm", "gamma", "seconds")


@dataclasses.dataclass(frozen=True)
class EpochRecord(object):

    """One outer iteration"""

    epoch: int
    E: float
    val_rmse: float
    cg_iters: int
    step_norm: float
    gamma: float
    seconds: float

    def as_dict(self):
        return dict((name, getattr(self, name)) for name in EPOCH_FIELDS)


@dataclasses.dataclass
class TrainReport(object):

    """Trace and outcome of a training run"""

    model: str
    records: List[EpochRecord] = dataclasses.field(default_factory=list)
    best_epoch: int = 0
    best_validation_rmse: float = math.inf
    stopped_reason: str = STOP_MAX_EPOCHS
    seconds: float = 0.0
    hyperparams: dict = dataclasses.field(default_factory=dict)
    test_rmse: Optional[float] = None

    @property
    def total_epochs(self):
        return len(self.records)

    def as_dict(self):
        return {
            "model": self.model,
            "best_epoch": self.best_epoch,
            "best_validation_rmse": self.best_validation_rmse,
            "stopped_reason": self.stopped_reason,
            "seconds": self.seconds,
            "total_epochs": self.total_epochs,
            "test_rmse": self.test_rmse,
            "hyperparams": dict(self.hyperparams),
        }


class EarlyStopping(object):

    """Keeps the best validation RMSE and the parameters that reached it

    Any strict decrease counts as an improvement.

    Parameters:
    :param patience: non-improving epochs tolerated before stopping
    """

    def __init__(self, patience, params):
        self.patience = patience
        self.best_rmse = math.inf
        self.best_epoch = 0
        self.best_params = params.copy()
        self.stale = 0

    def update(self, epoch, rmse, params):
        """Record an epoch, return True when patience is exhausted"""
        if rmse < self.best_rmse:
            self.best_rmse = rmse
            self.best_epoch = epoch
            self.best_params = params.copy()
            self.stale = 0
        else:
            self.stale += 1
        return self.stale >= self.patience

    def finish(self, report):
        report.best_epoch = self.best_epoch
        report.best_validation_rmse = self.best_rmse
        return self.best_params


def monitor_set(split):
    """Validation partition, or the training one when validation is empty"""
    if split.validation.n_observed:
        return split.validation
    logger.warning("validation partition is empty, early stopping on training RMSE")
    return split.train


def step_control(E_before, E_after_full_step, delta, g, evaluate=None,
                 c=ARMIJO_C, max_halvings=MAX_HALVINGS):
    """Backtracking step length on E along delta

    eta starts at 1 and halves while
    E(y + eta delta) > E(y) + c * eta * <g, delta>. The slope is capped at 0
    so an accepted step never increases E.

    Parameters:
    :param E_before: E(y)
    :param E_after_full_step: E(y + delta)
    :param delta: search direction
    :param g: gradient of E at y
    :param evaluate: eta -> E(y + eta delta), needed only to backtrack
    :returns: accepted eta, 0.0 when every tried step fails
    """
    slope = min(float(np.dot(g, delta)), 0.0)
    eta = 1.0
    value = E_after_full_step
    for halving in range(max_halvings + 1):
        if math.isfinite(value) and value <= E_before + c * eta * slope:
            return eta
        if halving == max_halvings or evaluate is None:
            break
        eta *= 0.5
        value = evaluate(eta)
    return 0.0


def adapt_damping(gamma, reduction_ratio, low=0.25, high=0.75, factor=1.5,
                  gamma_min=GAMMA_MIN, gamma_max=GAMMA_MAX):
    """Levenberg-Marquardt style update of gamma from the reduction ratio"""
    if reduction_ratio > high:
        gamma = gamma / factor
    elif reduction_ratio < low:
        gamma = gamma * factor
    return min(max(gamma, gamma_min), gamma_max)


def reduction_ratio(E_before, E_after, eta, g, delta, curvature_delta):
    """Actual over predicted decrease of the quadratic model

    The model is m(eta delta) = eta <g, delta> + eta^2 / 2 <delta, B delta>
    with B the undamped curvature (B delta = `curvature_delta`).
    """
    predicted = -(
        eta * float(np.dot(g, delta))
        + 0.5 * eta * eta * float(np.dot(delta, curvature_delta))
    )
    if predicted <= 0.0:
        return 0.0
    return (E_before - E_after) / predicted


def train_sslf(split, hp, callback=None):
    """Train the sharpness-aware second-order latent factor model

    Parameters:
    :param split: DatasetSplit
    :param hp: Hyperparams
    :param callback: called with each EpochRecord as it is produced
    :returns: (ParamVector from the best validation epoch, TrainReport)
    """
    hp.validate()
    train = split.train
    if not train.n_observed:
        raise ValueError("the training partition is empty")
    monitor = monitor_set(split)

    y = model.init_params(train.n_users, train.n_items, hp)
    cg_cfg = cg.CgConfig.for_size(
        y.size, hp.cg_max_iters, hp.cg_rel_tol, hp.cg_abs_tol
    ).validate()
    gamma = hp.gamma
    report = TrainReport("sslf", hyperparams=hp.as_dict())
    stopper = EarlyStopping(hp.patience, y)
    previous_delta = None
    E = model.objective(y, train, hp.lam)
    started = timer()

    logger.info(
        "sslf: %d users, %d items, %d training entries, p=%d",
        train.n_users, train.n_items, train.n_observed, y.size,
    )
    for epoch in range(1, hp.max_epochs + 1):
        epoch_started = timer()
        try:
            if not math.isfinite(E):
                raise NumericalDivergence(epoch, "non-finite objective")
            g = model.gradient(y, train, hp.lam)
            pert = sam.sam_perturbation(g, hp.rho)
            if sam.is_null(pert):
                y_hat, g_hat = y, g
            else:
                y_hat = sam.perturbed_point(y, pert)
                g_hat = model.gradient(y_hat, train, hp.lam)
            at = y_hat if hp.sam_mode == "gradient-and-curvature" else y
            op = curvature.HvpOperator(at, train, hp.lam, gamma, workers=hp.workers)
            x0 = previous_delta if hp.warm_start else None
            solved = cg.solve_newton_step(op, g_hat, cg_cfg, x0=x0)
            delta = solved.delta

            def evaluate(eta):
                return model.objective(y.with_values(y.values + eta * delta), train, hp.lam)

            E_full = evaluate(1.0)
            eta = step_control(E, E_full, delta, g, evaluate)
            gamma_used = gamma
            if eta > 0.0:
                y = y.with_values(y.values + eta * delta)
                E_new = E_full if eta == 1.0 else model.objective(y, train, hp.lam)
                if hp.adapt_gamma:
                    ratio = reduction_ratio(
                        E, E_new, eta, g, delta, op.apply(delta) - gamma * delta
                    )
                    gamma = adapt_damping(gamma, ratio)
                E = E_new
                step_norm = eta * float(np.linalg.norm(delta))
            else:
                logger.debug("epoch %d: step rejected, doubling gamma", epoch)
                gamma = min(2.0 * gamma, GAMMA_MAX)
                step_norm = 0.0
            previous_delta = delta
            val_rmse = metrics.rmse(y, monitor).rmse
            if not math.isfinite(val_rmse):
                raise NumericalDivergence(epoch, "non-finite validation RMSE")
        except NumericalDivergence as error:
            logger.error("sslf diverged: %s", error)
            report.stopped_reason = STOP_DIVERGENCE
            break

        record = EpochRecord(
            epoch, E, val_rmse, solved.iters, step_norm, gamma_used,
            timer() - epoch_started,
        )
        report.records.append(record)
        logger.info(
            "epoch %d: E=%.6g val_rmse=%.6f cg_iters=%d eta=%g gamma=%g",
            epoch, E, val_rmse, solved.iters, eta, gamma_used,
        )
        if callback is not None:
            callback(record)
        if stopper.update(epoch, val_rmse, y):
            report.stopped_reason = STOP_PATIENCE
            break
    else:
        report.stopped_reason = STOP_MAX_EPOCHS

    report.seconds = timer() - started
    best = stopper.finish(report)
    logger.info(
        "sslf stopped (%s) after %d epochs, best val_rmse %.6f at epoch %d",
        report.stopped_reason, report.total_epochs,
        report.best_validation_rmse, report.best_epoch,
    )
    return best, report
