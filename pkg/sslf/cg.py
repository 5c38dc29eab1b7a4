#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Conjugate gradient for the damped Newton system"""
import dataclasses
import logging
import math
from collections import namedtuple

import numpy as np

from .errors import ConfigError, NumericalDivergence

logger = logging.getLogger(__name__)

DEFAULT_MAX_ITERS = 250

CgResult = namedtuple(
    "CgResult", "delta, iters, final_residual_norm, converged, curvature_breakdown"
)


@dataclasses.dataclass(frozen=True)
class CgConfig(object):

    """Stopping rule: |r_k| <= max(rel_tol * |b|, abs_tol), or max_iters"""

    max_iters: int = DEFAULT_MAX_ITERS
    rel_tol: float = 1e-4
    abs_tol: float = 1e-12

    def validate(self):
        if self.max_iters < 1:
            raise ConfigError("cg max_iters must be >= 1")
        if not self.rel_tol > 0:
            raise ConfigError("cg rel_tol must be > 0")
        if not self.abs_tol >= 0:
            raise ConfigError("cg abs_tol must be >= 0")
        return self

    @classmethod
    def for_size(cls, p, max_iters=None, rel_tol=1e-4, abs_tol=1e-12):
        """Config with max_iters defaulting to min(p, 250)"""
        if max_iters is None:
            max_iters = max(1, min(p, DEFAULT_MAX_ITERS))
        return cls(max_iters=max_iters, rel_tol=rel_tol, abs_tol=abs_tol)


def _norm(x):
    return math.sqrt(float(np.dot(x, x)))


def cg_solve(apply, b, x0=None, cfg=None):
    """Solve A x = b for symmetric positive definite A given only v -> A v

    Parameters:
    :param apply: callable returning A v
    :param b: right-hand side
    :param x0: initial guess (zeros when None)
    :param cfg: CgConfig
    :returns: CgResult
    """
    cfg = (cfg or CgConfig()).validate()
    b = np.asarray(b, dtype=np.float64)
    if not np.all(np.isfinite(b)):
        raise NumericalDivergence(0, "non-finite right-hand side")

    b_norm = _norm(b)
    if b_norm == 0.0:
        return CgResult(np.zeros_like(b), 0, 0.0, True, False)
    threshold = max(cfg.rel_tol * b_norm, cfg.abs_tol)

    if x0 is None or not np.any(x0):
        x = np.zeros_like(b)
        r = b.copy()
    else:
        x = np.array(x0, dtype=np.float64)
        r = b - apply(x)
    d = r.copy()
    rr = float(np.dot(r, r))
    iters = 0

    for k in range(1, cfg.max_iters + 1):
        if math.sqrt(rr) <= threshold:
            break
        ad = apply(d)
        curvature = float(np.dot(d, ad))
        if not math.isfinite(curvature):
            raise NumericalDivergence(k, "non-finite curvature d.Ad")
        if curvature <= 0.0:
            logger.warning("cg: non-positive curvature %g at iteration %d", curvature, k)
            residual = math.sqrt(rr)
            return CgResult(x, iters, residual, residual <= threshold, True)
        alpha = rr / curvature
        x = x + alpha * d
        r = r - alpha * ad
        rr_new = float(np.dot(r, r))
        if not math.isfinite(rr_new):
            raise NumericalDivergence(k, "non-finite residual")
        iters = k
        d = r + (rr_new / rr) * d
        rr = rr_new

    residual = math.sqrt(rr)
    converged = residual <= threshold
    logger.debug("cg: %d iterations, residual %g (target %g)", iters, residual, threshold)
    return CgResult(x, iters, residual, converged, False)


def solve_newton_step(op, g, cfg=None, x0=None):
    """Delta y with (G_L + lambda D + gamma I) Delta y = -g

    Starting from x0 = 0 makes the first conjugate direction -g.
    """
    g = np.asarray(g, dtype=np.float64)
    return cg_solve(op.apply, -g, x0=x0, cfg=cfg)
