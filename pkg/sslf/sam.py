#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Sharpness-aware perturbation of the parameter vector"""
from collections import namedtuple

import numpy as np

from .helpers import as_float_vector

NORM_FLOOR = 1e-12
DEFAULT_RHO_GRID = (1e-4, 1e-3, 1e-2, 1e-1)

Perturbation = namedtuple("Perturbation", "epsilon, rho, grad_norm")


def sam_perturbation(g, rho, norm_floor=NORM_FLOOR):
    """epsilon* = rho * g / |g|_2, or zero when rho == 0 or |g| <= norm_floor"""
    if rho < 0:
        raise ValueError("rho must be >= 0, got {!r}".format(rho))
    g = np.asarray(g, dtype=np.float64)
    grad_norm = float(np.linalg.norm(g))
    if rho == 0 or grad_norm <= norm_floor:
        return Perturbation(np.zeros_like(g), float(rho), grad_norm)
    return Perturbation(g * (rho / grad_norm), float(rho), grad_norm)


def is_null(pert):
    """True when the perturbation leaves the parameters where they are"""
    return not np.any(pert.epsilon)


def perturbed_point(params, pert):
    """params + epsilon, as a new ParamVector"""
    epsilon = as_float_vector(pert.epsilon, params.size, "epsilon")
    return params.with_values(params.values + epsilon)
