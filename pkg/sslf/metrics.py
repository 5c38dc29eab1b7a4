#!/usr/bin/env python
# -*- coding: utf-8 -*-
import math
from collections import namedtuple

import numpy as np

from .errors import EmptyEvalSetError
from .model import predict_observed

EvalResult = namedtuple("EvalResult", "rmse, n_evaluated")


def rmse(params, eval_set, clamp=None):
    """Root mean square error of the raw predictions over `eval_set`

    Parameters:
    :param params: ParamVector
    :param eval_set: InteractionIndex
    :param clamp: optional (low, high) applied to predictions first
    """
    if not eval_set.n_observed:
        raise EmptyEvalSetError("cannot compute RMSE over an empty set")
    predictions = predict_observed(params, eval_set)
    if clamp is not None:
        predictions = np.clip(predictions, clamp[0], clamp[1])
    error = eval_set.ratings - predictions
    return EvalResult(
        math.sqrt(float(np.dot(error, error)) / eval_set.n_observed),
        eval_set.n_observed,
    )


def rating_range(index):
    """(min, max) rating observed in `index`, used for clamping"""
    if not index.n_observed:
        raise EmptyEvalSetError("no ratings to take a range from")
    return float(index.ratings.min()), float(index.ratings.max())
