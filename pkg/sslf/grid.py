#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Simple hyperparameter grids
"""
import dataclasses
import itertools
import logging
import math
from collections import namedtuple

from .helpers import timeit
from .trainer import train_sslf

logger = logging.getLogger(__name__)

GridResult = namedtuple("GridResult", "values, params, report")


# Interpolate funcs
def linear(t, start, end):
    return t * (end - start) + start


def geometric(t, start, end):
    """Log-linear interpolation, start and end must be positive"""
    return math.exp(linear(t, math.log(start), math.log(end)))


def interpolate_range(start, end, steps, func=linear):
    """`steps` values from start to end, both included"""
    if steps == 1:
        yield start
        return
    nsteps = steps - 1
    for i in range(steps):
        if i == nsteps:
            # no rounding drift on the last point
            yield end
        else:
            yield func(i / nsteps, start, end)


def parse_grid(text):
    """'a:b:n' (n geometric points) or 'a,b,c' (explicit values)"""
    text = text.strip()
    if ":" in text:
        try:
            start, end, steps = text.split(":")
            start, end, steps = float(start), float(end), int(steps)
        except ValueError:
            raise ValueError("grid {!r} is not 'start:end:steps'".format(text))
        if steps < 1:
            raise ValueError("grid {!r} needs at least one step".format(text))
        func = geometric if start > 0 and end > 0 else linear
        return list(interpolate_range(start, end, steps, func))
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValueError("grid {!r} is not a comma separated list".format(text))


@timeit
def grid_search(split, hp, axes, callback=None):
    """Train SSLF for every combination of `axes` and rank by validation RMSE

    Parameters:
    :param split: DatasetSplit
    :param hp: base Hyperparams
    :param axes: mapping of Hyperparams field name -> candidate values
    :param callback: called with each GridResult as it finishes
    :returns: list of GridResult, best first
    """
    names = list(axes)
    unknown = [name for name in names if name not in hp.as_dict()]
    if unknown:
        raise ValueError("unknown hyperparameters: {:s}".format(", ".join(unknown)))
    results = []
    for values in itertools.product(*(axes[name] for name in names)):
        point = dict(zip(names, values))
        candidate = dataclasses.replace(hp, **point).validate()
        logger.info("grid point %r", point)
        params, report = train_sslf(split, candidate)
        result = GridResult(point, params, report)
        results.append(result)
        if callback is not None:
            callback(result)
    results.sort(key=lambda result: result.report.best_validation_rmse)
    return results
