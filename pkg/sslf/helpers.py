#!/usr/bin/env python
# -*- coding: utf-8 -*-
import decimal
import functools
import logging
import math
import sys
import time

import numpy as np

from .errors import ShapeMismatchError

logger = logging.getLogger(__name__)


def progressbar(it, prefix="Processing", prog="#", sufix="Lines", size=70, stream=None):
    """Progress Bar

    Redraws only when the percentage changes.
    """
    stream = stream if stream is not None else sys.stderr
    count = len(it)
    if not count:
        return
    lenstrcount = len(str(count))
    size = size - len(prefix) - len(sufix) - (lenstrcount * 2) - 4

    def _show(i):
        x = int(size * i / count)
        percent = i / count
        formatnum = "{:" + str(lenstrcount) + "d}/" "{:" + str(lenstrcount) + "d}"
        progress = "{:s}: [{:s}{:s}] " + formatnum + " {:s} ({:d}%)\r"
        stream.write(
            progress.format(
                prefix,
                prog * x,
                "." * (size - x),
                i,
                count,
                sufix,
                int(round(percent * 100)),
            )
        )
        stream.flush()

    _show(0)
    last = 0
    for i, item in enumerate(it):
        i += 1
        percent = int(100 * i / count)
        if percent != last or i == count:
            _show(i)
            last = percent
        yield item
    stream.write("\n")


def timer():
    """Monotonic timer in seconds"""
    return time.perf_counter()


def format_elapsed(seconds):
    """Human readable duration, e.g. '1 minutes 3 seconds 250 miliseconds'"""
    time_diff = int(round(seconds * 1000, 0))

    seg, ms = divmod(time_diff, 1000)
    m, s = divmod(seg, 60)
    h, m = divmod(m, 60)

    hstr = mstr = sstr = ""

    if h:
        hstr = "{:d} hours ".format(h)
    if m:
        mstr = "{:d} minutes ".format(m)
    if s:
        sstr = "{:d} seconds ".format(s)

    return "{:s}{:s}{:s}{:d} miliseconds".format(hstr, mstr, sstr, ms)


# decorator
def timeit(method):
    """Timer decorator, logs the elapsed time of each call"""

    @functools.wraps(method)
    def timed(*args, **kw):
        ts = timer()
        result = method(*args, **kw)
        te = timer()
        logger.info("%s took %s", method.__name__, format_elapsed(te - ts))
        return result

    return timed


def round_format_str(number, decimals=5):
    """Round a number to `decimals` places and remove trailing zeros"""
    number = float(number)
    if not math.isfinite(number):
        return str(number)
    dec = decimal.Decimal(repr(number)).quantize(
        decimal.Decimal(1).scaleb(-decimals), rounding=decimal.ROUND_HALF_EVEN
    )
    val = "{:f}".format(dec)
    if "." in val:
        val = val.rstrip("0").rstrip(".")
    if val in ("", "-0"):
        val = "0"
    return val


def as_float_vector(values, length, name="vector"):
    """Return `values` as a flat float64 array of the given length

    Parameters:
    :param values: array-like
    :param length: required number of entries
    :param name: used in the error message
    """
    vector = np.asarray(values, dtype=np.float64)
    if vector.ndim != 1 or vector.shape[0] != length:
        raise ShapeMismatchError(
            "{:s} has shape {}, expected ({:d},)".format(name, vector.shape, length)
        )
    return vector
