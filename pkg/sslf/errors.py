#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Exceptions raised by sslf"""


class SslfError(Exception):

    """Base class of every error raised by the package"""


class EmptyInputError(SslfError, ValueError):

    """The rating source holds no data lines"""

    def __init__(self, message="no data: the rating source is empty"):
        super(EmptyInputError, self).__init__(message)


class MalformedLineError(SslfError, ValueError):

    """A rating line could not be parsed

    Parameters:
    :param lineno: 1-based line number in the source
    :param reason: what is wrong with the line
    :param line: the offending text, if available
    """

    def __init__(self, lineno, reason="malformed line", line=None):
        self.lineno = lineno
        self.reason = reason
        self.line = line
        message = "line {:d}: {:s}".format(lineno, reason)
        if line is not None:
            message += " ({!r})".format(line)
        super(MalformedLineError, self).__init__(message)


class BadRatingError(MalformedLineError):

    """The rating field is not a finite number"""

    def __init__(self, lineno, value, line=None):
        self.value = value
        reason = "rating {!r} is not a finite number".format(value)
        super(BadRatingError, self).__init__(lineno, reason, line)


class BadRatiosError(SslfError, ValueError):

    """Split ratios are not positive or do not sum to one"""


class ConfigError(SslfError, ValueError):

    """A configuration value is outside its allowed range"""


class ShapeMismatchError(SslfError, ValueError):

    """A vector does not live in the expected space"""


class EmptyEvalSetError(SslfError, ValueError):

    """An evaluation was requested over zero entries"""


class CheckpointError(SslfError, ValueError):

    """A checkpoint file is unreadable or has the wrong layout"""


class SplitMismatchError(SslfError, ValueError):

    """Runs to compare do not share one data split"""


class NumericalDivergence(SslfError, ArithmeticError):

    """NaN or infinity showed up during an iterative computation

    Parameters:
    :param iteration: iteration index at which it was detected
    :param what: short description of the quantity
    """

    def __init__(self, iteration, what="non-finite value"):
        self.iteration = iteration
        self.what = what
        super(NumericalDivergence, self).__init__(
            "{:s} at iteration {:d}".format(what, iteration)
        )
