#!/usr/bin/env python
# -*- coding: utf-8 -*-
import io
import logging
import math
from collections import namedtuple

from . import helpers
from .errors import BadRatingError, EmptyInputError, MalformedLineError

logger = logging.getLogger(__name__)

COMMENT_CHARS = ["#", "%"]
FORMATS = {
    "auto": None,
    "::": "::",
    "tab": "\t",
    "\t": "\t",
    "\\t": "\t",
    "comma": ",",
    ",": ",",
}
# Checked in this order by detect_separator
SEPARATORS = ("::", "\t", ",")

RatingTriple = namedtuple("RatingTriple", "user_id, item_id, rating")


def resolve_format(fmt):
    """Map a format name to a separator (None means auto-detect)"""
    try:
        return FORMATS[fmt if fmt is not None else "auto"]
    except KeyError:
        raise ValueError(
            "unknown rating format {!r}, expected auto, '::', tab or comma".format(fmt)
        )


def detect_separator(line):
    """Guess the field separator of a rating line"""
    for sep in SEPARATORS:
        if sep in line:
            return sep
    return None


def _decode(data):
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as error:
        lineno = data.count(b"\n", 0, error.start) + 1
        raise MalformedLineError(lineno, "not valid UTF-8 text")


def _parse_id(field, lineno, line, what):
    try:
        value = int(field)
    except ValueError:
        raise MalformedLineError(
            lineno, "{:s} id {!r} is not an integer".format(what, field), line
        )
    if value < 0:
        raise MalformedLineError(
            lineno, "{:s} id {:d} is negative".format(what, value), line
        )
    return value


def _parse_rating(field, lineno, line):
    try:
        value = float(field)
    except ValueError:
        raise BadRatingError(lineno, field, line)
    if not math.isfinite(value):
        raise BadRatingError(lineno, field, line)
    return value


def parse_ratings(source, fmt="auto", header=False, verbose=False):
    """Parse separator-delimited ratings

    Parameters:
    :param source: bytes, or a binary stream
    :param fmt: 'auto', '::', 'tab' or 'comma'
    :param header: skip the first data line
    :param verbose: draw a progress bar on stderr
    :returns: list of RatingTriple in line order, raw ids preserved
    """
    data = source if isinstance(source, (bytes, bytearray)) else source.read()
    sep = resolve_format(fmt)
    text = _decode(bytes(data))

    lines = text.splitlines()
    if verbose:
        lines = helpers.progressbar(lines, prefix="Reading", sufix="Lines")

    triples = []
    header_pending = header
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith(tuple(COMMENT_CHARS)):
            continue
        if header_pending:
            header_pending = False
            continue
        if sep is None:
            sep = detect_separator(line)
            if sep is None:
                raise MalformedLineError(lineno, "no known separator", line)
            logger.debug("detected separator %r on line %d", sep, lineno)
        fields = line.split(sep)
        if len(fields) < 3:
            raise MalformedLineError(
                lineno, "expected at least 3 fields, got {:d}".format(len(fields)), line
            )
        # timestamp and anything after it are ignored
        triples.append(
            RatingTriple(
                _parse_id(fields[0].strip(), lineno, line, "user"),
                _parse_id(fields[1].strip(), lineno, line, "item"),
                _parse_rating(fields[2].strip(), lineno, line),
            )
        )

    if not triples:
        raise EmptyInputError()
    return triples


class Reader(object):

    """Simple rating file reader

    Parameters:
    :param filename: filename of the ratings to read
    :param fmt: 'auto', '::', 'tab' or 'comma'
    :param header: the first data line holds column names
    :param verbose: draw a progress bar while parsing
    """

    def __init__(self, filename=None, fmt="auto", header=False, verbose=False):
        self._filename = filename
        self._fmt = fmt
        self._header = header
        self._verbose = verbose

    def _open(self, filename):
        """Open the rating file

        Parameters:
        :param filename: filename of the ratings to read
        """
        filename = filename if filename else self._filename
        error = ("*%s* does not exist, try again with " "another file") % (filename)
        try:
            file = io.open(filename, "rb")
        except IOError:
            raise IOError(error)
        return file

    def read(self, filename=None):
        """Read and parse the rating file

        Parameters:
        :param filename: filename of the ratings to read
        """
        with self._open(filename) as ratingsfile:
            triples = parse_ratings(
                ratingsfile, self._fmt, header=self._header, verbose=self._verbose
            )
        logger.info(
            "read %d ratings from %s", len(triples), filename or self._filename
        )
        return triples

    def __repr__(self):
        return "<class '{:s}'>".format(self.__class__.__name__)
