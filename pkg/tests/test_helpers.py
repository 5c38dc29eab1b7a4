# -*- coding: utf-8 -*-
import io
import logging

import pytest

from sslf.errors import ShapeMismatchError
from sslf.helpers import as_float_vector, format_elapsed, progressbar, round_format_str, timeit


@pytest.mark.parametrize(
    "number, decimals, expected",
    [(0.98954, 5, "0.98954"), (0.854871234, 5, "0.85487"), (2.0, 5, "2"),
     (1e-9, 5, "0"), (-1.25, 1, "-1.2"), (float("inf"), 5, "inf")],
)
def test_round_format_str(number, decimals, expected):
    assert round_format_str(number, decimals) == expected


def test_format_elapsed():
    assert format_elapsed(63.25) == "1 minutes 3 seconds 250 miliseconds"
    assert format_elapsed(0.004) == "4 miliseconds"


def test_progressbar_yields_everything():
    stream = io.StringIO()
    items = list(progressbar(list(range(7)), prefix="Epochs", sufix="", stream=stream))
    assert items == list(range(7))
    assert "7/7" in stream.getvalue()
    assert stream.getvalue().endswith("\n")


def test_timeit_logs(caplog):
    @timeit
    def work(x):
        return x * 2

    with caplog.at_level(logging.INFO, logger="sslf.helpers"):
        assert work(4) == 8
    assert "work took" in caplog.text


def test_as_float_vector():
    assert as_float_vector([1, 2], 2).dtype.kind == "f"
    with pytest.raises(ShapeMismatchError):
        as_float_vector([[1.0, 2.0]], 2)
