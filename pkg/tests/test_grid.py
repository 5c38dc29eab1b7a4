# -*- coding: utf-8 -*-
import pytest

from sslf.grid import geometric, grid_search, interpolate_range, linear, parse_grid
from sslf.model import Hyperparams


def test_interpolate_range():
    assert list(interpolate_range(0.0, 1.0, 5, linear)) == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert list(interpolate_range(3.0, 9.0, 1)) == [3.0]


def test_geometric_endpoints_are_exact():
    values = list(interpolate_range(1e-4, 1e-1, 4, geometric))
    assert values[0] == pytest.approx(1e-4)
    assert values[-1] == 1e-1
    assert values == pytest.approx([1e-4, 1e-3, 1e-2, 1e-1])


def test_parse_grid():
    assert parse_grid("0.1, 0.2,0.5") == [0.1, 0.2, 0.5]
    assert parse_grid("1e-4:1e-1:4") == pytest.approx([1e-4, 1e-3, 1e-2, 1e-1])
    assert parse_grid("-1:1:3") == [-1.0, 0.0, 1.0]


@pytest.mark.parametrize("text", ["a,b", "1:2", "1:2:0", "1:x:3"])
def test_parse_grid_errors(text):
    with pytest.raises(ValueError):
        parse_grid(text)


def test_grid_search_ranks_by_validation(rng, low_rank):
    split = low_rank(rng, 5, 5, 2)
    seen = []
    results = grid_search(
        split,
        Hyperparams(f=2, max_epochs=3),
        {"rho": [0.0, 1e-2], "lam": [0.01, 0.1]},
        callback=seen.append,
    )
    assert len(results) == len(seen) == 4
    scores = [result.report.best_validation_rmse for result in results]
    assert scores == sorted(scores)
    assert set((r.values["rho"], r.values["lam"]) for r in results) == {
        (0.0, 0.01), (0.0, 0.1), (1e-2, 0.01), (1e-2, 0.1)
    }
    assert results[0].report.hyperparams["rho"] == results[0].values["rho"]


def test_grid_search_unknown_axis(rng, low_rank):
    with pytest.raises(ValueError):
        grid_search(low_rank(rng, 3, 3, 1), Hyperparams(f=1), {"momentum": [0.9]})
