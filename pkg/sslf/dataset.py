#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Sparse rating data: dual-indexed observed entries and seeded splits"""
import logging
import math
from collections import namedtuple
from operator import attrgetter

import numpy as np
from scipy import sparse

from .errors import BadRatiosError
from .helpers import timeit
from .reader import RatingTriple, Reader, parse_ratings

logger = logging.getLogger(__name__)

DEFAULT_RATIOS = (0.8, 0.1, 0.1)
RATIO_TOLERANCE = 1e-9

IdMaps = namedtuple("IdMaps", "users, items")


class InteractionIndex(object):

    """Observed entries K of a rating matrix, indexed by user and by item

    Entries are stored once, in canonical user-major order (sorted by user,
    then item). The item-major view is a permutation of that order.

    Parameters:
    :param users: user index of every entry
    :param items: item index of every entry
    :param ratings: rating of every entry
    :param n_users: |U|
    :param n_items: |I|
    :param duplicate_count: duplicates collapsed while building, for reporting
    """

    def __init__(self, users, items, ratings, n_users, n_items, duplicate_count=0):
        users = np.asarray(users, dtype=np.int64).ravel()
        items = np.asarray(items, dtype=np.int64).ravel()
        ratings = np.asarray(ratings, dtype=np.float64).ravel()
        if not users.shape == items.shape == ratings.shape:
            raise ValueError("users, items and ratings must have the same length")
        if n_users < 0 or n_items < 0:
            raise ValueError("counts must be non negative")
        if users.size:
            if users.min() < 0 or users.max() >= n_users:
                raise ValueError("user index out of range [0, {:d})".format(n_users))
            if items.min() < 0 or items.max() >= n_items:
                raise ValueError("item index out of range [0, {:d})".format(n_items))
            if not np.all(np.isfinite(ratings)):
                raise ValueError("ratings must be finite")

        order = np.lexsort((items, users))
        users, items, ratings = users[order], items[order], ratings[order]
        same = (users[1:] == users[:-1]) & (items[1:] == items[:-1])
        if np.any(same):
            k = int(np.argmax(same))
            raise ValueError(
                "duplicate entry ({:d}, {:d})".format(int(users[k]), int(items[k]))
            )

        self._n_users = int(n_users)
        self._n_items = int(n_items)
        self._users = users
        self._items = items
        self._ratings = ratings
        self._user_counts = np.bincount(users, minlength=n_users)
        self._item_counts = np.bincount(items, minlength=n_items)
        self._user_ptr = np.concatenate(([0], np.cumsum(self._user_counts)))
        self._item_order = np.lexsort((users, items))
        self._item_ptr = np.concatenate(([0], np.cumsum(self._item_counts)))
        self._duplicate_count = int(duplicate_count)

    n_users = property(attrgetter("_n_users"))
    n_items = property(attrgetter("_n_items"))
    users = property(attrgetter("_users"))
    items = property(attrgetter("_items"))
    ratings = property(attrgetter("_ratings"))
    user_counts = property(attrgetter("_user_counts"))
    item_counts = property(attrgetter("_item_counts"))
    user_ptr = property(attrgetter("_user_ptr"))
    item_ptr = property(attrgetter("_item_ptr"))
    item_order = property(attrgetter("_item_order"))
    duplicate_count = property(attrgetter("_duplicate_count"))

    @property
    def n_observed(self):
        """|K|"""
        return int(self._users.shape[0])

    def __len__(self):
        return self.n_observed

    def user_slice(self, u):
        """(items, ratings) observed for user u, as array views"""
        start, end = self._user_ptr[u], self._user_ptr[u + 1]
        return self._items[start:end], self._ratings[start:end]

    def item_slice(self, i):
        """(users, ratings) observed for item i"""
        positions = self._item_order[self._item_ptr[i] : self._item_ptr[i + 1]]
        return self._users[positions], self._ratings[positions]

    def by_user(self, u):
        """[(i, r_ui), ...] over K_u"""
        if not 0 <= u < self._n_users:
            raise IndexError("user {:d} out of range".format(u))
        items, ratings = self.user_slice(u)
        return [(int(i), float(r)) for i, r in zip(items, ratings)]

    def by_item(self, i):
        """[(u, r_ui), ...] over K_i"""
        if not 0 <= i < self._n_items:
            raise IndexError("item {:d} out of range".format(i))
        users, ratings = self.item_slice(i)
        return [(int(u), float(r)) for u, r in zip(users, ratings)]

    def triples(self):
        """Iterate (u, i, r) in canonical order"""
        for u, i, r in zip(self._users, self._items, self._ratings):
            yield RatingTriple(int(u), int(i), float(r))

    def as_matrix(self, values=None):
        """CSR matrix of shape (|U|, |I|) holding `values` at the observed entries

        `values` follows the canonical order (defaults to the ratings), so the
        CSR data array is `values` itself. Explicit zeros are kept.
        """
        values = self._ratings if values is None else np.asarray(values, np.float64)
        return sparse.csr_matrix(
            (values, self._items, self._user_ptr),
            shape=(self._n_users, self._n_items),
        )

    def subset(self, mask):
        """Index over the entries selected by a boolean mask (canonical order)"""
        mask = np.asarray(mask, dtype=bool)
        return InteractionIndex(
            self._users[mask],
            self._items[mask],
            self._ratings[mask],
            self._n_users,
            self._n_items,
        )

    def as_dict(self):
        return {
            "n_users": self._n_users,
            "n_items": self._n_items,
            "n_observed": self.n_observed,
            "duplicate_count": self._duplicate_count,
        }

    def __repr__(self):
        return "<InteractionIndex users={:d} items={:d} observed={:d}>".format(
            self._n_users, self._n_items, self.n_observed
        )


class DatasetSplit(object):

    """Disjoint train / validation / test partitions of one index"""

    def __init__(self, train, validation, test, seed=None, ratios=None):
        self._train = train
        self._validation = validation
        self._test = test
        self._seed = seed
        self._ratios = tuple(ratios) if ratios is not None else None

    train = property(attrgetter("_train"))
    validation = property(attrgetter("_validation"))
    test = property(attrgetter("_test"))
    seed = property(attrgetter("_seed"))
    ratios = property(attrgetter("_ratios"))

    @property
    def n_users(self):
        return self._train.n_users

    @property
    def n_items(self):
        return self._train.n_items

    def as_dict(self):
        return {
            "seed": self._seed,
            "ratios": self._ratios,
            "train": self._train.n_observed,
            "validation": self._validation.n_observed,
            "test": self._test.n_observed,
        }

    def __repr__(self):
        return "<DatasetSplit train={:d} validation={:d} test={:d}>".format(
            self._train.n_observed,
            self._validation.n_observed,
            self._test.n_observed,
        )


def compact_ids(triples):
    """Remap raw ids to dense 0-based indices and build the dual index

    Ids are numbered in order of first appearance. Repeated (user, item)
    pairs keep the last rating; the number collapsed is logged and stored in
    `InteractionIndex.duplicate_count`.

    :returns: (InteractionIndex, IdMaps) where IdMaps maps raw -> dense ids
    """
    if not triples:
        raise ValueError("compact_ids needs at least one rating")

    user_map = {}
    item_map = {}
    entries = {}
    for raw_user, raw_item, rating in triples:
        u = user_map.setdefault(raw_user, len(user_map))
        i = item_map.setdefault(raw_item, len(item_map))
        entries[(u, i)] = rating

    duplicate_count = len(triples) - len(entries)
    if duplicate_count:
        logger.warning(
            "collapsed %d duplicate (user, item) ratings, kept the last one",
            duplicate_count,
        )

    keys = np.fromiter(
        (k for pair in entries for k in pair), dtype=np.int64, count=2 * len(entries)
    ).reshape(-1, 2)
    ratings = np.fromiter(entries.values(), dtype=np.float64, count=len(entries))
    index = InteractionIndex(
        keys[:, 0],
        keys[:, 1],
        ratings,
        len(user_map),
        len(item_map),
        duplicate_count=duplicate_count,
    )
    return index, IdMaps(user_map, item_map)


def validate_ratios(ratios):
    """Check (train, validation, test) ratios, return them as floats"""
    try:
        ratios = tuple(float(r) for r in ratios)
    except (TypeError, ValueError):
        raise BadRatiosError("ratios must be three numbers, got {!r}".format(ratios))
    if len(ratios) != 3:
        raise BadRatiosError("expected 3 ratios, got {:d}".format(len(ratios)))
    if not all(r > 0 and math.isfinite(r) for r in ratios):
        raise BadRatiosError("ratios must be positive, got {!r}".format(ratios))
    if abs(sum(ratios) - 1.0) > RATIO_TOLERANCE:
        raise BadRatiosError("ratios must sum to 1, got {!r}".format(ratios))
    return ratios


def split(index, ratios=DEFAULT_RATIOS, seed=42):
    """Assign every observed entry to train, validation or test

    One uniform draw per entry, in canonical order, from a generator seeded
    with `seed`. Users or items left without training entries keep their
    initial factors.
    """
    ratios = validate_ratios(ratios)
    train_ratio, val_ratio, _ = ratios
    rng = np.random.default_rng(seed)
    draws = rng.random(index.n_observed)
    in_train = draws < train_ratio
    in_validation = ~in_train & (draws < train_ratio + val_ratio)
    in_test = ~(in_train | in_validation)

    result = DatasetSplit(
        index.subset(in_train),
        index.subset(in_validation),
        index.subset(in_test),
        seed=seed,
        ratios=ratios,
    )
    logger.info("split %d entries: %r", index.n_observed, result)
    return result


@timeit
def load_dataset(filename, fmt="auto", ratios=DEFAULT_RATIOS, seed=42, header=False,
                 verbose=False):
    """read -> compact -> split

    `verbose` draws a progress bar on stderr while the file is parsed.

    :returns: (DatasetSplit, IdMaps)
    """
    triples = Reader(filename, fmt, header=header, verbose=verbose).read()
    index, id_maps = compact_ids(triples)
    return split(index, ratios, seed), id_maps


__all__ = [
    "DEFAULT_RATIOS",
    "DatasetSplit",
    "IdMaps",
    "InteractionIndex",
    "RatingTriple",
    "compact_ids",
    "load_dataset",
    "parse_ratings",
    "split",
    "validate_ratios",
]
