#!/usr/bin/env python3

import logging

import numpy as np

import ekrlab
from ekrlab.perm import PermutationRepresentation

S4_GENERATORS = np.array([[1, 2, 3, 0], [1, 0, 2, 3]])


def test_cache_roundtrip(tmp_path):
    cache = ekrlab.GroupCache(tmp_path / 'cache')
    group1 = ekrlab.close_group(4, S4_GENERATORS, cache=cache)
    files = list((tmp_path / 'cache').glob('*.npz'))
    assert len(files) == 1

    group2 = ekrlab.close_group(4, S4_GENERATORS, cache=cache)
    assert np.array_equal(group1.elements, group2.elements)
    assert np.array_equal(group1.class_of, group2.class_of)


def test_digest_depends_on_generators():
    rep = PermutationRepresentation(4)
    d1 = ekrlab.GroupCache.digest(rep, S4_GENERATORS)
    d2 = ekrlab.GroupCache.digest(rep, S4_GENERATORS[::-1])
    d3 = ekrlab.GroupCache.digest(PermutationRepresentation(5), np.zeros((0, 5)))
    assert len({d1, d2, d3}) == 3


def test_damaged_file_is_ignored(tmp_path, caplog):
    cache = ekrlab.GroupCache(tmp_path)
    rep = PermutationRepresentation(4)
    cache.path(rep, S4_GENERATORS).write_bytes(b'not a zip file')
    with caplog.at_level(logging.WARNING):
        assert cache.load(rep, S4_GENERATORS) is None
    assert 'unreadable' in caplog.text
    assert ekrlab.close_group(4, S4_GENERATORS, cache=cache).order == 24


def test_miss(tmp_path):
    cache = ekrlab.GroupCache(tmp_path / 'never-created')
    assert cache.load(PermutationRepresentation(4), S4_GENERATORS) is None
