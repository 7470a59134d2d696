#!/usr/bin/env python3

import numpy as np
import pytest

import ekrlab
from ekrlab.errors import GroupTooLarge, NoSuchSubgroup
from ekrlab.subgroups import conjugacy_key, conjugates, is_dihedral, is_perfect


@pytest.mark.parametrize(
    "order, shape",
    (
        pytest.param(4, 'cyclic'),
        pytest.param(4, 'abelian'),
        pytest.param(6, 'frobenius'),
        pytest.param(8, 'dihedral'),
        pytest.param(8, 'two_group'),
        pytest.param(24, 'any'),
    ),
)
def test_find_subgroup(s4_natural, order, shape):
    group = s4_natural.group
    sub = ekrlab.find_subgroup(group, order, shape)
    assert sub.size == order
    assert group.is_subgroup(sub)
    assert ekrlab.PREDICATES[shape](group, sub)
    # First found is deterministic
    assert np.array_equal(ekrlab.find_subgroup(group, order, shape), sub)


def test_missing_subgroups(s4_natural):
    group = s4_natural.group
    with pytest.raises(NoSuchSubgroup):
        ekrlab.find_subgroup(group, 5)
    with pytest.raises(NoSuchSubgroup):
        ekrlab.find_subgroup(group, 8, 'quaternion')
    with pytest.raises(NoSuchSubgroup):
        ekrlab.find_subgroup(group, 12, 'perfect')
    with pytest.raises(ValueError):
        ekrlab.find_subgroup(group, 4, 'round')


@pytest.mark.parametrize(
    "order, count",
    (
        pytest.param(2, 2),
        pytest.param(3, 1),
        pytest.param(4, 3),
        pytest.param(6, 1),
        pytest.param(8, 1),
        pytest.param(12, 1),
        pytest.param(5, 0),
    ),
)
def test_conjugacy_classes(s4_natural, order, count):
    classes = ekrlab.subgroup_conjugacy_classes(s4_natural.group, order)
    assert len(classes) == count
    keys = {conjugacy_key(s4_natural.group, sub) for sub in classes}
    assert len(keys) == count


def test_conjugates(s4_natural):
    group = s4_natural.group
    conj = conjugates(group, s4_natural.stabilizer)
    assert len(conj) == 4
    assert any(np.array_equal(c, s4_natural.stabilizer) for c in conj)


def test_shapes(psl2_4, s4_natural):
    assert is_perfect(psl2_4.group, np.arange(psl2_4.group.order))
    assert not is_perfect(s4_natural.group, np.arange(24))
    assert is_dihedral(s4_natural.group, s4_natural.stabilizer)  # S3 = D6


def test_class_search_cap(sz8_group):
    with pytest.raises(GroupTooLarge):
        ekrlab.subgroup_conjugacy_classes(sz8_group, 14)
