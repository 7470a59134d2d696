#!/usr/bin/env python3

import numpy as np
import pytest

import ekrlab
from ekrlab import perm
from ekrlab.algebra import field_create
from ekrlab.errors import GroupTooLarge, InvalidGenerator, NotASubgroup


def test_symmetric_group(s4_natural):
    group = s4_natural.group
    assert group.order == 24
    assert group.class_count == 5
    assert sorted(group.class_sizes) == [1, 3, 6, 6, 8]
    assert group.class_of[0] == 0
    assert np.all(group.elements[0] == np.arange(4))
    assert sorted(group.order_of) == [1] + [2] * 9 + [3] * 8 + [4] * 6


def test_table_operations(s4_natural):
    group = s4_natural.group
    everything = np.arange(group.order)
    assert np.all(group.mul_many(everything, group.inverse_of) == 0)
    for x in (3, 7, 11):
        assert group.power(x, group.order_of[x]) == 0
        assert group.power(x, -1) == group.inv(x)
        conj = group.conjugate(x, everything)
        assert np.all(group.class_of[conj] == group.class_of[x])
        assert group.order // group.centralizer_order(x) == group.class_sizes[group.class_of[x]]
    assert np.array_equal(group.find(group.elements[[5, 0]]), [5, 0])
    assert group.find(np.array([[0, 0, 1, 2]]))[0] == -1
    with pytest.raises(KeyError):
        group.lookup(np.array([[0, 0, 1, 2]]))


def test_closure_and_subgroups(s4_natural):
    group = s4_natural.group
    stab = s4_natural.stabilizer
    assert group.is_subgroup(stab)
    assert np.array_equal(group.closure(group.generating_set(stab)), stab)
    assert group.closure(group.generators, cap=10) is None
    assert not group.is_subgroup([0, 1, 2])
    assert not group.is_subgroup(stab[1:])


def test_natural_and_coset_actions(s4_natural):
    group = s4_natural.group
    assert s4_natural.omega_size == 4
    assert s4_natural.stabilizer_order == 6
    assert s4_natural.transversal[0] == 0

    coset = ekrlab.coset_action(group, s4_natural.stabilizer)
    assert coset.omega_size == 4
    assert np.array_equal(coset.stabilizer, s4_natural.stabilizer)
    for x in range(group.order):
        assert coset.fixed_points(x).size == s4_natural.fixed_points(x).size

    table = s4_natural.point_images()
    assert table.shape == (24, 4)
    assert np.array_equal(table[:, 0], s4_natural.point_of)
    gens = s4_natural.generator_images()
    assert ekrlab.close_group(4, gens).order == 24

    with pytest.raises(NotASubgroup):
        ekrlab.coset_action(group, [0, 1, 2])


def test_invalid_generators():
    with pytest.raises(InvalidGenerator):
        ekrlab.close_group(3, [[0, 0, 1]])
    with pytest.raises(InvalidGenerator):
        ekrlab.close_group(3, [[0, 1, 3]])


def test_order_cap():
    with pytest.raises(GroupTooLarge):
        ekrlab.close_group(6, [[1, 2, 3, 4, 5, 0], [1, 0, 2, 3, 4, 5]], cap=100)
    with pytest.raises(ValueError):
        perm.set_order_caps(0, 10)


def test_matrix_group():
    fld = field_create(3, 1)
    rep = perm.MatrixRepresentation(fld, 2)
    gens = np.array([[1, 1, 0, 1], [0, 1, 2, 0]])
    group = perm.close(rep, gens)
    assert group.order == 24  # SL(2,3)
    inv = rep.invert(group.elements)
    assert np.all(group.lookup(rep.compose(group.elements, inv)) == 0)
    vectors = np.array([[1, 0], [0, 1]])
    assert np.array_equal(rep.act(vectors, gens[0]), [[1, 1], [0, 1]])
    with pytest.raises(InvalidGenerator):
        rep.invert(np.array([[1, 1, 1, 1]]))


def test_affine_group():
    fld = field_create(3, 1)
    linear = perm.close(perm.MatrixRepresentation(fld, 1), np.array([[2]]))
    rep = perm.AffineRepresentation(fld, 1, linear)
    group = perm.close(rep, np.stack([rep.translation([1]), rep.linear_part(np.array([2]))]))
    assert group.order == 6  # AGL(1,3) = S3
    assert group.class_count == 3


def test_hashed_row_keys():
    # 20^20 exceeds the exact mixed-radix range
    degree = 20
    rotation = [(i + 1) % degree for i in range(degree)]
    reflection = [(-i) % degree for i in range(degree)]
    group = ekrlab.close_group(degree, [rotation, reflection])
    assert group.order == 2 * degree
    assert group.class_count == degree // 2 + 3
    assert np.all(group.find(group.elements) == np.arange(group.order))
    assert group.find(np.array([[1, 0] + list(range(2, degree))]))[0] == -1


def test_colliding_row_keys(monkeypatch):
    monkeypatch.setattr(perm, '_row_keys',
                        lambda rows, value_bound: np.asarray(rows, dtype=np.int64)[:, 0])
    with pytest.raises(AssertionError, match='row keys collided'):
        ekrlab.close_group(4, [[1, 2, 3, 0], [1, 0, 2, 3]])
