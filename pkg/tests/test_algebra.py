#!/usr/bin/env python3

import numpy as np
import pytest

from ekrlab.algebra import (FiniteField, field_create, frobenius_theta, is_prime,
                            prime_factors)
from ekrlab.errors import CompositeCharacteristic, FieldTooLarge, ThetaUndefined


@pytest.mark.parametrize(
    "p, f, modulus, primitive",
    (
        pytest.param(2, 2, (1, 1, 1), 2),
        pytest.param(2, 3, (1, 1, 0, 1), 2),
        pytest.param(3, 2, (1, 0, 1), 4),
        pytest.param(7, 1, (0, 1), 3),
    ),
)
def test_smallest_modulus(p, f, modulus, primitive):
    fld = field_create(p, f)
    assert fld.modulus == modulus
    assert fld.primitive == primitive


@pytest.mark.parametrize("p, f", ((2, 3), (3, 2), (5, 1), (2, 5), (7, 2)))
def test_field_axioms(p, f):
    fld = field_create(p, f)
    codes = np.arange(fld.order)
    a, b = np.meshgrid(codes, codes)

    assert np.array_equal(fld.add(a, b), fld.add(b, a))
    assert np.array_equal(fld.mul(a, b), fld.mul(b, a))
    assert np.all(fld.add(codes, fld.neg(codes)) == 0)
    nonzero = codes[1:]
    assert np.all(fld.mul(nonzero, fld.inv(nonzero)) == 1)

    c = np.roll(a, 1, axis=0)
    assert np.array_equal(fld.mul(a, fld.add(b, c)), fld.add(fld.mul(a, b), fld.mul(a, c)))
    assert np.array_equal(fld.exp(fld.log(nonzero)), nonzero)
    assert np.unique(fld.exp(np.arange(fld.order - 1))).size == fld.order - 1


def test_power_and_subfield():
    fld = field_create(2, 6)
    x = np.arange(1, fld.order)
    assert np.array_equal(fld.power(x, fld.order - 1), np.ones_like(x))
    assert np.array_equal(fld.power(x, -1), fld.inv(x))
    assert fld.subfield(2).size == 4
    assert fld.subfield(3).size == 8
    with pytest.raises(ValueError):
        fld.subfield(4)


def test_elements():
    fld = field_create(3, 2)
    x = fld.element([0, 1])
    assert x * x == fld.element(2)  # x^2 = -1
    assert (x + 1).order() == 8
    assert (x / x) == fld.one()
    assert x - x == fld.zero()
    with pytest.raises(ZeroDivisionError):
        fld.zero().inverse()


def test_theta_squares():
    fld = field_create(2, 5)
    theta = frobenius_theta(fld)
    codes = np.arange(fld.order)
    assert np.array_equal(theta(theta(codes)), fld.mul(codes, codes))
    with pytest.raises(ThetaUndefined):
        frobenius_theta(field_create(2, 4))


def test_invalid_fields():
    with pytest.raises(CompositeCharacteristic):
        FiniteField(6, 1)
    with pytest.raises(FieldTooLarge):
        FiniteField(2, 21)
    assert field_create(2, 3) is field_create(2, 3)


def test_number_theory():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert prime_factors(360) == [2, 3, 5]
    assert prime_factors(29) == [29]
