#!/usr/bin/env python3

from fractions import Fraction

import numpy as np
import pytest

import ekrlab
from ekrlab.derangement import (UpperBound, factorization_check, radius_bound,
                                semiregular_subgroup_from_element, semiregular_upper_bound)
from ekrlab.errors import IdentityMissing, InconsistentCertificate, NotSemiregular


def test_profile(s4_natural):
    prof = ekrlab.profile(s4_natural)
    group = prof.group
    # 4-cycles and double transpositions
    assert prof.derangement_count == 9
    assert sorted(group.class_sizes[prof.derangement_classes]) == [3, 6]
    assert prof.fixing_mask[0]
    assert np.array_equal(prof.derangements(),
                          np.flatnonzero(prof.is_derangement(np.arange(group.order))))
    for x in prof.derangements():
        assert s4_natural.fixed_points(x).size == 0


def test_intersecting_and_semiregular(s4_natural):
    prof = ekrlab.profile(s4_natural)
    assert ekrlab.is_intersecting(prof, s4_natural.stabilizer)
    assert ekrlab.is_intersecting(prof, [])
    assert not ekrlab.is_intersecting(prof, [0, int(prof.derangements()[0])])

    cyclic = ekrlab.find_semiregular_element(prof, order=4)
    assert cyclic.size == 4
    assert ekrlab.is_semiregular(prof, cyclic)
    assert not ekrlab.is_semiregular(prof, s4_natural.stabilizer)
    assert ekrlab.find_semiregular_element(prof).size == 4
    assert ekrlab.find_semiregular_element(prof, order=3) is None
    with pytest.raises(IdentityMissing):
        ekrlab.is_semiregular(prof, cyclic[1:])

    bound = semiregular_upper_bound(prof, cyclic)
    assert bound.kind is UpperBound.Kind.SEMIREGULAR_CLIQUE
    assert bound.value == 6
    with pytest.raises(NotSemiregular):
        semiregular_upper_bound(prof, s4_natural.stabilizer)
    with pytest.raises(NotSemiregular):
        semiregular_subgroup_from_element(prof, int(s4_natural.stabilizer[1]))


def test_rho_values():
    rho = ekrlab.RhoValue.from_sizes(6, 6, 4)
    assert rho.radicand == Fraction(1, 4)
    assert rho.render() == '1/2'
    assert rho.value == pytest.approx(0.5)
    assert ekrlab.RhoValue(Fraction(2)).render() == 'sqrt(2)'
    assert ekrlab.RhoValue(Fraction(3, 8)).render() == 'sqrt(3/8)'
    assert radius_bound(4, 4) == rho
    assert rho < radius_bound(3, 4)
    assert ekrlab.RhoValue(Fraction(1, 5)) < rho


def test_integral_bound():
    assert UpperBound(UpperBound.Kind.HOFFMAN, 5.9999999).integral() == 6
    assert UpperBound(UpperBound.Kind.HOFFMAN, 5.9).integral() == 5


def test_certificate(s4_natural):
    prof = ekrlab.profile(s4_natural)
    cyclic = ekrlab.find_semiregular_element(prof)

    cert = ekrlab.certify_rho(prof, s4_natural.stabilizer)
    assert cert.upper_kind is UpperBound.Kind.TRIVIAL
    assert cert.upper_bound == 24
    assert not cert.tight

    cert = ekrlab.certify_rho(prof, s4_natural.stabilizer,
                              [semiregular_upper_bound(prof, cyclic)])
    assert cert.tight
    assert cert.lower_size == 6
    assert cert.rho_lower.render() == '1/2'
    assert cert.gap == 0

    with pytest.raises(InconsistentCertificate):
        ekrlab.certify_rho(prof, [0, int(prof.derangements()[0])])
    with pytest.raises(InconsistentCertificate):
        ekrlab.certify_rho(prof, s4_natural.stabilizer,
                           [UpperBound(UpperBound.Kind.HOFFMAN, 4.0)])


def test_factorization(s4_natural):
    group = s4_natural.group
    cyclic = ekrlab.find_semiregular_element(s4_natural)
    assert factorization_check(group, cyclic, s4_natural.stabilizer)
    assert not factorization_check(group, s4_natural.stabilizer, s4_natural.stabilizer)
    assert ekrlab.intersection_density(s4_natural, 6) == 1
