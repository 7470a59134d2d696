#!/usr/bin/env python3

from fractions import Fraction

import numpy as np
import pytest

import ekrlab
from ekrlab.errors import GroupTooLarge, InadmissibleParameters
from ekrlab.suzuki import (SzCase, borel_subsets, sz_borel_group, sz_character_checks,
                           sz_class_sums, sz_classify, sz_family_sizes)


def test_parameters():
    params = ekrlab.SzParameters.from_q(8)
    assert (params.e, params.q, params.r) == (3, 8, 4)
    assert params.group_order == 29120
    assert params.torus_orders == (7, 13, 5)
    assert params.class_count == 11
    assert ekrlab.SzParameters.from_group_order(29120) == params
    assert ekrlab.SzParameters(5).group_order == 32537600
    with pytest.raises(InadmissibleParameters):
        ekrlab.SzParameters.from_q(16)
    with pytest.raises(InadmissibleParameters):
        ekrlab.SzParameters.from_q(12)
    with pytest.raises(InadmissibleParameters):
        ekrlab.SzParameters.from_group_order(100)


def test_enumerated_group(sz8_group):
    assert ekrlab.verify_sz_group(sz8_group).q == 8
    assert sz8_group.degree == 65
    tags = sz_classify(sz8_group)
    assert sorted(tags) == sorted(['1', 'rho2', 'rho', 'rho_inv'] + ['A0'] * 3 + ['A1'] * 3
                                  + ['A2'])
    assert sz_family_sizes(sz8_group) == {
        '1': 1, 'rho2': 455, 'rho': 1820, 'rho_inv': 1820,
        'A0': 12480, 'A1': 6720, 'A2': 5824,
    }


def test_ovoid_action(sz8_group):
    action = ekrlab.natural_action(sz8_group)
    assert action.omega_size == 65
    assert action.stabilizer_order == 448
    prof = ekrlab.profile(action, verify=False)
    # Only the odd tori A1 and A2 avoid every point stabilizer
    assert prof.derangement_count == 6720 + 5824


def test_character_table():
    report = sz_character_checks(8)
    assert report.ok
    assert report.degree_square_sum == 29120
    assert report.character_count == report.class_count == 11
    assert sz_character_checks(32).ok


@pytest.mark.parametrize(
    "case, bound",
    (
        pytest.param(SzCase.D_2Q_1, Fraction(224)),
        pytest.param(SzCase.Z_Q_1, Fraction(196)),
        pytest.param(SzCase.BOREL_ORDER4_EXPONENT, Fraction(64)),
        pytest.param(SzCase.TORUS_PLUS, Fraction(1040, 7)),
        pytest.param(SzCase.TORUS_MINUS, Fraction(64)),
    ),
)
def test_case_spectra(case, bound):
    spectrum = ekrlab.sz_case_spectrum(case, 8)
    assert spectrum.printed_bound == bound
    assert spectrum.consistent()
    assert spectrum.bound == pytest.approx(float(bound))
    assert spectrum.eigenvalue_by_character['1'] == pytest.approx(spectrum.d)
    assert ekrlab.sz_case_spectrum(case.value, 8).printed_bound == bound


def test_case_parameters():
    with pytest.raises(InadmissibleParameters):
        ekrlab.sz_case_spectrum(SzCase.D_2T0_MID, 8, t=7)
    with pytest.raises(InadmissibleParameters):
        ekrlab.sz_case_spectrum(SzCase.BOREL_T0, 8, t=3)
    with pytest.raises(InadmissibleParameters):
        ekrlab.sz_case_spectrum(SzCase.SUBFIELD_Q1, 8, t=8)
    with pytest.raises(ValueError):
        ekrlab.sz_case_spectrum('no_such_case', 8)
    # borel_t0 with t0 = 1 is the order 4 exponent case
    assert (ekrlab.sz_case_spectrum(SzCase.BOREL_T0, 8, t=1).printed_bound
            == ekrlab.sz_case_spectrum(SzCase.BOREL_ORDER4_EXPONENT, 8).printed_bound)


def test_rho_upper():
    spectrum = ekrlab.sz_case_spectrum(SzCase.D_2Q_1, 8)
    assert spectrum.rho_upper(14) == pytest.approx(224 / np.sqrt(29120 * 14))
    assert spectrum.below_half_sqrt2(14)


def test_class_sums():
    params = ekrlab.SzParameters(3)
    sums = sz_class_sums(params, 0, 7)
    assert sums.size == 0
    sums = sz_class_sums(params, 1, 1)
    assert sums.size == 6720
    assert sums.character_sum(3) == sums.divisible_value


def test_borel_group():
    group = sz_borel_group(3)
    assert group.order == 448
    subsets = borel_subsets(group)
    assert {k: v.size for k, v in subsets.items()} == {'Q': 64, 'ZQ': 8, 'K': 7}
    assert group.is_subgroup(subsets['Q'])
    assert group.is_subgroup(subsets['ZQ'])


def test_group_level_limit():
    with pytest.raises(GroupTooLarge):
        ekrlab.sz_ovoid_generators(7)
