#!/usr/bin/env python3

from fractions import Fraction

import numpy as np
import pytest

import ekrlab
from ekrlab import constructions
from ekrlab.derangement import UpperBound
from ekrlab.errors import EvenQ, InadmissibleParameters, InadmissibleQ


def _check_roles(out):
    failed = [name for name, ok in out.verify().items() if not ok]
    if failed:
        raise AssertionError(f'{out.name}: subsets {failed} fail their roles')


def _check_expected(out, computed):
    for name, entry in out.expected.items():
        if name in computed and computed[name] != entry.value:
            raise AssertionError(f'{out.name}: {name} = {computed[name]},'
                                 f' expected {entry.value} ({entry.source})')


def test_psl2_even(psl2_4):
    _check_roles(psl2_4)
    assert psl2_4.group.order == 60
    assert psl2_4.action.omega_size == 10
    assert psl2_4.named_subsets['S'].size == 12
    assert psl2_4.named_subsets['R'].size == 5

    measured = psl2_4.measured()
    assert measured['rho_upper'].radicand == Fraction(2, 5)
    assert measured['below_half_sqrt2']

    cert = psl2_4.certificate()
    assert cert.tight
    assert cert.upper_bound == 12
    assert cert.upper_kind is UpperBound.Kind.SEMIREGULAR_CLIQUE
    assert cert.rho_lower.radicand == Fraction(2, 5)
    _check_expected(psl2_4, {**measured, 'rho': cert.rho_lower,
                             'upper_bound': cert.upper_bound})


@pytest.mark.parametrize("e", (2, 3))
def test_psl2_even_parabolic(e):
    q = 1 << e
    out = constructions.build(f'psl2even:{e}:parabolic')
    _check_roles(out)
    assert out.name == f'psl2even:{e}:parabolic'
    assert out.action.omega_size == q + 1
    assert out.action.stabilizer_order == q * (q - 1)
    assert np.array_equal(out.named_subsets['S'], out.action.stabilizer)
    assert out.named_subsets['R'].size == q + 1

    cert = out.certificate()
    assert cert.tight
    assert cert.upper_bound == q * (q - 1)
    assert cert.rho_lower.radicand == Fraction(1, q + 1)
    _check_expected(out, {**out.measured(), 'rho': cert.rho_lower,
                          'upper_bound': cert.upper_bound})


def test_agl1_sharply_transitive(agl1_9):
    _check_roles(agl1_9)
    assert agl1_9.action.omega_size == 36
    assert agl1_9.action.stabilizer_order == 2
    assert agl1_9.named_subsets['R'].size == 36
    cert = agl1_9.certificate()
    assert cert.tight
    assert cert.upper_bound == 2


@pytest.mark.parametrize("q", (3, 7))
def test_agl1_residue_classes(q):
    # q = 3 (mod 4) uses the squares
    out = constructions.build_agl1_sharply_transitive(q)
    _check_roles(out)
    assert out.named_subsets['R'].size == q * (q - 1) // 2


def test_pgl2():
    out = constructions.build_pgl2_sharply_transitive(5)
    _check_roles(out)
    assert out.group.order == 120
    assert out.action.omega_size == 10
    assert out.action.stabilizer_order == 12
    cert = out.certificate()
    assert cert.tight
    assert cert.upper_bound == 12


def test_affine_tower():
    out = constructions.build_affine_tower(3)
    _check_roles(out)
    assert out.group.order == 72
    assert out.action.omega_size == 12
    assert out.named_subsets['S'].size == 18
    cert = ekrlab.certify_rho(out.profile, out.named_subsets['S'])
    assert cert.rho_lower.radicand == Fraction(3, 4)


def test_product_action(psl2_4):
    out = constructions.build_product_action(psl2_4, 2)
    _check_roles(out)
    assert out.group.order == 7200
    assert out.action.omega_size == 100
    assert out.named_subsets['S'].size == 288
    assert out.named_subsets['R'].size == 25
    cert = out.certificate()
    assert cert.tight
    assert cert.rho_lower.radicand == Fraction(4, 25)
    assert out.expected['rho'].value.radicand == Fraction(4, 25)


def test_suzuki_borel():
    out = constructions.build_suzuki_borel_example(3)
    _check_roles(out)
    assert out.action.omega_size == 112
    assert out.named_subsets['S'].size == 64
    cert = out.certificate()
    assert cert.tight
    assert cert.rho_lower.radicand == Fraction(16, 7)
    assert cert.rho_lower.value > 1


@pytest.mark.slow
def test_psu3():
    out = constructions.build_psu3_example(7)
    _check_roles(out)
    assert out.group.order == 16464
    assert out.named_subsets['ZQ'].size == 7
    assert out.measured()['noncentral_class_size'] == 7 * 48
    cert = out.certificate()
    assert cert.tight
    assert cert.rho_lower.radicand == Fraction(1, 48)


@pytest.mark.parametrize(
    "case, param, omega, radicand",
    (
        pytest.param('parabolic', 1, 24, Fraction(3, 8)),
        pytest.param('parabolic', 3, 8, Fraction(1, 8)),
        pytest.param('dihedral', 1, 21, Fraction(3, 7)),
        pytest.param('dihedral', -1, 28, Fraction(4, 7)),
    ),
)
def test_psl2_odd(case, param, omega, radicand):
    out = constructions.build(f'psl2odd:7,{case},{param}')
    _check_roles(out)
    assert out.action.omega_size == omega
    measured = out.measured()
    assert measured['rho_upper'].radicand == radicand
    assert out.expected['rho_upper'].value.radicand == radicand
    assert measured['below_half_sqrt2'] == out.expected['below_half_sqrt2'].value


def test_table2_row5():
    out = constructions.build_table2(5)
    _check_roles(out)
    assert out.group.order == 324
    assert out.action.omega_size == 18
    assert out.named_subsets['S'].size == 108
    extra = []
    if 'R' not in out.named_subsets:
        graph = ekrlab.DerangementGraph(out.profile)
        extra.append(ekrlab.Solver.max_coclique(graph).as_upper_bound())
    cert = out.certificate(extra)
    assert cert.tight
    assert cert.rho_lower.radicand == Fraction(2)


@pytest.mark.slow
@pytest.mark.parametrize("row", (1, 2))
def test_table2_affine_sl23(row):
    out = constructions.build_table2(row)
    _check_roles(out)
    assert out.named_subsets['S'].size == constructions.TABLE2_ROWS[row].s_order
    assert ekrlab.is_intersecting(out.profile, out.named_subsets['S'])


def test_sz8_dihedral(sz8_group):
    out = constructions.build_sz8_dihedral(sz8_group)
    _check_roles(out)
    assert out.action.omega_size == 2080
    assert out.profile.derangement_count == 16184
    assert out.expected['case'].value == 'D_2q-1'
    weighting = ekrlab.sz_case_weighting(out.profile, out.expected['case'].value)
    bound = ekrlab.Spectra.hoffman_bound(weighting)
    assert bound.value == pytest.approx(224)


def test_parse_spec():
    assert constructions.parse_spec('table2') == ('table2', [1])
    assert constructions.parse_spec('psl2even:2:parabolic') == ('psl2even', [2, 'parabolic'])
    assert constructions.parse_spec('psl2even') == ('psl2even', [2, 'dihedral'])
    assert constructions.parse_spec('psl2odd:7,dihedral') == ('psl2odd', [7, 'dihedral', None])
    assert constructions.parse_spec('product:3:2') == ('product', [3, 2])
    for spec in ('nosuch:1', 'agl1st:x', 'agl1st:9,9'):
        with pytest.raises(InadmissibleParameters):
            constructions.parse_spec(spec)


@pytest.mark.parametrize(
    "spec, error",
    (
        pytest.param('agl1st:8', EvenQ),
        pytest.param('agl1st:15', InadmissibleQ),
        pytest.param('pgl2:11', InadmissibleQ),
        pytest.param('psl2even:5', InadmissibleParameters),
        pytest.param('psl2even:2:borel', InadmissibleParameters),
        pytest.param('affine:2', InadmissibleQ),
        pytest.param('table2:6', InadmissibleParameters),
        pytest.param('psu3:5', InadmissibleQ),
        pytest.param('psl2odd:17', InadmissibleQ),
        pytest.param('psl2odd:7,parabolic,2', InadmissibleParameters),
        pytest.param('psl2odd:7,dihedral,0', InadmissibleParameters),
        pytest.param('psl2odd:7,twisted', InadmissibleParameters),
    ),
)
def test_inadmissible(spec, error):
    with pytest.raises(error):
        constructions.build(spec)


def test_sharply_transitive_sets_factorize(agl1_9):
    # G = R S for the stabilizer S
    assert ekrlab.derangement.factorization_check(
        agl1_9.group, agl1_9.named_subsets['R'], agl1_9.action.stabilizer)
    assert np.unique(agl1_9.named_subsets['R']).size == 36
