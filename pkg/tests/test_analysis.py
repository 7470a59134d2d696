#!/usr/bin/env python3

import json
from fractions import Fraction

import pytest

import ekrlab
from ekrlab.analysis import SIGNIFICANT_DIGITS, sig
from ekrlab.constructions import ExpectedValue
from ekrlab.derangement import UpperBound
from ekrlab.errors import GroupTooLarge


@pytest.fixture(name='psl2_4_analysis')
def fixture_psl2_4_analysis(psl2_4):
    return ekrlab.analyze(psl2_4.action, ekrlab.Config(), lower_witness=psl2_4.lower_witness(),
                          upper_bounds=psl2_4.upper_bounds(), exact=True, prof=psl2_4.profile)


def test_analyze(psl2_4_analysis):
    result = psl2_4_analysis
    assert result.optimized[1] == pytest.approx(12)
    assert result.search.optimal
    assert result.search.size == 12
    cert = result.certificate
    assert cert.tight
    assert cert.upper_bound == 12
    assert cert.rho_lower.radicand == Fraction(2, 5)
    assert UpperBound.Kind.EXACT_SOLVER in {b.kind for b in result.bounds}
    assert UpperBound.Kind.SEMIREGULAR_CLIQUE in {b.kind for b in result.bounds}
    assert set(result.timings) == {'spectra', 'solver'}

    values = result.computed_values()
    assert values['max_intersecting'] == 12
    assert values['upper_bound'] == 12


def test_report(psl2_4, psl2_4_analysis):
    report = ekrlab.build_report('psl2even:2', psl2_4.action, psl2_4_analysis,
                                 expected=psl2_4.expected, measured=psl2_4.measured())
    assert report.passed
    assert report.timings is None
    assert report.group == {'order': 60, 'degree': 10, 'stabilizer_order': 6,
                            'class_count': 5}
    assert report.certificate['rho_lower'] == {'value': sig(0.4 ** 0.5), 'exact': 'sqrt(2/5)'}
    assert report.expected['rho']['ok'] is True
    assert report.expected['S_size']['computed'] == 12
    assert report.solver['size'] == 12

    dump = report.to_json()
    assert ekrlab.AnalysisReport.from_json(dump) == report
    # Identical inputs give byte-identical reports
    again = ekrlab.build_report('psl2even:2', psl2_4.action, psl2_4_analysis,
                                expected=psl2_4.expected, measured=psl2_4.measured())
    assert again.to_json() == dump
    assert 'spectrum' in json.loads(dump)

    timed = ekrlab.build_report('psl2even:2', psl2_4.action, psl2_4_analysis, timings=True)
    assert set(timed.timings) == {'spectra', 'solver'}
    assert timed.expected == {}


def test_compare_expected():
    expected = {
        'rho': ExpectedValue(ekrlab.RhoValue(Fraction(2, 5)), 'exact'),
        'bound': ExpectedValue(224, 'closed form'),
        'flag': ExpectedValue(True, 'predicate'),
        'missing': ExpectedValue(1, 'never computed'),
    }
    computed = {
        'rho': ekrlab.RhoValue(Fraction(2, 5)),
        'bound': 224.00001,
        'flag': False,
    }
    section = ekrlab.compare_expected(expected, computed, tolerance=1e-6)
    assert section['rho']['ok'] is True
    assert section['bound']['ok'] is True
    assert section['flag']['ok'] is False
    assert section['missing']['ok'] is None
    assert section['bound']['source'] == 'closed form'
    assert not ekrlab.compare_expected({'bound': ExpectedValue(224, '')},
                                       {'bound': 225.0})['bound']['ok']


def test_significant_digits():
    assert SIGNIFICANT_DIGITS == 12
    assert sig(1 / 3) == 0.333333333333
    assert ekrlab.exact_value(Fraction(1, 4)) == {'value': 0.25, 'exact': '1/4'}


def test_default_witness(s4_natural):
    result = ekrlab.analyze(s4_natural, optimize=False)
    assert result.optimized is None
    assert result.search is None
    assert result.certificate.lower_size == 6
    assert result.certificate.upper_kind is UpperBound.Kind.HOFFMAN
    assert result.certificate.tight


def test_exact_limit(sz8_group):
    action = ekrlab.natural_action(sz8_group)
    prof = ekrlab.profile(action, verify=False)
    with pytest.raises(GroupTooLarge):
        ekrlab.analyze(action, optimize=False, exact=True, prof=prof)
