#!/usr/bin/env python3

import numpy as np
import pytest

import ekrlab
from ekrlab.errors import DegenerateSpectrum, GroupTooLarge, IncompatibleWeighting, Unbounded
from ekrlab.spectra import class_inverse, weighting_from_orders


def test_unit_spectrum(s4_natural):
    prof = ekrlab.profile(s4_natural)
    weighting = ekrlab.unit_weighting(prof)
    assert weighting.total == 9
    report = ekrlab.Spectra.eigenvalues(ekrlab.Spectra.collapse(weighting))
    assert np.allclose(report.eigenvalues, [-3, 1, 3, 9])
    assert np.allclose(report.all_eigenvalues, [-3, -3, 1, 3, 9])
    assert report.d == pytest.approx(9)
    assert report.tau == pytest.approx(-3)
    assert report.hoffman_bound == pytest.approx(6)
    assert np.allclose(ekrlab.Spectra.full_matrix_spectrum(weighting), report.eigenvalues)


def test_collapse_in_threads(psl2_4):
    weighting = ekrlab.unit_weighting(psl2_4.profile)
    single = ekrlab.Spectra.collapse(weighting, worker_count=1)
    threaded = ekrlab.Spectra.collapse(weighting, worker_count=3)
    assert np.allclose(single.matrix, threaded.matrix)
    assert ekrlab.Spectra.hoffman_bound(weighting).value == pytest.approx(12)


def test_order_weighting(s4_natural):
    prof = ekrlab.profile(s4_natural)
    # Only the 4-cycles
    weighting = weighting_from_orders(prof, {4: 1.0})
    assert weighting.total == 6
    report = ekrlab.Spectra.eigenvalues(ekrlab.Spectra.collapse(weighting))
    assert report.d == pytest.approx(6)
    assert report.hoffman_bound == pytest.approx(24 / (1 + 6 / -report.tau))


def test_incompatible_weightings(s4_natural):
    prof = ekrlab.profile(s4_natural)
    weights = np.zeros(prof.group.class_count)
    weights[prof.fixing_classes[-1]] = 1.0
    with pytest.raises(IncompatibleWeighting):
        ekrlab.ClassWeighting(weights, prof)
    with pytest.raises(IncompatibleWeighting):
        ekrlab.ClassWeighting(np.ones(2), prof)
    with pytest.raises(IncompatibleWeighting):
        ekrlab.weighting_from_dict(prof, {99: 1.0})
    assert np.array_equal(class_inverse(prof.group), np.arange(prof.group.class_count))


def test_degenerate_spectrum(s4_natural):
    prof = ekrlab.profile(s4_natural)
    weights = -ekrlab.unit_weighting(prof).weights
    report = ekrlab.Spectra.eigenvalues(
        ekrlab.Spectra.collapse(ekrlab.ClassWeighting(weights, prof)))
    assert report.hoffman_bound is None
    with pytest.raises(DegenerateSpectrum):
        ekrlab.Spectra.hoffman(report)


def test_optimized_weights(s4_natural, psl2_4):
    weighting, bound = ekrlab.Spectra.optimize_weights(ekrlab.profile(s4_natural))
    assert bound == pytest.approx(6, rel=1e-6)
    assert np.abs(weighting.weights).max() == pytest.approx(1)

    # The unit bound is already met by a coclique
    _, bound = ekrlab.Spectra.optimize_weights(psl2_4.profile)
    assert bound == pytest.approx(12, rel=1e-6)


def test_optimize_without_derangements():
    group = ekrlab.close_group(3, [[1, 2, 0]])
    trivial = ekrlab.coset_action(group, np.arange(group.order))
    with pytest.raises(Unbounded):
        ekrlab.Spectra.optimize_weights(ekrlab.profile(trivial))


def test_dense_spectrum_cap(sz8_group):
    prof = ekrlab.profile(ekrlab.natural_action(sz8_group), verify=False)
    with pytest.raises(GroupTooLarge):
        ekrlab.Spectra.full_matrix_spectrum(ekrlab.unit_weighting(prof))


def _graded_weighting(prof):
    # Distinct positive weights on the derangement classes
    return ekrlab.weighting_from_dict(
        prof, {int(c): 1.0 + i for i, c in enumerate(prof.derangement_classes)})


@pytest.mark.parametrize("factor", (0.25, 3.0, 1e3))
@pytest.mark.parametrize("fixture", ('s4_natural', 'psl2_4'))
def test_hoffman_bound_scale_invariant(fixture, factor, request):
    value = request.getfixturevalue(fixture)
    action = value if isinstance(value, ekrlab.TransitiveAction) else value.action
    prof = ekrlab.profile(action)
    for weighting in (ekrlab.unit_weighting(prof), _graded_weighting(prof)):
        bound = ekrlab.Spectra.hoffman_bound(weighting).value
        scaled = ekrlab.Spectra.hoffman_bound(weighting.scaled(factor)).value
        assert scaled == pytest.approx(bound, rel=1e-9)


@pytest.mark.parametrize(
    "generators, stabilizer_order",
    (
        pytest.param([[1, 2, 0], [1, 0, 2]], 2, id='S3 on 3 points'),
        pytest.param([[1, 2, 0, 3], [1, 0, 3, 2]], 3, id='A4 on 4 points'),
        pytest.param([[1, 2, 3, 4, 0], [0, 2, 4, 1, 3]], 4, id='AGL(1,5) on 5 points'),
    ),
)
def test_single_derangement_class(generators, stabilizer_order):
    group = ekrlab.close_group(len(generators[0]), generators)
    prof = ekrlab.profile(ekrlab.natural_action(group))
    assert prof.derangement_classes.size == 1

    unit = ekrlab.Spectra.hoffman_bound(ekrlab.unit_weighting(prof)).value
    assert unit == pytest.approx(stabilizer_order)
    weighting, bound = ekrlab.Spectra.optimize_weights(prof)
    assert bound == pytest.approx(unit, rel=1e-6)
    assert np.flatnonzero(weighting.weights).tolist() == prof.derangement_classes.tolist()
