#!/usr/bin/env python3

import pytest

import ekrlab
from ekrlab import acceptance
from ekrlab.errors import InadmissibleParameters


def test_checks_are_numbered():
    assert [c.id for c in acceptance.CHECKS] == list(range(1, 13))
    assert all(c.tags and c.title for c in acceptance.CHECKS)


def test_select():
    assert len(acceptance.select()) == 12
    assert [c.id for c in acceptance.select(['3'])] == [3]
    assert [c.id for c in acceptance.select(['suzuki'])] == [7, 8, 9]
    assert [c.id for c in acceptance.select(['table2', '1'])] == [1, 4, 5]
    assert not acceptance.select(['nothing'])


def test_run_fast_checks():
    seen = []
    results = acceptance.run(acceptance.select(['1', '3', '9']), ekrlab.Config(),
                             progress_func=seen.append)
    assert seen == results
    failures = [f for r in results for f in r.failures]
    assert not failures
    assert all(r.passed and r.elapsed_ms >= 0 for r in results)


@pytest.mark.parametrize(
    "error, message",
    (
        pytest.param(InadmissibleParameters('broken'), 'InadmissibleParameters: broken',
                     id='library error'),
        pytest.param(AssertionError('order 7'), 'AssertionError: order 7', id='assertion'),
        pytest.param(KeyError(3), 'KeyError: 3', id='lookup'),
    ),
)
def test_errors_become_failures(error, message):
    def failing(_ctx):
        raise error

    def passing(ctx):
        ctx.note('ran')

    bad = acceptance.Check(98, ('test',), 'always fails', failing)
    good = acceptance.Check(99, ('test',), 'always passes', passing)
    first, second = acceptance.run([bad, good])
    assert not first.passed
    assert first.failures == [message]
    assert second.passed
    assert second.notes == ['ran']


def test_context_expectations():
    ctx = acceptance.CheckContext(ekrlab.Config())
    assert ctx.expect_equal(3, 3, 'three')
    assert not ctx.expect_close(1.0, 1.1, 'one')
    assert ctx.expect_close(1.0, 1.0 + 1e-9, 'one')
    assert len(ctx.failures) == 1


def test_field_property_sample():
    assert acceptance.FIELD_SAMPLE_SIZE >= 1000


@pytest.mark.slow
def test_property_suite():
    result, = acceptance.run(acceptance.select(['12']))
    assert result.failures == []
    assert result.passed
