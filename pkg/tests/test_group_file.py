#!/usr/bin/env python3

import numpy as np
import pytest

import ekrlab
from ekrlab.errors import GroupFileError


def test_write_and_read(tmp_path, s4_natural):
    gens = s4_natural.generator_images()
    path = tmp_path / 's4.grp'
    ekrlab.GroupFile(path).write(4, gens, comments=['S4', 'natural action'])

    text = path.read_text(encoding='utf-8')
    assert text.startswith('# S4\n# natural action\ndegree 4\ngen ')

    gfile = ekrlab.GroupFile(path)
    gfile.read()
    assert gfile.degree == 4
    assert np.array_equal(gfile.generators, gens)


@pytest.mark.parametrize(
    "content",
    (
        pytest.param('gen 0 1 2\n', id='gen-before-degree'),
        pytest.param('degree 3\ngen 0 1\n', id='short-gen'),
        pytest.param('degree 3\ngen 0 0 1\n', id='not-a-permutation'),
        pytest.param('degree 3\ngen 0 1 x\n', id='non-integer'),
        pytest.param('degree 3\ndegree 3\n', id='second-degree'),
        pytest.param('degree 3\nperm 0 1 2\n', id='unknown-keyword'),
        pytest.param('# only a comment\n', id='missing-degree'),
    ),
)
def test_malformed(tmp_path, content):
    path = tmp_path / 'bad.grp'
    path.write_text(content, encoding='utf-8')
    gfile = ekrlab.GroupFile(path)
    with pytest.raises(GroupFileError):
        gfile.read()
    assert gfile.degree is None


def test_blank_lines_and_identity_only(tmp_path):
    path = tmp_path / 'trivial.grp'
    path.write_text('\n# trivial group\n\ndegree 2\n', encoding='utf-8')
    gfile = ekrlab.GroupFile(path)
    gfile.read()
    assert gfile.generators.shape == (0, 2)
    assert ekrlab.close_group(gfile.degree, gfile.generators).order == 1


def test_subsets(tmp_path):
    path = tmp_path / 'S.idx'
    ekrlab.write_subset(path, [5, 0, 3])
    assert path.read_text(encoding='utf-8') == '5\n0\n3\n'
    assert np.array_equal(ekrlab.read_subset(path), [0, 3, 5])

    path.write_text('# comment\n1\n\n1\n2\n', encoding='utf-8')
    assert np.array_equal(ekrlab.read_subset(path), [1, 2])

    path.write_text('1\ntwo\n', encoding='utf-8')
    with pytest.raises(GroupFileError):
        ekrlab.read_subset(path)
    with pytest.raises(GroupFileError):
        ekrlab.read_subset(tmp_path / 'missing.idx')
