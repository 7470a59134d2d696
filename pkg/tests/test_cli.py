#!/usr/bin/env python3

import json

import pytest

from ekrlab_cli.app import EXIT_PARSE, main


def test_accept_list(capsys):
    assert main(['accept', '--list']) == 0
    out = capsys.readouterr().out
    assert 'PSL(2,4) on 10 points' in out
    assert out.count('\n') >= 12


def test_help_lists_exit_codes(capsys):
    assert main(['--help']) == 0
    out = capsys.readouterr().out
    assert 'exit codes:' in out
    assert 'NoSuchSubgroup' in out
    assert 'GroupTooLarge' in out


def test_accept_no_match(capsys):
    assert main(['accept', '--only', 'nothing']) == EXIT_PARSE
    assert 'ERROR: No check matches nothing' in capsys.readouterr().out


@pytest.mark.parametrize('argv', [
    pytest.param([], id='no command'),
    pytest.param(['analyze'], id='no source'),
    pytest.param(['analyze', '--construct', 'psl2even:2', '--group', 'g.grp'], id='two sources'),
    pytest.param(['construct', 'psl2even', '--e', 'two'], id='not an int'),
])
def test_bad_arguments(argv):
    assert main(argv) == EXIT_PARSE


@pytest.mark.parametrize('name', [
    pytest.param('nosuch', id='unknown'),
    pytest.param('psl2even:9', id='inadmissible'),
])
def test_bad_construction(name, capsys):
    assert main(['construct', name]) == EXIT_PARSE
    assert 'ERROR:' in capsys.readouterr().out


def test_construct_then_analyze(tmp_path, capsys):
    folder = tmp_path / 'psl2even'
    assert main(['construct', 'psl2even', '--e', '2', '--out', str(folder)]) == 0
    for file_name in ('config.json', 'group.grp', 'expected.json', 'S.idx', 'R.idx', 'H.idx'):
        assert (folder / file_name).is_file()
    with open(folder / 'expected.json', 'rt', encoding='utf-8') as file:
        expected = json.load(file)
    assert expected['omega_size']['value'] == 10
    capsys.readouterr()

    report_file = tmp_path / 'report.json'
    assert main(['analyze', '--group', str(folder / 'group.grp'),
                 '--subgroup-file', str(folder / 'H.idx'),
                 '--report', str(report_file)]) == 0
    with open(report_file, 'rt', encoding='utf-8') as file:
        report = json.load(file)
    assert report['group'] == {'order': 60, 'degree': 10, 'stabilizer_order': 6,
                               'class_count': 5}
    assert report['certificate']['upper_bound'] == 12

    assert main(['analyze', '--group', str(folder / 'group.grp'), '--point', '0',
                 '--no-optimize']) == 0
    out = capsys.readouterr().out
    assert 'Loaded group of order 60 and degree 10' in out
    assert 'Total time' in out

    assert main(['analyze', '--group', str(folder / 'group.grp'), '--point', '10']) == EXIT_PARSE


def test_analyze_construction(capsys):
    assert main(['analyze', '--construct', 'psl2even:2', '--exact']) == 0
    out = capsys.readouterr().out
    assert 'rho in [sqrt(2/5), sqrt(2/5)] (tight)' in out
    assert 'WARNING' not in out


def test_solve(capsys):
    assert main(['solve', '--construct', 'agl1st:5']) == 0
    assert 'max. intersecting subset of size 2' in capsys.readouterr().out
    assert main(['solve', '--construct', 'agl1st:5', '--clique']) == 0
    assert 'max. semiregular subset of size 10' in capsys.readouterr().out


def test_spectrum(tmp_path, capsys):
    assert main(['spectrum', '--construct', 'psl2even:2', '--optimize']) == 0
    line, = [ln for ln in capsys.readouterr().out.splitlines() if ln.startswith('Hoffman bound')]
    assert float(line.split(':')[1]) == pytest.approx(12)

    weights = tmp_path / 'weights.json'
    weights.write_text('{not json', encoding='utf-8')
    assert main(['spectrum', '--construct', 'psl2even:2', '--weights', str(weights)]) == EXIT_PARSE


def test_construct_parabolic(tmp_path):
    folder = tmp_path / 'parabolic'
    assert main(['construct', 'psl2even', '--e', '2', '--stabilizer', 'parabolic',
                 '--out', str(folder)]) == 0
    with open(folder / 'group.grp', 'rt', encoding='utf-8') as file:
        assert 'degree 5' in file.read()
    assert (folder / 'R.idx').is_file()
    assert main(['analyze', '--construct', 'psl2even:2:parabolic', '--no-optimize']) == 0
