#!/usr/bin/env python3

import pkgutil
from dataclasses import fields
from pathlib import Path

import pytest

import ekrlab
from ekrlab.config import CACHE_DIR_ENV


@pytest.mark.parametrize(
    "indents",
    (
        pytest.param(None),
        pytest.param(1),
        pytest.param(4),
    ),
)
def test_config(indents):
    cfg1_dump = pkgutil.get_data(
        ekrlab.__name__, 'data/default-config.json').decode()
    cfg1 = ekrlab.Config.from_json(cfg1_dump)

    # Deserialization should result in exactly same data types and values
    cfg2_dump = cfg1.to_json(indent=indents)
    cfg2 = ekrlab.Config.from_json(cfg2_dump)
    for field in fields(ekrlab.Config):
        cfg1_val = getattr(cfg1, field.name)
        cfg2_val = getattr(cfg2, field.name)
        msg = (f'{field.name} (type {field.type}): '
               f'"{cfg1_val}" (type {type(cfg1_val)}) != '
               f'"{cfg2_val}" (type {type(cfg2_val)})')
        if cfg1_val != cfg2_val:
            raise ValueError(f'Value mismatch: {msg}')
        if type(cfg1_val) is not type(cfg2_val):
            raise TypeError(f'Type mismatch: {msg}')


def test_default_config_matches_defaults():
    cfg_dump = pkgutil.get_data(
        ekrlab.__name__, 'data/default-config.json').decode()
    assert ekrlab.Config.from_json(cfg_dump) == ekrlab.Config()


def test_cache_dir_from_environment(monkeypatch, tmp_path):
    cfg = ekrlab.Config(cache_dir=Path('unused'))
    monkeypatch.setenv(CACHE_DIR_ENV, str(tmp_path))
    assert cfg.effective_cache_dir() == tmp_path

    monkeypatch.delenv(CACHE_DIR_ENV)
    assert cfg.effective_cache_dir() == Path('unused')
    assert ekrlab.Config().effective_cache_dir() is None


def test_integer_floats_restored():
    cfg = ekrlab.Config.from_json('{"eigen_tolerance": 1, "solver_params":'
                                  ' {"time_limit": 5, "seed_identity": false}}')
    assert isinstance(cfg.eigen_tolerance, float)
    assert cfg.solver_params.time_limit == 5
    assert cfg.solver_params.seed_identity is False
