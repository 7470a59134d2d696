import json
import os
from dataclasses import asdict, dataclass, field, fields, is_dataclass
from enum import Enum
from pathlib import Path, PurePath
from typing import Optional

from .solver import Solver
from .spectra import Spectra

CACHE_DIR_ENV: str = 'EKRLAB_CACHE_DIR'


@dataclass
# pylint: disable=too-many-instance-attributes
class Config:
    _cache_dir_doc: str = (
        'A folder where enumerated groups are memoized as .npz files.\n'
        'If set to \'null\' or empty string, nothing is cached.\n'
        f'The environment variable {CACHE_DIR_ENV} takes precedence.')
    cache_dir: Optional[Path] = None

    _seed_doc: str = (
        'A seed of all randomized steps (property checks, LP diagonalization).')
    seed: int = 0

    _max_workers_doc: str = (
        'Limit the number of parallel workers used by the solver and spectra.\n'
        'If set to zero or less all CPUs in the system are used.')
    max_workers: int = 1

    _log_timing_doc: str = (
        'Print timing messages to console for all lengthy operations.')
    log_timing: bool = True

    _save_dir_doc: str = (
        'Save constructed groups and subsets to a new sub-folder under this directory.\n'
        'If set to \'null\' or empty string, nothing is saved.\n'
        'Defaults to current working directory.')
    save_dir: Optional[Path] = Path()

    _solver_params_doc: str = (
        'Parameters of the exact clique/coclique search.')
    _solver_params_time_limit_doc: str = (
        'A time limit of a single search (in seconds), zero or less for none.')
    _solver_params_seed_identity_doc: str = (
        'Start every search from the identity, valid by vertex transitivity.')
    solver_params: Solver.Params = field(
        default_factory=lambda: Solver.Params(
            time_limit=60.0,
            seed_identity=True,
        )
    )

    _lp_params_doc: str = (
        'Parameters of the Hoffman weight optimization.')
    _lp_params_max_rounds_doc: str = (
        'A max. number of cutting plane rounds.')
    _lp_params_tolerance_doc: str = (
        'A tolerance on violated eigenvalue constraints.')
    _lp_params_seed_doc: str = (
        'A seed of the random combination used for joint diagonalization.')
    lp_params: Spectra.LpParams = field(
        default_factory=lambda: Spectra.LpParams(
            max_rounds=100,
            tolerance=1e-8,
            seed=0,
        )
    )

    _eigen_tolerance_doc: str = (
        'A relative tolerance for merging eigenvalues and rejecting imaginary parts.')
    eigen_tolerance: float = 1e-7
    _compare_tolerance_doc: str = (
        'A relative tolerance for comparing computed values against expected ones.')
    compare_tolerance: float = 1e-6

    _group_order_cap_doc: str = (
        'A max. order of enumerated permutation and matrix groups.')
    group_order_cap: int = 2 ** 20
    _large_group_order_cap_doc: str = (
        'A max. order of enumerated affine groups (large mode).')
    large_group_order_cap: int = 2 ** 21

    def effective_cache_dir(self) -> Optional[Path]:
        env = os.environ.get(CACHE_DIR_ENV)
        if env:
            return Path(env)
        return self.cache_dir if self.cache_dir else None

    def to_json(self, **kwargs):
        indent = kwargs.pop('indent', 4)  # Indent with 4 spaces by default

        class JSONEncoder(json.JSONEncoder):
            def default(self, o):
                if is_dataclass(o):
                    return asdict(o)
                if isinstance(o, PurePath):
                    return str(o)
                if isinstance(o, Enum):
                    return o.name
                return super().default(o)

        return json.dumps(self, cls=JSONEncoder,
                          indent=indent, ensure_ascii=False,
                          **kwargs)

    @staticmethod
    def from_json(dump: str):
        cfg = Config(**json.loads(dump))
        cfg_default = Config()

        for f in fields(Config):
            # Override doc fields with internal documentation
            if f.name.startswith('_') and f.name.endswith('_doc'):
                setattr(cfg, f.name, getattr(cfg_default, f.name))
                continue

            value = getattr(cfg, f.name)
            if repr(f.type) == repr(Optional[Path]):
                if value is not None:
                    setattr(cfg, f.name, Path(value))
            elif f.type is float:
                setattr(cfg, f.name, float(value))
            elif f.type is Solver.Params:
                setattr(cfg, f.name, Solver.Params(**value))
            elif f.type is Spectra.LpParams:
                setattr(cfg, f.name, Spectra.LpParams(**value))

        return cfg
