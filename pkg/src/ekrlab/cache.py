import hashlib
import logging
from pathlib import Path
from typing import Optional

import numpy as np
import numpy.typing as npt

from .perm import Representation

_logger = logging.getLogger(__name__)


class GroupCache:
    """Memoizes enumerated element rows in a folder of .npz files.

    Files are keyed by a SHA-256 of the representation key and the generator
    rows, so a file is only reused for the exact same generators.
    """

    SUFFIX: str = '.npz'

    def __init__(self, folder: Path):
        self.folder = Path(folder)

    @staticmethod
    def digest(rep: Representation, generator_rows: npt.NDArray[int]) -> str:
        gens = np.ascontiguousarray(generator_rows, dtype=np.int64)
        sha = hashlib.sha256()
        sha.update(rep.key().encode())
        sha.update(str(gens.shape).encode())
        sha.update(gens.tobytes())
        return sha.hexdigest()

    def path(self, rep: Representation, generator_rows: npt.NDArray[int]) -> Path:
        return self.folder / (self.digest(rep, generator_rows) + self.SUFFIX)

    def load(self, rep: Representation, generator_rows: npt.NDArray[int]
             ) -> Optional[npt.NDArray[int]]:
        """Returns the cached element rows, None on a miss or a damaged file."""
        path = self.path(rep, generator_rows)
        if not path.exists():
            return None
        try:
            with np.load(path) as data:
                rows = data['rows']
                gens = data['generators']
        except Exception as ex:
            _logger.warning('Ignoring unreadable cache file %s (%r)', path.name, ex)
            return None
        if not np.array_equal(gens, np.asarray(generator_rows, dtype=np.int64)) \
                or rows.ndim != 2 or rows.shape[1] != rep.width:
            _logger.warning('Ignoring mismatching cache file %s', path.name)
            return None
        _logger.debug('Loaded %d elements from cache', rows.shape[0])
        return rows.astype(np.int64)

    def save(self, rep: Representation, generator_rows: npt.NDArray[int],
             rows: npt.NDArray[int]) -> None:
        # Like POSIX 'mkdir -p'
        self.folder.mkdir(parents=True, exist_ok=True)
        path = self.path(rep, generator_rows)
        tmp = path.with_suffix('.tmp' + self.SUFFIX)
        np.savez_compressed(tmp, rows=np.asarray(rows, dtype=np.int64),
                            generators=np.asarray(generator_rows, dtype=np.int64))
        tmp.replace(path)
        _logger.debug('Cached %d elements in %s', rows.shape[0], path.name)
