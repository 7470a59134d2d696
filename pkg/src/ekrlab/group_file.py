from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
import numpy.typing as npt

from .errors import GroupFileError


class GroupFile:
    """A wrapper class around permutation group generator files.

    The format is plain text, one record per line::

        # comment
        degree <n>
        gen <n space-separated 0-based images>

    Blank lines and lines starting with ``#`` are ignored. The ``degree``
    line must come before any ``gen`` line.

    Attributes:
        path (Path): A file name with path.
        degree (Optional[int]): The number of points, set by `read()`.
        generators (Optional[npt.NDArray[int]]):
            A 2D array with one generator image vector per row.
    """

    MAX_LINE_LEN: int = 1 << 22

    def __init__(self, path: Path):
        self.path = path
        self.degree: Optional[int] = None
        self.generators: Optional[npt.NDArray[int]] = None

    def read(self) -> None:
        """Parses the file, raises `GroupFileError` on malformed content."""

        self.degree = None
        self.generators = None

        gens: List[List[int]] = []
        degree = None
        line_nr = 0
        try:
            f = open(self.path, 'r', encoding='utf-8')
        except OSError as ex:
            raise GroupFileError(f'Cannot open group file "{self.path}" ({repr(ex)})') from ex
        with f:
            while True:
                line = f.readline(self.MAX_LINE_LEN)
                if not line:
                    break
                line_nr += 1
                if line[-1] != '\n' and len(line) == self.MAX_LINE_LEN:
                    raise GroupFileError(f'Row {line_nr} is too long')
                line = line.strip()
                if not line or line.startswith('#'):
                    continue
                keyword, _, rest = line.partition(' ')
                values = rest.split()
                try:
                    numbers = [int(v) for v in values]
                except ValueError:
                    raise GroupFileError(f'Row {line_nr}: non-integer value') from None
                if keyword == 'degree':
                    if degree is not None or len(numbers) != 1 or numbers[0] < 1:
                        raise GroupFileError(f'Row {line_nr}: invalid degree line')
                    degree = numbers[0]
                elif keyword == 'gen':
                    if degree is None:
                        raise GroupFileError(f'Row {line_nr}: generator before degree line')
                    if len(numbers) != degree:
                        raise GroupFileError(f'Row {line_nr}: expected {degree} images,'
                                             f' found {len(numbers)}')
                    if sorted(numbers) != list(range(degree)):
                        raise GroupFileError(f'Row {line_nr}: generator is not a permutation')
                    gens.append(numbers)
                else:
                    raise GroupFileError(f'Row {line_nr}: unknown keyword {repr(keyword)}')

        if degree is None:
            raise GroupFileError('Missing degree line')

        self.degree = degree
        self.generators = np.array(gens, dtype=np.int64).reshape(-1, degree)

    def write(self, degree: int, generators: npt.NDArray[int],
              comments: Sequence[str] = ()) -> None:
        with open(self.path, 'wt', encoding='utf-8') as file:
            for comment in comments:
                file.write(f'# {comment}\n')
            file.write(f'degree {degree}\n')
            for gen in np.asarray(generators).reshape(-1, degree):
                file.write('gen ' + ' '.join(str(int(v)) for v in gen) + '\n')
        self.degree = degree
        self.generators = np.asarray(generators, dtype=np.int64).reshape(-1, degree)


def read_subset(path: Path) -> npt.NDArray[int]:
    """Reads a subset file with one element index per line."""
    indices = []
    try:
        with open(path, 'r', encoding='utf-8') as file:
            for line_nr, line in enumerate(file, start=1):
                line = line.strip()
                if not line or line.startswith('#'):
                    continue
                try:
                    indices.append(int(line))
                except ValueError:
                    raise GroupFileError(f'{path}, row {line_nr}: not an index') from None
    except OSError as ex:
        raise GroupFileError(f'Cannot open subset file "{path}" ({repr(ex)})') from ex
    return np.array(sorted(set(indices)), dtype=np.int64)


def write_subset(path: Path, indices: Sequence[int]) -> None:
    with open(path, 'wt', encoding='utf-8') as file:
        for idx in indices:
            file.write(f'{int(idx)}\n')
