from pathlib import Path
from typing import Dict, Sequence

import numpy.typing as npt

from .config import Config
from .group_file import GroupFile, write_subset


class OutputFiles:

    CONFIG_FILE_NAME: str = 'config.json'
    GROUP_FILE_NAME: str = 'group.grp'
    EXPECTED_FILE_NAME: str = 'expected.json'
    REPORT_FILE_NAME: str = 'report.json'
    SUBSET_FILE_SUFFIX: str = '.idx'

    def __init__(self, cfg: Config, folder: Path):
        self.cfg = cfg
        if folder.is_absolute() or cfg.save_dir is None:
            self.folder = folder
        else:
            self.folder = cfg.save_dir / folder

    def mkdir(self, mode=0o777):
        # Like POSIX 'mkdir -p'
        self.folder.mkdir(mode=mode, parents=True, exist_ok=True)

    def save_config(self):
        cfg_dump = self.cfg.to_json()
        with open(self.folder / self.CONFIG_FILE_NAME, 'wt', encoding='utf-8') as file:
            file.write(cfg_dump)

    def save_group(self, degree: int, generators: npt.NDArray[int], comments: Sequence[str] = ()):
        GroupFile(self.folder / self.GROUP_FILE_NAME).write(degree, generators, comments)

    def save_subsets(self, subsets: Dict[str, Sequence[int]]):
        for name, indices in subsets.items():
            write_subset(self.folder / f'{name}{self.SUBSET_FILE_SUFFIX}', indices)

    def save_json(self, file_name: str, dump: str):
        with open(self.folder / file_name, 'wt', encoding='utf-8') as file:
            file.write(dump)
