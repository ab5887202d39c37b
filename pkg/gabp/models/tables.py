from dataclasses import dataclass, field
from enum import IntEnum
from typing import Dict, List, Mapping

import numpy as np
import pandas as pd


class CellFlag(IntEnum):
    ORIGINAL = 0
    INTERPOLATED = 1
    OUTLIER_REPLACED = 2


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


@dataclass(frozen=True)
class RawTable:
    """Daily series as loaded; NaN marks a missing cell"""
    dates: np.ndarray  # datetime64[D]
    columns: Mapping[str, np.ndarray]

    def __post_init__(self):
        dates = _frozen(np.asarray(self.dates, dtype="datetime64[D]").copy())
        columns = {name: _frozen(np.asarray(values, dtype=float).copy())
                   for name, values in self.columns.items()}
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "columns", columns)

        if len(dates) > 1 and not bool(np.all(dates[1:] > dates[:-1])):
            raise ValueError("dates must be strictly increasing")
        for name, values in columns.items():
            if values.shape != dates.shape:
                raise ValueError(f"column '{name}' has {len(values)} values for {len(dates)} dates")

    def __len__(self) -> int:
        return len(self.dates)

    @property
    def column_names(self) -> List[str]:
        return list(self.columns)

    def missing_count(self) -> int:
        return int(sum(np.isnan(values).sum() for values in self.columns.values()))

    def to_frame(self) -> pd.DataFrame:
        """Date-indexed frame, one column per series"""
        frame = pd.DataFrame(dict(self.columns))
        frame.insert(0, "date", pd.to_datetime(self.dates).strftime("%Y-%m-%d"))
        return frame


@dataclass(frozen=True)
class PriceTable(RawTable):
    """Gap-free, outlier-repaired series with a provenance flag per cell"""
    flags: Mapping[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        super().__post_init__()
        flags = {}
        for name, values in self.columns.items():
            if np.isnan(values).any():
                raise ValueError(f"column '{name}' still has missing values")
            column_flags = self.flags.get(name)
            if column_flags is None:
                column_flags = np.full(len(values), CellFlag.ORIGINAL, dtype=np.int8)
            column_flags = np.asarray(column_flags, dtype=np.int8).copy()
            if column_flags.shape != values.shape:
                raise ValueError(f"flags for '{name}' do not match its length")
            flags[name] = _frozen(column_flags)
        object.__setattr__(self, "flags", flags)

    def flag_count(self, flag: CellFlag) -> int:
        return int(sum((f == flag).sum() for f in self.flags.values()))

    def flagged_cells(self, flag: CellFlag) -> Dict[str, List[int]]:
        """Row positions carrying a flag, per column"""
        return {name: np.flatnonzero(f == flag).tolist()
                for name, f in self.flags.items() if (f == flag).any()}
