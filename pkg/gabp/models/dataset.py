from dataclasses import dataclass
from typing import Any, Dict, List, Tuple

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class ReturnSeries:
    dates: np.ndarray
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class VolSeries:
    dates: np.ndarray
    values: np.ndarray
    window: int

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class NormParams:
    """Per-feature (min, max) fitted on training rows"""
    mins: np.ndarray
    maxs: np.ndarray

    def to_dict(self) -> Dict[str, List[float]]:
        return {'mins': [float(v) for v in self.mins], 'maxs': [float(v) for v in self.maxs]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "NormParams":
        return cls(mins=np.asarray(data['mins'], dtype=float),
                   maxs=np.asarray(data['maxs'], dtype=float))


@dataclass(frozen=True)
class FeatureFrame:
    """Raw (unnormalized) feature rows with their next-step volatility target"""
    dates: np.ndarray
    feature_names: Tuple[str, ...]
    X_raw: np.ndarray
    y: np.ndarray

    def __len__(self) -> int:
        return len(self.y)


@dataclass(frozen=True)
class Dataset:
    feature_names: Tuple[str, ...]
    dates: np.ndarray
    X: np.ndarray  # min-max scaled with train-fitted params
    X_raw: np.ndarray
    y: np.ndarray
    norm_params: NormParams
    train_idx: np.ndarray
    test_idx: np.ndarray
    seed: int
    vol_window: int

    def __len__(self) -> int:
        return len(self.y)

    @property
    def train_X(self) -> np.ndarray:
        return self.X[self.train_idx]

    @property
    def train_y(self) -> np.ndarray:
        return self.y[self.train_idx]

    @property
    def test_X(self) -> np.ndarray:
        return self.X[self.test_idx]

    @property
    def test_y(self) -> np.ndarray:
        return self.y[self.test_idx]

    def split_labels(self) -> np.ndarray:
        labels = np.full(len(self), "train", dtype=object)
        labels[self.test_idx] = "test"
        return labels

    def to_frame(self) -> pd.DataFrame:
        """One row per sample in date order, normalized features, target and split"""
        frame = pd.DataFrame(self.X, columns=list(self.feature_names))
        frame.insert(0, "date", pd.to_datetime(self.dates).strftime("%Y-%m-%d"))
        frame["target_rv"] = self.y
        frame["split"] = self.split_labels()
        return frame
