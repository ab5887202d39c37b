"""Forecast loss functions: MFE, RMSE, MAE and MAPE of predicted vs realized volatility.

MAPE is a fraction (no x100) and is undefined when any realized value is 0.
MSE is reported as RMSE squared.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from .errors import EmptyInput, InputError, LengthMismatch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvalReport:
    mfe: float
    rmse: float
    mae: float
    mape: Optional[float]
    n: int
    error_series: np.ndarray
    error_pct_series: np.ndarray

    @property
    def mse(self) -> float:
        """Derived: RMSE squared"""
        return self.rmse ** 2

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'mfe': self.mfe,
            'rmse': self.rmse,
            'mae': self.mae,
            'mape': self.mape,
            'mse': self.mse,
        }

    def error_frame(self) -> pd.DataFrame:
        """index,error,error_pct rows in sample order"""
        return pd.DataFrame({
            'index': np.arange(self.n),
            'error': self.error_series,
            'error_pct': self.error_pct_series,
        })


def evaluate(predicted, realized) -> EvalReport:
    sigma = np.asarray(predicted, dtype=float).ravel()
    rv = np.asarray(realized, dtype=float).ravel()
    if len(sigma) != len(rv):
        raise LengthMismatch(f"{len(sigma)} predictions for {len(rv)} realized values",
                             module="metrics")
    if len(sigma) == 0:
        raise EmptyInput("nothing to evaluate")
    if not (np.isfinite(sigma).all() and np.isfinite(rv).all()):
        raise InputError("predicted and realized series must be finite", module="metrics")

    errors = sigma - rv
    zero = rv == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        pct = np.where(zero, np.nan, errors / np.where(zero, 1.0, rv))

    if zero.any():
        logger.warning("%d realized value(s) are 0; MAPE is undefined", int(zero.sum()))
        mape = None
    else:
        mape = float(np.mean(np.abs(pct)))

    return EvalReport(
        mfe=float(np.mean(errors)),
        rmse=float(np.sqrt(np.mean(errors ** 2))),
        mae=float(np.mean(np.abs(errors))),
        mape=mape,
        n=len(errors),
        error_series=errors,
        error_pct_series=pct,
    )
