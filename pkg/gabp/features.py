"""Turn a cleaned PriceTable into the supervised-learning Dataset.

Realized volatility on day t follows the forward-window definition

    RV_t = sqrt( sum_{i=t}^{t+d} (L_i - Lbar)^2 / d )

with the d + 1 returns L_t..L_{t+d} in the window, Lbar their mean and d the
divisor (not d + 1). Feature row t holds the eight catalog inputs and
its target is RV_t; the lagged-volatility feature is RV_{t-1}.
"""

import logging
from typing import Dict

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import (ConstantFeature, DegenerateRange, InputError,
                     InsufficientRows, NonPositivePrice, WindowTooLarge)
from .models.dataset import Dataset, FeatureFrame, NormParams, ReturnSeries, VolSeries
from .models.feature_catalog import CATALOG, Transform
from .models.run_config import ColumnMap
from .models.tables import PriceTable

logger = logging.getLogger(__name__)

DEFAULT_VOL_WINDOW = 21
DEFAULT_TRAIN_FRAC = 0.8


def log_returns(prices, dates=None) -> ReturnSeries:
    """L_t = ln(P_t / P_{t-1}); dates (if given) are those of P_t"""
    prices = np.asarray(prices, dtype=float)
    if len(prices) < 2:
        raise InsufficientRows(f"need at least 2 prices for a return, got {len(prices)}")
    if not (prices > 0).all():
        raise NonPositivePrice(f"prices must be positive; found {prices[~(prices > 0)][0]}")

    values = np.log(prices[1:] / prices[:-1])
    return ReturnSeries(dates=None if dates is None else np.asarray(dates)[1:], values=values)


def realized_vol(returns: ReturnSeries, d: int) -> VolSeries:
    """Forward-window realized volatility; output length is len(returns) - d"""
    if int(d) != d or d < 1:
        raise InputError(f"volatility window d must be a positive integer, got {d}", module="features")
    d = int(d)
    values = np.asarray(returns.values, dtype=float)
    if len(values) < d + 1:
        raise WindowTooLarge(f"window d={d} needs at least {d + 1} returns, got {len(values)}")

    windows = sliding_window_view(values, d + 1)
    deviations = windows - windows.mean(axis=1, keepdims=True)
    vol = np.sqrt((deviations ** 2).sum(axis=1) / d)
    dates = None if returns.dates is None else returns.dates[:len(vol)]
    return VolSeries(dates=dates, values=vol, window=d)


def normalize(v, min_value, max_value):
    """Map [min, max] linearly onto [-1, 1]; values outside stay outside"""
    min_value = np.asarray(min_value, dtype=float)
    max_value = np.asarray(max_value, dtype=float)
    if not np.all(max_value > min_value):
        raise DegenerateRange("normalization needs max > min")
    return 2.0 * (np.asarray(v, dtype=float) - min_value) / (max_value - min_value) - 1.0


def denormalize(u, min_value, max_value):
    """Inverse of ``normalize``"""
    min_value = np.asarray(min_value, dtype=float)
    max_value = np.asarray(max_value, dtype=float)
    if not np.all(max_value > min_value):
        raise DegenerateRange("denormalization needs max > min")
    return (np.asarray(u, dtype=float) + 1.0) * (max_value - min_value) / 2.0 + min_value


def fit_norm_params(X_train: np.ndarray, feature_names) -> NormParams:
    mins = X_train.min(axis=0)
    maxs = X_train.max(axis=0)
    constant = [name for name, lo, hi in zip(feature_names, mins, maxs) if not hi > lo]
    if constant:
        raise ConstantFeature(f"feature(s) constant across training rows: {', '.join(constant)}",
                              issues=constant)
    return NormParams(mins=mins, maxs=maxs)


def normalize_matrix(X_raw: np.ndarray, params: NormParams) -> np.ndarray:
    """Scale every column with its fitted range; used for both train and predict"""
    return normalize(X_raw, params.mins, params.maxs)


def _aligned(values: np.ndarray, length: int, offset: int) -> np.ndarray:
    """Place ``values`` on table rows starting at ``offset``; NaN elsewhere"""
    out = np.full(length, np.nan)
    out[offset:offset + len(values)] = values
    return out


def build_features(table: PriceTable, d: int = DEFAULT_VOL_WINDOW,
                   columns: ColumnMap = ColumnMap()) -> FeatureFrame:
    """Catalog features and RV targets for every row where all are defined"""
    n_rows = len(table)
    if n_rows - d - 2 < 1:
        raise InsufficientRows(
            f"{n_rows} rows leave no sample for a lag-1 feature and a forward window of {d}")

    close = table.columns[columns.close]
    returns = log_returns(close)
    vol = _aligned(realized_vol(returns, d).values, n_rows, 1)

    derived: Dict[str, np.ndarray] = {}
    for spec in CATALOG.features:
        source = table.columns[getattr(columns, spec.role)]
        if spec.transform == Transform.LEVEL:
            derived[spec.name] = source
        elif spec.transform == Transform.LOG_RETURN:
            derived[spec.name] = _aligned(log_returns(source).values, n_rows, 1)
        elif spec.transform == Transform.DIFFERENCE:
            derived[spec.name] = _aligned(np.diff(source), n_rows, 1)
        elif spec.transform == Transform.LAGGED_VOL:
            derived[spec.name] = _aligned(vol[:-1], n_rows, 1)

    names = tuple(CATALOG.feature_names)
    X_all = np.column_stack([derived[name] for name in names])
    usable = np.isfinite(X_all).all(axis=1) & np.isfinite(vol)
    rows = np.flatnonzero(usable)
    if len(rows) == 0:
        raise InsufficientRows("no row has every feature and a target defined")

    logger.debug("Built %d feature rows from %d table rows (d=%d)", len(rows), n_rows, d)
    return FeatureFrame(dates=table.dates[rows], feature_names=names,
                        X_raw=X_all[rows], y=vol[rows])


def split_indices(n: int, train_frac: float, seed: int):
    """Uniform random partition of range(n); each part returned in row order"""
    if not 0.0 < train_frac < 1.0:
        raise InputError(f"train fraction must be in (0, 1), got {train_frac}", module="features")
    n_train = int(round(n * train_frac))
    if n_train < 1 or n - n_train < 1:
        raise InsufficientRows(f"{n} samples cannot be split {train_frac:.2f}/{1 - train_frac:.2f}")

    order = np.random.default_rng(seed).permutation(n)
    return np.sort(order[:n_train]), np.sort(order[n_train:])


def build_dataset(table: PriceTable, d: int = DEFAULT_VOL_WINDOW, seed: int = 0,
                  train_frac: float = DEFAULT_TRAIN_FRAC,
                  columns: ColumnMap = ColumnMap()) -> Dataset:
    frame = build_features(table, d, columns)
    train_idx, test_idx = split_indices(len(frame), train_frac, seed)

    norm_params = fit_norm_params(frame.X_raw[train_idx], frame.feature_names)
    X = normalize_matrix(frame.X_raw, norm_params)

    logger.info("Dataset: %d samples (%d train / %d test), d=%d",
                len(frame), len(train_idx), len(test_idx), d)
    return Dataset(
        feature_names=frame.feature_names,
        dates=frame.dates,
        X=X,
        X_raw=frame.X_raw,
        y=frame.y,
        norm_params=norm_params,
        train_idx=train_idx,
        test_idx=test_idx,
        seed=seed,
        vol_window=d,
    )
