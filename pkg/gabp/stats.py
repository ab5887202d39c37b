"""Descriptive statistics and volatility-clustering diagnostics.

``summarize`` reports the moments together with a Ljung-Box statistic on the
squared demeaned series and Engle's ARCH-LM statistic, both at ``lag``.
Skewness and kurtosis use the population (n) standardization, the standard
deviation the sample (n - 1) one.
"""

import logging
import warnings
from dataclasses import asdict, dataclass
from typing import Any, Dict

import numpy as np
from scipy import stats as sps
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from .errors import DegenerateSeries, InputError, SeriesTooShort, SingularRegression
from .models.feature_catalog import CATALOG

logger = logging.getLogger(__name__)

DEFAULT_LAG = 10
PIVOT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class SeriesSummary:
    n_obs: int
    mean: float
    max: float
    min: float
    std_dev: float
    skewness: float
    excess_kurtosis: float
    q2_stat: float
    arch_stat: float
    lag: int

    def is_significant(self, statistic: str, level: float = 0.95) -> bool:
        """Compare ``q2_stat`` or ``arch_stat`` with the chi-square(lag) critical value"""
        if self.lag == 0:
            return False
        return getattr(self, statistic) > critical_value(self.lag, level)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        if 1 <= self.lag <= CATALOG.MAX_DF:
            data['critical_value_95'] = critical_value(self.lag, 0.95)
            data['q2_significant_95'] = self.is_significant('q2_stat')
            data['arch_significant_95'] = self.is_significant('arch_stat')
        return data


def critical_value(df: int, level: float = 0.95) -> float:
    """Chi-square critical value for df 1..30 at level 0.90, 0.95 or 0.99"""
    try:
        return CATALOG.critical_value(df, level)
    except KeyError as e:
        raise InputError(str(e.args[0]), module="stats") from e


def _as_series(x) -> np.ndarray:
    values = np.asarray(x, dtype=float).ravel()
    if not np.isfinite(values).all():
        raise InputError("series contains non-finite values", module="stats")
    return values


def _check_lag(lag: int) -> int:
    if int(lag) != lag or lag < 0:
        raise InputError(f"lag must be a non-negative integer, got {lag}", module="stats")
    return int(lag)


def summarize(x, lag: int = DEFAULT_LAG) -> SeriesSummary:
    values = _as_series(x)
    lag = _check_lag(lag)
    n = len(values)
    if n < max(lag + 2, 2):
        raise SeriesTooShort(f"need at least {lag + 2} observations for lag {lag}, got {n}")

    std_dev = float(np.std(values, ddof=1))
    if std_dev == 0.0:
        raise DegenerateSeries("series is constant; skewness and kurtosis are undefined")

    return SeriesSummary(
        n_obs=n,
        mean=float(np.mean(values)),
        max=float(np.max(values)),
        min=float(np.min(values)),
        std_dev=std_dev,
        skewness=float(sps.skew(values, bias=True)),
        excess_kurtosis=float(sps.kurtosis(values, fisher=True, bias=True)),
        q2_stat=ljung_box_squared(values, lag),
        arch_stat=arch_lm(values, lag),
        lag=lag,
    )


def _squared_demeaned(values: np.ndarray) -> np.ndarray:
    return (values - values.mean()) ** 2


def ljung_box_squared(x, lag: int) -> float:
    """Q = n(n+2) * sum_k rho_k^2 / (n-k) over the squared demeaned series.

    A constant squared series has every autocorrelation defined as 0.
    """
    values = _as_series(x)
    lag = _check_lag(lag)
    n = len(values)
    if n <= lag:
        raise SeriesTooShort(f"Ljung-Box at lag {lag} needs more than {lag} observations, got {n}")

    squared = _squared_demeaned(values)
    centred = squared - squared.mean()
    denominator = float(np.dot(centred, centred))
    if denominator == 0.0:
        return 0.0

    q = 0.0
    for k in range(1, lag + 1):
        rho = float(np.dot(centred[k:], centred[:-k])) / denominator
        q += rho * rho / (n - k)
    return max(n * (n + 2) * q, 0.0)


def arch_lm(x, lag: int) -> float:
    """Engle's LM statistic: n_eff * R^2 of s_t on [1, s_{t-1}, ..., s_{t-lag}].

    ``s`` is the squared demeaned series and ``n_eff = n - lag``. The normal
    equations are solved by partial-pivot LU; a pivot below 1e-12 times the
    largest diagonal entry of the normal matrix means collinear regressors.
    """
    values = _as_series(x)
    lag = _check_lag(lag)
    n = len(values)
    if n <= 2 * lag:
        raise SeriesTooShort(f"ARCH-LM at lag {lag} needs more than {2 * lag} observations, got {n}")
    if lag == 0:
        return 0.0

    squared = _squared_demeaned(values)
    target = squared[lag:]
    n_eff = len(target)
    design = np.column_stack(
        [np.ones(n_eff)] + [squared[lag - k:n - k] for k in range(1, lag + 1)])

    normal = design.T @ design
    rhs = design.T @ target
    scale = float(np.max(np.abs(np.diag(normal))))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(normal, check_finite=False)
    if scale == 0.0 or float(np.min(np.abs(np.diag(lu)))) < PIVOT_TOLERANCE * scale:
        raise SingularRegression(f"lagged squares at lag {lag} are collinear")
    beta = lu_solve((lu, piv), rhs, check_finite=False)

    residual = target - design @ beta
    total = target - target.mean()
    total_ss = float(np.dot(total, total))
    if total_ss == 0.0:
        raise SingularRegression("squared series is constant; R^2 is undefined")
    r_squared = 1.0 - float(np.dot(residual, residual)) / total_ss
    statistic = n_eff * r_squared
    logger.debug("ARCH-LM lag=%d n_eff=%d R2=%.6g", lag, n_eff, r_squared)
    return float(min(max(statistic, 0.0), n_eff))
