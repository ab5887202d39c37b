"""Seeded synthetic market: GARCH(1,1) index returns plus exogenous columns.

    r_t = mu + sigma_t * z_t,   e_t = r_t - mu
    sigma^2_t = omega + alpha * e^2_{t-1} + beta * sigma^2_{t-1}

The recursion starts at the unconditional variance omega / (1 - alpha - beta).
The output table has the loader's default column names, so the CSV written
from it feeds straight back into ``train``.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import pandas as pd

from .errors import InputError, NonStationary
from .models.run_config import ColumnMap
from .models.tables import RawTable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GarchParams:
    omega: float = 1e-6
    alpha: float = 0.1
    beta: float = 0.85
    mu: float = 0.0005
    n: int = 2783
    seed: int = 0
    start: str = "2010-01-04"

    def check(self):
        if self.omega <= 0:
            raise NonStationary(f"omega must be positive, got {self.omega}")
        if self.alpha < 0 or self.beta < 0:
            raise NonStationary(f"alpha and beta must be non-negative, got {self.alpha}, {self.beta}")
        if self.alpha + self.beta >= 1:
            raise NonStationary(
                f"alpha + beta = {self.alpha + self.beta:g} must be below 1 for a finite variance")
        if int(self.n) != self.n or self.n < 2:
            raise InputError(f"series length must be an integer >= 2, got {self.n}", module="synth")

    @property
    def unconditional_variance(self) -> float:
        return self.omega / (1.0 - self.alpha - self.beta)


def simulate_returns(p: GarchParams, rng: np.random.Generator = None) -> Tuple[np.ndarray, np.ndarray]:
    """Returns and their conditional variances, both of length ``p.n``"""
    p.check()
    rng = rng if rng is not None else np.random.default_rng(p.seed)
    z = rng.standard_normal(p.n)

    returns = np.empty(p.n)
    variances = np.empty(p.n)
    variance = p.unconditional_variance
    for t in range(p.n):
        variances[t] = variance
        returns[t] = p.mu + np.sqrt(variance) * z[t]
        shock = returns[t] - p.mu
        variance = p.omega + p.alpha * shock * shock + p.beta * variance
    return returns, variances


def generate(p: GarchParams = GarchParams(), columns: ColumnMap = ColumnMap()) -> RawTable:
    rng = np.random.default_rng(p.seed)
    returns, variances = simulate_returns(p, rng)
    n = p.n
    previous = np.concatenate([[0.0], returns[:-1]])

    close = 100.0 * np.exp(np.cumsum(returns))
    # busier sessions on large moves
    volume = rng.lognormal(mean=np.log(5e7) + 25.0 * np.abs(returns), sigma=0.3)
    sse50 = 2500.0 * np.exp(np.cumsum(0.9 * returns + rng.normal(0.0, 0.004, n)))

    rate_shocks = rng.normal(0.0, 0.01, n) - 0.5 * previous
    bond3m = 2.5 + np.cumsum(rate_shocks) * 0.5 + 0.2 * np.sin(np.arange(n) / 250.0)
    bond6m = bond3m + 0.15 + rng.normal(0.0, 0.02, n)
    fx = 6.5 * np.exp(np.cumsum(rng.normal(0.0, 0.002, n) - 0.05 * previous))

    dates = pd.bdate_range(start=p.start, periods=n).to_numpy().astype("datetime64[D]")
    values = [close, volume, sse50, bond3m, bond6m, fx]
    table = RawTable(dates=dates, columns=dict(zip(columns.schema(), values)))

    logger.info("Simulated %d days (omega=%g alpha=%g beta=%g, seed %d); mean conditional vol %.4g",
                n, p.omega, p.alpha, p.beta, p.seed, float(np.sqrt(variances).mean()))
    return table
