from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Tuple

from scipy.stats import chi2


class Transform(Enum):
    LEVEL = "level"
    LOG_RETURN = "log_return"
    DIFFERENCE = "difference"
    LAGGED_VOL = "lagged_vol"


class FeatureGroup(Enum):
    ENDOGENOUS = "endogenous"
    EXOGENOUS = "exogenous"


@dataclass(frozen=True)
class FeatureSpec:
    name: str
    role: str  # ColumnMap attribute the feature is computed from
    transform: Transform
    group: FeatureGroup
    description: str

    @property
    def display_name(self) -> str:
        """Human-readable feature label"""
        return f"{self.name} ({self.transform.value} of {self.role})"


class FeatureCatalog:
    """Static tables: the eight network inputs and chi-square critical values"""

    CRITICAL_LEVELS = (0.90, 0.95, 0.99)
    MAX_DF = 30

    def __init__(self):
        self.features = self._initialize_features()
        self.critical_values = self._initialize_critical_values()

    def _initialize_features(self) -> List[FeatureSpec]:
        """Feature order is the column order of the network input"""
        return [
            FeatureSpec(
                name="close",
                role="close",
                transform=Transform.LEVEL,
                group=FeatureGroup.ENDOGENOUS,
                description="Index closing price in points",
            ),
            FeatureSpec(
                name="return",
                role="close",
                transform=Transform.LOG_RETURN,
                group=FeatureGroup.ENDOGENOUS,
                description="Daily logarithmic return of the index",
            ),
            FeatureSpec(
                name="volume",
                role="volume",
                transform=Transform.LEVEL,
                group=FeatureGroup.ENDOGENOUS,
                description="Traded volume in shares",
            ),
            FeatureSpec(
                name="realized_vol_lag1",
                role="close",
                transform=Transform.LAGGED_VOL,
                group=FeatureGroup.ENDOGENOUS,
                description="Realized volatility of the previous day",
            ),
            FeatureSpec(
                name="sse50_return",
                role="sse50",
                transform=Transform.LOG_RETURN,
                group=FeatureGroup.EXOGENOUS,
                description="Daily logarithmic return of the SSE 50 index",
            ),
            FeatureSpec(
                name="bond3m",
                role="bond3m",
                transform=Transform.DIFFERENCE,
                group=FeatureGroup.EXOGENOUS,
                description="Day-over-day change of the 3-month treasury yield",
            ),
            FeatureSpec(
                name="bond6m",
                role="bond6m",
                transform=Transform.DIFFERENCE,
                group=FeatureGroup.EXOGENOUS,
                description="Day-over-day change of the 6-month treasury yield",
            ),
            FeatureSpec(
                name="fx",
                role="fx",
                transform=Transform.LEVEL,
                group=FeatureGroup.EXOGENOUS,
                description="Daily RMB/USD exchange rate",
            ),
        ]

    def _initialize_critical_values(self) -> Dict[Tuple[int, float], float]:
        """Chi-square upper quantiles for df 1..30 at 90/95/99%"""
        return {
            (df, level): float(chi2.ppf(level, df))
            for df in range(1, self.MAX_DF + 1)
            for level in self.CRITICAL_LEVELS
        }

    @property
    def feature_names(self) -> List[str]:
        return [spec.name for spec in self.features]

    def get_features_for_group(self, group: FeatureGroup) -> List[FeatureSpec]:
        """Features of one group, in input order"""
        return [spec for spec in self.features if spec.group == group]

    def critical_value(self, df: int, level: float = 0.95) -> float:
        """Look up a chi-square critical value; KeyError outside the table"""
        key = (int(df), round(float(level), 2))
        if key not in self.critical_values:
            raise KeyError(f"No chi-square critical value for df={df}, level={level}")
        return self.critical_values[key]


CATALOG = FeatureCatalog()
