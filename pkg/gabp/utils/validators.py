import math
import re
from pathlib import Path
from typing import List, Optional, Sequence, Tuple


class ConfigValidator:
    """Validation utilities for run configurations"""

    # CSV column names: letters, digits, underscores, hyphens, dots
    COLUMN_NAME_PATTERN = re.compile(r'^[A-Za-z_][A-Za-z0-9_.-]*$')

    # Column names reserved by the loader
    RESERVED_COLUMNS = ['date']

    @classmethod
    def validate_count(cls, value: int, label: str, minimum: int = 0,
                       maximum: Optional[int] = None) -> Tuple[bool, Optional[str]]:
        """Validate an integer knob against inclusive limits"""
        if isinstance(value, bool) or not isinstance(value, int):
            return False, f"{label} must be a whole number"

        if value < minimum:
            return False, f"{label} must be at least {minimum}"

        if maximum is not None and value > maximum:
            return False, f"{label} cannot exceed {maximum}"

        return True, None

    @classmethod
    def validate_positive(cls, value: float, label: str) -> Tuple[bool, Optional[str]]:
        """Validate a strictly positive finite real"""
        if not math.isfinite(value):
            return False, f"{label} must be finite"

        if value <= 0:
            return False, f"{label} must be greater than 0"

        return True, None

    @classmethod
    def validate_probability(cls, value: float, label: str) -> Tuple[bool, Optional[str]]:
        """Validate a probability in [0, 1]"""
        if not math.isfinite(value) or not 0.0 <= value <= 1.0:
            return False, f"{label} must be between 0 and 1"

        return True, None

    @classmethod
    def validate_fraction(cls, value: float, label: str) -> Tuple[bool, Optional[str]]:
        """Validate an open-interval fraction, e.g. the train share of a split"""
        if not math.isfinite(value) or not 0.0 < value < 1.0:
            return False, f"{label} must be strictly between 0 and 1"

        return True, None

    @classmethod
    def validate_bounds(cls, low: float, high: float) -> Tuple[bool, Optional[str]]:
        """Validate gene bounds (m_min, m_max)"""
        if not (math.isfinite(low) and math.isfinite(high)):
            return False, "Gene bounds must be finite"

        if low >= high:
            return False, "Gene lower bound must be below the upper bound"

        return True, None

    @classmethod
    def validate_column_names(cls, names: Sequence[str]) -> Tuple[bool, Optional[str]]:
        """Validate the raw CSV column names a run reads"""
        seen: List[str] = []
        for name in names:
            if not name:
                return False, "Column names cannot be empty"

            if not cls.COLUMN_NAME_PATTERN.match(name):
                return False, f"Column name '{name}' can only contain letters, numbers, underscores, dots and hyphens"

            if name.lower() in cls.RESERVED_COLUMNS:
                return False, f"Column name cannot be the reserved word: {name}"

            if name in seen:
                return False, f"Column '{name}' is mapped to more than one feature"
            seen.append(name)

        return True, None

    @classmethod
    def validate_file_path(cls, file_path: str, must_exist: bool = False) -> Tuple[bool, Optional[str]]:
        """Validate a data or config file path"""
        if not file_path:
            return True, None  # Empty path means "not set yet"

        if any(char in file_path for char in ['<', '>', '|', '*', '?']):
            return False, "File path contains invalid characters"

        path = Path(file_path)
        if must_exist and not path.is_file():
            return False, f"File not found: {file_path}"

        return True, None

    @classmethod
    def validate_number_text(cls, text: str, label: str, integer: bool = False) -> Tuple[bool, Optional[str]]:
        """Validate a number typed into a form field"""
        if not text or not text.strip():
            return False, f"{label} is required"

        try:
            value = int(text) if integer else float(text)
        except ValueError:
            kind = "a whole number" if integer else "a number"
            return False, f"{label} must be {kind}"

        if not integer and not math.isfinite(value):
            return False, f"{label} must be finite"

        return True, None
