"""Load daily market CSVs and repair missing values and outliers.

CSV format: UTF-8, comma separated, header row, a ``date`` column in
``YYYY-MM-DD`` and plain decimal numbers; an empty cell means missing.
Gaps are filled by linear interpolation over row position (trading days, not
calendar days) and outliers are found with a single-pass z-score rule.
"""

import logging
import re
from pathlib import Path
from typing import Dict, Sequence, Union

import numpy as np
import pandas as pd

from .errors import (DegenerateColumn, DuplicateDate, EdgeGap, InputError,
                     MalformedRow, NonMonotonicDate, SchemaMismatch)
from .models.tables import CellFlag, PriceTable, RawTable

logger = logging.getLogger(__name__)

DATE_COLUMN = "date"
DEFAULT_Z_THRESHOLD = 5.0

# first data row sits on line 2, after the header
_FIRST_DATA_LINE = 2
_PARSER_LINE = re.compile(r"line (\d+)")


def load_csv(path: Union[str, Path], schema: Sequence[str]) -> RawTable:
    """Read ``path`` keeping the ``date`` column and every column in ``schema``."""
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, na_filter=False,
                            skipinitialspace=True, encoding="utf-8")
    except FileNotFoundError as e:
        raise InputError(f"Data file not found: {path}", module="ingest") from e
    except pd.errors.EmptyDataError as e:
        raise SchemaMismatch(f"{path} has no header row") from e
    except pd.errors.ParserError as e:
        match = _PARSER_LINE.search(str(e))
        line = int(match.group(1)) if match else 0
        raise MalformedRow(line, "wrong number of fields") from e

    header = [name.strip() for name in frame.columns]
    frame.columns = header
    missing = [name for name in [DATE_COLUMN, *schema] if name not in header]
    if missing:
        raise SchemaMismatch(f"{path} is missing column(s): {', '.join(missing)}",
                             issues=missing)

    # short rows come back padded with NaN instead of strings
    short = frame[[DATE_COLUMN, *schema]].isna().any(axis=1).to_numpy()
    if short.any():
        raise MalformedRow(int(np.argmax(short)) + _FIRST_DATA_LINE, "too few fields")

    dates = pd.to_datetime(frame[DATE_COLUMN].str.strip(), format="%Y-%m-%d", errors="coerce")
    if dates.isna().any():
        row = int(np.argmax(dates.isna().to_numpy()))
        raise MalformedRow(row + _FIRST_DATA_LINE,
                           f"cannot parse date '{frame[DATE_COLUMN].iloc[row]}'")
    dates = dates.to_numpy().astype("datetime64[D]")

    steps = np.diff(dates).astype(np.int64)
    if (steps == 0).any():
        row = int(np.argmax(steps == 0)) + 1
        raise DuplicateDate(f"line {row + _FIRST_DATA_LINE}: date {dates[row]} repeats")
    if (steps < 0).any():
        row = int(np.argmax(steps < 0)) + 1
        raise NonMonotonicDate(
            f"line {row + _FIRST_DATA_LINE}: date {dates[row]} is not after {dates[row - 1]}")

    columns: Dict[str, np.ndarray] = {}
    for name in schema:
        text = frame[name].str.strip()
        values = pd.to_numeric(text.where(text != ""), errors="coerce").to_numpy(dtype=float)
        bad = (text != "").to_numpy() & ~np.isfinite(values)
        if bad.any():
            row = int(np.argmax(bad))
            raise MalformedRow(row + _FIRST_DATA_LINE,
                               f"column '{name}' has non-numeric value '{text.iloc[row]}'")
        columns[name] = values

    table = RawTable(dates=dates, columns=columns)
    logger.info("Loaded %d rows x %d columns from %s (%d missing cells)",
                len(table), len(columns), path, table.missing_count())
    return table


def write_csv(table: RawTable, path: Union[str, Path]) -> Path:
    """Write an ingest-compatible CSV; missing cells become empty strings"""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    table.to_frame().to_csv(target, index=False, na_rep="", lineterminator="\n")
    return target


def interpolate_missing(table: RawTable) -> PriceTable:
    """Fill interior gaps linearly between the nearest present neighbours."""
    columns = {}
    flags = {}
    positions = np.arange(len(table), dtype=float)

    for name, values in table.columns.items():
        missing = np.isnan(values)
        column_flags = np.full(len(values), CellFlag.ORIGINAL, dtype=np.int8)

        if missing.any():
            if len(values) == 0 or missing[0] or missing[-1]:
                raise EdgeGap(f"column '{name}' has a leading or trailing missing value")
            filled = values.copy()
            filled[missing] = np.interp(positions[missing], positions[~missing], values[~missing])
            column_flags[missing] = CellFlag.INTERPOLATED
            values = filled

        columns[name] = values
        flags[name] = column_flags

    result = PriceTable(dates=table.dates, columns=columns, flags=flags)
    filled_count = result.flag_count(CellFlag.INTERPOLATED)
    if filled_count:
        logger.info("Interpolated %d missing cells", filled_count)
    return result


def repair_outliers(table: PriceTable, z_threshold: float = DEFAULT_Z_THRESHOLD) -> PriceTable:
    """Replace cells more than ``z_threshold`` sample deviations from the column mean.

    Mean and deviation come from the input column once; replacements are
    interpolated between the nearest non-outlier neighbours, and held flat
    beyond the first or last of them.
    """
    if not np.isfinite(z_threshold) or z_threshold <= 0:
        raise InputError(f"z threshold must be positive, got {z_threshold}", module="ingest")

    columns = {}
    flags = {}
    positions = np.arange(len(table), dtype=float)

    for name, values in table.columns.items():
        if len(values) < 2:
            raise DegenerateColumn(f"column '{name}' needs at least 2 values for a z-score")
        std = float(np.std(values, ddof=1))
        if std == 0.0:
            raise DegenerateColumn(f"column '{name}' has zero variance; outlier threshold undefined")

        outliers = np.abs(values - np.mean(values)) > z_threshold * std
        column_flags = np.array(table.flags[name], dtype=np.int8)
        if outliers.all():
            raise DegenerateColumn(f"column '{name}': every cell exceeds the z threshold")

        if outliers.any():
            repaired = values.copy()
            repaired[outliers] = np.interp(positions[outliers], positions[~outliers],
                                           values[~outliers])
            column_flags[outliers] = CellFlag.OUTLIER_REPLACED
            logger.warning("Column '%s': replaced %d outlier(s) beyond %.1f std",
                           name, int(outliers.sum()), z_threshold)
            values = repaired

        columns[name] = values
        flags[name] = column_flags

    return PriceTable(dates=table.dates, columns=columns, flags=flags)


def clean_table(table: RawTable, z_threshold: float = DEFAULT_Z_THRESHOLD) -> PriceTable:
    """Interpolate gaps, then repair outliers"""
    return repair_outliers(interpolate_missing(table), z_threshold)
