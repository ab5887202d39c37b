"""
Tests for CSV loading, gap interpolation and outlier repair
"""

import numpy as np
import pytest

from gabp.errors import (DegenerateColumn, DuplicateDate, EdgeGap, MalformedRow,
                         NonMonotonicDate, SchemaMismatch)
from gabp.ingest import clean_table, interpolate_missing, load_csv, repair_outliers, write_csv
from gabp.models.tables import CellFlag, PriceTable, RawTable


def _write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


def _raw(values, name="close"):
    dates = np.arange(len(values)).astype("timedelta64[D]") + np.datetime64("2024-01-01")
    return RawTable(dates=dates, columns={name: np.asarray(values, dtype=float)})


def test_load_well_formed_file(tmp_path):
    """Test a three-row file loads every date and value"""
    path = _write(tmp_path, "date,close,volume\n"
                            "2024-01-02,10.5,100\n"
                            "2024-01-03,11.0,120\n"
                            "2024-01-04,10.8,90\n")
    table = load_csv(path, ["close", "volume"])

    assert len(table) == 3
    assert table.column_names == ["close", "volume"]
    assert str(table.dates[0]) == "2024-01-02"
    assert table.columns["close"].tolist() == [10.5, 11.0, 10.8]
    assert table.missing_count() == 0


def test_empty_cell_is_missing(tmp_path):
    """Test an empty cell becomes a missing value at its position"""
    path = _write(tmp_path, "date,close\n2024-01-02,10\n2024-01-03,\n2024-01-04,12\n")
    table = load_csv(path, ["close"])

    assert np.isnan(table.columns["close"][1])
    assert table.missing_count() == 1


def test_extra_columns_are_ignored(tmp_path):
    """Test columns outside the schema are dropped"""
    path = _write(tmp_path, "date,close,comment\n2024-01-02,10,x\n2024-01-03,11,y\n")
    table = load_csv(path, ["close"])
    assert table.column_names == ["close"]


def test_decreasing_dates_rejected(tmp_path):
    """Test out-of-order dates raise NonMonotonicDate"""
    path = _write(tmp_path, "date,close\n2024-01-02,10\n2024-01-01,11\n")
    with pytest.raises(NonMonotonicDate):
        load_csv(path, ["close"])


def test_duplicate_dates_rejected(tmp_path):
    """Test a repeated date raises DuplicateDate"""
    path = _write(tmp_path, "date,close\n2024-01-02,10\n2024-01-02,11\n")
    with pytest.raises(DuplicateDate):
        load_csv(path, ["close"])


def test_missing_column_rejected(tmp_path):
    """Test a schema column absent from the header raises SchemaMismatch"""
    path = _write(tmp_path, "date,close\n2024-01-02,10\n")
    with pytest.raises(SchemaMismatch) as info:
        load_csv(path, ["close", "volume"])
    assert info.value.issues == ["volume"]


def test_non_numeric_cell_reports_line(tmp_path):
    """Test a non-numeric cell raises MalformedRow with its file line"""
    path = _write(tmp_path, "date,close\n2024-01-02,10\n2024-01-03,abc\n")
    with pytest.raises(MalformedRow) as info:
        load_csv(path, ["close"])
    assert info.value.line == 3


def test_bad_date_reports_line(tmp_path):
    """Test an unparseable date raises MalformedRow"""
    path = _write(tmp_path, "date,close\n2024-01-02,10\n2024/01/03,11\n")
    with pytest.raises(MalformedRow) as info:
        load_csv(path, ["close"])
    assert info.value.line == 3


def test_too_many_fields_rejected(tmp_path):
    """Test a row with extra fields raises MalformedRow"""
    path = _write(tmp_path, "date,close\n2024-01-02,10\n2024-01-03,11,12\n")
    with pytest.raises(MalformedRow):
        load_csv(path, ["close"])


def test_missing_file_is_input_error(tmp_path):
    """Test a missing file exits with the input error code"""
    from gabp.errors import InputError

    with pytest.raises(InputError) as info:
        load_csv(tmp_path / "absent.csv", ["close"])
    assert info.value.exit_code == 2


def test_interpolate_single_gap():
    """Test one gap is filled with the midpoint"""
    result = interpolate_missing(_raw([1.0, np.nan, 3.0]))
    assert result.columns["close"].tolist() == [1.0, 2.0, 3.0]
    assert result.flags["close"].tolist() == [CellFlag.ORIGINAL, CellFlag.INTERPOLATED,
                                              CellFlag.ORIGINAL]


def test_interpolate_two_gaps():
    """Test consecutive gaps are filled on the straight line"""
    result = interpolate_missing(_raw([1.0, np.nan, np.nan, 4.0]))
    assert np.allclose(result.columns["close"], [1.0, 2.0, 3.0, 4.0], atol=1e-12)
    assert result.flag_count(CellFlag.INTERPOLATED) == 2


def test_interpolate_edge_gap():
    """Test a leading or trailing gap raises EdgeGap"""
    with pytest.raises(EdgeGap):
        interpolate_missing(_raw([np.nan, 2.0]))
    with pytest.raises(EdgeGap):
        interpolate_missing(_raw([1.0, 2.0, np.nan]))


def test_interpolate_leaves_present_cells():
    """Test interpolation never touches non-missing cells"""
    values = [5.0, np.nan, 7.5, 8.0, np.nan, np.nan, 2.0]
    result = interpolate_missing(_raw(values))
    present = ~np.isnan(values)
    assert np.array_equal(result.columns["close"][present], np.asarray(values)[present])
    assert not np.isnan(result.columns["close"]).any()


def test_outliers_unchanged_when_within_threshold():
    """Test a column with no extreme cell passes through"""
    table = PriceTable(dates=_raw([0.0] * 5).dates,
                       columns={"close": np.array([1.0, 2.0, 3.0, 2.0, 1.0])})
    result = repair_outliers(table)
    assert np.array_equal(result.columns["close"], table.columns["close"])
    assert result.flag_count(CellFlag.OUTLIER_REPLACED) == 0


def test_constant_column_is_degenerate():
    """Test zero variance raises DegenerateColumn"""
    table = PriceTable(dates=_raw([0.0] * 5).dates, columns={"close": np.ones(5)})
    with pytest.raises(DegenerateColumn):
        repair_outliers(table)


def test_single_outlier_flagged_and_interpolated():
    """Test exactly the injected cell is replaced by its neighbours' midpoint"""
    rng = np.random.default_rng(42)
    values = rng.standard_normal(100)
    values[37] = 50.0
    table = PriceTable(dates=_raw(values).dates, columns={"close": values})

    # direct z-score scan
    z = np.abs(values - values.mean()) / values.std(ddof=1)
    assert np.flatnonzero(z > 5.0).tolist() == [37]

    result = repair_outliers(table, 5.0)
    assert result.flagged_cells(CellFlag.OUTLIER_REPLACED) == {"close": [37]}
    assert result.columns["close"][37] == pytest.approx((values[36] + values[38]) / 2)
    untouched = np.arange(100) != 37
    assert np.array_equal(result.columns["close"][untouched], values[untouched])


def test_clean_table_keeps_interpolation_flags(tmp_path):
    """Test the full clean keeps provenance of both repairs"""
    path = _write(tmp_path, "date,close\n" + "".join(
        f"2024-01-{day:02d},{'' if day == 5 else 10 + (day % 3)}\n" for day in range(1, 21)))
    table = clean_table(load_csv(path, ["close"]))
    assert table.flagged_cells(CellFlag.INTERPOLATED) == {"close": [4]}
    assert not np.isnan(table.columns["close"]).any()


def test_write_csv_reloads(tmp_path):
    """Test written CSVs load back with gaps preserved"""
    raw = _raw([1.25, np.nan, 3.5])
    path = write_csv(raw, tmp_path / "out" / "data.csv")
    again = load_csv(path, ["close"])

    assert np.array_equal(again.dates, raw.dates)
    assert again.columns["close"][0] == 1.25
    assert np.isnan(again.columns["close"][1])


def test_clean_table_passes_clean_data_through():
    """Test a gap-free column within the threshold comes out bit-identical"""
    values = 100.0 + np.random.default_rng(9).standard_normal(50)
    raw = _raw(values)
    table = clean_table(raw)
    assert np.array_equal(table.columns["close"], values)
    assert table.flag_count(CellFlag.INTERPOLATED) == 0
    assert table.flag_count(CellFlag.OUTLIER_REPLACED) == 0


def test_repair_outliers_is_idempotent():
    """Test a second pass changes nothing once the outlier is replaced"""
    values = np.random.default_rng(42).standard_normal(100)
    values[37] = 50.0
    table = PriceTable(dates=_raw(values).dates, columns={"close": values})

    once = repair_outliers(table, 5.0)
    twice = repair_outliers(once, 5.0)
    assert np.array_equal(twice.columns["close"], once.columns["close"])
    assert twice.flagged_cells(CellFlag.OUTLIER_REPLACED) == {"close": [37]}
