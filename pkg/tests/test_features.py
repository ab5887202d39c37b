"""
Tests for returns, realized volatility, normalization and dataset assembly
"""

import math

import numpy as np
import pytest

from gabp.errors import (ConstantFeature, DegenerateRange, InsufficientRows,
                         NonPositivePrice, WindowTooLarge)
from gabp.features import (build_dataset, build_features, denormalize, log_returns,
                           normalize, normalize_matrix, realized_vol, split_indices)
from gabp.ingest import clean_table
from gabp.models.dataset import NormParams, ReturnSeries
from gabp.models.feature_catalog import CATALOG
from gabp.models.tables import PriceTable
from gabp.synth import GarchParams, generate


def _market(n=120, seed=1):
    return clean_table(generate(GarchParams(n=n, seed=seed)))


def _brute_force_vol(values, d):
    out = []
    for t in range(len(values) - d):
        window = values[t:t + d + 1]
        mean = sum(window) / len(window)
        out.append(math.sqrt(sum((v - mean) ** 2 for v in window) / d))
    return out


def test_log_return_examples():
    """Test log returns against hand values"""
    assert log_returns([100.0, 100.0]).values.tolist() == [0.0]
    assert log_returns([100.0, 110.0]).values[0] == pytest.approx(0.0953102, abs=1e-7)
    assert np.allclose(log_returns([100.0, 90.0, 99.0]).values, [-0.1053605, 0.0953102], atol=1e-7)


def test_log_return_dates_follow_later_price():
    """Test each return carries the date of its closing price"""
    dates = np.array(["2024-01-01", "2024-01-02", "2024-01-03"], dtype="datetime64[D]")
    returns = log_returns([1.0, 2.0, 4.0], dates)
    assert returns.dates.tolist() == dates[1:].tolist()


def test_log_return_errors():
    """Test non-positive prices and single prices are rejected"""
    with pytest.raises(NonPositivePrice):
        log_returns([100.0, 0.0, 101.0])
    with pytest.raises(InsufficientRows):
        log_returns([100.0])


def test_realized_vol_examples():
    """Test the forward-window formula on hand-evaluated windows"""
    assert realized_vol(ReturnSeries(None, np.array([0.01, -0.01])), 1).values[0] == \
        pytest.approx(0.0141421, abs=1e-7)
    assert realized_vol(ReturnSeries(None, np.array([0.03, 0.0, -0.03])), 2).values[0] == \
        pytest.approx(0.03, abs=1e-12)
    assert realized_vol(ReturnSeries(None, np.full(5, 0.02)), 4).values.tolist() == [0.0]


def test_realized_vol_length_and_window_errors():
    """Test output length and the window bound"""
    returns = ReturnSeries(None, np.linspace(-0.01, 0.01, 30))
    assert len(realized_vol(returns, 21)) == 9
    with pytest.raises(WindowTooLarge):
        realized_vol(returns, 30)


def test_realized_vol_matches_brute_force():
    """Test the vectorized estimator against plain loops on random inputs"""
    rng = np.random.default_rng(7)
    for _ in range(1000):
        d = int(rng.integers(1, 11))
        values = rng.normal(0.0, 0.02, size=int(rng.integers(d + 1, d + 20)))
        result = realized_vol(ReturnSeries(None, values), d).values
        assert np.allclose(result, _brute_force_vol(values.tolist(), d), rtol=0, atol=1e-12)


def test_normalize_examples():
    """Test endpoints, midpoint and a hand value"""
    assert normalize(3.0, 3.0, 7.0) == -1.0
    assert normalize(7.0, 3.0, 7.0) == 1.0
    assert normalize(5.0, 3.0, 7.0) == 0.0
    assert normalize(2.0, 0.0, 10.0) == pytest.approx(-0.6)


def test_denormalize_inverts_normalize():
    """Test the round trip to 1e-12"""
    v = np.random.default_rng(0).uniform(-5, 5, 200)
    assert np.allclose(denormalize(normalize(v, -2.0, 3.0), -2.0, 3.0), v, rtol=0, atol=1e-12)


def test_normalize_degenerate_range():
    """Test max <= min is rejected"""
    with pytest.raises(DegenerateRange):
        normalize(1.0, 2.0, 2.0)
    with pytest.raises(DegenerateRange):
        denormalize(0.0, 3.0, 1.0)


def test_usable_row_count():
    """Test P rows and window d give P - 2 - d samples"""
    table = _market(n=60)
    frame = build_features(table, d=5)
    assert len(frame) == 60 - 2 - 5
    assert frame.X_raw.shape == (53, len(CATALOG.features))
    assert frame.feature_names == tuple(CATALOG.feature_names)


def test_lagged_vol_feature_is_previous_target():
    """Test the lagged-volatility input equals the prior row's target"""
    frame = build_features(_market(), d=10)
    column = frame.feature_names.index("realized_vol_lag1")
    assert np.array_equal(frame.X_raw[1:, column], frame.y[:-1])


def test_too_few_rows():
    """Test a table shorter than the window leaves no sample"""
    with pytest.raises(InsufficientRows):
        build_features(_market(n=20), d=18)


def test_split_ten_rows():
    """Test a 0.8 split of 10 samples is 8 and 2"""
    train, test = split_indices(10, 0.8, seed=4)
    assert len(train) == 8 and len(test) == 2
    assert sorted(train.tolist() + test.tolist()) == list(range(10))
    assert train.tolist() == sorted(train.tolist())


def test_split_is_deterministic():
    """Test the same seed gives the same partition"""
    first = split_indices(200, 0.8, seed=9)
    second = split_indices(200, 0.8, seed=9)
    assert np.array_equal(first[0], second[0])
    assert np.array_equal(first[1], second[1])


def test_dataset_scaling_uses_train_rows():
    """Test train features span exactly [-1, 1] per column"""
    dataset = build_dataset(_market(), d=10, seed=3)
    train = dataset.train_X
    assert np.allclose(train.min(axis=0), -1.0)
    assert np.allclose(train.max(axis=0), 1.0)
    assert len(dataset.train_idx) == round(len(dataset) * 0.8)
    assert np.intersect1d(dataset.train_idx, dataset.test_idx).size == 0


def test_dataset_frame_columns():
    """Test the dumped dataset has features, target and split"""
    dataset = build_dataset(_market(), d=10, seed=3)
    frame = dataset.to_frame()
    assert list(frame.columns) == ["date", *CATALOG.feature_names, "target_rv", "split"]
    assert (frame["split"] == "test").sum() == len(dataset.test_idx)


def test_constant_feature_rejected():
    """Test a constant exogenous level cannot be scaled"""
    table = _market()
    columns = dict(table.columns)
    columns["fx"] = np.full(len(table), 6.5)
    flat = PriceTable(dates=table.dates, columns=columns)
    with pytest.raises(ConstantFeature) as info:
        build_dataset(flat, d=10)
    assert info.value.issues == ["fx"]


def test_realized_vol_scales_with_returns():
    """Test scaling returns by c scales volatility by |c|"""
    returns = np.random.default_rng(7).standard_normal(60) * 0.01
    base = realized_vol(ReturnSeries(None, returns), 5).values
    for c in (3.0, -2.0):
        scaled = realized_vol(ReturnSeries(None, c * returns), 5).values
        assert np.allclose(scaled, abs(c) * base, rtol=1e-12, atol=0.0)


def test_test_rows_are_not_clipped():
    """Test rows outside the training range scale past [-1, 1]"""
    params = NormParams(mins=np.array([0.0, 10.0]), maxs=np.array([1.0, 20.0]))
    scaled = normalize_matrix(np.array([[2.0, 5.0], [-1.0, 30.0]]), params)
    assert scaled.tolist() == [[3.0, -2.0], [-3.0, 3.0]]

    dataset = build_dataset(_market(), d=10, seed=3)
    expected = normalize_matrix(dataset.X_raw[dataset.test_idx], dataset.norm_params)
    assert np.array_equal(dataset.test_X, expected)
