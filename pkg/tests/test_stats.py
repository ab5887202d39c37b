"""
Tests for descriptive statistics, Ljung-Box Q² and ARCH-LM
"""

import numpy as np
import pytest

from gabp.errors import DegenerateSeries, InputError, SeriesTooShort, SingularRegression
from gabp.stats import arch_lm, critical_value, ljung_box_squared, summarize
from gabp.synth import GarchParams, simulate_returns


def test_two_point_moments():
    """Test moments of [-1, 1] by hand"""
    summary = summarize([-1.0, 1.0], lag=0)
    assert summary.mean == 0.0
    assert summary.std_dev == pytest.approx(np.sqrt(2.0))
    assert summary.skewness == pytest.approx(0.0)
    assert summary.excess_kurtosis == pytest.approx(-2.0)
    assert summary.max == 1.0 and summary.min == -1.0


def test_constant_series_is_degenerate():
    """Test a constant series has no skewness or kurtosis"""
    with pytest.raises(DegenerateSeries):
        summarize(np.ones(50))


def test_short_series_rejected():
    """Test summarize needs lag + 2 observations"""
    with pytest.raises(SeriesTooShort):
        summarize(np.arange(5.0), lag=10)


def test_normal_moments_near_zero():
    """Test skewness and excess kurtosis of normal draws"""
    x = np.random.default_rng(3).standard_normal(2783)
    summary = summarize(x)
    assert abs(summary.skewness) < 0.15
    assert abs(summary.excess_kurtosis) < 0.3
    assert summary.n_obs == 2783


def test_alternating_series_has_zero_q():
    """Test ±c has constant squares and Q = 0"""
    x = np.tile([0.5, -0.5], 50)
    assert ljung_box_squared(x, 10) == 0.0


def test_ljung_box_matches_reference():
    """Test Q² against statsmodels on the squared demeaned series"""
    diagnostic = pytest.importorskip("statsmodels.stats.diagnostic")
    x = np.random.default_rng(11).standard_normal(1000)
    squared = (x - x.mean()) ** 2

    reference = diagnostic.acorr_ljungbox(squared, lags=[10], return_df=True)["lb_stat"].iloc[0]
    assert ljung_box_squared(x, 10) == pytest.approx(float(reference), rel=1e-8)


def test_arch_lm_matches_reference():
    """Test the LM statistic against statsmodels het_arch"""
    diagnostic = pytest.importorskip("statsmodels.stats.diagnostic")
    x = np.random.default_rng(12).standard_normal(1000)

    reference = diagnostic.het_arch(x - x.mean(), 10)[0]
    assert arch_lm(x, 10) == pytest.approx(float(reference), rel=1e-6)


def test_arch_lm_constant_series_is_singular():
    """Test a constant series has collinear lags"""
    with pytest.raises(SingularRegression):
        arch_lm(np.full(100, 0.3), 5)


def test_arch_lm_short_series():
    """Test ARCH-LM needs more than 2 * lag observations"""
    with pytest.raises(SeriesTooShort):
        arch_lm(np.arange(20.0), 10)


def test_garch_series_shows_clustering():
    """Test both statistics flag a simulated GARCH(1,1) series"""
    returns, _ = simulate_returns(GarchParams(n=2000, seed=5))
    threshold = critical_value(10)

    assert threshold == pytest.approx(18.307, abs=1e-3)
    assert ljung_box_squared(returns, 10) > threshold
    assert arch_lm(returns, 10) > threshold


def test_arch_lm_discriminates_garch_from_iid():
    """Test rejection rates over 100 seeds with and without ARCH effects"""
    threshold = critical_value(10)
    garch = sum(arch_lm(simulate_returns(GarchParams(seed=s))[0], 10) > threshold
                for s in range(100))
    iid = sum(arch_lm(simulate_returns(GarchParams(alpha=0.0, beta=0.0, seed=s))[0], 10) > threshold
              for s in range(100))

    assert garch >= 95
    assert iid <= 15


def test_summary_significance_flags():
    """Test the JSON summary carries the 95% decision"""
    returns, _ = simulate_returns(GarchParams(n=2000, seed=5))
    data = summarize(returns).to_dict()
    assert data["critical_value_95"] == pytest.approx(18.307, abs=1e-3)
    assert data["arch_significant_95"] is True


def test_critical_value_table_limits():
    """Test lookups outside df 1..30 are input errors"""
    assert critical_value(1) == pytest.approx(3.841, abs=1e-3)
    assert critical_value(30, 0.99) == pytest.approx(50.892, abs=1e-3)
    with pytest.raises(InputError):
        critical_value(31)


def test_non_finite_input_rejected():
    """Test NaN in the series is an input error"""
    with pytest.raises(InputError):
        summarize([1.0, np.nan, 2.0], lag=0)


def test_moments_ignore_order():
    """Test mean, deviation and shape moments are invariant to permutation"""
    returns, _ = simulate_returns(GarchParams(n=500, seed=8))
    shuffled = np.random.default_rng(0).permutation(returns)
    original, permuted = summarize(returns), summarize(shuffled)

    for name in ("mean", "max", "min", "std_dev", "skewness", "excess_kurtosis"):
        assert getattr(permuted, name) == pytest.approx(getattr(original, name), rel=1e-9, abs=1e-12)


def test_shift_leaves_shape_and_dependence_unchanged():
    """Test adding a constant moves only the mean"""
    returns, _ = simulate_returns(GarchParams(n=1000, seed=4))
    base, shifted = summarize(returns), summarize(returns + 0.05)

    assert shifted.mean == pytest.approx(base.mean + 0.05)
    for name in ("std_dev", "skewness", "excess_kurtosis", "q2_stat", "arch_stat"):
        assert getattr(shifted, name) == pytest.approx(getattr(base, name), rel=1e-6, abs=1e-9)


def test_ljung_box_ignores_scale():
    """Test Q² of c·x equals Q² of x"""
    returns, _ = simulate_returns(GarchParams(n=1000, seed=6))
    q = ljung_box_squared(returns, 10)
    assert ljung_box_squared(250.0 * returns, 10) == pytest.approx(q, rel=1e-9)
    assert ljung_box_squared(-0.5 * returns, 10) == pytest.approx(q, rel=1e-9)
