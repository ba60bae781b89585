import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modelrank.metrics import UndefinedMetricError, mape, mase, rmse


class TestMase:
    def test_perfect_forecast_is_zero(self):
        assert mase([1.0, 2.0], [1.0, 2.0], [1, 2, 3, 4], season=1) == 0.0

    def test_hand_computed_value(self):
        # denominator: mean |step| of [1..6] at lag 1 = 1; errors |1|, |2|
        value = mase([7.0, 8.0], [6.0, 6.0], [1, 2, 3, 4, 5, 6], season=1)
        assert value == pytest.approx(1.5, abs=1e-9)

    def test_constant_insample_is_undefined(self):
        with pytest.raises(UndefinedMetricError, match="MASE"):
            mase([1.0], [2.0], [5.0, 5.0, 5.0], season=1)

    def test_seasonal_lag_scaling(self):
        # lag-2 diffs of [1,2,3,4,5,6]: |3-1|,|4-2|,|5-3|,|6-4| -> mean 2
        value = mase([10.0], [6.0], [1, 2, 3, 4, 5, 6], season=2)
        assert value == pytest.approx(2.0, abs=1e-9)

    def test_insample_shorter_than_season_rejected(self):
        with pytest.raises(ValueError):
            mase([1.0], [1.0], [1.0, 2.0], season=2)


class TestRmse:
    def test_identical_vectors(self):
        assert rmse([3.0, 4.0], [3.0, 4.0]) == 0.0

    def test_hand_computed_value(self):
        assert rmse([0.0, 0.0], [3.0, 4.0]) == pytest.approx(np.sqrt(12.5), abs=1e-9)

    def test_single_point(self):
        assert rmse([5.0], [3.0]) == pytest.approx(2.0, abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            rmse([1.0, 2.0], [1.0])


class TestMape:
    def test_ten_percent(self):
        assert mape([100.0], [110.0]) == pytest.approx(0.10, abs=1e-12)

    def test_perfect_forecast(self):
        assert mape([2.0, 3.0], [2.0, 3.0]) == 0.0

    def test_zero_actual_is_undefined(self):
        with pytest.raises(UndefinedMetricError, match="MAPE"):
            mape([0.0, 1.0], [1.0, 1.0])


@st.composite
def forecast_case(draw):
    n = draw(st.integers(min_value=1, max_value=8))
    finite = st.floats(min_value=0.1, max_value=1e3, allow_nan=False)
    actual = draw(st.lists(finite, min_size=n, max_size=n))
    forecast = draw(st.lists(finite, min_size=n, max_size=n))
    insample = draw(st.lists(finite, min_size=4, max_size=12))
    return np.array(actual), np.array(forecast), np.array(insample)


def _degenerate_scale(insample) -> bool:
    # Near-constant in-samples leave a denominator of rounding noise; the
    # exact-arithmetic invariance doesn't survive that in floats.
    return np.mean(np.abs(np.diff(insample))) < 1e-6 * np.max(np.abs(insample))


@settings(max_examples=200, deadline=None)
@given(forecast_case(), st.floats(min_value=0.01, max_value=100.0))
def test_scale_behavior(case, c):
    actual, forecast, insample = case
    if _degenerate_scale(insample):
        return
    base_mase = mase(actual, forecast, insample, season=1)
    base_rmse = rmse(actual, forecast)
    base_mape = mape(actual, forecast)
    assert mase(c * actual, c * forecast, c * insample, 1) == pytest.approx(base_mase, rel=1e-9)
    assert mape(c * actual, c * forecast) == pytest.approx(base_mape, rel=1e-9)
    assert rmse(c * actual, c * forecast) == pytest.approx(c * base_rmse, rel=1e-9)


@settings(max_examples=100, deadline=None)
@given(forecast_case())
def test_nonnegative_and_zero_iff_equal(case):
    actual, forecast, insample = case
    if _degenerate_scale(insample):
        return
    values = (
        mase(actual, forecast, insample, 1),
        rmse(actual, forecast),
        mape(actual, forecast),
    )
    assert all(v >= 0 for v in values)
    if np.array_equal(actual, forecast):
        assert all(v == 0 for v in values)
    elif not np.array_equal(actual, forecast):
        assert rmse(actual, forecast) > 0
