import json

import numpy as np
import pytest

from modelrank import metafeatures
from modelrank.forecasters import MODEL_KEYS
from modelrank.metafeatures import (
    DATASET_FEATURE_NAMES,
    build_row,
    dataset_features,
    feature_names,
    schema_hash,
)

from conftest import make_dataset


class TestDatasetFeatures:
    def test_counts_and_average_length(self):
        d = make_dataset([np.arange(8.0), np.arange(12.0)], horizon=3)
        vec = dataset_features(d)
        named = dict(zip(DATASET_FEATURE_NAMES, vec))
        assert named["num_series"] == 2.0
        assert named["avg_length"] == 10.0
        assert named["horizon"] == 3.0

    def test_trend_slope_closed_form(self):
        d = make_dataset([[1.0, 2.0, 3.0, 4.0]], horizon=1)
        named = dict(zip(DATASET_FEATURE_NAMES, dataset_features(d)))
        assert named["avg_trend_slope"] == pytest.approx(1.0, abs=1e-12)

    def test_constant_series_conventions(self):
        d = make_dataset([[5.0] * 6], horizon=1)
        named = dict(zip(DATASET_FEATURE_NAMES, dataset_features(d)))
        assert named["avg_std"] == 0.0
        assert named["avg_lag1_autocorr"] == 0.0
        assert named["avg_trend_slope"] == 0.0

    def test_stats_are_per_series_averages(self):
        d = make_dataset([[0.0, 0.0, 0.0, 0.0], [10.0, 10.0, 10.0, 10.0]], horizon=1)
        named = dict(zip(DATASET_FEATURE_NAMES, dataset_features(d)))
        assert named["avg_mean"] == 5.0
        assert named["avg_min"] == 5.0
        assert named["avg_max"] == 5.0


class TestRows:
    def test_width_is_ten_plus_onehot_plus_structural(self, trend_dataset):
        row = build_row(trend_dataset, "naive")
        assert len(row) == 10 + len(MODEL_KEYS) + 2 == len(feature_names())

    def test_width_constant_across_pairs(self, trend_dataset):
        other = make_dataset([np.arange(30.0)], horizon=2, name="o", group="o")
        widths = {len(build_row(d, m)) for d in (trend_dataset, other) for m in MODEL_KEYS}
        assert len(widths) == 1

    def test_dataset_block_independent_of_model(self, trend_dataset):
        a = build_row(trend_dataset, "naive")[:10]
        b = build_row(trend_dataset, "ridge_ar_large")[:10]
        np.testing.assert_array_equal(a, b)

    def test_model_block_independent_of_dataset(self, trend_dataset):
        other = make_dataset([np.arange(30.0)], horizon=2, name="o", group="o")
        a = build_row(trend_dataset, "ses")[10:]
        b = build_row(other, "ses")[10:]
        np.testing.assert_array_equal(a, b)

    def test_deterministic(self, trend_dataset):
        np.testing.assert_array_equal(
            build_row(trend_dataset, "drift"), build_row(trend_dataset, "drift")
        )

    def test_names_align_with_positions(self, trend_dataset):
        names = feature_names()
        row = build_row(trend_dataset, "snaive")
        assert row[names.index("model_is_snaive")] == 1.0
        assert row[names.index("model_is_naive")] == 0.0
        assert row[names.index("horizon")] == float(trend_dataset.horizon)


class TestSchema:
    def test_hash_changes_with_names(self):
        assert schema_hash(["a", "b"]) != schema_hash(["a", "c"])
        assert schema_hash() == schema_hash(feature_names())

    def test_save_schema_round_trip(self, tmp_path):
        path = tmp_path / "features.json"
        metafeatures.save_schema(path)
        assert json.loads(path.read_text()) == feature_names()
