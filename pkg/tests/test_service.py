import numpy as np
import pytest
from fastapi.testclient import TestClient

from modelrank import synthetic
from modelrank.evaluation import run_study
from modelrank.metalearn import LearnerConfig
from modelrank.metafeatures import feature_names
from modelrank.propertydb import PROPERTY_NAMES
from modelrank.service import ServiceState, create_app

from conftest import make_dataset


@pytest.fixture(scope="module")
def served():
    datasets = []
    for family in synthetic.generate_demo_families(seed=3, n_families=5):
        datasets.append(family)
        from modelrank.data import subsample_variants

        datasets.extend(subsample_variants(family, [0.5], seed=3))
    study = run_study(
        datasets, n_folds=3, seed=3, repetitions=1,
        config=LearnerConfig(seed=3, permutation_repeats=2),
    )
    registry = {d.name: d for d in datasets}
    # A manifest-only dataset: known to the registry but never profiled.
    fresh = make_dataset(
        [np.arange(40.0) + 10 for _ in range(3)], horizon=4, name="unseen", group="unseen"
    )
    registry["unseen"] = fresh
    state = ServiceState(db=study.db, bundle=study.bundle, datasets=registry)
    return TestClient(create_app(state))


class TestLifecycle:
    def test_503_before_state_loaded(self):
        client = TestClient(create_app(None))
        assert client.get("/api/datasets").status_code == 503

    def test_datasets_listing(self, served):
        body = served.get("/api/datasets").json()
        assert len(body) == 11
        entry = body[0]
        assert set(entry) == {"name", "group", "horizon", "num_series"}


class TestRecommendEndpoint:
    def test_equal_weights_echo_one_ninth(self, served):
        weights = {p: 5.0 for p in PROPERTY_NAMES}
        resp = served.post("/api/recommend", json={"dataset": "demo00", "weights": weights})
        assert resp.status_code == 200
        echoed = resp.json()["weights"]
        for p in PROPERTY_NAMES:
            assert echoed[p] == pytest.approx(1 / 9)

    def test_single_weight_ranks_by_that_property(self, served):
        resp = served.post("/api/recommend", json={"dataset": "demo00", "weights": {"mase": 1}})
        body = resp.json()
        ranking = body["ranking"]
        by_est = sorted(ranking, key=lambda e: (-e["estimates"]["mase"], e["model"]))
        assert [e["model"] for e in ranking] == [e["model"] for e in by_est]

    def test_unknown_dataset_404(self, served):
        resp = served.post("/api/recommend", json={"dataset": "nope"})
        assert resp.status_code == 404

    def test_negative_weight_422_names_field(self, served):
        resp = served.post(
            "/api/recommend", json={"dataset": "demo00", "weights": {"mase": -2.0}}
        )
        assert resp.status_code == 422
        assert "mase" in resp.json()["detail"]

    def test_all_zero_weights_422(self, served):
        resp = served.post(
            "/api/recommend", json={"dataset": "demo00", "weights": {"mase": 0.0}}
        )
        assert resp.status_code == 422

    def test_k_parameter(self, served):
        resp = served.post("/api/recommend", json={"dataset": "demo00", "k": 3})
        assert len(resp.json()["ranking"]) == 3

    def test_byte_identical_responses(self, served):
        req = {"dataset": "demo01", "weights": {"mase": 1, "size": 2}, "k": 4}
        first = served.post("/api/recommend", json=req)
        served.get("/api/datasets")  # interleaved unrelated request
        second = served.post("/api/recommend", json=req)
        assert first.content == second.content


class TestExplainEndpoint:
    def test_contributions_sum_to_one(self, served):
        resp = served.get("/api/explain/demo00/naive")
        assert resp.status_code == 200
        body = resp.json()
        assert sum(body["contributions"].values()) == pytest.approx(1.0, abs=1e-9)

    def test_importances_keyed_by_schema_features(self, served):
        body = served.get("/api/explain/demo00/naive").json()
        names = set(feature_names())
        for prop, importances in body["importances"].items():
            assert prop in PROPERTY_NAMES
            assert set(importances) == names

    def test_unknown_model_404(self, served):
        assert served.get("/api/explain/demo00/lstm").status_code == 404

    def test_weights_query_applies(self, served):
        body = served.get("/api/explain/demo00/naive", params={"weights": "mase=1"}).json()
        assert body["weights"]["mase"] == 1.0
        assert set(body["contributions"]) == {"mase"}


class TestStarEndpoint:
    def test_profiled_dataset_all_true(self, served):
        body = served.get("/api/star/demo00", params={"models": "naive,ses"}).json()
        assert set(body["profiles"]) == {"naive", "ses"}
        for axes in body["profiles"].values():
            assert [a["property"] for a in axes] == list(PROPERTY_NAMES)
            assert all(a["source"] == "true" for a in axes)

    def test_manifest_only_dataset_all_estimated(self, served):
        body = served.get("/api/star/unseen", params={"models": "naive"}).json()
        axes = body["profiles"]["naive"]
        assert len(axes) == 9
        assert all(a["source"] == "estimated" for a in axes)
        assert all(0 < a["value"] <= 1 for a in axes)

    def test_unknown_dataset_404(self, served):
        assert served.get("/api/star/nope").status_code == 404

    def test_unknown_model_404(self, served):
        assert served.get("/api/star/demo00", params={"models": "lstm"}).status_code == 404


class TestStatelessness:
    def test_request_order_does_not_matter(self, served):
        a1 = served.post("/api/recommend", json={"dataset": "demo02"}).content
        b1 = served.get("/api/star/demo02").content
        b2 = served.get("/api/star/demo02").content
        a2 = served.post("/api/recommend", json={"dataset": "demo02"}).content
        assert a1 == a2 and b1 == b2
