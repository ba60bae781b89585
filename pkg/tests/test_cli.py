import json
import hashlib
from pathlib import Path

import numpy as np
import pytest

from modelrank.cli import main

from conftest import write_manifest

GOLDEN = Path(__file__).parent / "golden"


def shape(obj):
    """Structural skeleton of a JSON document: keys kept, leaves typed."""
    if isinstance(obj, bool):
        return "bool"
    if isinstance(obj, int):
        return "int"
    if isinstance(obj, float):
        return "float"
    if isinstance(obj, str):
        return "str"
    if obj is None:
        return "null"
    if isinstance(obj, list):
        return [shape(obj[0])] if obj else []
    return {k: shape(v) for k, v in sorted(obj.items())}


def assert_matches_golden(payload, name):
    golden_path = GOLDEN / name
    assert golden_path.exists(), f"missing golden file {name}"
    assert shape(payload) == json.loads(golden_path.read_text())


def build_data_dir(root, n=6):
    rng = np.random.default_rng(7)
    data_dir = root / "data"
    data_dir.mkdir()
    for i in range(n):
        rows = []
        for sid in ("a", "b", "c"):
            base = rng.uniform(20, 60)
            for step in range(24):
                rows.append((sid, step, round(base + 0.3 * step * (i + 1) + rng.normal(0, 1), 4)))
        write_manifest(
            data_dir, name=f"set{i}", group=f"fam{i}", horizon=3, season_length=2, rows=rows
        )
    return data_dir


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    """One profiled + trained workspace shared by the CLI tests."""
    root = tmp_path_factory.mktemp("cliwork")
    data_dir = build_data_dir(root)
    db = root / "out" / "db.jsonl"
    code = main(["profile", "--data", str(data_dir), "--out", str(db), "--repetitions", "1"])
    assert code == 0
    bundle = root / "out" / "bundle.json"
    code = main(["train", "--db", str(db), "--out", str(bundle), "--folds", "3"])
    assert code == 0
    return {"root": root, "data": data_dir, "db": db, "bundle": bundle}


class TestProfile:
    def test_record_count_and_sidecars(self, workdir):
        lines = workdir["db"].read_text().strip().splitlines()
        assert len(lines) == 6 * 6 * 9  # datasets x pool x properties
        assert (workdir["db"].parent / "features.json").exists()
        assert (workdir["db"].parent / "dataset_features.json").exists()

    def test_db_record_schema(self, workdir):
        first = json.loads(workdir["db"].read_text().splitlines()[0])
        assert_matches_golden(first, "db_record.json")

    def test_missing_dir_exits_2(self, tmp_path):
        code = main(["profile", "--data", str(tmp_path / "nope"), "--out", str(tmp_path / "o.jsonl")])
        assert code == 2

    def test_failing_pair_still_exits_0(self, tmp_path, monkeypatch):
        import modelrank.forecasters as fc

        original = fc._FITTERS["ses"]
        monkeypatch.setitem(fc._FITTERS, "ses", lambda train: 1 / 0)
        data_dir = build_data_dir(tmp_path, n=2)
        out = tmp_path / "db.jsonl"
        assert main(["profile", "--data", str(data_dir), "--out", str(out)]) == 0
        statuses = {json.loads(l)["status"] for l in out.read_text().splitlines()}
        assert "failed" in statuses and "ok" in statuses


class TestTrain:
    def test_bundle_contents(self, workdir):
        payload = json.loads(workdir["bundle"].read_text())
        assert len(payload["learners"]) == 9
        assert payload["direct"] is not None
        assert_matches_golden(payload["cv_reports"], "cv_reports.json")

    def test_too_many_folds_exits_3(self, workdir, tmp_path):
        code = main([
            "train", "--db", str(workdir["db"]), "--out", str(tmp_path / "b.json"), "--folds", "7",
        ])
        assert code == 3

    def test_rerun_identical_bundle_hash(self, workdir, tmp_path):
        out = tmp_path / "again.json"
        assert main(["train", "--db", str(workdir["db"]), "--out", str(out), "--folds", "3"]) == 0
        h1 = hashlib.sha256(workdir["bundle"].read_bytes()).hexdigest()
        h2 = hashlib.sha256(out.read_bytes()).hexdigest()
        assert h1 == h2


class TestRecommend:
    def manifest(self, workdir):
        return workdir["data"] / "set0.json"

    def test_output_schema(self, workdir, capsys):
        code = main([
            "recommend", "--manifest", str(self.manifest(workdir)),
            "--bundle", str(workdir["bundle"]),
        ])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert_matches_golden(payload, "recommendation.json")
        assert len(payload["ranking"]) == 6

    def test_weights_override_single_property(self, workdir, capsys):
        code = main([
            "recommend", "--manifest", str(self.manifest(workdir)),
            "--bundle", str(workdir["bundle"]), "--weights", "mase=1",
        ])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["weights"]["mase"] == 1.0
        ranking = payload["ranking"]
        by_mase = sorted(ranking, key=lambda e: (-e["estimates"]["mase"], e["model"]))
        assert [e["model"] for e in ranking] == [e["model"] for e in by_mase]

    def test_k_limits_entries(self, workdir, capsys):
        code = main([
            "recommend", "--manifest", str(self.manifest(workdir)),
            "--bundle", str(workdir["bundle"]), "--k", "2",
        ])
        assert code == 0
        assert len(json.loads(capsys.readouterr().out)["ranking"]) == 2

    def test_schema_mismatch_exits_4(self, workdir, tmp_path, capsys):
        payload = json.loads(workdir["bundle"].read_text())
        payload["learners"]["mase"]["schema_hash"] = "0000000000000000"
        tampered = tmp_path / "tampered.json"
        tampered.write_text(json.dumps(payload))
        code = main([
            "recommend", "--manifest", str(self.manifest(workdir)), "--bundle", str(tampered),
        ])
        assert code == 4

    def test_direct_mode(self, workdir, capsys):
        code = main([
            "recommend", "--manifest", str(self.manifest(workdir)),
            "--bundle", str(workdir["bundle"]), "--mode", "direct",
        ])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["mode"] == "direct"
        assert payload["ranking"][0]["estimates"] == {}


class TestEvaluate:
    def test_writes_four_artifacts(self, workdir, tmp_path, capsys):
        out_dir = tmp_path / "study"
        code = main([
            "evaluate", "--data", str(workdir["data"]), "--out", str(out_dir),
            "--folds", "3", "--repetitions", "1",
        ])
        assert code == 0
        names = sorted(p.name for p in out_dir.iterdir())
        assert names == [
            "convergence.csv", "features.json", "property_db.jsonl", "quality_report.json",
        ]
        report = json.loads((out_dir / "quality_report.json").read_text())
        assert_matches_golden(report, "quality_report.json")
        assert "compound_compositional" in report["measures"]
        assert "compound_direct" in report["measures"]
        header = (out_dir / "convergence.csv").read_text().splitlines()[0]
        assert header == "dataset,k,quality_ratio,cost_ratio"

    def test_insufficient_groups_exits_3(self, tmp_path):
        data_dir = build_data_dir(tmp_path, n=2)
        code = main(["evaluate", "--data", str(data_dir), "--out", str(tmp_path / "o")])
        assert code == 3


class TestServe:
    def test_builds_app_with_state(self, workdir, monkeypatch):
        captured = {}

        def fake_run(app, host, port):
            captured["app"] = app
            captured["addr"] = (host, port)

        monkeypatch.setattr("uvicorn.run", fake_run)
        code = main([
            "serve", "--db", str(workdir["db"]), "--bundle", str(workdir["bundle"]),
            "--data", str(workdir["data"]), "--port", "8123",
        ])
        assert code == 0
        assert captured["addr"] == ("127.0.0.1", 8123)
        state = captured["app"].state.service
        assert state is not None and len(state.datasets) == 6

    def test_missing_db_exits_2(self, workdir, tmp_path):
        code = main([
            "serve", "--db", str(tmp_path / "missing.jsonl"),
            "--bundle", str(workdir["bundle"]), "--data", str(workdir["data"]),
        ])
        assert code == 2


class TestWeightParsing:
    def test_bad_pair_exits_2(self, workdir):
        code = main([
            "recommend", "--manifest", str(workdir["data"] / "set0.json"),
            "--bundle", str(workdir["bundle"]), "--weights", "masequalsone",
        ])
        assert code == 2

    def test_weights_json_file(self, workdir, tmp_path, capsys):
        weights_path = tmp_path / "w.json"
        weights_path.write_text(json.dumps({"rmse": 1.0}))
        code = main([
            "recommend", "--manifest", str(workdir["data"] / "set0.json"),
            "--bundle", str(workdir["bundle"]), "--weights", str(weights_path),
        ])
        assert code == 0
        assert json.loads(capsys.readouterr().out)["weights"]["rmse"] == 1.0
