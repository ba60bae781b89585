"""Record real server responses for the UI test suite.

Runs the bundled demo study, serves it through the HTTP app in-process, and
captures responses for scripted weight-panel scenarios. The slider math here
mirrors the panel implementation so the recorded request bodies match what
the browser sends bit for bit.
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from modelrank import synthetic
from modelrank.evaluation import run_study
from modelrank.metalearn import LearnerConfig
from modelrank.service import ServiceState, create_app

PROPERTIES = [
    "mase", "rmse", "mape", "params", "size",
    "train_power", "train_time", "infer_power", "infer_time",
]

DEFAULT_SLIDERS = {
    "mase": 200 / 3, "rmse": 200 / 3, "mape": 200 / 3,
    "params": 100.0, "size": 100.0,
    "train_power": 50.0, "train_time": 50.0, "infer_power": 50.0, "infer_time": 50.0,
}

DATASET = "demo00"


def effective_weights(sliders: dict) -> dict:
    total = 0.0
    for p in PROPERTIES:  # same accumulation order as the panel
        total += sliders[p]
    return {p: sliders[p] / total for p in PROPERTIES}


def slider_scenarios() -> list[dict]:
    import numpy as np

    scenarios = [dict(DEFAULT_SLIDERS)]
    scenarios.append({p: 50.0 for p in PROPERTIES})
    for solo in ("mase", "params", "infer_time", "rmse"):
        scenarios.append({p: (100.0 if p == solo else 0.0) for p in PROPERTIES})
    scenarios.append({p: (DEFAULT_SLIDERS[p] if p in ("mase", "rmse", "mape") else 0.0) for p in PROPERTIES})
    rng = np.random.default_rng(2718)
    while len(scenarios) < 20:
        sliders = {p: round(float(rng.uniform(0, 100)), 3) for p in PROPERTIES}
        if sum(sliders.values()) > 0:
            scenarios.append(sliders)
    return scenarios


def main() -> None:
    datasets = synthetic.demo_study_datasets(seed=42)
    study = run_study(
        datasets, n_folds=5, seed=42, repetitions=1, config=LearnerConfig(seed=42)
    )
    state = ServiceState(
        db=study.db, bundle=study.bundle, datasets={d.name: d for d in datasets}
    )
    client = TestClient(create_app(state))

    fixtures: dict = {"dataset": DATASET}
    fixtures["datasets"] = client.get("/api/datasets").json()

    recorded = []
    for sliders in slider_scenarios():
        weights = effective_weights(sliders)
        resp = client.post(
            "/api/recommend",
            json={"dataset": DATASET, "weights": weights, "mode": "compositional"},
        )
        resp.raise_for_status()
        recorded.append({"sliders": sliders, "weights": weights, "response": resp.json()})
    fixtures["scenarios"] = recorded

    # Complexity master maxed, other groups at zero.
    complexity_sliders = {p: (100.0 if p in ("params", "size") else 0.0) for p in PROPERTIES}
    weights = effective_weights(complexity_sliders)
    resp = client.post(
        "/api/recommend",
        json={"dataset": DATASET, "weights": weights, "mode": "compositional"},
    )
    resp.raise_for_status()
    params_raw = {
        m: study.db.get(DATASET, m, "params").raw_value for m in study.db.models(DATASET)
    }
    min_params = min(params_raw.values())
    fixtures["complexity_scenario"] = {
        "sliders": complexity_sliders,
        "weights": weights,
        "response": resp.json(),
        "min_param_models": sorted(m for m, v in params_raw.items() if v == min_params),
    }

    top1 = recorded[0]["response"]["ranking"][0]["model"]
    star = client.get(f"/api/star/{DATASET}", params={"models": top1})
    star.raise_for_status()
    explain = client.get(f"/api/explain/{DATASET}/{top1}")
    explain.raise_for_status()
    fixtures["star"] = {"models": [top1], "response": star.json()}
    fixtures["explain"] = {"model": top1, "response": explain.json()}

    out = Path(__file__).parent.parent / "tests" / "fixtures" / "ui_fixtures.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(fixtures, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {out} ({out.stat().st_size} bytes), top1={top1}")


if __name__ == "__main__":
    main()
