"""HTTP API for interactive what-if exploration over a fitted bundle.

State is immutable after startup; every request is read-only, so identical
requests always produce identical responses regardless of ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import forecasters
from .data import Dataset
from .metalearn import LearnerBundle
from .propertydb import PropertyDatabase
from .recommend import WeightVector, default_weights, recommend, star_profile


@dataclass
class ServiceState:
    db: PropertyDatabase
    bundle: LearnerBundle
    datasets: dict[str, Dataset]


class RecommendRequest(BaseModel):
    dataset: str
    weights: dict[str, float] | None = None
    mode: str = "compositional"
    k: int | None = None


def _weights_from_mapping(mapping: dict[str, float] | None) -> WeightVector:
    if not mapping:
        return default_weights()
    for name, value in mapping.items():
        if value < 0:
            raise HTTPException(status_code=422, detail=f"negative weight for field {name!r}")
    try:
        return WeightVector(mapping)
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e)) from e


def _parse_weight_query(raw: str | None) -> WeightVector:
    if not raw:
        return default_weights()
    mapping = {}
    for pair in raw.split(","):
        if "=" not in pair:
            raise HTTPException(status_code=422, detail=f"bad weight pair {pair!r}")
        name, value = pair.split("=", 1)
        try:
            mapping[name.strip()] = float(value)
        except ValueError as e:
            raise HTTPException(status_code=422, detail=f"bad weight value {pair!r}") from e
    return _weights_from_mapping(mapping)


def create_app(state: ServiceState | None = None, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="modelrank")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.service = state

    def service(request: Request) -> ServiceState:
        svc = request.app.state.service
        if svc is None:
            raise HTTPException(status_code=503, detail="service state not loaded yet")
        return svc

    def learners_of(svc: ServiceState) -> dict:
        learners = dict(svc.bundle.learners)
        if svc.bundle.direct is not None:
            learners["compound"] = svc.bundle.direct
        return learners

    @app.get("/api/datasets")
    def list_datasets(request: Request):
        svc = service(request)
        return [
            {
                "name": d.name,
                "group": d.group,
                "horizon": d.horizon,
                "num_series": d.num_series,
            }
            for d in svc.datasets.values()
        ]

    @app.post("/api/recommend")
    def post_recommend(body: RecommendRequest, request: Request):
        svc = service(request)
        if body.dataset not in svc.datasets:
            raise HTTPException(status_code=404, detail=f"unknown dataset {body.dataset!r}")
        weights = _weights_from_mapping(body.weights)
        if body.mode not in ("compositional", "direct"):
            raise HTTPException(status_code=422, detail=f"unknown mode {body.mode!r}")
        result = recommend(
            svc.datasets[body.dataset], learners_of(svc), weights, mode=body.mode, k=body.k
        )
        return result.to_dict()

    @app.get("/api/explain/{dataset}/{model}")
    def get_explain(dataset: str, model: str, request: Request, weights: str | None = None):
        svc = service(request)
        if dataset not in svc.datasets:
            raise HTTPException(status_code=404, detail=f"unknown dataset {dataset!r}")
        if model not in forecasters.MODEL_KEYS:
            raise HTTPException(status_code=404, detail=f"unknown model {model!r}")
        w = _parse_weight_query(weights)
        result = recommend(svc.datasets[dataset], learners_of(svc), w, mode="compositional")
        entry = next(e for e in result.ranking if e.model == model)
        importances = {
            prop: learner.importances for prop, learner in svc.bundle.learners.items()
        }
        return {
            "dataset": dataset,
            "model": model,
            "weights": w.as_floats(),
            "compound": entry.compound,
            "estimates": entry.estimates,
            "contributions": entry.contributions,
            "labels": entry.labels,
            "importances": importances,
        }

    @app.get("/api/star/{dataset}")
    def get_star(dataset: str, request: Request, models: str = ""):
        svc = service(request)
        requested = [m for m in models.split(",") if m] or list(forecasters.MODEL_KEYS)
        known_db = dataset in svc.db.datasets() if svc.db is not None else False
        known_registry = dataset in svc.datasets
        if not known_db and not known_registry:
            raise HTTPException(status_code=404, detail=f"unknown dataset {dataset!r}")
        try:
            profiles = star_profile(
                dataset,
                requested,
                db=svc.db if known_db else None,
                learners=svc.bundle.learners if known_registry else None,
                dataset=svc.datasets.get(dataset),
            )
        except KeyError as e:
            raise HTTPException(status_code=404, detail=str(e)) from e
        return {"dataset": dataset, "profiles": profiles}

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
