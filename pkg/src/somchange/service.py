"""What-if HTTP API over an on-disk model store.

Handlers are stateless: every request loads an immutable bundle from the
store (with a small read-through cache) and evaluates pure functions.
Change responses are serialized with the same canonical JSON writer as
the CLI, so both paths emit byte-identical bodies. Error mapping:
400 malformed body or bad data, 404 unknown model, 422 dimension
mismatch, 500 solver failure.
"""

import threading

from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .bundle import ModelBundle, ModelStore
from .change import default_regions
from .config import ToolConfig
from .dataset import ingest_csv_bytes
from .errors import (
    DataError,
    DimensionMismatchError,
    ModelNotFoundError,
    PatternError,
    SolverError,
)
from .glyphs import change_glyph, pattern_scene
from .grid import SomGrid
from .jsonutil import canonical_json
from .som import TrainConfig
from .svg import render_change_svg, render_pattern_svg, scene_to_json
from .workflow import (
    build_input_vector,
    change_between,
    check_input_z,
    map_quality,
    parse_settings_string,
    pattern_for,
    region_from_indices,
    train_bundle,
)


class TrainRequest(BaseModel):
    csv_text: str
    input_cols: list[str]
    output_cols: list[str]
    in_grid: tuple[int, int] = (10, 12)
    out_grid: tuple[int, int] = (10, 12)
    topology: str = "hexagonal"
    epochs: int = 40
    seed: int = 0
    initial_radius: float | None = None
    final_radius: float = 0.5
    init: str = "random_sample"


class PatternRequest(BaseModel):
    input: dict[str, float | str] | None = None
    baseline: float | str = "0"
    z: list[float] | None = None


class ChangeRequest(BaseModel):
    from_input: dict[str, float | str] | None = Field(default=None, alias="from")
    to_input: dict[str, float | str] | None = Field(default=None, alias="to")
    from_z: list[float] | None = None
    to_z: list[float] | None = None
    baseline: float | str = "0"
    alpha: float | None = None
    percentile: float | None = None
    region_ref: list[int] | None = None
    region_chg: list[int] | None = None

    model_config = {"populate_by_name": True}


def _json_response(payload, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(payload), status_code=status_code, media_type="application/json"
    )


class _BundleCache:
    def __init__(self, store: ModelStore, capacity: int = 8):
        self.store = store
        self.capacity = capacity
        self._lock = threading.Lock()
        self._cache: dict[str, ModelBundle] = {}

    def get(self, model_id: str) -> ModelBundle:
        with self._lock:
            if model_id in self._cache:
                return self._cache[model_id]
        bundle = self.store.load(model_id)
        with self._lock:
            if len(self._cache) >= self.capacity:
                self._cache.pop(next(iter(self._cache)))
            self._cache[model_id] = bundle
        return bundle


def create_app(store: ModelStore, config: ToolConfig | None = None) -> FastAPI:
    config = config or ToolConfig()
    app = FastAPI(title="somchange", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    cache = _BundleCache(store)
    train_lock = threading.Lock()

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return _json_response({"detail": "malformed request body", "errors": str(exc)}, 400)

    @app.exception_handler(DataError)
    async def data_error(request: Request, exc: DataError):
        return _json_response({"detail": str(exc)}, 400)

    @app.exception_handler(ModelNotFoundError)
    async def not_found(request: Request, exc: ModelNotFoundError):
        return _json_response({"detail": str(exc)}, 404)

    @app.exception_handler(DimensionMismatchError)
    async def dimension_mismatch(request: Request, exc: DimensionMismatchError):
        return _json_response({"detail": str(exc)}, 422)

    @app.exception_handler(PatternError)
    async def pattern_error(request: Request, exc: PatternError):
        return _json_response({"detail": str(exc)}, 422)

    @app.exception_handler(SolverError)
    async def solver_error(request: Request, exc: SolverError):
        return _json_response({"detail": f"transport solver failure: {exc}"}, 500)

    def _input_z(bundle: ModelBundle, settings, baseline, z):
        if z is not None:
            return check_input_z(bundle, z)
        return build_input_vector(bundle.in_som.features, settings or {}, baseline)

    @app.get("/models")
    def list_models():
        return _json_response({"models": store.ids()})

    @app.post("/models")
    def train_model(req: TrainRequest):
        dataset = ingest_csv_bytes(req.csv_text.encode("utf-8"), req.input_cols, req.output_cols)
        cfg = TrainConfig(
            epochs=req.epochs,
            initial_radius=req.initial_radius,
            final_radius=req.final_radius,
            seed=req.seed,
            init=req.init,
        )
        in_grid = SomGrid(topology=req.topology, width=req.in_grid[0], height=req.in_grid[1])
        out_grid = SomGrid(topology=req.topology, width=req.out_grid[0], height=req.out_grid[1])
        with train_lock:
            bundle = train_bundle(dataset, in_grid, out_grid, cfg)
            model_id = store.save(bundle)
        return _json_response(
            {
                "id": model_id,
                "input_map": map_quality(bundle.in_som, dataset.z_input()),
                "output_map": map_quality(bundle.out_som, dataset.z_output()),
            },
            201,
        )

    @app.get("/models/{model_id}")
    def model_info(model_id: str):
        bundle = cache.get(model_id)

        def specs(som):
            return [
                {"name": f.name, "z_mean": f.z_mean, "z_std": f.z_std} for f in som.features
            ]

        return _json_response(
            {
                "id": model_id,
                "fingerprint": bundle.fingerprint,
                "config": bundle.config,
                "input_features": [f.name for f in bundle.in_som.features],
                "output_features": [f.name for f in bundle.out_som.features],
                "input_feature_specs": specs(bundle.in_som),
                "output_feature_specs": specs(bundle.out_som),
                "input_grid": [bundle.in_som.grid.width, bundle.in_som.grid.height],
                "output_grid": [bundle.out_som.grid.width, bundle.out_som.grid.height],
                "topology": bundle.out_som.grid.topology,
            }
        )

    @app.post("/models/{model_id}/pattern")
    def model_pattern(model_id: str, req: PatternRequest):
        bundle = cache.get(model_id)
        z = _input_z(bundle, req.input, req.baseline, req.z)
        pattern = pattern_for(bundle, z)
        return _json_response(
            {
                "model_id": model_id,
                "input_z": [float(v) for v in z],
                "weights": [float(w) for w in pattern.weights],
            }
        )

    @app.post("/models/{model_id}/change")
    def model_change(model_id: str, req: ChangeRequest):
        bundle = cache.get(model_id)
        z_from = _input_z(bundle, req.from_input, req.baseline, req.from_z)
        z_to = _input_z(bundle, req.to_input, req.baseline, req.to_z)
        region_ref = (
            region_from_indices(req.region_ref, bundle.out_som) if req.region_ref else None
        )
        region_chg = (
            region_from_indices(req.region_chg, bundle.out_som) if req.region_chg else None
        )
        summary, _, _ = change_between(
            bundle,
            z_from,
            z_to,
            alpha=req.alpha if req.alpha is not None else config.alpha,
            percentile=req.percentile if req.percentile is not None else config.percentile,
            region_ref=region_ref,
            region_chg=region_chg,
        )
        return _json_response(summary.to_dict())

    @app.get("/models/{model_id}/scene/{kind}")
    def model_scene(
        model_id: str,
        kind: str,
        request: Request,
        input: str | None = None,
        z: str | None = None,
        from_: str | None = Query(default=None, alias="from"),
        to: str | None = None,
        baseline: str = "0",
        alpha: float | None = None,
        percentile: float | None = None,
        region_ref: str | None = None,
        region_chg: str | None = None,
    ):
        bundle = cache.get(model_id)

        def settings_z(text, z_text):
            if z_text is not None:
                values = [float(v) for v in z_text.split(",") if v.strip()]
                return check_input_z(bundle, values)
            return build_input_vector(
                bundle.in_som.features, parse_settings_string(text or ""), baseline
            )

        if kind == "pattern":
            pattern = pattern_for(bundle, settings_z(input, z))
            scene = pattern_scene(bundle.out_som, pattern)
        elif kind == "change":
            regions = {}
            if region_ref:
                regions["region_ref"] = region_from_indices(
                    [int(v) for v in region_ref.split(",") if v.strip()], bundle.out_som
                )
            if region_chg:
                regions["region_chg"] = region_from_indices(
                    [int(v) for v in region_chg.split(",") if v.strip()], bundle.out_som
                )
            summary, _, _ = change_between(
                bundle,
                settings_z(from_, None),
                settings_z(to, None),
                alpha=alpha if alpha is not None else config.alpha,
                percentile=percentile if percentile is not None else config.percentile,
                **regions,
            )
            scene = change_glyph(summary)
        else:
            raise DataError(f"unknown scene kind {kind!r}; expected 'pattern' or 'change'")

        accept = request.headers.get("accept", "")
        if "image/svg+xml" in accept:
            svg = (
                render_pattern_svg(bundle.out_som, pattern)
                if kind == "pattern"
                else render_change_svg(scene)
            )
            return Response(content=svg, media_type="image/svg+xml")
        return Response(content=scene_to_json(scene), media_type="application/json")

    @app.get("/models/{model_id}/regions/default")
    def model_default_regions(model_id: str, input: str | None = None, baseline: str = "0",
                              percentile: float | None = None):
        bundle = cache.get(model_id)
        z = build_input_vector(bundle.in_som.features, parse_settings_string(input or ""), baseline)
        pattern = pattern_for(bundle, z)
        region = default_regions(
            pattern, percentile if percentile is not None else config.percentile
        )
        return _json_response({"indices": list(region.indices), "source": region.source})

    return app
