"""Shared model-lifecycle operations behind the CLI and the HTTP service.

Keeping these in one place guarantees that both front ends produce
identical results (and byte-identical JSON) for identical inputs.
"""

import numpy as np

from .association import WeightedPattern, build_association, conditional_pattern
from .bundle import ModelBundle
from .change import ChangeSummary, RegionSelection, summarize_change
from .dataset import Dataset
from .errors import DataError, DimensionMismatchError
from .grid import SomGrid
from .som import FeatureSpec, Som, TrainConfig, quantization_error, topographic_error, train_som


def parse_grid(text: str) -> tuple[int, int]:
    """Parse ``"10x12"`` into ``(width, height)``."""
    parts = text.lower().replace("×", "x").split("x")
    if len(parts) != 2:
        raise DataError(f"grid size must look like WIDTHxHEIGHT, got {text!r}")
    try:
        width, height = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise DataError(f"bad grid size {text!r}: {exc}") from exc
    return width, height


def train_bundle(
    dataset: Dataset,
    in_grid: SomGrid,
    out_grid: SomGrid,
    cfg: TrainConfig = TrainConfig(),
) -> ModelBundle:
    """Fit both maps and their association from one ingested dataset."""
    z_in = dataset.z_input()
    z_out = dataset.z_output()
    in_som = train_som(z_in, in_grid, cfg, features=dataset.input_features)
    out_som = train_som(z_out, out_grid, cfg, features=dataset.output_features)
    assoc = build_association(in_som, out_som, z_in, z_out)
    config = {
        "epochs": cfg.epochs,
        "initial_radius": cfg.initial_radius,
        "final_radius": cfg.final_radius,
        "seed": cfg.seed,
        "init": cfg.init,
        "topology": in_grid.topology,
        "in_grid": [in_grid.width, in_grid.height],
        "out_grid": [out_grid.width, out_grid.height],
        "input_cols": [f.name for f in dataset.input_features],
        "output_cols": [f.name for f in dataset.output_features],
    }
    return ModelBundle(
        in_som=in_som,
        out_som=out_som,
        association=assoc,
        fingerprint=dataset.fingerprint,
        config=config,
    )


def map_quality(som: Som, data_z: np.ndarray) -> dict:
    return {
        "width": som.grid.width,
        "height": som.grid.height,
        "quantization_error": quantization_error(som, data_z),
        "topographic_error": topographic_error(som, data_z),
    }


def parse_setting_value(value, spec: FeatureSpec) -> float:
    """Interpret one feature setting as a Z-score.

    Accepted forms: a number (Z units), ``"+1SD"`` / ``"-0.5sd"``
    (Z units), or ``"raw:42.5"`` (raw units, standardized via the
    feature's parameters).
    """
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    text = str(value).strip()
    lowered = text.lower()
    try:
        if lowered.startswith("raw:"):
            return spec.to_z(float(text[4:]))
        if lowered.endswith("sd"):
            return float(text[:-2])
        return float(text)
    except ValueError as exc:
        raise DataError(f"cannot parse setting {value!r} for feature {spec.name!r}") from exc


def parse_settings_string(text: str) -> dict:
    """Parse ``"in4=+1SD;in1=raw:320"`` into a name -> value dict."""
    settings = {}
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise DataError(f"setting {chunk!r} is not name=value")
        name, value = chunk.split("=", 1)
        settings[name.strip()] = value.strip()
    return settings


def build_input_vector(features: list[FeatureSpec], settings=None, baseline="0") -> np.ndarray:
    """Z-score input vector from a baseline plus per-feature overrides."""
    by_name = {f.name: f for f in features}
    z = np.array([parse_setting_value(baseline, f) for f in features])
    for name, value in (settings or {}).items():
        spec = by_name.get(name)
        if spec is None:
            raise DimensionMismatchError(
                f"unknown input feature {name!r}; expected one of {sorted(by_name)}"
            )
        z[spec.index] = parse_setting_value(value, spec)
    return z


def check_input_z(bundle: ModelBundle, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (bundle.in_som.m,):
        raise DimensionMismatchError(
            f"input vector has shape {z.shape}, model expects ({bundle.in_som.m},)"
        )
    return z


def pattern_for(bundle: ModelBundle, z: np.ndarray) -> WeightedPattern:
    """Conditional output pattern for a Z-scored input vector."""
    z = check_input_z(bundle, z)
    return conditional_pattern(z, bundle.association, bundle.in_som, bundle.out_som)


def region_from_indices(indices, som: Som) -> RegionSelection:
    try:
        region = RegionSelection(indices=tuple(int(i) for i in indices), source="user")
        region.validate_for(som)
    except ValueError as exc:
        raise DimensionMismatchError(str(exc)) from exc
    return region


def change_between(
    bundle: ModelBundle,
    z_from: np.ndarray,
    z_to: np.ndarray,
    alpha: float = 0.05,
    percentile: float = 0.8,
    region_ref: RegionSelection | None = None,
    region_chg: RegionSelection | None = None,
) -> tuple[ChangeSummary, WeightedPattern, WeightedPattern]:
    """Change summary between the patterns of two input vectors."""
    ref = pattern_for(bundle, z_from)
    chg = pattern_for(bundle, z_to)
    summary = summarize_change(
        ref,
        chg,
        bundle.out_som,
        region_ref=region_ref,
        region_chg=region_chg,
        alpha=alpha,
        percentile=percentile,
    )
    return summary, ref, chg


def sweep_grids(
    data_z: np.ndarray, sizes: list[tuple[int, int]], topology: str, cfg: TrainConfig
) -> list[dict]:
    """QE/TE of maps trained at each grid size on one dataset part."""
    results = []
    for width, height in sizes:
        grid = SomGrid(topology=topology, width=width, height=height)
        som = train_som(data_z, grid, cfg)
        results.append(
            {
                "width": width,
                "height": height,
                "quantization_error": quantization_error(som, data_z),
                "topographic_error": topographic_error(som, data_z),
            }
        )
    return results
