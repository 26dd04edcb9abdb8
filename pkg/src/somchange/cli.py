"""Batch command line: train, query, compare, render, sweep and serve.

Exit codes: 0 success, 2 usage error (click), 3 data error
(ingestion, dimensions, bad settings), 4 numeric/solver failure.
"""

import functools
import sys
from pathlib import Path

import click

from .bundle import ModelBundle, ModelStore
from .config import load_config
from .dataset import ingest_csv
from .errors import (
    DataError,
    DimensionMismatchError,
    ModelNotFoundError,
    PatternError,
    SolverError,
)
from .glyphs import change_glyph
from .grid import SomGrid
from .jsonutil import canonical_json
from .som import TrainConfig
from .svg import render_change_svg, render_pattern_svg
from .synthetic import DEFAULT_ROWS, DEFAULT_SEED, INPUT_COLUMNS, OUTPUT_COLUMNS, write_csv
from .workflow import (
    build_input_vector,
    change_between,
    map_quality,
    parse_grid,
    parse_settings_string,
    pattern_for,
    region_from_indices,
    sweep_grids,
    train_bundle,
)

EXIT_DATA = 3
EXIT_NUMERIC = 4


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (DataError, DimensionMismatchError, PatternError, ModelNotFoundError) as exc:
            click.echo(f"data error: {exc}", err=True)
            sys.exit(EXIT_DATA)
        except (SolverError, ArithmeticError) as exc:
            click.echo(f"numeric error: {exc}", err=True)
            sys.exit(EXIT_NUMERIC)

    return wrapper


def _load_model(model, store, model_id) -> ModelBundle:
    if model:
        return ModelBundle.load(model)
    if store and model_id:
        return ModelStore(store).load(model_id)
    raise click.UsageError("provide --model FILE or both --store DIR and --id ID")


def _train_config(epochs, seed, initial_radius, final_radius, init) -> TrainConfig:
    return TrainConfig(
        epochs=epochs,
        seed=seed,
        initial_radius=initial_radius,
        final_radius=final_radius,
        init=init,
    )


model_options = [
    click.option("--model", type=click.Path(exists=True, dir_okay=False), help="Bundle file."),
    click.option("--store", type=click.Path(file_okay=False), help="Model store directory."),
    click.option("--id", "model_id", help="Model id inside the store."),
]


def add_options(options):
    def wrap(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn

    return wrap


@click.group()
def main():
    """Measure and visualize weighted SOM pattern changes."""


@main.command()
@click.option("--data", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--input-cols", required=True, help="Comma-separated input column names.")
@click.option("--output-cols", required=True, help="Comma-separated output column names.")
@click.option("--in-grid", default="10x12", show_default=True)
@click.option("--out-grid", default="10x12", show_default=True)
@click.option("--topology", default="hexagonal", type=click.Choice(["hexagonal", "rectangular"]))
@click.option("--epochs", default=40, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--initial-radius", type=float, default=None)
@click.option("--final-radius", type=float, default=0.5, show_default=True)
@click.option("--init", default="random_sample", type=click.Choice(["random_sample", "pca_plane"]))
@click.option("--store", type=click.Path(file_okay=False), help="Save into this model store.")
@click.option("--out", type=click.Path(dir_okay=False), help="Also write the bundle to this file.")
@handle_errors
def train(data, input_cols, output_cols, in_grid, out_grid, topology, epochs, seed,
          initial_radius, final_radius, init, store, out):
    """Fit input/output maps plus association and save the model bundle."""
    dataset = ingest_csv(data, input_cols.split(","), output_cols.split(","))
    iw, ih = parse_grid(in_grid)
    ow, oh = parse_grid(out_grid)
    cfg = _train_config(epochs, seed, initial_radius, final_radius, init)
    bundle = train_bundle(
        dataset,
        SomGrid(topology=topology, width=iw, height=ih),
        SomGrid(topology=topology, width=ow, height=oh),
        cfg,
    )
    report = {
        "id": bundle.model_id(),
        "fingerprint": dataset.fingerprint,
        "input_map": map_quality(bundle.in_som, dataset.z_input()),
        "output_map": map_quality(bundle.out_som, dataset.z_output()),
    }
    if store:
        ModelStore(store).save(bundle)
        report["store"] = str(store)
    if out:
        bundle.save(out)
        report["path"] = str(out)
    if not store and not out:
        raise click.UsageError("provide --store and/or --out to persist the model")
    click.echo(canonical_json(report))


@main.command()
@add_options(model_options)
@click.option("--set", "settings", default="", help='Feature settings, e.g. "in4=+1SD;in1=raw:320".')
@click.option("--baseline", default="0", show_default=True, help="Z value applied to unset features.")
@click.option("--json", "json_out", type=click.Path(dir_okay=False), help="Write the pattern JSON here.")
@click.option("--svg", "svg_out", type=click.Path(dir_okay=False), help="Write the pattern view SVG here.")
@handle_errors
def pattern(model, store, model_id, settings, baseline, json_out, svg_out):
    """Evaluate the conditional output pattern for one input."""
    bundle = _load_model(model, store, model_id)
    z = build_input_vector(bundle.in_som.features, parse_settings_string(settings), baseline)
    pat = pattern_for(bundle, z)
    payload = canonical_json(
        {
            "input_z": [float(v) for v in z],
            "weights": [float(w) for w in pat.weights],
        }
    )
    if json_out:
        Path(json_out).write_text(payload, encoding="utf-8")
    if svg_out:
        Path(svg_out).write_text(render_pattern_svg(bundle.out_som, pat), encoding="utf-8")
    click.echo(payload)


@main.command()
@add_options(model_options)
@click.option("--from", "from_settings", default="", help="Reference input settings.")
@click.option("--to", "to_settings", default="", help="Changed input settings.")
@click.option("--baseline", default="0", show_default=True)
@click.option("--alpha", type=float, default=None, help="KS significance level.")
@click.option("--percentile", type=float, default=None, help="Region weight percentile.")
@click.option("--region-ref", default="", help="Comma-separated neuron indices for the reference region.")
@click.option("--region-chg", default="", help="Comma-separated neuron indices for the changed region.")
@click.option("--json", "json_out", type=click.Path(dir_okay=False), help="Write the summary JSON here.")
@click.option("--svg-dir", type=click.Path(file_okay=False), help="Write reference/changed/change SVGs here.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@handle_errors
def change(model, store, model_id, from_settings, to_settings, baseline, alpha, percentile,
           region_ref, region_chg, json_out, svg_dir, config_path):
    """Summarize the pattern change between two inputs (JSON + optional SVGs)."""
    cfg = load_config(config_path)
    bundle = _load_model(model, store, model_id)
    z_from = build_input_vector(bundle.in_som.features, parse_settings_string(from_settings), baseline)
    z_to = build_input_vector(bundle.in_som.features, parse_settings_string(to_settings), baseline)
    regions = {}
    if region_ref:
        regions["region_ref"] = region_from_indices(
            [int(v) for v in region_ref.split(",")], bundle.out_som
        )
    if region_chg:
        regions["region_chg"] = region_from_indices(
            [int(v) for v in region_chg.split(",")], bundle.out_som
        )
    summary, ref_pat, chg_pat = change_between(
        bundle,
        z_from,
        z_to,
        alpha=alpha if alpha is not None else cfg.alpha,
        percentile=percentile if percentile is not None else cfg.percentile,
        **regions,
    )
    payload = canonical_json(summary.to_dict())
    if json_out:
        Path(json_out).write_text(payload, encoding="utf-8")
    if svg_dir:
        out = Path(svg_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "reference.svg").write_text(render_pattern_svg(bundle.out_som, ref_pat), encoding="utf-8")
        (out / "changed.svg").write_text(render_pattern_svg(bundle.out_som, chg_pat), encoding="utf-8")
        (out / "change_glyph.svg").write_text(render_change_svg(change_glyph(summary)), encoding="utf-8")
    click.echo(payload)


@main.command()
@add_options(model_options)
@click.option("--kind", default="pattern", type=click.Choice(["pattern", "change"]))
@click.option("--set", "settings", default="", help="Input settings for the pattern view.")
@click.option("--from", "from_settings", default="", help="Reference settings for the change view.")
@click.option("--to", "to_settings", default="", help="Changed settings for the change view.")
@click.option("--baseline", default="0", show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@handle_errors
def render(model, store, model_id, kind, settings, from_settings, to_settings, baseline, out):
    """Render a pattern view or a change glyph to an SVG file."""
    bundle = _load_model(model, store, model_id)
    if kind == "pattern":
        z = build_input_vector(bundle.in_som.features, parse_settings_string(settings), baseline)
        svg = render_pattern_svg(bundle.out_som, pattern_for(bundle, z))
    else:
        z_from = build_input_vector(bundle.in_som.features, parse_settings_string(from_settings), baseline)
        z_to = build_input_vector(bundle.in_som.features, parse_settings_string(to_settings), baseline)
        summary, _, _ = change_between(bundle, z_from, z_to)
        svg = render_change_svg(change_glyph(summary))
    Path(out).write_text(svg, encoding="utf-8")
    click.echo(str(out))


@main.command()
@click.option("--data", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--input-cols", required=True)
@click.option("--output-cols", required=True)
@click.option("--grids", default="6x8,8x10,10x12", show_default=True)
@click.option("--part", default="both", type=click.Choice(["input", "output", "both"]))
@click.option("--topology", default="hexagonal", type=click.Choice(["hexagonal", "rectangular"]))
@click.option("--epochs", default=40, show_default=True)
@click.option("--seed", default=0, show_default=True)
@handle_errors
def sweep(data, input_cols, output_cols, grids, part, topology, epochs, seed):
    """Report QE/TE over candidate grid sizes to guide map-size choice."""
    dataset = ingest_csv(data, input_cols.split(","), output_cols.split(","))
    sizes = [parse_grid(g) for g in grids.split(",")]
    cfg = _train_config(epochs, seed, None, 0.5, "random_sample")
    parts = {"input": dataset.z_input(), "output": dataset.z_output()}
    chosen = ["input", "output"] if part == "both" else [part]
    click.echo(f"{'part':<8}{'grid':<10}{'QE':<14}{'TE':<10}")
    for name in chosen:
        for row in sweep_grids(parts[name], sizes, topology, cfg):
            click.echo(
                f"{name:<8}{row['width']}x{row['height']:<8}"
                f"{row['quantization_error']:<14.6f}{row['topographic_error']:<10.6f}"
            )


@main.command()
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--store", type=click.Path(file_okay=False), default=None)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@handle_errors
def serve(host, port, store, config_path):
    """Start the what-if HTTP API."""
    import uvicorn

    from .service import create_app

    cfg = load_config(config_path)
    app = create_app(ModelStore(store or cfg.store_dir), cfg)
    uvicorn.run(app, host=host or cfg.host, port=port or cfg.port)


@main.command("demo-data")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--rows", default=DEFAULT_ROWS, show_default=True)
@click.option("--seed", default=DEFAULT_SEED, show_default=True)
@handle_errors
def demo_data(out, rows, seed):
    """Write the documented synthetic paired dataset as CSV."""
    write_csv(out, rows=rows, seed=seed)
    click.echo(
        canonical_json(
            {
                "path": str(out),
                "rows": rows,
                "seed": seed,
                "input_cols": list(INPUT_COLUMNS),
                "output_cols": list(OUTPUT_COLUMNS),
            }
        )
    )


if __name__ == "__main__":
    main()
