"""Regenerate the frontend scene-parity fixtures.

Writes 20 random change scenes and 4 pattern scenes as paired
(scene JSON, server SVG) files under frontend/test/fixtures/. The
frontend test suite renders the JSON client-side and asserts the
geometry matches the server SVG within 1 px at canvas scale.

Run from the repo root: python3 scripts/gen_frontend_fixtures.py
"""

from pathlib import Path

import numpy as np

from somchange import Som, SomGrid, WeightedPattern
from somchange.change import ChangeSummary, FeatureChangeDetail, RegionSelection
from somchange.glyphs import change_glyph, pattern_scene, scale_pemd_for_display
from somchange.svg import scene_to_json, scene_to_svg

OUT_DIR = Path(__file__).resolve().parent.parent / "frontend" / "test" / "fixtures"

PATTERN_SCALE = 60.0
CHANGE_SCALE = 120.0


def random_summary(rng: np.random.Generator) -> ChangeSummary:
    m = int(rng.integers(2, 8))
    details = []
    for k in range(m):
        rng_z = float(rng.uniform(0.0, 3.0))
        p = float(rng.normal() * rng_z * 0.5)
        direction = "none" if abs(p) <= 1e-9 else ("increase" if p > 0 else "decrease")
        ref = float(rng.uniform(40, 60))
        chg = float(rng.uniform(40, 60))
        details.append(
            FeatureChangeDetail(
                name=f"f{k}",
                pemd=p,
                scaled_pemd=scale_pemd_for_display(p, rng_z),
                direction=direction,
                significant=bool(rng.integers(2)),
                ks_statistic=float(rng.uniform(0, 1)),
                ref_value=ref,
                chg_value=chg,
                ref_range=(ref - float(rng.uniform(0, 4)), ref + float(rng.uniform(0, 4))),
                chg_range=(chg - float(rng.uniform(0, 4)), chg + float(rng.uniform(0, 4))),
                feature_range_z=rng_z,
                t_lo=40.0,
                t_hi=60.0,
            )
        )
    mean_p = float(np.mean([d.pemd for d in details]))
    overall = "none" if abs(mean_p) <= 1e-9 else ("increase" if mean_p > 0 else "decrease")
    return ChangeSummary(
        scaled_emd=float(rng.uniform(0, 1)),
        mean_pemd=mean_p,
        overall_direction=overall,
        details=tuple(details),
        region_ref=RegionSelection(indices=(0,)),
        region_chg=RegionSelection(indices=(0,)),
        alpha=0.05,
    )


def random_map(rng: np.random.Generator, topology: str) -> tuple[Som, WeightedPattern]:
    width = int(rng.integers(2, 5))
    height = int(rng.integers(2, 5))
    grid = SomGrid(topology=topology, width=width, height=height)
    som = Som(grid=grid, prototypes=rng.normal(size=(grid.n, 4)), bandwidth=1.0)
    w = rng.random(grid.n)
    return som, WeightedPattern(som=som, weights=w / w.sum())


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(31415)
    for i in range(20):
        scene = change_glyph(random_summary(rng))
        (OUT_DIR / f"change_{i:02d}.json").write_text(scene_to_json(scene), encoding="utf-8")
        (OUT_DIR / f"change_{i:02d}.svg").write_text(
            scene_to_svg(scene, CHANGE_SCALE), encoding="utf-8"
        )
    for i in range(4):
        som, pattern = random_map(rng, "hexagonal" if i % 2 == 0 else "rectangular")
        scene = pattern_scene(som, pattern)
        (OUT_DIR / f"pattern_{i:02d}.json").write_text(scene_to_json(scene), encoding="utf-8")
        (OUT_DIR / f"pattern_{i:02d}.svg").write_text(
            scene_to_svg(scene, PATTERN_SCALE), encoding="utf-8"
        )
    print(f"wrote fixtures to {OUT_DIR}")


if __name__ == "__main__":
    main()
