import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from somchange import (
    change_glyph,
    neuron_star,
    pattern_scene,
    scale_pemd_for_display,
    summarize_change,
    weight_color,
)
from somchange.change import RegionSelection
from somchange.glyphs import Circle, Color, GlyphScene, Polygon, Segment
from conftest import delta_pattern, mixed_pattern, random_pattern, random_summary


class TestWeightColor:
    def test_endpoints_and_midpoint(self):
        assert weight_color(1.0, 1.0).h == pytest.approx(0.0)
        assert weight_color(0.0, 1.0).h == pytest.approx(240.0)
        assert weight_color(0.5, 1.0).h == pytest.approx(120.0)

    def test_full_saturation_and_value(self):
        c = weight_color(0.3, 0.9)
        assert c.s == 1.0 and c.v == 1.0

    def test_zero_max_warns_mid_blue(self):
        with pytest.warns(RuntimeWarning):
            c = weight_color(0.0, 0.0)
        assert c.h == 240.0

    @given(st.floats(0.0, 1.0), st.floats(1e-6, 1.0))
    def test_hue_linear_in_weight(self, u, w_max):
        c = weight_color(u * w_max, w_max)
        assert c.h == pytest.approx(240.0 * (1 - u), abs=1e-6)


class TestNeuronStar:
    def test_all_min_gives_zero_radii(self):
        lo, hi = np.zeros(4), np.ones(4)
        star = neuron_star(np.zeros(4), lo, hi)
        assert star.radii == (0.0,) * 4

    def test_all_max_gives_unit_radii(self):
        lo, hi = np.zeros(4), np.ones(4)
        star = neuron_star(np.ones(4), lo, hi)
        assert star.radii == (1.0,) * 4

    def test_constant_feature_renders_at_half(self):
        star = neuron_star(np.array([3.0]), np.array([3.0]), np.array([3.0]))
        assert star.radii == (0.5,)

    def test_matches_affine_recomputation(self):
        rng = np.random.default_rng(1)
        lo = rng.normal(size=5)
        hi = lo + rng.uniform(0.5, 2.0, size=5)
        proto = lo + (hi - lo) * rng.random(5)
        star = neuron_star(proto, lo, hi)
        for k in range(5):
            assert star.radii[k] == pytest.approx((proto[k] - lo[k]) / (hi[k] - lo[k]), abs=1e-12)

    def test_angles_evenly_spaced_from_vertical(self):
        star = neuron_star(np.zeros(5), np.zeros(5), np.ones(5))
        assert star.angles == tuple(2 * math.pi * k / 5 for k in range(5))
        assert len(star.points()) == 5


class TestScalePemdForDisplay:
    def test_zero_maps_to_lower_bound(self):
        assert scale_pemd_for_display(0.0, 2.0) == pytest.approx(0.1)

    def test_full_range_maps_to_upper_bound(self):
        assert scale_pemd_for_display(-2.0, 2.0) == pytest.approx(0.9)

    def test_half_range_maps_to_midpoint(self):
        assert scale_pemd_for_display(1.0, 2.0) == pytest.approx(0.5)

    def test_zero_range_maps_to_lower_bound(self):
        assert scale_pemd_for_display(0.7, 0.0) == pytest.approx(0.1)

    @given(st.floats(-10, 10, allow_nan=False), st.floats(0, 5, allow_nan=False))
    @settings(max_examples=200)
    def test_always_in_band(self, p, r):
        assert 0.1 <= scale_pemd_for_display(p, r) <= 0.9


def frame_of(scene: GlyphScene) -> Polygon:
    (frame,) = scene.find("frame")
    return frame


def property_of(scene: GlyphScene) -> Polygon:
    (prop,) = scene.find("property")
    return prop


class TestChangeGlyph:
    def test_identity_change_renders_zero_glyph(self, rgb_som):
        P = mixed_pattern(rgb_som, {0: 0.5, 4: 0.5})
        scene = change_glyph(summarize_change(P, P, rgb_som))
        frame = frame_of(scene)
        assert frame.fill.v == pytest.approx(1.0)  # no EMD fill
        prop = property_of(scene)
        assert prop.fill.s == 0.0  # white
        for x, y in prop.points:
            assert math.hypot(x, y) == pytest.approx(0.1, abs=1e-12)
        assert not [it for it in scene.items if it.role.startswith("stub:")]

    def test_green_to_blue_shift_stub_colors(self, rgb_som):
        summary = summarize_change(delta_pattern(rgb_som, 0), delta_pattern(rgb_som, 6), rgb_som)
        scene = change_glyph(summary)
        stubs = {it.role: it for it in scene.items if it.role.startswith("stub:")}
        assert set(stubs) == {"stub:1", "stub:2"}  # G and B branches only
        g_hue = stubs["stub:1"].color.h
        b_hue = stubs["stub:2"].color.h
        # decrease family (blue/cyan) on G, increase family (red/yellow) on B
        assert g_hue in (240.0, 180.0)
        assert b_hue in (0.0, 60.0)
        assert property_of(scene).fill.s == pytest.approx(0.0)  # mean pemd 0 -> white

    def test_canceling_flows_glyph(self, rgb_som):
        P = mixed_pattern(rgb_som, {0: 0.5, 7: 0.5})
        Q = mixed_pattern(rgb_som, {1: 0.5, 6: 0.5})
        summary = summarize_change(
            P,
            Q,
            rgb_som,
            region_ref=RegionSelection(indices=(0,)),
            region_chg=RegionSelection(indices=(1,)),
        )
        scene = change_glyph(summary)
        prop = property_of(scene)
        assert prop.fill.s == 0.0
        for x, y in prop.points:
            assert math.hypot(x, y) == pytest.approx(0.1, abs=1e-12)
        assert frame_of(scene).fill.v < 1.0  # EMD is visible in the frame
        ref_dot = scene.find("dot_ref:0")[0]
        chg_dot = scene.find("dot_chg:0")[0]
        assert ref_dot.center != chg_dot.center

    def test_encoding_rules_on_random_summaries(self):
        rng = np.random.default_rng(99)
        for _ in range(50):
            summary = random_summary(rng)
            scene = change_glyph(summary)
            frame = frame_of(scene)
            assert frame.fill.s == 0.0
            assert frame.fill.v == pytest.approx(1.0 - summary.scaled_emd, abs=1e-12)
            prop = property_of(scene)
            if summary.overall_direction == "increase":
                assert prop.fill.h == 0.0 and prop.fill.s > 0
            elif summary.overall_direction == "decrease":
                assert prop.fill.h == 240.0 and prop.fill.s > 0
            else:
                assert prop.fill.s == 0.0
            for k, d in enumerate(summary.details):
                stubs = scene.find(f"stub:{k}")
                if d.direction == "none":
                    assert not stubs
                    continue
                (stub,) = stubs
                if d.direction == "increase":
                    assert stub.color.h == (0.0 if d.significant else 60.0)
                else:
                    assert stub.color.h == (240.0 if d.significant else 180.0)
                assert math.hypot(*stub.b) == pytest.approx(0.1, abs=1e-12)
            radii = [math.hypot(x, y) for x, y in prop.points]
            assert all(0.1 - 1e-9 <= r <= 0.9 + 1e-9 for r in radii)

    def test_pure_function_equal_scenes_for_equal_summaries(self, rgb_som):
        summary = summarize_change(delta_pattern(rgb_som, 0), delta_pattern(rgb_som, 2), rgb_som)
        assert change_glyph(summary) == change_glyph(summary)

    def test_all_coordinates_inside_canvas(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            scene = change_glyph(random_summary(rng))
            xmin, ymin, xmax, ymax = scene.bounds
            for item in scene.items:
                pts = (
                    item.points
                    if isinstance(item, Polygon)
                    else (item.center,)
                    if isinstance(item, Circle)
                    else (item.a, item.b)
                    if isinstance(item, Segment)
                    else (item.pos,)
                )
                for x, y in pts:
                    assert xmin <= x <= xmax and ymin <= y <= ymax


class TestPatternScene:
    def test_cells_and_stars_per_neuron(self, rgb_som):
        rng = np.random.default_rng(0)
        scene = pattern_scene(rgb_som, random_pattern(rgb_som, rng))
        cells = [it for it in scene.items if it.role.startswith("cell:")]
        stars = [it for it in scene.items if it.role.startswith("star:")]
        assert len(cells) == 9 and len(stars) == 9

    def test_cell_hue_tracks_weight_rank(self, rgb_som):
        rng = np.random.default_rng(1)
        pattern = random_pattern(rgb_som, rng)
        scene = pattern_scene(rgb_som, pattern)
        hues = {}
        for it in scene.items:
            if it.role.startswith("cell:"):
                hues[int(it.role.split(":")[1])] = it.fill.h
        order_by_weight = np.argsort(np.asarray(pattern.weights))
        hue_seq = [hues[i] for i in order_by_weight]
        assert all(a >= b - 1e-12 for a, b in zip(hue_seq, hue_seq[1:]))

    def test_hexagonal_cells_have_six_vertices(self):
        import somchange as sc

        grid = sc.SomGrid(topology="hexagonal", width=2, height=2)
        som = sc.Som(grid=grid, prototypes=np.random.default_rng(0).normal(size=(4, 3)), bandwidth=1.0)
        w = np.full(4, 0.25)
        scene = pattern_scene(som, sc.WeightedPattern(som=som, weights=w))
        cell = scene.find("cell:0")[0]
        assert len(cell.points) == 6


class TestColor:
    def test_channel_validation(self):
        with pytest.raises(ValueError):
            Color(400.0, 0.5, 0.5)
        with pytest.raises(ValueError):
            Color(0.0, 1.5, 0.5)

    def test_gray_hex(self):
        assert Color.gray(1.0).to_rgb_hex() == "#ffffff"
        assert Color.gray(0.0).to_rgb_hex() == "#000000"
        assert Color(0.0, 1.0, 1.0).to_rgb_hex() == "#ff0000"
        assert Color(240.0, 1.0, 1.0).to_rgb_hex() == "#0000ff"
