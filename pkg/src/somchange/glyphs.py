"""Resolution-independent scene geometry for pattern and change views.

Encoding rules implemented here:

* cell hue runs linearly from blue (240, zero weight) to red (0, max
  weight), full saturation and value;
* star glyph branches are evenly angled from vertical, branch radius is
  the feature value scaled to the prototype range;
* the change glyph's outer frame is gray-filled at ``1 - scaled_emd``
  (darker = larger change), the inner property polygon uses per-feature
  radii in [0.1, 0.9] and is filled red / blue / white by the overall
  direction with saturation proportional to the mean property change;
* direction stubs from the center to radius 0.1 are red / blue for
  significant increases / decreases and yellow / cyan for insignificant
  ones; region value dots sit on the branch (empty = reference,
  full = changed) with thin range whiskers.

Scene items carry a ``role`` tag (``"frame"``, ``"property"``,
``"stub:3"``, ...) so encoding audits and interactive clients can read
semantics without reverse-engineering geometry.
"""

from __future__ import annotations

import colorsys
import math
import warnings
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Union

import numpy as np

from .association import WeightedPattern
from .som import Som

if TYPE_CHECKING:  # pragma: no cover
    from .change import ChangeSummary

DIRECTION_EPS = 1e-9

HUE_INCREASE = 0.0
HUE_DECREASE = 240.0
HUE_INSIG_INCREASE = 60.0
HUE_INSIG_DECREASE = 180.0


@dataclass(frozen=True)
class Color:
    """Hue (degrees), saturation and value, each channel range-checked."""

    h: float
    s: float
    v: float

    def __post_init__(self):
        if not (0.0 <= self.h <= 360.0 and 0.0 <= self.s <= 1.0 and 0.0 <= self.v <= 1.0):
            raise ValueError(f"color channels out of range: {self}")

    @staticmethod
    def gray(level: float) -> "Color":
        return Color(0.0, 0.0, min(max(level, 0.0), 1.0))

    def to_rgb_hex(self) -> str:
        r, g, b = colorsys.hsv_to_rgb(self.h / 360.0, self.s, self.v)
        return "#{:02x}{:02x}{:02x}".format(round(r * 255), round(g * 255), round(b * 255))


@dataclass(frozen=True)
class Polygon:
    points: tuple
    fill: Color | None = None
    stroke: Color | None = None
    stroke_width: float = 0.01
    role: str = ""


@dataclass(frozen=True)
class Circle:
    center: tuple
    radius: float
    fill: Color | None = None
    stroke: Color | None = None
    stroke_width: float = 0.01
    role: str = ""


@dataclass(frozen=True)
class Segment:
    a: tuple
    b: tuple
    color: Color = Color.gray(0.0)
    width: float = 0.01
    role: str = ""


@dataclass(frozen=True)
class Label:
    pos: tuple
    text: str
    size: float = 0.1
    color: Color = Color.gray(0.1)
    anchor: str = "middle"
    role: str = ""


SceneItem = Union[Polygon, Circle, Segment, Label]


def _item_coords(item: SceneItem):
    if isinstance(item, Polygon):
        return item.points
    if isinstance(item, Circle):
        return (item.center,)
    if isinstance(item, Segment):
        return (item.a, item.b)
    return (item.pos,)


@dataclass(frozen=True)
class GlyphScene:
    """Typed display list on a logical canvas ``(xmin, ymin, xmax, ymax)``."""

    bounds: tuple
    items: tuple = field(repr=False, default=())

    def __post_init__(self):
        xmin, ymin, xmax, ymax = self.bounds
        for item in self.items:
            for x, y in _item_coords(item):
                if not (np.isfinite(x) and np.isfinite(y)):
                    raise ValueError(f"non-finite coordinate in {item.role!r}")
                if not (xmin <= x <= xmax and ymin <= y <= ymax):
                    raise ValueError(f"coordinate ({x}, {y}) outside canvas in {item.role!r}")

    def find(self, role: str) -> list[SceneItem]:
        return [it for it in self.items if it.role == role]


def weight_color(w: float, w_max: float) -> Color:
    """Hue-encode a pattern weight: 240 (blue) at 0 up to 0 (red) at max."""
    if w_max <= 0:
        warnings.warn("all-zero pattern: falling back to uniform mid-blue", RuntimeWarning)
        return Color(HUE_DECREASE, 1.0, 1.0)
    if not 0.0 <= w <= w_max * (1 + 1e-12):
        raise ValueError(f"weight {w} outside [0, {w_max}]")
    u = min(w / w_max, 1.0)
    return Color(240.0 * (1.0 - u), 1.0, 1.0)


@dataclass(frozen=True)
class StarGlyph:
    """Branch angles (radians clockwise from vertical) and radii in [0, 1]."""

    angles: tuple
    radii: tuple

    def points(self, center=(0.0, 0.0), scale: float = 1.0) -> tuple:
        cx, cy = center
        return tuple(
            (cx + scale * r * math.sin(a), cy + scale * r * math.cos(a))
            for a, r in zip(self.angles, self.radii)
        )


def branch_angles(m: int) -> tuple:
    return tuple(2.0 * math.pi * k / m for k in range(m))


def _branch_point(angle: float, radius: float, center=(0.0, 0.0)) -> tuple:
    return (center[0] + radius * math.sin(angle), center[1] + radius * math.cos(angle))


def neuron_star(prototype: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> StarGlyph:
    """Star glyph of one prototype scaled to the map's feature ranges.

    Constant features (zero range) render at radius 0.5.
    """
    prototype = np.asarray(prototype, dtype=np.float64)
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    span = hi - lo
    radii = np.where(span > 0, np.clip((prototype - lo) / np.where(span > 0, span, 1.0), 0.0, 1.0), 0.5)
    return StarGlyph(angles=branch_angles(prototype.size), radii=tuple(float(r) for r in radii))


def scale_pemd_for_display(pemd_k: float, feature_range: float) -> float:
    """Map a signed PEMD onto the display band [0.1, 0.9]."""
    if feature_range < 0:
        raise ValueError("feature range must be >= 0")
    if feature_range == 0:
        return 0.1
    return 0.1 + 0.8 * min(abs(pemd_k) / feature_range, 1.0)


def _stub_color(direction: str, significant: bool) -> Color:
    if direction == "increase":
        return Color(HUE_INCREASE if significant else HUE_INSIG_INCREASE, 1.0, 1.0)
    return Color(HUE_DECREASE if significant else HUE_INSIG_DECREASE, 1.0, 1.0)


def _value_radius(t: float, t_lo: float, t_hi: float) -> float:
    span = t_hi - t_lo
    u = 0.5 if span <= 0 else min(max((t - t_lo) / span, 0.0), 1.0)
    return 0.1 + 0.8 * u


def change_glyph(summary: "ChangeSummary") -> GlyphScene:
    """Compose the change view scene from a change summary.

    The scene contains the gray-filled frame, the direction-colored
    property polygon, per-branch direction stubs for non-flat features,
    and reference / changed region value dots with range whiskers, plus
    branch axes and feature labels as chrome.
    """
    details = summary.details
    m = len(details)
    angles = branch_angles(m)
    center = (0.0, 0.0)
    items = []

    frame_pts = tuple(_branch_point(a, 1.0) for a in angles)
    items.append(
        Polygon(
            points=frame_pts,
            fill=Color.gray(1.0 - summary.scaled_emd),
            stroke=Color.gray(0.2),
            stroke_width=0.012,
            role="frame",
        )
    )
    for k, a in enumerate(angles):
        items.append(
            Segment(a=center, b=_branch_point(a, 1.0), color=Color.gray(0.6), width=0.006, role=f"axis:{k}")
        )

    ranges = np.array([d.feature_range_z for d in details])
    mean_range = float(ranges.mean()) if m else 0.0
    saturation = 0.0 if mean_range <= 0 else min(abs(summary.mean_pemd) / mean_range, 1.0)
    if summary.overall_direction == "increase":
        prop_fill = Color(HUE_INCREASE, saturation, 1.0)
    elif summary.overall_direction == "decrease":
        prop_fill = Color(HUE_DECREASE, saturation, 1.0)
    else:
        prop_fill = Color(0.0, 0.0, 1.0)
    prop_pts = tuple(_branch_point(a, d.scaled_pemd) for a, d in zip(angles, details))
    items.append(
        Polygon(points=prop_pts, fill=prop_fill, stroke=Color.gray(0.15), stroke_width=0.012, role="property")
    )

    for k, (a, d) in enumerate(zip(angles, details)):
        if d.direction != "none":
            items.append(
                Segment(
                    a=center,
                    b=_branch_point(a, 0.1),
                    color=_stub_color(d.direction, d.significant),
                    width=0.022,
                    role=f"stub:{k}",
                )
            )

    for k, (a, d) in enumerate(zip(angles, details)):
        delta = d.chg_value - d.ref_value
        if delta > DIRECTION_EPS:
            dot_color = Color(HUE_INCREASE, 1.0, 1.0)
        elif delta < -DIRECTION_EPS:
            dot_color = Color(HUE_DECREASE, 1.0, 1.0)
        else:
            dot_color = Color.gray(0.35)
        perp = (math.cos(a), -math.sin(a))
        for tag, rng, off in (("ref", d.ref_range, -0.025), ("chg", d.chg_range, 0.025)):
            lo_pt = _branch_point(a, _value_radius(rng[0], d.t_lo, d.t_hi))
            hi_pt = _branch_point(a, _value_radius(rng[1], d.t_lo, d.t_hi))
            items.append(
                Segment(
                    a=(lo_pt[0] + off * perp[0], lo_pt[1] + off * perp[1]),
                    b=(hi_pt[0] + off * perp[0], hi_pt[1] + off * perp[1]),
                    color=dot_color,
                    width=0.006,
                    role=f"whisker_{tag}:{k}",
                )
            )
        items.append(
            Circle(
                center=_branch_point(a, _value_radius(d.ref_value, d.t_lo, d.t_hi)),
                radius=0.035,
                fill=None,
                stroke=dot_color,
                stroke_width=0.012,
                role=f"dot_ref:{k}",
            )
        )
        items.append(
            Circle(
                center=_branch_point(a, _value_radius(d.chg_value, d.t_lo, d.t_hi)),
                radius=0.028,
                fill=dot_color,
                stroke=None,
                role=f"dot_chg:{k}",
            )
        )

    for k, (a, d) in enumerate(zip(angles, details)):
        items.append(Label(pos=_branch_point(a, 1.18), text=d.name, size=0.11, role=f"label:{k}"))

    return GlyphScene(bounds=(-1.35, -1.35, 1.35, 1.35), items=tuple(items))


HEX_CELL_RADIUS = 1.0 / math.sqrt(3.0)


def _cell_polygon(topology: str, pos: tuple) -> tuple:
    x, y = pos
    if topology == "hexagonal":
        return tuple(
            (
                x + HEX_CELL_RADIUS * math.cos(math.pi / 2 + i * math.pi / 3),
                y + HEX_CELL_RADIUS * math.sin(math.pi / 2 + i * math.pi / 3),
            )
            for i in range(6)
        )
    half = 0.5
    return ((x - half, y - half), (x + half, y - half), (x + half, y + half), (x - half, y + half))


def pattern_scene(som: Som, pattern: WeightedPattern) -> GlyphScene:
    """Map view: one hue-filled cell per neuron with its star glyph overlay."""
    weights = np.asarray(pattern.weights)
    w_max = float(weights.max())
    lo = som.prototypes.min(axis=0)
    hi = som.prototypes.max(axis=0)
    pos = som.grid.positions
    margin = 0.9
    bounds = (
        float(pos[:, 0].min() - margin),
        float(pos[:, 1].min() - margin),
        float(pos[:, 0].max() + margin),
        float(pos[:, 1].max() + margin),
    )
    items = []
    for i in range(som.n):
        items.append(
            Polygon(
                points=_cell_polygon(som.grid.topology, tuple(pos[i])),
                fill=weight_color(float(weights[i]), w_max),
                stroke=Color.gray(0.25),
                stroke_width=0.02,
                role=f"cell:{i}",
            )
        )
    for i in range(som.n):
        star = neuron_star(som.prototypes[i], lo, hi)
        items.append(
            Polygon(
                points=star.points(center=tuple(pos[i]), scale=0.42),
                fill=None,
                stroke=Color.gray(0.08),
                stroke_width=0.015,
                role=f"star:{i}",
            )
        )
    return GlyphScene(bounds=bounds, items=tuple(items))


def scene_to_dict(scene: GlyphScene) -> dict:
    """JSON-ready scene representation (documented scene schema)."""

    def color(c: Color | None):
        return None if c is None else {"h": c.h, "s": c.s, "v": c.v}

    items = []
    for it in scene.items:
        if isinstance(it, Polygon):
            items.append(
                {
                    "type": "polygon",
                    "points": [[x, y] for x, y in it.points],
                    "fill": color(it.fill),
                    "stroke": color(it.stroke),
                    "stroke_width": it.stroke_width,
                    "role": it.role,
                }
            )
        elif isinstance(it, Circle):
            items.append(
                {
                    "type": "circle",
                    "center": list(it.center),
                    "radius": it.radius,
                    "fill": color(it.fill),
                    "stroke": color(it.stroke),
                    "stroke_width": it.stroke_width,
                    "role": it.role,
                }
            )
        elif isinstance(it, Segment):
            items.append(
                {
                    "type": "segment",
                    "a": list(it.a),
                    "b": list(it.b),
                    "color": color(it.color),
                    "width": it.width,
                    "role": it.role,
                }
            )
        else:
            items.append(
                {
                    "type": "label",
                    "pos": list(it.pos),
                    "text": it.text,
                    "size": it.size,
                    "color": color(it.color),
                    "anchor": it.anchor,
                    "role": it.role,
                }
            )
    return {"schema_version": 1, "bounds": list(scene.bounds), "items": items}
