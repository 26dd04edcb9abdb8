"""Deterministic SVG 1.1 rendering of glyph scenes.

Scene coordinates are y-up; SVG is y-down, so the renderer flips the
vertical axis against the scene bounds. All numbers are written with
four decimals and attributes in a fixed order, so equal inputs yield
byte-identical documents.
"""

from xml.sax.saxutils import escape

from .association import WeightedPattern
from .glyphs import Circle, Color, GlyphScene, Label, Polygon, Segment, pattern_scene, scene_to_dict
from .jsonutil import canonical_json
from .som import Som

DEFAULT_SCALE = 120.0


def _fmt(x: float) -> str:
    out = f"{x:.4f}"
    return "0.0000" if out == "-0.0000" else out


def _paint(color: Color | None) -> str:
    return "none" if color is None else color.to_rgb_hex()


def scene_to_svg(scene: GlyphScene, scale: float = DEFAULT_SCALE) -> str:
    xmin, ymin, xmax, ymax = scene.bounds
    width = (xmax - xmin) * scale
    height = (ymax - ymin) * scale

    def px(pt):
        return (pt[0] - xmin) * scale, (ymax - pt[1]) * scale

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
    ]
    for item in scene.items:
        role = f' data-role="{escape(item.role, {chr(34): "&quot;"})}"' if item.role else ""
        if isinstance(item, Polygon):
            pts = " ".join("{},{}".format(_fmt(x), _fmt(y)) for x, y in (px(p) for p in item.points))
            lines.append(
                f'<polygon points="{pts}" fill="{_paint(item.fill)}" stroke="{_paint(item.stroke)}" '
                f'stroke-width="{_fmt(item.stroke_width * scale)}"{role}/>'
            )
        elif isinstance(item, Circle):
            cx, cy = px(item.center)
            lines.append(
                f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(item.radius * scale)}" '
                f'fill="{_paint(item.fill)}" stroke="{_paint(item.stroke)}" '
                f'stroke-width="{_fmt(item.stroke_width * scale)}"{role}/>'
            )
        elif isinstance(item, Segment):
            x1, y1 = px(item.a)
            x2, y2 = px(item.b)
            lines.append(
                f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
                f'stroke="{_paint(item.color)}" stroke-width="{_fmt(item.width * scale)}" '
                f'stroke-linecap="round"{role}/>'
            )
        elif isinstance(item, Label):
            x, y = px(item.pos)
            lines.append(
                f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{_fmt(item.size * scale)}" '
                f'font-family="sans-serif" text-anchor="{item.anchor}" '
                f'fill="{_paint(item.color)}"{role}>{escape(item.text)}</text>'
            )
    lines.append("</svg>")
    return "\n".join(lines)


def render_pattern_svg(som: Som, pattern: WeightedPattern, scale: float = 60.0) -> str:
    """Hue-cell map view with star glyph overlays as an SVG document."""
    return scene_to_svg(pattern_scene(som, pattern), scale)


def render_change_svg(scene: GlyphScene, scale: float = DEFAULT_SCALE) -> str:
    """Change glyph scene as an SVG document."""
    return scene_to_svg(scene, scale)


def scene_to_json(scene: GlyphScene) -> str:
    """Canonical JSON form of a scene (documented scene schema)."""
    return canonical_json(scene_to_dict(scene))
