// Client-side renderer for GlyphScene JSON. The geometry mapping is the
// same as the server's SVG writer (y-up logical canvas flipped into SVG
// pixel space at a fixed scale), so client output matches server SVG
// exports to within formatting precision.

import type { GlyphScene, Hsv, SceneItem } from "./types.js";

export const SVG_NS = "http://www.w3.org/2000/svg";
export const PATTERN_SCALE = 60;
export const CHANGE_SCALE = 120;

export function hsvToRgbHex(c: Hsv): string {
  const h = (c.h / 360) * 6;
  const i = Math.floor(h) % 6;
  const f = h - Math.floor(h);
  const p = c.v * (1 - c.s);
  const q = c.v * (1 - c.s * f);
  const t = c.v * (1 - c.s * (1 - f));
  let rgb: [number, number, number];
  switch (i) {
    case 0:
      rgb = [c.v, t, p];
      break;
    case 1:
      rgb = [q, c.v, p];
      break;
    case 2:
      rgb = [p, c.v, t];
      break;
    case 3:
      rgb = [p, q, c.v];
      break;
    case 4:
      rgb = [t, p, c.v];
      break;
    default:
      rgb = [c.v, p, q];
  }
  const hex = rgb.map((x) => Math.round(x * 255).toString(16).padStart(2, "0"));
  return `#${hex.join("")}`;
}

function paint(c: Hsv | null): string {
  return c === null ? "none" : hsvToRgbHex(c);
}

export function renderScene(
  scene: GlyphScene,
  scale: number,
  doc: Document = document,
): SVGSVGElement {
  const [xmin, ymin, xmax, ymax] = scene.bounds;
  const width = (xmax - xmin) * scale;
  const height = (ymax - ymin) * scale;
  const px = (p: [number, number]): [number, number] => [
    (p[0] - xmin) * scale,
    (ymax - p[1]) * scale,
  ];

  const svg = doc.createElementNS(SVG_NS, "svg") as SVGSVGElement;
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);

  for (const item of scene.items) {
    svg.appendChild(renderItem(item, px, scale, doc));
  }
  return svg;
}

function renderItem(
  item: SceneItem,
  px: (p: [number, number]) => [number, number],
  scale: number,
  doc: Document,
): SVGElement {
  switch (item.type) {
    case "polygon": {
      const el = doc.createElementNS(SVG_NS, "polygon");
      el.setAttribute(
        "points",
        item.points.map((p) => px(p).join(",")).join(" "),
      );
      el.setAttribute("fill", paint(item.fill));
      el.setAttribute("stroke", paint(item.stroke));
      el.setAttribute("stroke-width", String(item.stroke_width * scale));
      if (item.role) el.setAttribute("data-role", item.role);
      return el;
    }
    case "circle": {
      const el = doc.createElementNS(SVG_NS, "circle");
      const [cx, cy] = px(item.center);
      el.setAttribute("cx", String(cx));
      el.setAttribute("cy", String(cy));
      el.setAttribute("r", String(item.radius * scale));
      el.setAttribute("fill", paint(item.fill));
      el.setAttribute("stroke", paint(item.stroke));
      el.setAttribute("stroke-width", String(item.stroke_width * scale));
      if (item.role) el.setAttribute("data-role", item.role);
      return el;
    }
    case "segment": {
      const el = doc.createElementNS(SVG_NS, "line");
      const [x1, y1] = px(item.a);
      const [x2, y2] = px(item.b);
      el.setAttribute("x1", String(x1));
      el.setAttribute("y1", String(y1));
      el.setAttribute("x2", String(x2));
      el.setAttribute("y2", String(y2));
      el.setAttribute("stroke", paint(item.color));
      el.setAttribute("stroke-width", String(item.width * scale));
      el.setAttribute("stroke-linecap", "round");
      if (item.role) el.setAttribute("data-role", item.role);
      return el;
    }
    case "label": {
      const el = doc.createElementNS(SVG_NS, "text");
      const [x, y] = px(item.pos);
      el.setAttribute("x", String(x));
      el.setAttribute("y", String(y));
      el.setAttribute("font-size", String(item.size * scale));
      el.setAttribute("font-family", "sans-serif");
      el.setAttribute("text-anchor", item.anchor);
      el.setAttribute("fill", paint(item.color));
      if (item.role) el.setAttribute("data-role", item.role);
      el.textContent = item.text;
      return el;
    }
  }
}

// Branch index encoded in a role like "stub:3" / "dot_ref:2"; null for
// roles without one.
export function branchIndexOf(role: string): number | null {
  const sep = role.lastIndexOf(":");
  if (sep < 0) return null;
  const idx = Number(role.slice(sep + 1));
  return Number.isInteger(idx) ? idx : null;
}
