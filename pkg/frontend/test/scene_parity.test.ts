// Client-rendered glyph geometry must match the server's SVG export
// within 1 px at canvas scale, element for element, on the committed
// fixture scenes (20 change glyphs + 4 pattern maps, regenerated with
// scripts/gen_frontend_fixtures.py in the repo root).

import { readFileSync, readdirSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { CHANGE_SCALE, PATTERN_SCALE, renderScene } from "../src/scene.js";
import type { GlyphScene } from "../src/types.js";

const FIXTURES = join(__dirname, "fixtures");
const TOLERANCE_PX = 1.0;

function fixtureNames(prefix: string): string[] {
  return readdirSync(FIXTURES)
    .filter((f) => f.startsWith(prefix) && f.endsWith(".json"))
    .map((f) => f.replace(/\.json$/, ""))
    .sort();
}

function geometryOf(el: Element): number[] {
  switch (el.tagName) {
    case "polygon":
      return el
        .getAttribute("points")!
        .split(/[ ,]+/)
        .filter(Boolean)
        .map(Number);
    case "circle":
      return ["cx", "cy", "r"].map((a) => Number(el.getAttribute(a)));
    case "line":
      return ["x1", "y1", "x2", "y2"].map((a) => Number(el.getAttribute(a)));
    case "text":
      return ["x", "y", "font-size"].map((a) => Number(el.getAttribute(a)));
    default:
      throw new Error(`unexpected element <${el.tagName}>`);
  }
}

function checkParity(name: string, scale: number): void {
  const scene = JSON.parse(readFileSync(join(FIXTURES, `${name}.json`), "utf-8")) as GlyphScene;
  const serverSvg = readFileSync(join(FIXTURES, `${name}.svg`), "utf-8");
  const serverDoc = new DOMParser().parseFromString(serverSvg, "image/svg+xml");
  const serverRoot = serverDoc.documentElement;
  const clientRoot = renderScene(scene, scale, document);

  const serverItems = Array.from(serverRoot.children);
  const clientItems = Array.from(clientRoot.children);
  expect(clientItems.length).toBe(serverItems.length);

  expect(Number(clientRoot.getAttribute("width"))).toBeCloseTo(
    Number(serverRoot.getAttribute("width")),
    2,
  );
  expect(Number(clientRoot.getAttribute("height"))).toBeCloseTo(
    Number(serverRoot.getAttribute("height")),
    2,
  );

  for (let i = 0; i < serverItems.length; i++) {
    const server = serverItems[i];
    const client = clientItems[i];
    expect(client.tagName.toLowerCase()).toBe(server.tagName.toLowerCase());
    expect(client.getAttribute("data-role") ?? "").toBe(server.getAttribute("data-role") ?? "");
    const serverGeo = geometryOf(server);
    const clientGeo = geometryOf(client);
    expect(clientGeo.length).toBe(serverGeo.length);
    for (let v = 0; v < serverGeo.length; v++) {
      expect(Math.abs(clientGeo[v] - serverGeo[v])).toBeLessThanOrEqual(TOLERANCE_PX);
    }
    if (server.tagName === "text") {
      expect(client.textContent).toBe(server.textContent);
    }
  }
}

describe("client scene rendering matches server SVG", () => {
  const changes = fixtureNames("change_");
  it("has the full fixture corpus", () => {
    expect(changes.length).toBe(20);
  });
  for (const name of changes) {
    it(`change glyph ${name} within 1px`, () => checkParity(name, CHANGE_SCALE));
  }
  for (const name of fixtureNames("pattern_")) {
    it(`pattern map ${name} within 1px`, () => checkParity(name, PATTERN_SCALE));
  }
});
