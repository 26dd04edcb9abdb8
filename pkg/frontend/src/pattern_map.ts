// Pattern map view: renders the server's pattern scene (hue cells plus
// star glyphs) and lets the analyst toggle neurons into a region of
// interest by clicking or dragging across cells. The selection is pure
// UI state; metric work stays on the server.

import { PATTERN_SCALE, renderScene } from "./scene.js";
import type { GlyphScene } from "./types.js";

export interface PatternMapOptions {
  side: string;
  onToggle: (neuron: number) => void;
  doc?: Document;
}

const HIGHLIGHT = "#222222";

export class PatternMap {
  readonly root: HTMLElement;
  private doc: Document;
  private selected = new Set<number>();
  private dragging = false;
  private dragVisited = new Set<number>();
  private onToggle: (neuron: number) => void;

  constructor(options: PatternMapOptions) {
    this.doc = options.doc ?? document;
    this.onToggle = options.onToggle;
    this.root = this.doc.createElement("div");
    this.root.className = "pattern-map";
    this.root.dataset.side = options.side;
    this.root.addEventListener("mouseup", () => this.endDrag());
    this.root.addEventListener("mouseleave", () => this.endDrag());
  }

  setScene(scene: GlyphScene): void {
    this.root.replaceChildren(renderScene(scene, PATTERN_SCALE, this.doc));
    this.bindCells();
    this.applyHighlights();
  }

  setSelection(indices: number[]): void {
    this.selected = new Set(indices);
    this.applyHighlights();
  }

  selection(): number[] {
    return [...this.selected].sort((a, b) => a - b);
  }

  private cellElements(): SVGElement[] {
    return Array.from(this.root.querySelectorAll<SVGElement>("polygon[data-role^='cell:']"));
  }

  private bindCells(): void {
    for (const cell of this.cellElements()) {
      const neuron = Number(cell.getAttribute("data-role")!.split(":")[1]);
      cell.addEventListener("mousedown", (event) => {
        event.preventDefault();
        this.dragging = true;
        this.dragVisited = new Set([neuron]);
        this.onToggle(neuron);
      });
      cell.addEventListener("mouseenter", () => {
        if (this.dragging && !this.dragVisited.has(neuron)) {
          this.dragVisited.add(neuron);
          this.onToggle(neuron);
        }
      });
    }
  }

  private endDrag(): void {
    this.dragging = false;
    this.dragVisited.clear();
  }

  private applyHighlights(): void {
    for (const cell of this.cellElements()) {
      const neuron = Number(cell.getAttribute("data-role")!.split(":")[1]);
      if (this.selected.has(neuron)) {
        cell.setAttribute("stroke", HIGHLIGHT);
        cell.setAttribute("stroke-width", String(0.06 * PATTERN_SCALE));
      } else {
        cell.setAttribute("stroke", "#404040");
        cell.setAttribute("stroke-width", String(0.02 * PATTERN_SCALE));
      }
    }
  }
}
