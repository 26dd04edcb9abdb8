// Change view: the change glyph rendered client-side from scene JSON
// plus a hover panel with the numeric details of the hovered branch.
// Every number shown is read verbatim from the ChangeSummary payload;
// the client computes nothing.

import { CHANGE_SCALE, branchIndexOf, renderScene } from "./scene.js";
import type { ChangeSummary, GlyphScene } from "./types.js";

export class ChangeView {
  readonly root: HTMLElement;
  readonly glyphSlot: HTMLElement;
  readonly overallSlot: HTMLElement;
  readonly detailSlot: HTMLElement;
  private doc: Document;
  private summary: ChangeSummary | null = null;

  constructor(doc: Document = document) {
    this.doc = doc;
    this.root = doc.createElement("div");
    this.root.className = "change-view";
    this.glyphSlot = doc.createElement("div");
    this.glyphSlot.className = "glyph-slot";
    this.overallSlot = doc.createElement("div");
    this.overallSlot.className = "overall-slot";
    this.detailSlot = doc.createElement("div");
    this.detailSlot.className = "detail-slot";
    this.detailSlot.textContent = "hover a branch for details";
    this.root.append(this.glyphSlot, this.overallSlot, this.detailSlot);
  }

  update(summary: ChangeSummary, scene: GlyphScene): void {
    this.summary = summary;
    this.overallSlot.replaceChildren();
    const add = (label: string, value: string, cls: string) => {
      const span = this.doc.createElement("span");
      span.className = `metric ${cls}`;
      span.textContent = `${label}: ${value}`;
      this.overallSlot.appendChild(span);
    };
    add("scaled EMD", String(summary.scaled_emd), "scaled-emd");
    add("mean property difference", String(summary.mean_pemd), "mean-pemd");
    add("overall", summary.overall_direction, "overall-direction");

    const svg = renderScene(scene, CHANGE_SCALE, this.doc);
    for (const el of Array.from(svg.querySelectorAll<SVGElement>("[data-role]"))) {
      const branch = branchIndexOf(el.getAttribute("data-role")!);
      if (branch !== null) {
        el.addEventListener("mouseenter", () => this.showBranch(branch));
      }
    }
    this.glyphSlot.replaceChildren(svg);
  }

  showBranch(k: number): void {
    if (!this.summary || k < 0 || k >= this.summary.features.length) return;
    const f = this.summary.features[k];
    this.detailSlot.replaceChildren();
    const rows: [string, string][] = [
      ["feature", f.name],
      ["pemd", String(f.pemd)],
      ["direction", f.direction],
      ["significant", String(f.significant)],
      ["ks statistic", String(f.ks_statistic)],
      ["reference value", String(f.ref_value)],
      ["changed value", String(f.chg_value)],
      ["reference range", `${f.ref_range[0]} to ${f.ref_range[1]}`],
      ["changed range", `${f.chg_range[0]} to ${f.chg_range[1]}`],
    ];
    for (const [label, value] of rows) {
      const row = this.doc.createElement("div");
      row.className = `detail detail-${label.replace(/ /g, "-")}`;
      const name = this.doc.createElement("span");
      name.className = "detail-label";
      name.textContent = label;
      const val = this.doc.createElement("span");
      val.className = "detail-value";
      val.textContent = value;
      row.append(name, val);
      this.detailSlot.appendChild(row);
    }
  }
}
