// Application wiring: model selection, two input panels, two pattern
// maps with region selection, and the change view. All state changes go
// through the pure reducers in state.ts; all numbers come from server
// payloads; in-flight requests are superseded by the newest edit.

import { ApiClient, isAbort } from "./api.js";
import { ChangeView } from "./change_view.js";
import { InputPanel } from "./input_panel.js";
import { PatternMap } from "./pattern_map.js";
import * as state from "./state.js";
import type { ModelInfo } from "./types.js";

export class App {
  readonly root: HTMLElement;
  session: state.SessionState = state.initialState();
  private info: ModelInfo | null = null;
  private doc: Document;
  private panels: { reference: InputPanel | null; changed: InputPanel | null } = {
    reference: null,
    changed: null,
  };
  readonly maps: { reference: PatternMap; changed: PatternMap };
  readonly changeView: ChangeView;
  private modelSelect: HTMLSelectElement;
  private percentileSlider: HTMLInputElement;
  private statusSlot: HTMLElement;
  private panelSlot: HTMLElement;

  constructor(
    private api: ApiClient,
    doc: Document = document,
  ) {
    this.doc = doc;
    this.root = doc.createElement("div");
    this.root.className = "app";

    const toolbar = doc.createElement("div");
    toolbar.className = "toolbar";
    this.modelSelect = doc.createElement("select");
    this.modelSelect.addEventListener("change", () => {
      void this.loadModel(this.modelSelect.value);
    });
    this.percentileSlider = doc.createElement("input");
    this.percentileSlider.type = "range";
    this.percentileSlider.min = "0.5";
    this.percentileSlider.max = "0.95";
    this.percentileSlider.step = "0.05";
    this.percentileSlider.value = "0.8";
    this.percentileSlider.addEventListener("change", () => {
      void this.applyPercentile(Number(this.percentileSlider.value));
    });
    const clearButton = doc.createElement("button");
    clearButton.textContent = "clear regions";
    clearButton.addEventListener("click", () => {
      this.session = state.clearRegion(this.session, "reference");
      this.session = state.clearRegion(this.session, "changed");
      this.syncSelections();
      void this.refreshChange();
    });
    this.statusSlot = doc.createElement("span");
    this.statusSlot.className = "status";
    toolbar.append(this.modelSelect, this.percentileSlider, clearButton, this.statusSlot);

    this.panelSlot = doc.createElement("div");
    this.panelSlot.className = "panels";
    this.maps = {
      reference: new PatternMap({ side: "reference", onToggle: (n) => this.toggle("reference", n), doc }),
      changed: new PatternMap({ side: "changed", onToggle: (n) => this.toggle("changed", n), doc }),
    };
    this.changeView = new ChangeView(doc);

    const mapsRow = doc.createElement("div");
    mapsRow.className = "maps-row";
    mapsRow.append(this.maps.reference.root, this.maps.changed.root);
    this.root.append(toolbar, this.panelSlot, mapsRow, this.changeView.root);
  }

  async start(): Promise<void> {
    const models = await this.api.listModels();
    this.modelSelect.replaceChildren(
      ...models.models.map((id) => {
        const opt = this.doc.createElement("option");
        opt.value = id;
        opt.textContent = id;
        return opt;
      }),
    );
    if (models.models.length > 0) {
      await this.loadModel(models.models[0]);
    }
  }

  async loadModel(modelId: string): Promise<void> {
    this.info = await this.api.modelInfo(modelId);
    this.session = state.setModel(this.session, this.info);
    this.panelSlot.replaceChildren();
    for (const side of ["reference", "changed"] as const) {
      const panel = new InputPanel({
        side,
        specs: this.info.input_feature_specs,
        initial: side === "reference" ? this.session.referenceZ : this.session.changedZ,
        onChange: (z) => {
          void this.applyVector(side, z);
        },
        doc: this.doc,
      });
      this.panels[side] = panel;
      this.panelSlot.appendChild(panel.root);
    }
    await Promise.all([this.refreshPattern("reference"), this.refreshPattern("changed")]);
    await this.refreshChange();
  }

  panel(side: state.Side): InputPanel {
    const panel = this.panels[side];
    if (!panel) throw new Error("panel not ready");
    return panel;
  }

  private toggle(side: state.Side, neuron: number): void {
    this.session = state.toggleNeuron(this.session, side, neuron);
    this.syncSelections();
    void this.refreshChange();
  }

  private syncSelections(): void {
    this.maps.reference.setSelection(this.session.referenceRegion);
    this.maps.changed.setSelection(this.session.changedRegion);
  }

  async applyVector(side: state.Side, z: number[]): Promise<void> {
    try {
      this.session = state.setVector(this.session, side, z);
    } catch (err) {
      this.panel(side).setError(String(err));
      return;
    }
    await this.refreshPattern(side);
    await this.refreshChange();
  }

  private async refreshPattern(side: state.Side): Promise<void> {
    if (!this.session.modelId) return;
    const z = side === "reference" ? this.session.referenceZ : this.session.changedZ;
    try {
      const scene = await this.api.patternScene(this.session.modelId, z, `scene:${side}`);
      this.maps[side].setScene(scene);
      this.syncSelections();
      this.panel(side).clearError();
    } catch (err) {
      if (isAbort(err)) return; // superseded by a newer edit
      this.panel(side).setError(String(err));
    }
  }

  async refreshChange(): Promise<void> {
    if (!this.session.modelId) return;
    try {
      const summary = await this.api.change(this.session.modelId, {
        from: this.settingsFor("reference"),
        to: this.settingsFor("changed"),
        alpha: this.session.display.alpha,
        percentile: this.session.display.percentile,
        region_ref: this.session.referenceRegion.length ? this.session.referenceRegion : undefined,
        region_chg: this.session.changedRegion.length ? this.session.changedRegion : undefined,
      });
      const scene = await this.api.changeScene(
        this.session.modelId,
        this.settingsString("reference"),
        this.settingsString("changed"),
        "0",
      );
      this.changeView.update(summary, scene);
      this.statusSlot.textContent = "";
    } catch (err) {
      if (isAbort(err)) return;
      this.statusSlot.textContent = String(err);
    }
  }

  private async applyPercentile(percentile: number): Promise<void> {
    const modelId = this.session.modelId;
    if (!modelId) return;
    this.session = state.setDisplay(this.session, { percentile });
    for (const side of ["reference", "changed"] as const) {
      const region = await this.api.defaultRegions(
        modelId,
        this.settingsString(side),
        "0",
        percentile,
      );
      this.session = state.setRegion(this.session, side, region.indices);
    }
    this.syncSelections();
    await this.refreshChange();
  }

  private settingsFor(side: state.Side): Record<string, number> {
    const z = side === "reference" ? this.session.referenceZ : this.session.changedZ;
    const settings: Record<string, number> = {};
    this.session.inputFeatures.forEach((name, k) => {
      settings[name] = z[k];
    });
    return settings;
  }

  private settingsString(side: state.Side): string {
    const z = side === "reference" ? this.session.referenceZ : this.session.changedZ;
    return this.session.inputFeatures.map((name, k) => `${name}=${z[k]}`).join(";");
  }
}

export function mount(root: HTMLElement, baseUrl: string): App {
  const app = new App(new ApiClient(baseUrl));
  root.appendChild(app.root);
  void app.start();
  return app;
}
