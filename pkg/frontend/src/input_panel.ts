// Per-feature input editors for one side (reference or changed) of the
// what-if comparison: an SD slider, an SD number entry and a raw-unit
// entry per feature, plus a hand-editable full Z vector. Edits debounce
// into a single callback; malformed or dimension-mismatched vectors are
// blocked client-side with an inline message, and server errors
// (offline, 422) surface in the same slot.

import type { FeatureSpec } from "./types.js";

export interface InputPanelOptions {
  side: string;
  specs: FeatureSpec[];
  initial: number[];
  debounceMs?: number;
  onChange: (z: number[]) => void;
  doc?: Document;
}

export class InputPanel {
  readonly root: HTMLElement;
  private z: number[];
  private specs: FeatureSpec[];
  private sliders: HTMLInputElement[] = [];
  private sdEntries: HTMLInputElement[] = [];
  private rawEntries: HTMLInputElement[] = [];
  private vectorEntry: HTMLInputElement;
  private errorSlot: HTMLElement;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private readonly debounceMs: number;
  private readonly onChange: (z: number[]) => void;

  constructor(options: InputPanelOptions) {
    const doc = options.doc ?? document;
    this.specs = options.specs;
    this.z = [...options.initial];
    this.debounceMs = options.debounceMs ?? 200;
    this.onChange = options.onChange;

    this.root = doc.createElement("div");
    this.root.className = "input-panel";
    this.root.dataset.side = options.side;

    for (let k = 0; k < this.specs.length; k++) {
      this.root.appendChild(this.featureRow(doc, k));
    }

    const vectorRow = doc.createElement("div");
    vectorRow.className = "vector-row";
    const vectorLabel = doc.createElement("label");
    vectorLabel.textContent = "z vector";
    this.vectorEntry = doc.createElement("input");
    this.vectorEntry.type = "text";
    this.vectorEntry.className = "vector-entry";
    this.vectorEntry.value = this.z.join(", ");
    this.vectorEntry.addEventListener("change", () => this.submitVector());
    vectorRow.append(vectorLabel, this.vectorEntry);
    this.root.appendChild(vectorRow);

    this.errorSlot = doc.createElement("div");
    this.errorSlot.className = "inline-error";
    this.root.appendChild(this.errorSlot);
  }

  private featureRow(doc: Document, k: number): HTMLElement {
    const spec = this.specs[k];
    const row = doc.createElement("div");
    row.className = "feature-row";

    const label = doc.createElement("label");
    label.textContent = spec.name;

    const slider = doc.createElement("input");
    slider.type = "range";
    slider.min = "-3";
    slider.max = "3";
    slider.step = "0.1";
    slider.value = String(this.z[k]);
    slider.dataset.feature = String(k);
    slider.addEventListener("input", () => this.setFromSd(k, Number(slider.value)));

    const sd = doc.createElement("input");
    sd.type = "number";
    sd.step = "0.1";
    sd.className = "sd-entry";
    sd.value = String(this.z[k]);
    sd.addEventListener("change", () => this.setFromSd(k, Number(sd.value)));

    const raw = doc.createElement("input");
    raw.type = "number";
    raw.className = "raw-entry";
    raw.value = String(spec.z_mean + spec.z_std * this.z[k]);
    raw.addEventListener("change", () =>
      this.setFromSd(k, (Number(raw.value) - spec.z_mean) / spec.z_std),
    );

    const unit = doc.createElement("span");
    unit.className = "unit";
    unit.textContent = "SD / raw";

    this.sliders.push(slider);
    this.sdEntries.push(sd);
    this.rawEntries.push(raw);
    row.append(label, slider, sd, raw, unit);
    return row;
  }

  values(): number[] {
    return [...this.z];
  }

  setError(message: string): void {
    this.errorSlot.textContent = message;
  }

  clearError(): void {
    this.errorSlot.textContent = "";
  }

  setValues(z: number[]): void {
    if (z.length !== this.specs.length) {
      throw new RangeError(`expected ${this.specs.length} values, got ${z.length}`);
    }
    this.z = [...z];
    this.refresh();
  }

  private setFromSd(k: number, value: number): void {
    if (!Number.isFinite(value)) {
      this.setError(`feature ${this.specs[k].name}: not a number`);
      return;
    }
    this.clearError();
    this.z[k] = value;
    this.refresh();
    this.schedule();
  }

  private submitVector(): void {
    const parts = this.vectorEntry.value.split(",").map((s) => s.trim()).filter((s) => s !== "");
    const values = parts.map(Number);
    if (values.length !== this.specs.length) {
      this.setError(
        `vector has ${values.length} entries, model expects ${this.specs.length}; not submitted`,
      );
      return;
    }
    if (values.some((v) => !Number.isFinite(v))) {
      this.setError("vector contains non-numeric entries; not submitted");
      return;
    }
    this.clearError();
    this.z = values;
    this.refresh();
    this.schedule();
  }

  private refresh(): void {
    for (let k = 0; k < this.specs.length; k++) {
      this.sliders[k].value = String(this.z[k]);
      this.sdEntries[k].value = String(this.z[k]);
      const spec = this.specs[k];
      this.rawEntries[k].value = String(spec.z_mean + spec.z_std * this.z[k]);
    }
    this.vectorEntry.value = this.z.join(", ");
  }

  private schedule(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      this.onChange(this.values());
    }, this.debounceMs);
  }

  flush(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
      this.onChange(this.values());
    }
  }
}
