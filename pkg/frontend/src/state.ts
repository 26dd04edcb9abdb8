// Session state and pure reducers. Every transition is a plain function
// of (state, action inputs) and the whole session serializes to JSON,
// so any UI state is reproducible from a saved session.

import type { ModelInfo } from "./types.js";

export type Side = "reference" | "changed";

export interface DisplayOptions {
  alpha: number;
  percentile: number;
}

export interface SessionState {
  modelId: string | null;
  inputFeatures: string[];
  neuronCount: number;
  referenceZ: number[];
  changedZ: number[];
  referenceRegion: number[];
  changedRegion: number[];
  display: DisplayOptions;
}

export function initialState(): SessionState {
  return {
    modelId: null,
    inputFeatures: [],
    neuronCount: 0,
    referenceZ: [],
    changedZ: [],
    referenceRegion: [],
    changedRegion: [],
    display: { alpha: 0.05, percentile: 0.8 },
  };
}

export function setModel(state: SessionState, info: ModelInfo): SessionState {
  const m = info.input_features.length;
  return {
    ...state,
    modelId: info.id,
    inputFeatures: [...info.input_features],
    neuronCount: info.output_grid[0] * info.output_grid[1],
    referenceZ: new Array<number>(m).fill(0),
    changedZ: new Array<number>(m).fill(0),
    referenceRegion: [],
    changedRegion: [],
  };
}

function zKey(side: Side): "referenceZ" | "changedZ" {
  return side === "reference" ? "referenceZ" : "changedZ";
}

function regionKey(side: Side): "referenceRegion" | "changedRegion" {
  return side === "reference" ? "referenceRegion" : "changedRegion";
}

export function setFeature(
  state: SessionState,
  side: Side,
  index: number,
  value: number,
): SessionState {
  const key = zKey(side);
  if (index < 0 || index >= state[key].length) {
    throw new RangeError(`feature index ${index} out of range`);
  }
  if (!Number.isFinite(value)) {
    throw new RangeError(`feature value must be finite, got ${value}`);
  }
  const z = [...state[key]];
  z[index] = value;
  return { ...state, [key]: z };
}

export function setVector(state: SessionState, side: Side, values: number[]): SessionState {
  if (values.length !== state.inputFeatures.length) {
    throw new RangeError(
      `vector has ${values.length} entries, model expects ${state.inputFeatures.length}`,
    );
  }
  if (!values.every((v) => Number.isFinite(v))) {
    throw new RangeError("vector entries must be finite numbers");
  }
  return { ...state, [zKey(side)]: [...values] };
}

export function toggleNeuron(state: SessionState, side: Side, neuron: number): SessionState {
  if (neuron < 0 || neuron >= state.neuronCount) {
    throw new RangeError(`neuron ${neuron} out of range`);
  }
  const key = regionKey(side);
  const current = new Set(state[key]);
  if (current.has(neuron)) {
    current.delete(neuron);
  } else {
    current.add(neuron);
  }
  return { ...state, [key]: [...current].sort((a, b) => a - b) };
}

export function setRegion(state: SessionState, side: Side, indices: number[]): SessionState {
  if (indices.some((i) => i < 0 || i >= state.neuronCount)) {
    throw new RangeError("region index out of range");
  }
  return { ...state, [regionKey(side)]: [...new Set(indices)].sort((a, b) => a - b) };
}

export function clearRegion(state: SessionState, side: Side): SessionState {
  return { ...state, [regionKey(side)]: [] };
}

export function setDisplay(state: SessionState, patch: Partial<DisplayOptions>): SessionState {
  return { ...state, display: { ...state.display, ...patch } };
}

export function serialize(state: SessionState): string {
  return JSON.stringify(state);
}

export function restore(text: string): SessionState {
  const raw = JSON.parse(text) as SessionState;
  const base = initialState();
  const state: SessionState = {
    ...base,
    ...raw,
    display: { ...base.display, ...(raw.display ?? {}) },
  };
  const m = state.inputFeatures.length;
  if (state.referenceZ.length !== m || state.changedZ.length !== m) {
    throw new RangeError("restored vectors do not match the model dimensionality");
  }
  for (const region of [state.referenceRegion, state.changedRegion]) {
    if (region.some((i) => i < 0 || i >= state.neuronCount)) {
      throw new RangeError("restored region references an invalid neuron");
    }
  }
  return state;
}
