// Payload types mirroring the server's documented JSON schemas
// (docs/schemas.md). The client never derives metrics itself; every
// number it shows comes from one of these payloads.

export type Direction = "increase" | "decrease" | "none";

export interface FeatureChange {
  name: string;
  pemd: number;
  scaled_pemd: number;
  direction: Direction;
  significant: boolean;
  ks_statistic: number;
  ref_value: number;
  chg_value: number;
  ref_range: [number, number];
  chg_range: [number, number];
  feature_range_z: number;
  t_lo: number;
  t_hi: number;
}

export interface RegionInfo {
  indices: number[];
  source: string;
  fallback: boolean;
}

export interface ChangeSummary {
  schema_version: number;
  scaled_emd: number;
  emd: number;
  mean_pemd: number;
  overall_direction: Direction;
  alpha: number;
  features: FeatureChange[];
  regions: { reference: RegionInfo; changed: RegionInfo };
}

export interface Hsv {
  h: number;
  s: number;
  v: number;
}

export interface PolygonItem {
  type: "polygon";
  points: [number, number][];
  fill: Hsv | null;
  stroke: Hsv | null;
  stroke_width: number;
  role: string;
}

export interface CircleItem {
  type: "circle";
  center: [number, number];
  radius: number;
  fill: Hsv | null;
  stroke: Hsv | null;
  stroke_width: number;
  role: string;
}

export interface SegmentItem {
  type: "segment";
  a: [number, number];
  b: [number, number];
  color: Hsv;
  width: number;
  role: string;
}

export interface LabelItem {
  type: "label";
  pos: [number, number];
  text: string;
  size: number;
  color: Hsv;
  anchor: string;
  role: string;
}

export type SceneItem = PolygonItem | CircleItem | SegmentItem | LabelItem;

export interface GlyphScene {
  schema_version: number;
  bounds: [number, number, number, number];
  items: SceneItem[];
}

export interface FeatureSpec {
  name: string;
  z_mean: number;
  z_std: number;
}

export interface ModelInfo {
  id: string;
  fingerprint: string;
  config: Record<string, unknown>;
  input_features: string[];
  output_features: string[];
  input_feature_specs: FeatureSpec[];
  output_feature_specs: FeatureSpec[];
  input_grid: [number, number];
  output_grid: [number, number];
  topology: string;
}

export interface PatternResponse {
  model_id: string;
  input_z: number[];
  weights: number[];
}

export interface RegionResponse {
  indices: number[];
  source: string;
}

export interface ModelList {
  models: string[];
}
