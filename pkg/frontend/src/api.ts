// Thin typed client over the what-if HTTP API with latest-wins request
// cancellation: a new request under the same key aborts the in-flight
// one, so stale responses never reach the UI.

import type {
  ChangeSummary,
  GlyphScene,
  ModelInfo,
  ModelList,
  PatternResponse,
  RegionResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export function isAbort(err: unknown): boolean {
  return err instanceof DOMException && err.name === "AbortError";
}

export interface ChangeRequestBody {
  from: Record<string, number | string>;
  to: Record<string, number | string>;
  baseline?: number | string;
  alpha?: number;
  percentile?: number;
  region_ref?: number[];
  region_chg?: number[];
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private controllers = new Map<string, AbortController>();

  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(key: string | null, path: string, init: RequestInit = {}): Promise<T> {
    let signal: AbortSignal | undefined;
    if (key !== null) {
      this.controllers.get(key)?.abort();
      const controller = new AbortController();
      this.controllers.set(key, controller);
      signal = controller.signal;
    }
    const response = await this.fetchFn(`${this.baseUrl}${path}`, { ...init, signal });
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  private post<T>(key: string | null, path: string, body: unknown): Promise<T> {
    return this.request<T>(key, path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  listModels(): Promise<ModelList> {
    return this.request<ModelList>(null, "/models");
  }

  modelInfo(modelId: string): Promise<ModelInfo> {
    return this.request<ModelInfo>(null, `/models/${modelId}`);
  }

  pattern(modelId: string, z: number[], key = "pattern"): Promise<PatternResponse> {
    return this.post<PatternResponse>(key, `/models/${modelId}/pattern`, { z });
  }

  change(modelId: string, body: ChangeRequestBody): Promise<ChangeSummary> {
    return this.post<ChangeSummary>("change", `/models/${modelId}/change`, body);
  }

  patternScene(modelId: string, z: number[], key = "scene:pattern"): Promise<GlyphScene> {
    const params = new URLSearchParams({ z: z.join(",") });
    return this.request<GlyphScene>(key, `/models/${modelId}/scene/pattern?${params}`);
  }

  changeScene(
    modelId: string,
    fromSettings: string,
    toSettings: string,
    baseline: string,
  ): Promise<GlyphScene> {
    const params = new URLSearchParams({ from: fromSettings, to: toSettings, baseline });
    return this.request<GlyphScene>("scene:change", `/models/${modelId}/scene/change?${params}`);
  }

  defaultRegions(
    modelId: string,
    input: string,
    baseline: string,
    percentile: number,
  ): Promise<RegionResponse> {
    const params = new URLSearchParams({ input, baseline, percentile: String(percentile) });
    return this.request<RegionResponse>(null, `/models/${modelId}/regions/default?${params}`);
  }
}
