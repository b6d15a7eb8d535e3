/** Thin typed client for the analysis service. Every analytic number the
 * UI shows comes out of these responses. */

import type {
  CentroidProps,
  ClusterPointProps,
  DatasetInfo,
  FeatureCollection,
  RankingResponse,
  RunRequestDraft,
  RunResponse,
  SettlementProps,
  TrackPointProps,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => globalThis.fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    } catch (err) {
      throw new ApiError("unreachable", `service unreachable: ${String(err)}`, 0);
    }
    if (!response.ok) {
      let code = `http_${response.status}`;
      let message = response.statusText;
      try {
        const body = (await response.json()) as { code?: string; message?: string };
        if (body.code) code = body.code;
        if (body.message) message = body.message;
      } catch {
        // non-JSON error body: keep the status text
      }
      throw new ApiError(code, message, response.status);
    }
    return (await response.json()) as T;
  }

  async datasets(): Promise<DatasetInfo[]> {
    const body = await this.request<{ datasets: DatasetInfo[] }>("/api/datasets");
    return body.datasets;
  }

  track(
    dataset: string,
    individual: string,
    decimate?: number,
  ): Promise<FeatureCollection<TrackPointProps>> {
    const query = decimate ? `?decimate=${decimate}` : "";
    return this.request(`/api/tracks/${encodeURIComponent(dataset)}/${encodeURIComponent(individual)}${query}`);
  }

  postRun(draft: RunRequestDraft): Promise<RunResponse> {
    return this.request("/api/runs", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(draft),
    });
  }

  clusters(runId: string): Promise<FeatureCollection<ClusterPointProps>> {
    return this.request(`/api/runs/${runId}/clusters`);
  }

  centroids(runId: string): Promise<FeatureCollection<CentroidProps>> {
    return this.request(`/api/runs/${runId}/centroids`);
  }

  settlements(): Promise<FeatureCollection<SettlementProps>> {
    return this.request("/api/settlements");
  }

  rankings(body: {
    run_ids: string[];
    strategy: string;
    radius_km?: number | null;
    seed?: number;
  }): Promise<RankingResponse> {
    return this.request("/api/rankings", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }
}
