import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import type { RunRequestDraft } from "../src/types.js";

const DRAFT: RunRequestDraft = {
  dataset_id: "kruger-mini",
  individual_id: "AM306-mini",
  feature_space: "without_temp",
  epsilon: 0.25,
  min_pts: 6,
  fuzzy: false,
  enrichment: "native",
};

/** Emulates the service's request-hash run cache. */
function cachingFetch() {
  const seen = new Map<string, string>();
  const calls: string[] = [];
  const impl = async (input: string, init?: RequestInit): Promise<Response> => {
    calls.push(input);
    if (input.endsWith("/api/runs") && init?.method === "POST") {
      const body = String(init.body);
      const cached = seen.has(body);
      const runId = seen.get(body) ?? `run-${seen.size + 1}`;
      seen.set(body, runId);
      return new Response(
        JSON.stringify({
          run_id: runId,
          cached,
          request: {},
          summary: {
            cluster_count: 1,
            noise_count: 0,
            points_used: 5,
            points_excluded: 0,
            centroid_count: 1,
          },
          join_report: null,
          timing_ms: 1,
        }),
        { status: 200, headers: { "content-type": "application/json" } },
      );
    }
    return new Response(JSON.stringify({ code: "unknown_run", message: "no" }), { status: 404 });
  };
  return { impl, calls };
}

describe("api client", () => {
  it("re-submitting an unchanged draft yields the same run_id (served from cache)", async () => {
    const { impl } = cachingFetch();
    const client = new ApiClient("http://svc", impl);
    const first = await client.postRun(DRAFT);
    const second = await client.postRun(DRAFT);
    expect(second.run_id).toBe(first.run_id);
    expect(first.cached).toBe(false);
    expect(second.cached).toBe(true);
  });

  it("a changed draft produces a different run_id", async () => {
    const { impl } = cachingFetch();
    const client = new ApiClient("http://svc", impl);
    const first = await client.postRun(DRAFT);
    const second = await client.postRun({ ...DRAFT, epsilon: 0.3 });
    expect(second.run_id).not.toBe(first.run_id);
  });

  it("surfaces machine-readable error codes from error bodies", async () => {
    const client = new ApiClient("http://svc", async () =>
      new Response(JSON.stringify({ code: "invalid_epsilon", message: "epsilon must be > 0" }), {
        status: 400,
        headers: { "content-type": "application/json" },
      }),
    );
    const err = await client.postRun({ ...DRAFT, epsilon: 0 }).catch((e) => e as ApiError);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).code).toBe("invalid_epsilon");
    expect((err as ApiError).status).toBe(400);
  });

  it("falls back to http_<status> for non-JSON error bodies", async () => {
    const client = new ApiClient("http://svc", async () =>
      new Response("<html>gateway</html>", { status: 503, statusText: "Service Unavailable" }),
    );
    const err = await client.settlements().catch((e) => e as ApiError);
    expect((err as ApiError).code).toBe("http_503");
  });

  it("wraps network failures as unreachable", async () => {
    const client = new ApiClient("http://svc", async () => {
      throw new TypeError("fetch failed");
    });
    const err = await client.datasets().catch((e) => e as ApiError);
    expect((err as ApiError).code).toBe("unreachable");
    expect((err as ApiError).status).toBe(0);
  });
});
