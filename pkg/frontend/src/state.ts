/** View state: the run-request draft, validation gating the run button,
 * completed runs (current plus the previous one for A/B comparison), layer
 * toggles, and the sequence numbers that discard stale responses. */

import type {
  CentroidProps,
  ClusterPointProps,
  FeatureCollection,
  RunRequestDraft,
  RunResponse,
} from "./types.js";

export interface CompletedRun {
  runId: string;
  draft: RunRequestDraft;
  response: RunResponse;
  clusters: FeatureCollection<ClusterPointProps>;
  centroids: FeatureCollection<CentroidProps>;
}

export interface LayerToggles {
  rawPoints: boolean;
  clusters: boolean;
  centroidsWithoutTemp: boolean;
  centroidsTempInfluenced: boolean;
  settlements: boolean;
  rings: boolean;
}

export const DEFAULT_DRAFT: RunRequestDraft = {
  dataset_id: "",
  individual_id: "",
  feature_space: "without_temp",
  epsilon: 0.1,
  min_pts: 35,
  fuzzy: false,
  enrichment: "native",
  decimate: null,
};

/** Problems that make a draft unsubmittable; empty list means valid. */
export function validateDraft(
  draft: RunRequestDraft,
  trackHasNativeTemp: boolean | undefined,
): string[] {
  const problems: string[] = [];
  if (!draft.dataset_id) problems.push("select a dataset");
  if (!draft.individual_id) problems.push("select an individual");
  if (!Number.isFinite(draft.epsilon) || draft.epsilon <= 0) {
    problems.push("epsilon must be > 0");
  }
  if (!Number.isInteger(draft.min_pts) || draft.min_pts < 1) {
    problems.push("min points must be an integer >= 1");
  }
  if (
    draft.feature_space === "temp_influenced" &&
    draft.enrichment === "native" &&
    trackHasNativeTemp === false
  ) {
    problems.push("this track has no temperature data: switch enrichment to station");
  }
  if (draft.decimate != null && (!Number.isInteger(draft.decimate) || draft.decimate < 1)) {
    problems.push("decimate must be an integer >= 1");
  }
  return problems;
}

export class ViewStore {
  draft: RunRequestDraft = { ...DEFAULT_DRAFT };
  trackHasNativeTemp: boolean | undefined;
  currentRun: CompletedRun | null = null;
  previousRun: CompletedRun | null = null;
  toggles: LayerToggles = {
    rawPoints: true,
    clusters: true,
    centroidsWithoutTemp: true,
    centroidsTempInfluenced: true,
    settlements: true,
    rings: true,
  };
  ringRadiusKm = 2.0;
  notice: string | null = null;

  private seq = 0;
  private latestIssued = 0;

  get problems(): string[] {
    return validateDraft(this.draft, this.trackHasNativeTemp);
  }

  get canSubmit(): boolean {
    return this.problems.length === 0;
  }

  /** Issue a sequence number for a run request; responses for anything but
   * the latest issued number must be dropped. */
  issueSequence(): number {
    this.seq += 1;
    this.latestIssued = this.seq;
    return this.seq;
  }

  /** Record a finished run unless a newer request has been issued since.
   * Returns false when the response was stale and discarded. */
  completeRun(sequence: number, run: CompletedRun): boolean {
    if (sequence !== this.latestIssued) {
      return false;
    }
    const replacing = this.currentRun;
    if (replacing && replacing.runId !== run.runId) {
      this.previousRun = replacing;
    }
    this.currentRun = run;
    this.notice =
      run.response.summary.cluster_count === 0 ? "no clusters at these parameters" : null;
    return true;
  }

  /** Runs whose layers are on screen: the current one plus the retained
   * previous run, oldest first so fresh markers draw on top. */
  get visibleRuns(): CompletedRun[] {
    const runs: CompletedRun[] = [];
    if (this.previousRun) runs.push(this.previousRun);
    if (this.currentRun) runs.push(this.currentRun);
    return runs;
  }
}
