/** DOM wiring: controls -> store -> service -> map/panel. */

import { ApiClient, ApiError } from "./api.js";
import {
  buildClusterPoints,
  buildLegend,
  buildSettlementMarkers,
  visibleCentroidMarkers,
} from "./layers.js";
import { MapView, type BasemapKind } from "./map.js";
import { buildPanelRows, formatRowLabel, type PanelRow } from "./rankings.js";
import { ViewStore, type CompletedRun } from "./state.js";
import type { FeatureCollection, SettlementProps, TrackPointProps } from "./types.js";

const SERVICE_URL =
  new URLSearchParams(location.search).get("service") ?? "http://localhost:8000";

const client = new ApiClient(SERVICE_URL);
const store = new ViewStore();

const el = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
};

const datasetSelect = el<HTMLSelectElement>("dataset");
const individualSelect = el<HTMLSelectElement>("individual");
const featureSpace = el<HTMLSelectElement>("feature-space");
const enrichment = el<HTMLSelectElement>("enrichment");
const epsilonInput = el<HTMLInputElement>("epsilon");
const minPtsInput = el<HTMLInputElement>("min-pts");
const fuzzyInput = el<HTMLInputElement>("fuzzy");
const runButton = el<HTMLButtonElement>("run");
const problemsBox = el<HTMLDivElement>("problems");
const banner = el<HTMLDivElement>("banner");
const noticeBox = el<HTMLDivElement>("notice");
const infoPanel = el<HTMLDivElement>("info");
const legendBox = el<HTMLDivElement>("legend");
const rankingsBody = el<HTMLTableSectionElement>("rankings-body");
const strategySelect = el<HTMLSelectElement>("strategy");
const radiusInput = el<HTMLInputElement>("radius-km");
const ringInput = el<HTMLInputElement>("ring-km");
const basemapSelect = el<HTMLSelectElement>("basemap");
const rankButton = el<HTMLButtonElement>("rank");

const map = new MapView(el<HTMLDivElement>("map"));

let rawTrack: FeatureCollection<TrackPointProps> | null = null;
let settlementsFc: FeatureCollection<SettlementProps> | null = null;

function showBanner(err: unknown): void {
  const text =
    err instanceof ApiError ? `${err.code}: ${err.message}` : `unexpected error: ${String(err)}`;
  banner.textContent = text;
  banner.classList.remove("hidden");
}
el<HTMLButtonElement>("banner-close").addEventListener("click", () =>
  banner.classList.add("hidden"),
);

function refreshControls(): void {
  const problems = store.problems;
  runButton.disabled = problems.length > 0;
  problemsBox.textContent = problems.join("; ");
  noticeBox.textContent = store.notice ?? "";
}

function refreshInfo(): void {
  const run = store.currentRun;
  if (!run) {
    infoPanel.textContent = "no run yet";
    return;
  }
  const s = run.response.summary;
  const parts = [
    `run ${run.runId}${run.response.cached ? " (cached)" : ""}`,
    `${s.cluster_count} clusters`,
    `${s.noise_count} noise`,
    `${s.points_used} points`,
  ];
  if (s.points_excluded) parts.push(`${s.points_excluded} excluded`);
  const join = run.response.join_report;
  if (join) {
    parts.push(`station ${join.station_id}: ${join.matched_fraction.toFixed(2)}% matched`);
    parts.push(join.fuzzy ? "fuzzy join" : "exact join");
    if (join.r_squared_zero_centered != null) {
      parts.push(`R² ${join.r_squared_zero_centered.toFixed(3)}`);
    }
  }
  infoPanel.textContent = parts.join(" · ");
}

function redraw(): void {
  map.renderRaw(rawTrack, store.toggles.rawPoints);
  const current = store.currentRun;
  map.renderClusters(
    current && store.toggles.clusters ? buildClusterPoints(current.clusters) : [],
    store.toggles.clusters,
  );
  map.renderCentroids(visibleCentroidMarkers(store.visibleRuns, store.toggles));
  map.renderSettlements(
    settlementsFc ? buildSettlementMarkers(settlementsFc, store.ringRadiusKm) : [],
    store.toggles.settlements,
    store.toggles.rings,
  );
  legendBox.replaceChildren(
    ...buildLegend(store.visibleRuns, store.toggles).map((entry) => {
      const row = document.createElement("div");
      const swatch = document.createElement("span");
      swatch.className = `swatch swatch-${entry.shape}`;
      swatch.style.background = entry.shape === "ring" ? "transparent" : entry.swatch;
      swatch.style.borderColor = entry.swatch;
      if (entry.shape === "x") swatch.textContent = "✕";
      row.append(swatch, ` ${entry.label}`);
      return row;
    }),
  );
  refreshInfo();
  refreshControls();
}

async function loadDatasets(): Promise<void> {
  const datasets = await client.datasets();
  datasetSelect.replaceChildren(
    ...datasets.map((d) => new Option(`${d.dataset_id} (${d.individuals.length})`, d.dataset_id)),
  );
  datasetSelect.dataset.individuals = JSON.stringify(
    Object.fromEntries(datasets.map((d) => [d.dataset_id, d.individuals])),
  );
  if (datasets.length) {
    datasetSelect.value = datasets[0].dataset_id;
    syncIndividuals();
  }
}

function syncIndividuals(): void {
  const byDataset = JSON.parse(datasetSelect.dataset.individuals ?? "{}") as Record<
    string,
    string[]
  >;
  const individuals = byDataset[datasetSelect.value] ?? [];
  individualSelect.replaceChildren(...individuals.map((i) => new Option(i, i)));
  store.draft.dataset_id = datasetSelect.value;
  if (individuals.length) {
    individualSelect.value = individuals[0];
  }
  void selectIndividual();
}

async function selectIndividual(): Promise<void> {
  store.draft.individual_id = individualSelect.value;
  store.trackHasNativeTemp = undefined;
  rawTrack = null;
  if (store.draft.individual_id) {
    try {
      rawTrack = await client.track(store.draft.dataset_id, store.draft.individual_id);
      store.trackHasNativeTemp = rawTrack.features.some(
        (f) => f.properties.temperature != null,
      );
      map.fitTo(rawTrack);
    } catch (err) {
      showBanner(err);
    }
  }
  redraw();
}

async function submitRun(): Promise<void> {
  if (!store.canSubmit) return;
  const draft = { ...store.draft };
  const sequence = store.issueSequence();
  runButton.classList.add("busy");
  try {
    const response = await client.postRun(draft);
    const [clusters, centroids] = await Promise.all([
      client.clusters(response.run_id),
      client.centroids(response.run_id),
    ]);
    const run: CompletedRun = { runId: response.run_id, draft, response, clusters, centroids };
    if (!store.completeRun(sequence, run)) return; // superseded by a newer draft
    redraw();
  } catch (err) {
    showBanner(err);
  } finally {
    runButton.classList.remove("busy");
  }
}

async function loadSettlements(): Promise<void> {
  try {
    settlementsFc = await client.settlements();
  } catch (err) {
    if (!(err instanceof ApiError && err.status === 404)) showBanner(err);
    settlementsFc = null;
  }
}

async function requestRankings(): Promise<void> {
  const runIds = store.visibleRuns.map((r) => r.runId);
  if (!runIds.length) return;
  try {
    const response = await client.rankings({
      run_ids: runIds,
      strategy: strategySelect.value,
      radius_km: radiusInput.value ? Number(radiusInput.value) : null,
      seed: 0,
    });
    renderRankings(buildPanelRows(response));
  } catch (err) {
    showBanner(err);
  }
}

function renderRankings(rows: PanelRow[]): void {
  rankingsBody.replaceChildren(
    ...rows.map((row) => {
      const tr = document.createElement("tr");
      tr.title = formatRowLabel(row);
      for (const value of [row.name || "(unnamed)", row.type, String(row.count)]) {
        const td = document.createElement("td");
        td.textContent = value;
        tr.append(td);
      }
      tr.addEventListener("click", () => map.panTo(row.lat, row.lon));
      return tr;
    }),
  );
}

datasetSelect.addEventListener("change", syncIndividuals);
individualSelect.addEventListener("change", () => void selectIndividual());
featureSpace.addEventListener("change", () => {
  store.draft.feature_space = featureSpace.value as "without_temp" | "temp_influenced";
  refreshControls();
});
enrichment.addEventListener("change", () => {
  store.draft.enrichment = enrichment.value as "native" | "station";
  refreshControls();
});
epsilonInput.addEventListener("input", () => {
  store.draft.epsilon = Number(epsilonInput.value);
  refreshControls();
});
minPtsInput.addEventListener("input", () => {
  store.draft.min_pts = Number(minPtsInput.value);
  refreshControls();
});
fuzzyInput.addEventListener("change", () => {
  store.draft.fuzzy = fuzzyInput.checked;
  refreshControls();
});
ringInput.addEventListener("input", () => {
  store.ringRadiusKm = Number(ringInput.value) || 2.0;
  redraw();
});
basemapSelect.addEventListener("change", () => map.setBasemap(basemapSelect.value as BasemapKind));
for (const toggleId of [
  "toggle-raw",
  "toggle-clusters",
  "toggle-dots",
  "toggle-x",
  "toggle-settlements",
  "toggle-rings",
] as const) {
  el<HTMLInputElement>(toggleId).addEventListener("change", (event) => {
    const checked = (event.target as HTMLInputElement).checked;
    switch (toggleId) {
      case "toggle-raw":
        store.toggles.rawPoints = checked;
        break;
      case "toggle-clusters":
        store.toggles.clusters = checked;
        break;
      case "toggle-dots":
        store.toggles.centroidsWithoutTemp = checked;
        break;
      case "toggle-x":
        store.toggles.centroidsTempInfluenced = checked;
        break;
      case "toggle-settlements":
        store.toggles.settlements = checked;
        break;
      case "toggle-rings":
        store.toggles.rings = checked;
        break;
    }
    redraw();
  });
}
runButton.addEventListener("click", () => void submitRun());
rankButton.addEventListener("click", () => void requestRankings());

void (async () => {
  try {
    await Promise.all([loadDatasets(), loadSettlements()]);
  } catch (err) {
    showBanner(err);
  }
  redraw();
})();
