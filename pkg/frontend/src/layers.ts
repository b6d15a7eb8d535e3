/** Pure layer models derived from service GeoJSON: cluster coloring,
 * centroid marker shapes (dots for location-only runs, X markers for
 * temperature-influenced ones), and settlement rings. Rendering adapters
 * live in map.ts. */

import type { CompletedRun, LayerToggles } from "./state.js";
import type {
  CentroidProps,
  ClusterPointProps,
  FeatureCollection,
  SettlementProps,
} from "./types.js";

export const NOISE_COLOR = "#9e9e9e";

const PALETTE = [
  "#1f77b4",
  "#ff7f0e",
  "#2ca02c",
  "#d62728",
  "#9467bd",
  "#8c564b",
  "#e377c2",
  "#bcbd22",
  "#17becf",
  "#393b79",
  "#637939",
  "#8c6d31",
];

export function clusterColor(label: number): string {
  if (label < 0) return NOISE_COLOR;
  return PALETTE[label % PALETTE.length];
}

export interface ClusterPoint {
  lat: number;
  lon: number;
  label: number;
  color: string;
}

export function buildClusterPoints(fc: FeatureCollection<ClusterPointProps>): ClusterPoint[] {
  return fc.features.map((f) => ({
    lon: f.geometry.coordinates[0],
    lat: f.geometry.coordinates[1],
    label: f.properties.label,
    color: clusterColor(f.properties.label),
  }));
}

export type MarkerKind = "dot" | "x";

export interface CentroidMarker {
  lat: number;
  lon: number;
  kind: MarkerKind;
  color: string;
  clusterId: number;
  memberCount: number;
  runId: string;
}

export function buildCentroidMarkers(
  fc: FeatureCollection<CentroidProps>,
  runId: string,
): CentroidMarker[] {
  return fc.features.map((f) => ({
    lon: f.geometry.coordinates[0],
    lat: f.geometry.coordinates[1],
    kind: f.properties.feature_space === "temp_influenced" ? "x" : "dot",
    color:
      f.properties.feature_space === "temp_influenced"
        ? "#000000"
        : clusterColor(f.properties.cluster_id),
    clusterId: f.properties.cluster_id,
    memberCount: f.properties.member_count,
    runId,
  }));
}

/** Centroid markers across the retained runs, filtered by the feature-space
 * toggles. A temp-influenced run overlays its X markers on top of a prior
 * location-only run's dots: both stay visible. */
export function visibleCentroidMarkers(
  runs: CompletedRun[],
  toggles: LayerToggles,
): CentroidMarker[] {
  const markers: CentroidMarker[] = [];
  for (const run of runs) {
    for (const marker of buildCentroidMarkers(run.centroids, run.runId)) {
      if (marker.kind === "dot" && !toggles.centroidsWithoutTemp) continue;
      if (marker.kind === "x" && !toggles.centroidsTempInfluenced) continue;
      markers.push(marker);
    }
  }
  return markers;
}

export interface SettlementMarker {
  lat: number;
  lon: number;
  name: string;
  place: string;
  ringRadiusKm: number;
}

export function buildSettlementMarkers(
  fc: FeatureCollection<SettlementProps>,
  ringRadiusKm: number,
): SettlementMarker[] {
  return fc.features.map((f) => ({
    lon: f.geometry.coordinates[0],
    lat: f.geometry.coordinates[1],
    name: f.properties.name,
    place: f.properties.place,
    ringRadiusKm,
  }));
}

export interface LegendEntry {
  swatch: string; // css color
  shape: MarkerKind | "point" | "ring";
  label: string;
}

export function buildLegend(runs: CompletedRun[], toggles: LayerToggles): LegendEntry[] {
  const entries: LegendEntry[] = [];
  if (toggles.clusters && runs.length) {
    entries.push({ swatch: PALETTE[0], shape: "point", label: "clustered fixes (by cluster)" });
    entries.push({ swatch: NOISE_COLOR, shape: "point", label: "noise / transit" });
  }
  const kinds = new Set(
    visibleCentroidMarkers(runs, toggles).map((m) => m.kind),
  );
  if (kinds.has("dot")) {
    entries.push({ swatch: PALETTE[1], shape: "dot", label: "centroids (location only)" });
  }
  if (kinds.has("x")) {
    entries.push({ swatch: "#000000", shape: "x", label: "centroids (with temperature)" });
  }
  if (toggles.settlements) {
    entries.push({ swatch: "#2e7d32", shape: "ring", label: "settlement + populated ring" });
  }
  return entries;
}
