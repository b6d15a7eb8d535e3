/** Wire formats exchanged with the analysis service; the UI never derives
 * numbers of its own from these, it only renders them. */

export type FeatureSpace = "without_temp" | "temp_influenced";
export type Enrichment = "native" | "station";

export interface RunRequestDraft {
  dataset_id: string;
  individual_id: string;
  feature_space: FeatureSpace;
  epsilon: number;
  min_pts: number;
  fuzzy: boolean;
  enrichment: Enrichment;
  decimate?: number | null;
}

export interface DatasetInfo {
  dataset_id: string;
  individuals: string[];
}

export interface PointGeometry {
  type: "Point";
  coordinates: [number, number]; // lon, lat
}

export interface Feature<P> {
  type: "Feature";
  geometry: PointGeometry;
  properties: P;
}

export interface FeatureCollection<P = Record<string, unknown>> {
  type: "FeatureCollection";
  features: Feature<P>[];
}

export interface TrackPointProps {
  timestamp: number;
  temperature: number | null;
}

export interface ClusterPointProps {
  label: number;
  temperature: number | null;
}

export interface CentroidProps {
  cluster_id: number;
  member_count: number;
  feature_space: FeatureSpace | null;
  fuzzy: boolean;
  individual_id: string;
}

export interface SettlementProps {
  name: string;
  place: string;
}

export interface JoinReport {
  matched_fraction: number;
  r_squared_zero_centered: number | null;
  offset_study_minus_station: number | null;
  tolerance_s: number;
  fuzzy: boolean;
  matched: number;
  total: number;
  station_id: string;
}

export interface RunSummary {
  cluster_count: number;
  noise_count: number;
  points_used: number;
  points_excluded: number;
  centroid_count: number;
}

export interface RunResponse {
  run_id: string;
  cached: boolean;
  request: Record<string, unknown>;
  summary: RunSummary;
  join_report: JoinReport | null;
  timing_ms: number;
}

export interface RankingRow {
  geometry: string;
  name: string;
  type: string;
  count: number;
}

export interface RankingResponse {
  strategy: string;
  params: Record<string, unknown>;
  rows: RankingRow[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
}
