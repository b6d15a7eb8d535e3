/** Rankings panel model. Rows pass through exactly as the service sent
 * them (already sorted by count descending): the panel never re-sorts,
 * re-counts, or otherwise recomputes. */

import type { RankingResponse, RankingRow } from "./types.js";

export interface PanelRow extends RankingRow {
  lat: number;
  lon: number;
}

const WKT_POINT = /^POINT \((-?[\d.eE+]+) (-?[\d.eE+]+)\)$/;

/** Parse "POINT (lon lat)" so a row click can pan the map; the displayed
 * values stay verbatim from the response. */
export function parseGeometry(geometry: string): { lat: number; lon: number } {
  const match = WKT_POINT.exec(geometry);
  if (!match) return { lat: NaN, lon: NaN };
  return { lon: Number(match[1]), lat: Number(match[2]) };
}

export function buildPanelRows(response: RankingResponse): PanelRow[] {
  return response.rows.map((row) => ({ ...row, ...parseGeometry(row.geometry) }));
}

/** The values the table renders, in service order. */
export function displayedValues(rows: PanelRow[]): RankingRow[] {
  return rows.map(({ geometry, name, type, count }) => ({ geometry, name, type, count }));
}

export function formatRowLabel(row: PanelRow): string {
  const name = row.name || "(unnamed)";
  return `${name} · ${row.type} · ${row.count}`;
}
