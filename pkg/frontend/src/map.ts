/** Leaflet adapter: renders the pure layer models from layers.ts onto the
 * map. Leaflet is loaded globally from index.html (script tag); this file
 * is deliberately thin glue and stays out of the unit tests. */

import type { ClusterPoint, CentroidMarker, SettlementMarker } from "./layers.js";
import type { FeatureCollection, TrackPointProps } from "./types.js";

declare const L: typeof import("leaflet");

const BASEMAPS = {
  streets: {
    url: "https://tile.openstreetmap.org/{z}/{x}/{y}.png",
    attribution: "&copy; OpenStreetMap contributors",
  },
  satellite: {
    url: "https://server.arcgisonline.com/ArcGIS/rest/services/World_Imagery/MapServer/tile/{z}/{y}/{x}",
    attribution: "Imagery &copy; Esri",
  },
} as const;

export type BasemapKind = keyof typeof BASEMAPS;

export class MapView {
  private map: import("leaflet").Map;
  private basemap: import("leaflet").TileLayer;
  private raw = L.layerGroup();
  private clusters = L.layerGroup();
  private centroids = L.layerGroup();
  private settlements = L.layerGroup();

  constructor(container: HTMLElement) {
    this.map = L.map(container, { center: [-21, 18], zoom: 5 });
    this.basemap = L.tileLayer(BASEMAPS.streets.url, {
      attribution: BASEMAPS.streets.attribution,
      maxZoom: 19,
    }).addTo(this.map);
    this.raw.addTo(this.map);
    this.clusters.addTo(this.map);
    this.settlements.addTo(this.map);
    this.centroids.addTo(this.map); // topmost
  }

  setBasemap(kind: BasemapKind): void {
    this.basemap.setUrl(BASEMAPS[kind].url);
  }

  renderRaw(fc: FeatureCollection<TrackPointProps> | null, visible: boolean): void {
    this.raw.clearLayers();
    if (!fc || !visible) return;
    for (const f of fc.features) {
      const [lon, lat] = f.geometry.coordinates;
      this.raw.addLayer(
        L.circleMarker([lat, lon], {
          radius: 2,
          stroke: false,
          fillColor: "#5c6bc0",
          fillOpacity: 0.35,
        }),
      );
    }
  }

  renderClusters(points: ClusterPoint[], visible: boolean): void {
    this.clusters.clearLayers();
    if (!visible) return;
    for (const p of points) {
      this.clusters.addLayer(
        L.circleMarker([p.lat, p.lon], {
          radius: 3,
          stroke: false,
          fillColor: p.color,
          fillOpacity: p.label < 0 ? 0.3 : 0.75,
        }),
      );
    }
  }

  renderCentroids(markers: CentroidMarker[]): void {
    this.centroids.clearLayers();
    for (const m of markers) {
      if (m.kind === "x") {
        const icon = L.divIcon({
          className: "x-marker",
          html: "&#10005;",
          iconSize: [18, 18],
          iconAnchor: [9, 9],
        });
        this.centroids.addLayer(
          L.marker([m.lat, m.lon], { icon }).bindTooltip(
            `cluster ${m.clusterId} · ${m.memberCount} fixes (temp-influenced)`,
          ),
        );
      } else {
        this.centroids.addLayer(
          L.circleMarker([m.lat, m.lon], {
            radius: 9,
            color: "#ffffff",
            weight: 1.5,
            fillColor: m.color,
            fillOpacity: 0.95,
          }).bindTooltip(`cluster ${m.clusterId} · ${m.memberCount} fixes`),
        );
      }
    }
  }

  renderSettlements(markers: SettlementMarker[], visible: boolean, rings: boolean): void {
    this.settlements.clearLayers();
    if (!visible) return;
    for (const s of markers) {
      this.settlements.addLayer(
        L.circleMarker([s.lat, s.lon], {
          radius: 5,
          color: "#2e7d32",
          weight: 2,
          fillColor: "#a5d6a7",
          fillOpacity: 0.9,
        }).bindTooltip(`${s.name || "(unnamed)"} · ${s.place}`),
      );
      if (rings) {
        this.settlements.addLayer(
          L.circle([s.lat, s.lon], {
            radius: s.ringRadiusKm * 1000,
            color: "#2e7d32",
            weight: 1,
            fill: false,
            dashArray: "4 4",
          }),
        );
      }
    }
  }

  panTo(lat: number, lon: number): void {
    if (Number.isNaN(lat) || Number.isNaN(lon)) return;
    this.map.setView([lat, lon], Math.max(this.map.getZoom(), 11));
  }

  fitTo(fc: FeatureCollection<TrackPointProps>): void {
    if (!fc.features.length) return;
    const lats = fc.features.map((f) => f.geometry.coordinates[1]);
    const lons = fc.features.map((f) => f.geometry.coordinates[0]);
    this.map.fitBounds([
      [Math.min(...lats), Math.min(...lons)],
      [Math.max(...lats), Math.max(...lons)],
    ]);
  }
}
